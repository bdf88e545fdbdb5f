#pragma once

#include <array>
#include <vector>

#include "topokit/persistence.hpp"
#include "topokit/types.hpp"

namespace topokit {

// Squared diameter of the RGB unit cube; cap for essential bars of image
// diagrams so rendered and ground-truth essentials stay comparable.
constexpr double kRgbDiameterSq = 3.0;

struct Image {
  int height = 0;
  int width = 0;
  std::vector<double> pixels;  // H*W*3 row-major, channels in [0,1]

  double& at(int row, int col, int ch) {
    return pixels[(static_cast<std::size_t>(row) * width + col) * 3 + ch];
  }
  double at(int row, int col, int ch) const {
    return pixels[(static_cast<std::size_t>(row) * width + col) * 3 + ch];
  }
};

Image make_image(int height, int width, std::vector<double> pixels);

struct RgbPointSet {
  PointCloud cloud;  // one 3D RGB point per distinct color
  // pixel_index[p] = pixels (row, col) merged into cloud point p.
  std::vector<std::vector<std::pair<int, int>>> pixel_index;
};

// One RGB-space point per sampled pixel; if H*W exceeds max_points the image
// is subsampled on a stride grid first (smallest stride that fits), then
// coincident colors are merged keeping the pixel multimap.
// Throws ImageTooSmall when fewer than 4 points remain.
RgbPointSet reshape_to_rgb(const Image& img, int max_points = 1024);

struct PersLossValue {
  double total = 0.0;
  std::array<double, 3> per_dim_terms{0.0, 0.0, 0.0};
  std::array<double, 3> weights{0.0, 0.0, 0.0};
  // Per dimension, the length-ordered bar pairing: (rendered bar pair_index or
  // -1 for a diagonal stand-in, gt bar pair_index or -1).
  std::array<std::vector<std::pair<int, int>>, 3> matching;
  // Diagrams were computed on a dimension-reduced RGB set (degenerate colors).
  bool rendered_reduced = false;
  bool gt_reduced = false;
};

struct PersLossGradient {
  int height = 0;
  int width = 0;
  std::vector<double> d_pixels;  // H*W*3, same layout as Image::pixels

  double at(int row, int col, int ch) const {
    return d_pixels[(static_cast<std::size_t>(row) * width + col) * 3 + ch];
  }
};

// Betti-weighted squared difference between the truncated barcodes of the two
// images' RGB alpha filtrations. Bars are matched per dimension in order of
// length; shortfall on either side is padded with diagonal projections of the
// unmatched side's bars; weights are the GT kept-bar counts normalized.
// Throws DimensionMismatch on size mismatch.
PersLossValue persloss(const Image& rendered, const Image& gt,
                       const std::array<int, 3>& k, int max_points = 1024);

// Loss plus its exact gradient with respect to rendered pixel values, routed
// through the critical simplices' circumradii (d value/d vertex coordinates)
// and fanned out equally over pixels merged into one RGB point.
std::pair<PersLossValue, PersLossGradient> persloss_gradient(
    const Image& rendered, const Image& gt, const std::array<int, 3>& k,
    int max_points = 1024);

// Barcode-level core of the loss, exposed for direct arithmetic tests: both
// barcodes must already be truncated with the same k.
PersLossValue persloss_from_barcodes(const TruncatedBarcode& rendered,
                                     const TruncatedBarcode& gt);

}  // namespace topokit
