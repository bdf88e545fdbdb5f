#include "topokit/persloss.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace topokit {

Image make_image(int height, int width, std::vector<double> pixels) {
  if (height <= 0 || width <= 0 ||
      pixels.size() != static_cast<std::size_t>(height) * width * 3)
    throw ImageTooSmall("make_image: bad dimensions or pixel count");
  for (double v : pixels)
    if (!(v >= 0.0 && v <= 1.0))
      throw Error("make_image: channel value outside [0,1]");
  return Image{height, width, std::move(pixels)};
}

RgbPointSet reshape_to_rgb(const Image& img, int max_points) {
  if (static_cast<long long>(img.height) * img.width < 4)
    throw ImageTooSmall("reshape_to_rgb: need at least 4 pixels");

  // Smallest stride whose grid fits max_points.
  int stride = 1;
  auto grid_count = [&](int s) {
    return static_cast<long long>((img.height + s - 1) / s) *
           ((img.width + s - 1) / s);
  };
  while (grid_count(stride) > max_points) ++stride;
  if (grid_count(stride) < 4)
    throw ImageTooSmall("reshape_to_rgb: max_points leaves fewer than 4 samples");

  RgbPointSet out;
  out.cloud.dim = 3;
  for (int r = 0; r < img.height; r += stride) {
    for (int c = 0; c < img.width; c += stride) {
      Point p{img.at(r, c, 0), img.at(r, c, 1), img.at(r, c, 2)};
      int found = -1;
      for (int i = 0; i < static_cast<int>(out.cloud.points.size()); ++i) {
        if (dist_sq(out.cloud.points[i], p) <= kDedupToleranceSq) {
          found = i;
          break;
        }
      }
      if (found < 0) {
        out.cloud.points.push_back(p);
        out.pixel_index.push_back({{r, c}});
      } else {
        out.pixel_index[found].emplace_back(r, c);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loss core
// ---------------------------------------------------------------------------

PersLossValue persloss_from_barcodes(const TruncatedBarcode& rendered,
                                     const TruncatedBarcode& gt) {
  PersLossValue out;
  double weight_sum = 0.0;
  std::array<int, 3> kept{};
  for (int d = 0; d < 3; ++d) {
    kept[d] = static_cast<int>(gt.bars[d].size());
    weight_sum += kept[d];
  }
  for (int d = 0; d < 3; ++d) {
    const auto& rb = rendered.bars[d];
    const auto& gb = gt.bars[d];
    const int nr = static_cast<int>(rb.size());
    const int ng = static_cast<int>(gb.size());
    double term = 0.0;
    for (int j = 0; j < std::max(nr, ng); ++j) {
      if (j < nr && j < ng) {
        term += (rb[j].birth - gb[j].birth) * (rb[j].birth - gb[j].birth) +
                (rb[j].death - gb[j].death) * (rb[j].death - gb[j].death);
        out.matching[d].emplace_back(rb[j].pair_index, gb[j].pair_index);
      } else if (j < nr) {
        // Surplus rendered bar shrinks toward its own diagonal projection.
        double half = (rb[j].death - rb[j].birth) * 0.5;
        term += 2.0 * half * half;
        out.matching[d].emplace_back(rb[j].pair_index, -1);
      } else {
        // Missing rendered bar: stand-in is the gt bar's diagonal projection.
        double half = (gb[j].death - gb[j].birth) * 0.5;
        term += 2.0 * half * half;
        out.matching[d].emplace_back(-1, gb[j].pair_index);
      }
    }
    out.per_dim_terms[d] = term;
    out.weights[d] = weight_sum > 0.0 ? kept[d] / weight_sum : 0.0;
    out.total += out.weights[d] * term;
  }
  return out;
}

namespace {

struct DiagramBundle {
  RgbPointSet set;
  FilteredComplex fc;
  PersistenceDiagram dgm;
};

DiagramBundle image_diagram(const Image& img, int max_points) {
  DiagramBundle b;
  b.set = reshape_to_rgb(img, max_points);
  b.fc = alpha_filtration(b.set.cloud);
  b.dgm = compute_persistence(b.fc);
  return b;
}

// Adds scalar * d(value)/d(rgb coordinates of the bar endpoint) into the
// pixel gradient, routed through the critical simplex whose circumradius
// defines the value. Vertex-valued endpoints (H0 births, capped essentials)
// are constants.
void route_endpoint(const DiagramBundle& bundle, int simplex_index, double scalar,
                    PersLossGradient& grad) {
  if (scalar == 0.0 || simplex_index < 0) return;
  const FilteredSimplex& fs = bundle.fc.simplices[simplex_index];
  int src = fs.value_source;
  if (src < 0) return;
  const Simplex& sigma = bundle.fc.simplices[src].s;
  if (sigma.n < 2) return;  // vertex: alpha value 0, constant
  // Circumradius gradients are intrinsic (edge-length based for edges and
  // triangles), so they stay valid for dimension-reduced complexes too.
  std::vector<Vec3> dr = circumradius_sq_gradient(sigma, bundle.set.cloud);
  for (int i = 0; i < sigma.n; ++i) {
    const auto& owners = bundle.set.pixel_index[sigma[i]];
    double fan = 1.0 / static_cast<double>(owners.size());
    Vec3 g = dr[i] * (scalar * fan);
    for (const auto& [row, col] : owners) {
      std::size_t base = (static_cast<std::size_t>(row) * grad.width + col) * 3;
      grad.d_pixels[base + 0] += g.x;
      grad.d_pixels[base + 1] += g.y;
      grad.d_pixels[base + 2] += g.z;
    }
  }
}

}  // namespace

PersLossValue persloss(const Image& rendered, const Image& gt,
                       const std::array<int, 3>& k, int max_points) {
  if (rendered.height != gt.height || rendered.width != gt.width)
    throw DimensionMismatch("persloss: image sizes differ");
  DiagramBundle br, bg;
  if (thread_budget() >= 2) {
    auto fr = std::async(std::launch::async,
                         [&] { return image_diagram(rendered, max_points); });
    bg = image_diagram(gt, max_points);
    br = fr.get();
  } else {
    br = image_diagram(rendered, max_points);
    bg = image_diagram(gt, max_points);
  }
  PersLossValue v = persloss_from_barcodes(truncate_topk(br.dgm, k, kRgbDiameterSq),
                                           truncate_topk(bg.dgm, k, kRgbDiameterSq));
  v.rendered_reduced = br.fc.reduced_dimension;
  v.gt_reduced = bg.fc.reduced_dimension;
  return v;
}

std::pair<PersLossValue, PersLossGradient> persloss_gradient(
    const Image& rendered, const Image& gt, const std::array<int, 3>& k,
    int max_points) {
  if (rendered.height != gt.height || rendered.width != gt.width)
    throw DimensionMismatch("persloss_gradient: image sizes differ");
  DiagramBundle br = image_diagram(rendered, max_points);
  DiagramBundle bg = image_diagram(gt, max_points);
  TruncatedBarcode tr = truncate_topk(br.dgm, k, kRgbDiameterSq);
  TruncatedBarcode tg = truncate_topk(bg.dgm, k, kRgbDiameterSq);
  PersLossValue v = persloss_from_barcodes(tr, tg);
  v.rendered_reduced = br.fc.reduced_dimension;
  v.gt_reduced = bg.fc.reduced_dimension;

  PersLossGradient grad;
  grad.height = rendered.height;
  grad.width = rendered.width;
  grad.d_pixels.assign(static_cast<std::size_t>(grad.height) * grad.width * 3, 0.0);

  for (int d = 0; d < 3; ++d) {
    double w = v.weights[d];
    if (w == 0.0) continue;
    const auto& rb = tr.bars[d];
    const auto& gb = tg.bars[d];
    for (std::size_t j = 0; j < rb.size(); ++j) {
      const PersistencePair& pair = br.dgm.pairs[rb[j].pair_index];
      double db_scalar, dd_scalar;
      if (j < gb.size()) {
        db_scalar = 2.0 * w * (rb[j].birth - gb[j].birth);
        dd_scalar = 2.0 * w * (rb[j].death - gb[j].death);
      } else {
        db_scalar = w * (rb[j].birth - rb[j].death);
        dd_scalar = w * (rb[j].death - rb[j].birth);
      }
      route_endpoint(br, pair.birth_index, db_scalar, grad);
      if (!pair.infinite())  // capped deaths are constants
        route_endpoint(br, pair.death_index, dd_scalar, grad);
    }
  }
  return {std::move(v), std::move(grad)};
}

}  // namespace topokit
