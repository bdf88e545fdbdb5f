#include "topokit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "topokit/io.hpp"

namespace topokit {

namespace {

const char* kDimColor[3] = {"#1f77b4", "#d62728", "#2ca02c"};

std::string num(double v) {
  // Plot coordinates: fixed 3 decimals is plenty and byte-stable.
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string svg_persistence_diagram(const PersistenceDiagram& diagram, int size_px) {
  double cap = diagram.max_filtration;
  for (const PersistencePair& p : diagram.pairs) {
    if (!p.infinite()) cap = std::max(cap, p.death);
    cap = std::max(cap, p.birth);
  }
  if (cap <= 0.0) cap = 1.0;
  const double margin = 40.0;
  const double span = size_px - 2 * margin;
  auto sx = [&](double v) { return margin + span * (v / cap); };
  auto sy = [&](double v) { return size_px - margin - span * (v / cap); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
     << size_px << "\" height=\"" << size_px << "\" viewBox=\"0 0 " << size_px
     << ' ' << size_px << "\">\n";
  os << "<rect width=\"" << size_px << "\" height=\"" << size_px
     << "\" fill=\"white\"/>\n";
  // Axes and diagonal.
  os << "<line x1=\"" << num(sx(0)) << "\" y1=\"" << num(sy(0)) << "\" x2=\""
     << num(sx(cap)) << "\" y2=\"" << num(sy(0))
     << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<line x1=\"" << num(sx(0)) << "\" y1=\"" << num(sy(0)) << "\" x2=\""
     << num(sx(0)) << "\" y2=\"" << num(sy(cap))
     << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<line x1=\"" << num(sx(0)) << "\" y1=\"" << num(sy(0)) << "\" x2=\""
     << num(sx(cap)) << "\" y2=\"" << num(sy(cap))
     << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << num(sx(cap) - 30) << "\" y=\"" << num(sy(0) + 24)
     << "\" font-size=\"11\">birth</text>\n";
  os << "<text x=\"" << num(sx(0) - 32) << "\" y=\"" << num(sy(cap) + 4)
     << "\" font-size=\"11\">death</text>\n";
  os << "<text x=\"" << num(sx(cap) - 8) << "\" y=\"" << num(sy(0) + 12)
     << "\" font-size=\"9\">" << fmt_double(cap) << "</text>\n";

  for (const PersistencePair& p : diagram.pairs) {
    if (p.dim < 0 || p.dim > 2) continue;
    double death = p.infinite() ? cap : p.death;
    if (p.infinite()) {
      // Essential bars: open triangle at the cap line.
      double x = sx(p.birth), y = sy(death);
      os << "<path d=\"M " << num(x) << ' ' << num(y - 5) << " L " << num(x - 4)
         << ' ' << num(y + 3) << " L " << num(x + 4) << ' ' << num(y + 3)
         << " Z\" fill=\"none\" stroke=\"" << kDimColor[p.dim]
         << "\" stroke-width=\"1.2\"/>\n";
    } else {
      os << "<circle cx=\"" << num(sx(p.birth)) << "\" cy=\"" << num(sy(death))
         << "\" r=\"3\" fill=\"" << kDimColor[p.dim] << "\" fill-opacity=\"0.8\"/>\n";
    }
  }
  // Legend.
  for (int d = 0; d < 3; ++d) {
    double y = margin + 14.0 * d;
    os << "<circle cx=\"" << num(margin + 6) << "\" cy=\"" << num(y)
       << "\" r=\"3\" fill=\"" << kDimColor[d] << "\"/>\n";
    os << "<text x=\"" << num(margin + 14) << "\" y=\"" << num(y + 3.5)
       << "\" font-size=\"10\">H" << d << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_trace(const std::vector<TraceRow>& trace, int width_px,
                      int height_px) {
  double lo = 0.0, hi = 1.0;
  if (!trace.empty()) {
    lo = trace[0].g_t_wt;
    hi = trace[0].g_t_wt;
    for (const TraceRow& r : trace) {
      for (double v : {r.g_t_wt, r.g_t_wnext, r.g_next_wnext}) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (hi <= lo) hi = lo + 1.0;
  }
  const double margin = 46.0;
  const double w = width_px - 2 * margin;
  const double h = height_px - 2 * margin;
  const double tmax = trace.empty() ? 1.0 : std::max<double>(1.0, trace.size() - 1.0);
  auto sx = [&](double t) { return margin + w * (t / tmax); };
  auto sy = [&](double v) { return height_px - margin - h * ((v - lo) / (hi - lo)); };

  const char* colors[3] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
  const char* labels[3] = {"G_t(W_t)", "G_t(W_t+1)", "G_t+1(W_t+1)"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
     << width_px << "\" height=\"" << height_px << "\" viewBox=\"0 0 "
     << width_px << ' ' << height_px << "\">\n";
  os << "<rect width=\"" << width_px << "\" height=\"" << height_px
     << "\" fill=\"white\"/>\n";
  os << "<line x1=\"" << num(margin) << "\" y1=\"" << num(height_px - margin)
     << "\" x2=\"" << num(width_px - margin) << "\" y2=\""
     << num(height_px - margin) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << num(margin) << "\" y1=\"" << num(height_px - margin)
     << "\" x2=\"" << num(margin) << "\" y2=\"" << num(margin)
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << num(width_px - margin - 4) << "\" y=\""
     << num(height_px - margin + 16) << "\" font-size=\"10\">t=" << (trace.empty() ? 0 : trace.back().t)
     << "</text>\n";
  os << "<text x=\"" << num(4.0) << "\" y=\"" << num(margin)
     << "\" font-size=\"10\">" << fmt_double(hi) << "</text>\n";
  os << "<text x=\"" << num(4.0) << "\" y=\"" << num(height_px - margin)
     << "\" font-size=\"10\">" << fmt_double(lo) << "</text>\n";

  for (int series = 0; series < 3; ++series) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[series]
       << "\" stroke-width=\"1.4\" points=\"";
    for (std::size_t i = 0; i < trace.size(); ++i) {
      double v = series == 0 ? trace[i].g_t_wt
                             : (series == 1 ? trace[i].g_t_wnext
                                            : trace[i].g_next_wnext);
      os << num(sx(static_cast<double>(i))) << ',' << num(sy(v));
      if (i + 1 < trace.size()) os << ' ';
    }
    os << "\"/>\n";
    double y = margin + 14.0 * series;
    os << "<line x1=\"" << num(width_px - margin - 90) << "\" y1=\"" << num(y)
       << "\" x2=\"" << num(width_px - margin - 74) << "\" y2=\"" << num(y)
       << "\" stroke=\"" << colors[series] << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num(width_px - margin - 70) << "\" y=\"" << num(y + 3.5)
       << "\" font-size=\"10\">" << labels[series] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace topokit
