#include "topokit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace topokit {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
}

// ---------------------------------------------------------------------------
// Point clouds
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    bool blank = line.find_first_not_of(" \t\r\n") == std::string::npos;
    if (!blank) lines.push_back(line);
  }
  return lines;
}

double parse_double(const std::string& tok, const std::string& context) {
  if (tok == "inf") return kInfiniteDeath;
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + tok + "' in " + context);
  }
}

}  // namespace

PointCloud read_xyz(const std::string& path) {
  std::vector<Point> pts;
  for (const std::string& line : data_lines(read_text_file(path))) {
    std::istringstream ls(line);
    std::string a, b, c, extra;
    if (!(ls >> a >> b >> c) || (ls >> extra))
      throw ParseError(path + ": expected 'x y z' per line");
    pts.push_back({parse_double(a, path), parse_double(b, path), parse_double(c, path)});
  }
  if (pts.empty()) throw ParseError(path + ": no points");
  return make_cloud(std::move(pts), 3);
}

PointCloud read_ply(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || line.substr(0, 3) != "ply")
    throw ParseError(path + ": not a PLY file");
  long vertex_count = -1;
  int property_count = 0;
  bool ascii = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "format") {
      std::string kind;
      ls >> kind;
      ascii = kind == "ascii";
    } else if (word == "element") {
      std::string what;
      long n = 0;
      ls >> what >> n;
      if (what == "vertex") vertex_count = n;
      else if (n > 0) throw ParseError(path + ": only vertex elements supported");
    } else if (word == "property") {
      ++property_count;
    } else if (word == "end_header") {
      break;
    }
  }
  if (!ascii) throw ParseError(path + ": only ASCII PLY supported");
  if (vertex_count <= 0) throw ParseError(path + ": missing vertex element");
  if (property_count != 3)
    throw ParseError(path + ": expected exactly x/y/z properties");
  std::vector<Point> pts;
  pts.reserve(vertex_count);
  for (long i = 0; i < vertex_count; ++i) {
    double x, y, z;
    if (!(in >> x >> y >> z)) throw ParseError(path + ": truncated vertex list");
    pts.push_back({x, y, z});
  }
  return make_cloud(std::move(pts), 3);
}

PointCloud read_cloud(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".ply")
    return read_ply(path);
  return read_xyz(path);
}

void write_xyz(const std::string& path, const PointCloud& cloud) {
  std::ostringstream os;
  for (const Point& p : cloud.points)
    os << fmt_double(p.x) << ' ' << fmt_double(p.y) << ' ' << fmt_double(p.z) << '\n';
  write_text_file(path, os.str());
}

void write_xyz_augmented(const std::string& path, const LpviResult& result) {
  std::ostringstream os;
  const auto& pts = result.interpolated.points;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    os << fmt_double(pts[i].x) << ' ' << fmt_double(pts[i].y) << ' '
       << fmt_double(pts[i].z) << ' ' << (i < result.original_count ? 0 : 1)
       << '\n';
  }
  write_text_file(path, os.str());
}

FlaggedCloud read_xyz_augmented(const std::string& path) {
  FlaggedCloud out;
  std::vector<Point> pts;
  for (const std::string& line : data_lines(read_text_file(path))) {
    std::istringstream ls(line);
    std::string a, b, c, f, extra;
    if (!(ls >> a >> b >> c >> f) || (ls >> extra))
      throw ParseError(path + ": expected 'x y z flag' per line");
    pts.push_back({parse_double(a, path), parse_double(b, path), parse_double(c, path)});
    out.added_flag.push_back(static_cast<int>(parse_double(f, path)));
  }
  if (pts.empty()) throw ParseError(path + ": no points");
  out.cloud = PointCloud{std::move(pts), 3};
  return out;
}

// ---------------------------------------------------------------------------
// Diagrams
// ---------------------------------------------------------------------------

std::string diagram_csv(const PersistenceDiagram& diagram) {
  std::vector<std::array<double, 3>> rows;
  rows.reserve(diagram.pairs.size());
  for (const PersistencePair& p : diagram.pairs)
    rows.push_back({static_cast<double>(p.dim), p.birth, p.death});
  std::sort(rows.begin(), rows.end());
  std::ostringstream os;
  os << "dim,birth,death\n";
  for (const auto& r : rows)
    os << static_cast<int>(r[0]) << ',' << fmt_double(r[1]) << ','
       << fmt_double(r[2]) << '\n';
  return os.str();
}

void write_diagram_csv(const std::string& path, const PersistenceDiagram& diagram) {
  write_text_file(path, diagram_csv(diagram));
}

PersistenceDiagram read_diagram_csv(const std::string& path) {
  PersistenceDiagram d;
  bool header = true;
  for (const std::string& line : data_lines(read_text_file(path))) {
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string dim, birth, death;
    if (!std::getline(ls, dim, ',') || !std::getline(ls, birth, ',') ||
        !std::getline(ls, death))
      throw ParseError(path + ": expected dim,birth,death");
    PersistencePair p;
    p.dim = static_cast<int>(parse_double(dim, path));
    p.birth = parse_double(birth, path);
    p.death = parse_double(death, path);
    d.pairs.push_back(p);
    if (!p.infinite()) d.max_filtration = std::max(d.max_filtration, p.death);
  }
  return d;
}

// ---------------------------------------------------------------------------
// LPVI report
// ---------------------------------------------------------------------------

std::string lpvi_report_csv(const LpviReport& report) {
  std::ostringstream os;
  os << "center,branch,topo_diff,points_added\n";
  for (const LpviNeighborhood& n : report.neighborhoods) {
    os << n.center << ',';
    switch (n.branch) {
      case LpviBranch::Accepted3d: os << "3d"; break;
      case LpviBranch::Fallback2d: os << "2d"; break;
      case LpviBranch::Skipped: os << "skipped"; break;
    }
    os << ',';
    if (n.topo_diff_evaluated) os << fmt_double(n.topo_diff_value);
    os << ',' << n.added_count << '\n';
  }
  return os.str();
}

LpviReport read_lpvi_report_csv(const std::string& path) {
  LpviReport report;
  bool header = true;
  int running_begin = 0;
  for (const std::string& line : data_lines(read_text_file(path))) {
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string center, branch, td, added;
    if (!std::getline(ls, center, ',') || !std::getline(ls, branch, ',') ||
        !std::getline(ls, td, ',') || !std::getline(ls, added))
      throw ParseError(path + ": expected center,branch,topo_diff,points_added");
    LpviNeighborhood n;
    n.center = static_cast<Index>(parse_double(center, path));
    if (branch == "3d") n.branch = LpviBranch::Accepted3d;
    else if (branch == "2d") n.branch = LpviBranch::Fallback2d;
    else if (branch == "skipped") n.branch = LpviBranch::Skipped;
    else throw ParseError(path + ": unknown branch '" + branch + "'");
    if (!td.empty()) {
      n.topo_diff_value = parse_double(td, path);
      n.topo_diff_evaluated = true;
    }
    n.added_count = static_cast<int>(parse_double(added, path));
    n.added_begin = running_begin;
    running_begin += n.added_count;
    switch (n.branch) {
      case LpviBranch::Accepted3d: ++report.accepted_3d; break;
      case LpviBranch::Fallback2d: ++report.fallback_2d; break;
      case LpviBranch::Skipped: ++report.skipped; break;
    }
    report.neighborhoods.push_back(n);
  }
  report.points_added = running_begin;
  return report;
}

// ---------------------------------------------------------------------------
// Images
// ---------------------------------------------------------------------------

Image read_ppm(const std::string& path) {
  std::string text = read_text_file(path);
  // Strip comments, then tokenize.
  std::string clean;
  clean.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      clean += '\n';
    } else {
      clean += text[i];
    }
  }
  std::istringstream in(clean);
  std::string magic;
  if (!(in >> magic) || magic != "P3")
    throw ParseError(path + ": expected ASCII PPM (P3)");
  long w = 0, h = 0, maxval = 0;
  if (!(in >> w >> h >> maxval) || w <= 0 || h <= 0 || maxval <= 0)
    throw ParseError(path + ": bad PPM header");
  std::vector<double> pixels;
  pixels.reserve(static_cast<std::size_t>(w) * h * 3);
  for (long i = 0; i < w * h * 3; ++i) {
    long v = 0;
    if (!(in >> v)) throw ParseError(path + ": truncated pixel data");
    if (v < 0 || v > maxval) throw ParseError(path + ": sample out of range");
    pixels.push_back(static_cast<double>(v) / static_cast<double>(maxval));
  }
  return make_image(static_cast<int>(h), static_cast<int>(w), std::move(pixels));
}

void write_ppm(const std::string& path, const Image& img, int maxval) {
  std::ostringstream os;
  os << "P3\n" << img.width << ' ' << img.height << '\n' << maxval << '\n';
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        long v = std::lround(img.at(r, c, ch) * maxval);
        os << v << (ch == 2 ? "" : " ");
      }
      os << '\n';
    }
  }
  write_text_file(path, os.str());
}

std::string gradient_csv(const PersLossGradient& grad) {
  std::ostringstream os;
  os << "row,col,dr,dg,db\n";
  for (int r = 0; r < grad.height; ++r)
    for (int c = 0; c < grad.width; ++c)
      os << r << ',' << c << ',' << fmt_double(grad.at(r, c, 0)) << ','
         << fmt_double(grad.at(r, c, 1)) << ',' << fmt_double(grad.at(r, c, 2))
         << '\n';
  return os.str();
}

PersLossGradient read_gradient_csv(const std::string& path) {
  struct Row {
    int r, c;
    double g[3];
  };
  std::vector<Row> rows;
  int height = 0, width = 0;
  bool header = true;
  for (const std::string& line : data_lines(read_text_file(path))) {
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string r, c, dr, dg, db;
    if (!std::getline(ls, r, ',') || !std::getline(ls, c, ',') ||
        !std::getline(ls, dr, ',') || !std::getline(ls, dg, ',') ||
        !std::getline(ls, db))
      throw ParseError(path + ": expected row,col,dr,dg,db");
    Row row{static_cast<int>(parse_double(r, path)),
            static_cast<int>(parse_double(c, path)),
            {parse_double(dr, path), parse_double(dg, path), parse_double(db, path)}};
    height = std::max(height, row.r + 1);
    width = std::max(width, row.c + 1);
    rows.push_back(row);
  }
  PersLossGradient grad;
  grad.height = height;
  grad.width = width;
  grad.d_pixels.assign(static_cast<std::size_t>(height) * width * 3, 0.0);
  for (const Row& row : rows)
    for (int ch = 0; ch < 3; ++ch)
      grad.d_pixels[(static_cast<std::size_t>(row.r) * width + row.c) * 3 + ch] =
          row.g[ch];
  return grad;
}

std::string persloss_json(const PersLossValue& value, const std::array<int, 3>& k) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"total\": " << fmt_double(value.total) << ",\n";
  os << "  \"per_dim_terms\": [" << fmt_double(value.per_dim_terms[0]) << ", "
     << fmt_double(value.per_dim_terms[1]) << ", "
     << fmt_double(value.per_dim_terms[2]) << "],\n";
  os << "  \"weights\": [" << fmt_double(value.weights[0]) << ", "
     << fmt_double(value.weights[1]) << ", " << fmt_double(value.weights[2])
     << "],\n";
  os << "  \"k\": [" << k[0] << ", " << k[1] << ", " << k[2] << "],\n";
  os << "  \"rendered_reduced\": " << (value.rendered_reduced ? "true" : "false")
     << ",\n";
  os << "  \"gt_reduced\": " << (value.gt_reduced ? "true" : "false") << "\n";
  os << "}\n";
  return os.str();
}

std::pair<PersLossValue, std::array<int, 3>> read_persloss_json(
    const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  PersLossValue v;
  std::array<int, 3> k{0, 0, 0};
  try {
    v.total = j.at("total").get<double>();
    for (int d = 0; d < 3; ++d) {
      v.per_dim_terms[d] = j.at("per_dim_terms").at(d).get<double>();
      v.weights[d] = j.at("weights").at(d).get<double>();
      k[d] = j.at("k").at(d).get<int>();
    }
    v.rendered_reduced = j.at("rendered_reduced").get<bool>();
    v.gt_reduced = j.at("gt_reduced").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return {v, k};
}

// ---------------------------------------------------------------------------
// Toy problems
// ---------------------------------------------------------------------------

ToyProblem read_problem(const std::string& path) {
  long vertices = -1;
  double supv_weight = 1.0;
  std::vector<Simplex> simplices;
  std::vector<double> target, initial;
  for (const std::string& line : data_lines(read_text_file(path))) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "vertices") {
      if (!(ls >> vertices) || vertices <= 0)
        throw ParseError(path + ": bad vertex count");
    } else if (word == "simplex") {
      std::vector<Index> verts;
      long v;
      while (ls >> v) verts.push_back(static_cast<Index>(v));
      if (verts.empty() || verts.size() > 4)
        throw ParseError(path + ": simplex needs 1-4 vertices");
      simplices.emplace_back(verts);
    } else if (word == "target" || word == "initial") {
      std::vector<double>& dst = word == "target" ? target : initial;
      std::string tok;
      while (ls >> tok) dst.push_back(parse_double(tok, path));
    } else if (word == "supv_weight") {
      std::string tok;
      if (!(ls >> tok)) throw ParseError(path + ": missing supv_weight value");
      supv_weight = parse_double(tok, path);
    } else {
      throw ParseError(path + ": unknown directive '" + word + "'");
    }
  }
  if (vertices <= 0) throw ParseError(path + ": missing 'vertices'");
  if (static_cast<long>(target.size()) != vertices)
    throw ParseError(path + ": target value count != vertices");
  if (initial.empty()) initial = target;
  if (static_cast<long>(initial.size()) != vertices)
    throw ParseError(path + ": initial value count != vertices");
  try {
    return make_toy_problem(std::move(simplices), std::move(target),
                            std::move(initial), supv_weight);
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::vector<TraceRow> trace;
  bool header = true;
  for (const std::string& line : data_lines(read_text_file(path))) {
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string tok;
    std::vector<double> cols;
    while (std::getline(ls, tok, ',')) cols.push_back(parse_double(tok, path));
    if (cols.size() != 8)
      throw ParseError(path + ": expected 8 trace columns, got " +
                       std::to_string(cols.size()));
    TraceRow r;
    r.t = static_cast<int>(cols[0]);
    r.g_t_wt = cols[1];
    r.g_t_wnext = cols[2];
    r.g_next_wnext = cols[3];
    r.step_norm = cols[4];
    r.supv = cols[5];
    r.topo_held = cols[6];
    r.topo_refreshed = cols[7];
    trace.push_back(r);
  }
  return trace;
}

void write_problem(const std::string& path, const ToyProblem& problem) {
  std::ostringstream os;
  os << "vertices " << problem.vertex_count() << '\n';
  for (const Simplex& s : problem.complex) {
    if (s.n < 2) continue;  // vertices are implicit
    os << "simplex";
    for (Index v : s) os << ' ' << v;
    os << '\n';
  }
  os << "target";
  for (double v : problem.target_values) os << ' ' << fmt_double(v);
  os << "\ninitial";
  for (double v : problem.initial_values) os << ' ' << fmt_double(v);
  os << "\nsupv_weight " << fmt_double(problem.supv_weight) << '\n';
  write_text_file(path, os.str());
}

}  // namespace topokit
