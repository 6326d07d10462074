#include "cvx/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cvx {

namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

namespace csv {

std::string sweep_table(const std::vector<SolveReport>& reports) {
  std::string s = kSweepSchema;
  s += "\neps,iters,grad_norm,J,Jeps,min_det,err_K_vs_baseline,penalty_quartic,"
       "keyest_monitor,el_residual_median,wall_ms\n";
  for (const SolveReport& r : reports) {
    s += num(r.eps) + "," + std::to_string(r.iters) + "," + num(r.final_grad_norm) + "," +
         num(r.plain_j) + "," + num(r.energy.total) + "," + num(r.min_det) + "," +
         num(r.err_K_vs_baseline) + "," + num(r.penalty_quartic) + "," +
         num(r.keyest_monitor) + "," + num(r.el_residual) + "," + num(r.wall_ms) + "\n";
  }
  return s;
}

std::string audit_table(const std::vector<AuditOutcome>& audits) {
  std::string s = kAuditSchema;
  s += "\nname,passed,measured,threshold,context\n";
  for (const AuditOutcome& a : audits) {
    std::string ctx = a.context;
    for (char& c : ctx)
      if (c == ',') c = ';';
    s += a.name + "," + (a.passed ? "1" : "0") + "," + num(a.measured) + "," +
         num(a.threshold) + "," + ctx + "\n";
  }
  return s;
}

std::string field_table(const ScalarField& u) {
  const Grid& g = *u.grid;
  std::string s = kFieldSchema;
  s += "\ni,j,x,y,value,region\n";
  for (int k = 0; k < g.size(); ++k) {
    if (!g.is_inside(k)) continue;
    const Vec2 x = g.coord(k);
    const int region = g.is_boundary(k) ? 0 : (g.inner[k] ? 2 : 1);
    s += std::to_string(g.ix(k)) + "," + std::to_string(g.iy(k)) + "," + num(x.x) + "," +
         num(x.y) + "," + num(u[k]) + "," + std::to_string(region) + "\n";
  }
  return s;
}

std::vector<SolveReport> parse_sweep_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSweepSchema)
    throw ParseError(1, "", "not a cvxmin sweep csv (schema line mismatch)");
  std::getline(in, line);  // header
  std::vector<SolveReport> out;
  int lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 11) throw ParseError(lineno, "", "expected 11 columns");
    SolveReport r;
    r.eps = std::stod(f[0]);
    r.iters = std::stoi(f[1]);
    r.final_grad_norm = std::stod(f[2]);
    r.plain_j = std::stod(f[3]);
    r.energy.total = std::stod(f[4]);
    r.min_det = std::stod(f[5]);
    r.err_K_vs_baseline = std::stod(f[6]);
    r.penalty_quartic = std::stod(f[7]);
    r.keyest_monitor = std::stod(f[8]);
    r.el_residual = std::stod(f[9]);
    r.wall_ms = std::stod(f[10]);
    out.push_back(r);
  }
  return out;
}

ScalarField parse_field_table(const std::string& text, const Grid& grid) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kFieldSchema)
    throw ParseError(1, "", "not a cvxmin field csv (schema line mismatch)");
  std::getline(in, line);
  ScalarField u(grid, 0.0);
  int lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw ParseError(lineno, "", "expected 6 columns");
    const int i = std::stoi(f[0]), j = std::stoi(f[1]);
    if (i < 0 || j < 0 || i >= grid.n || j >= grid.n)
      throw ParseError(lineno, "", "node index outside the grid");
    u[grid.id(i, j)] = std::stod(f[4]);
  }
  return u;
}

std::vector<FieldCell> parse_field_cells(const std::string& text, int& n_out) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kFieldSchema)
    throw ParseError(1, "", "not a cvxmin field csv (schema line mismatch)");
  std::getline(in, line);
  std::vector<FieldCell> cells;
  int lineno = 2, n = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw ParseError(lineno, "", "expected 6 columns");
    FieldCell c{std::stoi(f[0]), std::stoi(f[1]), std::stod(f[4])};
    n = std::max(n, std::max(c.i, c.j) + 1);
    cells.push_back(c);
  }
  n_out = n;
  return cells;
}

}  // namespace csv

// ── SVG ──────────────────────────────────────────────────────────────────

namespace svg {

namespace {

// Perceptual-ish dark-to-bright map, quantized to 256 steps.
const double kAnchors[][3] = {
    {0.267, 0.005, 0.329}, {0.283, 0.141, 0.458}, {0.254, 0.265, 0.530},
    {0.207, 0.372, 0.553}, {0.164, 0.471, 0.558}, {0.128, 0.567, 0.551},
    {0.135, 0.659, 0.518}, {0.267, 0.749, 0.441}, {0.478, 0.821, 0.318},
    {0.741, 0.873, 0.150}, {0.993, 0.906, 0.144}};
constexpr int kAnchorCount = 11;

std::string color256(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int step = std::min(255, int(t * 256.0));  // quantize to the 256-step map
  const double s = step / 255.0 * (kAnchorCount - 1);
  const int a = std::min(kAnchorCount - 2, int(s));
  const double f = s - a;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                int(255 * (kAnchors[a][0] + f * (kAnchors[a + 1][0] - kAnchors[a][0]))),
                int(255 * (kAnchors[a][1] + f * (kAnchors[a + 1][1] - kAnchors[a][1]))),
                int(255 * (kAnchors[a][2] + f * (kAnchors[a + 1][2] - kAnchors[a][2]))));
  return buf;
}

std::string fnum(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string heatmap_cells(int n, const std::vector<csv::FieldCell>& cells,
                          const std::string& title) {
  const int pix = 520, margin = 40;
  const double cell = double(pix - 2 * margin) / std::max(n, 1);

  double lo = 1e300, hi = -1e300;
  for (const csv::FieldCell& c : cells) {
    lo = std::min(lo, c.value);
    hi = std::max(hi, c.value);
  }
  const double span = hi > lo ? hi - lo : 1.0;

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(pix) +
       "\" height=\"" + std::to_string(pix) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"#f7f7f7\"/>\n";
  s += "<text x=\"" + std::to_string(margin) + "\" y=\"24\" font-family=\"monospace\" "
       "font-size=\"14\">" + title + "</text>\n";
  for (const csv::FieldCell& c : cells) {
    const double px = margin + c.i * cell;
    const double py = pix - margin - (c.j + 1) * cell;  // y up
    s += "<rect x=\"" + fnum(px) + "\" y=\"" + fnum(py) + "\" width=\"" + fnum(cell + 0.5) +
         "\" height=\"" + fnum(cell + 0.5) + "\" fill=\"" +
         color256((c.value - lo) / span) + "\"/>\n";
  }
  s += "<text x=\"" + std::to_string(margin) + "\" y=\"" + std::to_string(pix - 12) +
       "\" font-family=\"monospace\" font-size=\"12\">min " + fnum(lo) + "  max " + fnum(hi) +
       "</text>\n";
  s += "</svg>\n";
  return s;
}

std::string heatmap(const ScalarField& u, const std::string& title) {
  const Grid& g = *u.grid;
  std::vector<csv::FieldCell> cells;
  for (int k = 0; k < g.size(); ++k)
    if (g.is_inside(k)) cells.push_back({g.ix(k), g.iy(k), u[k]});
  return heatmap_cells(g.n, cells, title);
}

std::string line_plot(const std::vector<Series>& series, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel, bool logx,
                      bool logy) {
  const int w = 560, h = 420, ml = 70, mr = 20, mt = 40, mb = 50;
  auto tx = [&](double v) { return logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return logy ? std::log10(v) : v; };

  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const Series& ser : series)
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      if ((logx && ser.x[i] <= 0) || (logy && ser.y[i] <= 0)) continue;
      if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i])) continue;
      x0 = std::min(x0, tx(ser.x[i]));
      x1 = std::max(x1, tx(ser.x[i]));
      y0 = std::min(y0, ty(ser.y[i]));
      y1 = std::max(y1, ty(ser.y[i]));
    }
  if (x0 > x1) {
    x0 = 0;
    x1 = 1;
  }
  if (y0 > y1) {
    y0 = 0;
    y1 = 1;
  }
  if (x1 - x0 < 1e-12) x1 = x0 + 1;
  if (y1 - y0 < 1e-12) y1 = y0 + 1;

  auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (w - ml - mr); };
  auto py = [&](double v) { return h - mb - (ty(v) - y0) / (y1 - y0) * (h - mt - mb); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
       "\" height=\"" + std::to_string(h) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  s += "<text x=\"" + std::to_string(ml) + "\" y=\"24\" font-family=\"monospace\" "
       "font-size=\"14\">" + title + "</text>\n";
  s += "<rect x=\"" + std::to_string(ml) + "\" y=\"" + std::to_string(mt) + "\" width=\"" +
       std::to_string(w - ml - mr) + "\" height=\"" + std::to_string(h - mt - mb) +
       "\" fill=\"none\" stroke=\"#333\"/>\n";

  // decade or quarter ticks
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    const double vx = logx ? std::pow(10, fx) : fx;
    const double vy = logy ? std::pow(10, fy) : fy;
    s += "<text x=\"" + fnum(ml + (w - ml - mr) * i / 4.0 - 10) + "\" y=\"" +
         std::to_string(h - mb + 18) + "\" font-family=\"monospace\" font-size=\"10\">" +
         fnum(vx) + "</text>\n";
    s += "<text x=\"6\" y=\"" + fnum(h - mb - (h - mt - mb) * i / 4.0 + 4) +
         "\" font-family=\"monospace\" font-size=\"10\">" + fnum(vy) + "</text>\n";
  }
  s += "<text x=\"" + std::to_string(w / 2 - 20) + "\" y=\"" + std::to_string(h - 14) +
       "\" font-family=\"monospace\" font-size=\"12\">" + xlabel + "</text>\n";
  s += "<text x=\"8\" y=\"" + std::to_string(mt - 8) +
       "\" font-family=\"monospace\" font-size=\"12\">" + ylabel + "</text>\n";

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  int ci = 0;
  for (const Series& ser : series) {
    std::string pts;
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      if ((logx && ser.x[i] <= 0) || (logy && ser.y[i] <= 0)) continue;
      if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i])) continue;
      pts += fnum(px(ser.x[i])) + "," + fnum(py(ser.y[i])) + " ";
      s += "<circle cx=\"" + fnum(px(ser.x[i])) + "\" cy=\"" + fnum(py(ser.y[i])) +
           "\" r=\"3\" fill=\"" + colors[ci % 4] + "\"/>\n";
    }
    s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + colors[ci % 4] +
         "\" stroke-width=\"1.5\"/>\n";
    s += "<text x=\"" + std::to_string(w - mr - 160) + "\" y=\"" +
         std::to_string(mt + 16 + 14 * ci) + "\" font-family=\"monospace\" font-size=\"11\" "
         "fill=\"" + colors[ci % 4] + "\">" + ser.label + "</text>\n";
    ++ci;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace svg

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cvx
