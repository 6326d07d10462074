#include "cvx/config.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "cvx/report.hpp"

namespace cvx {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ParseError(line, key, "expected a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v, int line) {
  const double d = to_double(key, v, line);
  if (d != std::floor(d)) throw ParseError(line, key, "expected an integer");
  return int(d);
}

const std::set<std::string> kKnownKeys = {
    "model", "q", "gamma", "gamma_table", "R", "center_x", "center_y", "inner", "r0", "n",
    "eps0", "ratio", "count", "tol_grad", "max_iters", "armijo", "backtrack", "cg_tol",
    "cg_max", "mu_min", "margin", "psi", "seed", "out_dir", "audits"};

const std::set<std::string> kKnownAudits = {"g_identity", "linfty", "convexity",
                                            "penalty_decay", "keyest"};

void validate(const RunConfig& c) {
  if (c.model != "quadratic_test" && c.model != "rochet_chone" && c.model != "exp")
    throw ValidationError("model", "must be quadratic_test, rochet_chone or exp");
  if (!(c.q > 1.0)) throw ValidationError("q", "must be > 1");
  if (c.gamma < 0) throw ValidationError("gamma", "must be >= 0");
  if (!(c.R > 0)) throw ValidationError("R", "must be > 0");
  if (c.inner_shape != "disk" && c.inner_shape != "square")
    throw ValidationError("inner", "must be disk or square");
  if (!(c.r0 > 0 && c.r0 < c.R)) throw ValidationError("r0", "must be in (0, R)");
  if (c.n < 9) throw ValidationError("n", "must be >= 9");
  if (!(c.schedule.eps0 > 0 && c.schedule.eps0 < 1))
    throw ValidationError("eps0", "must be in (0,1)");
  if (!(c.schedule.ratio > 0 && c.schedule.ratio < 1))
    throw ValidationError("ratio", "must be in (0,1)");
  if (c.schedule.count < 1) throw ValidationError("count", "must be >= 1");
  if (!(c.newton.tol_grad > 0)) throw ValidationError("tol_grad", "must be > 0");
  if (c.newton.max_iters < 1) throw ValidationError("max_iters", "must be >= 1");
  if (!(c.newton.armijo_c > 0 && c.newton.armijo_c < 1))
    throw ValidationError("armijo", "must be in (0,1)");
  if (!(c.newton.backtrack > 0 && c.newton.backtrack < 1))
    throw ValidationError("backtrack", "must be in (0,1)");
  if (!(c.newton.cg_tol > 0)) throw ValidationError("cg_tol", "must be > 0");
  if (c.newton.cg_max < 1) throw ValidationError("cg_max", "must be >= 1");
  if (!(c.mu_min > 0)) throw ValidationError("mu_min", "must be > 0");
  if (!(c.margin > 0)) throw ValidationError("margin", "must be > 0");
  if (!(c.psi > 0)) throw ValidationError("psi", "must be > 0");
  for (const std::string& a : c.audits)
    if (!kKnownAudits.count(a)) throw ValidationError("audits", "unknown audit '" + a + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::set<std::string> seen;

  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "", "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!kKnownKeys.count(key)) throw ParseError(lineno, key, "unknown key");
    if (!seen.insert(key).second) throw ParseError(lineno, key, "duplicate key");
    if (val.empty()) throw ParseError(lineno, key, "empty value");

    if (key == "model") c.model = val;
    else if (key == "q") c.q = to_double(key, val, lineno);
    else if (key == "gamma") c.gamma = to_double(key, val, lineno);
    else if (key == "gamma_table") c.gamma_table = val;
    else if (key == "R") c.R = to_double(key, val, lineno);
    else if (key == "center_x") c.center.x = to_double(key, val, lineno);
    else if (key == "center_y") c.center.y = to_double(key, val, lineno);
    else if (key == "inner") c.inner_shape = val;
    else if (key == "r0") c.r0 = to_double(key, val, lineno);
    else if (key == "n") c.n = to_int(key, val, lineno);
    else if (key == "eps0") c.schedule.eps0 = to_double(key, val, lineno);
    else if (key == "ratio") c.schedule.ratio = to_double(key, val, lineno);
    else if (key == "count") c.schedule.count = to_int(key, val, lineno);
    else if (key == "tol_grad") c.newton.tol_grad = to_double(key, val, lineno);
    else if (key == "max_iters") c.newton.max_iters = to_int(key, val, lineno);
    else if (key == "armijo") c.newton.armijo_c = to_double(key, val, lineno);
    else if (key == "backtrack") c.newton.backtrack = to_double(key, val, lineno);
    else if (key == "cg_tol") c.newton.cg_tol = to_double(key, val, lineno);
    else if (key == "cg_max") c.newton.cg_max = to_int(key, val, lineno);
    else if (key == "mu_min") c.mu_min = to_double(key, val, lineno);
    else if (key == "margin") c.margin = to_double(key, val, lineno);
    else if (key == "psi") c.psi = to_double(key, val, lineno);
    else if (key == "seed") {
      const int s = to_int(key, val, lineno);
      if (s < 0) throw ValidationError("seed", "must be >= 0");
      c.seed = unsigned(s);
    }
    else if (key == "out_dir") c.out_dir = val;
    else if (key == "audits") {
      c.audits.clear();
      if (val == "none") continue;
      if (val == "all") {
        c.audits = kKnownAudits;
        continue;
      }
      std::string cur;
      for (char ch : val + ",") {
        if (ch == ',') {
          const std::string a = trim(cur);
          if (!a.empty()) c.audits.insert(a);
          cur.clear();
        } else {
          cur += ch;
        }
      }
    }
  }
  validate(c);
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw ParseError(0, "", std::string("cannot read config: ") + e.what());
  }
  return parse_config_text(text);
}

DomainSpec RunConfig::domain_spec() const {
  DomainSpec spec;
  spec.center = center;
  spec.radius = R;
  spec.inner.kind =
      inner_shape == "disk" ? InnerShape::Kind::Disk : InnerShape::Kind::Square;
  spec.inner.center = center;
  spec.inner.radius = r0;
  spec.phi = BoundaryData::quadratic(center);
  return spec;
}

LagrangianModel RunConfig::make_model() const {
  if (model == "quadratic_test") return quadratic_test_model();
  if (model == "exp") return exp_lagrangian();
  GammaField g = GammaField::constant(gamma);
  if (!gamma_table.empty()) {
    // First line: nx ny x0 y0 x1 y1; then nx*ny row-major values.
    std::istringstream in(read_text_file(gamma_table));
    int nx, ny;
    Vec2 lo, hi;
    if (!(in >> nx >> ny >> lo.x >> lo.y >> hi.x >> hi.y))
      throw ValidationError("gamma_table", "bad header in " + gamma_table);
    std::vector<double> vals(std::size_t(nx) * ny);
    for (double& v : vals)
      if (!(in >> v)) throw ValidationError("gamma_table", "too few values");
    g = GammaField::table(nx, ny, lo, hi, std::move(vals));
  }
  return rochet_chone(q, g, R);
}

std::string RunConfig::echo() const {
  char buf[256];
  std::string s = "# effective configuration\n";
  auto add = [&](const char* k, const std::string& v) { s += std::string(k) + " = " + v + "\n"; };
  auto addf = [&](const char* k, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    add(k, buf);
  };
  add("model", model);
  addf("q", q);
  addf("gamma", gamma);
  if (!gamma_table.empty()) add("gamma_table", gamma_table);
  addf("R", R);
  addf("center_x", center.x);
  addf("center_y", center.y);
  add("inner", inner_shape);
  addf("r0", r0);
  add("n", std::to_string(n));
  addf("eps0", schedule.eps0);
  addf("ratio", schedule.ratio);
  add("count", std::to_string(schedule.count));
  addf("tol_grad", newton.tol_grad);
  add("max_iters", std::to_string(newton.max_iters));
  addf("armijo", newton.armijo_c);
  addf("backtrack", newton.backtrack);
  addf("cg_tol", newton.cg_tol);
  add("cg_max", std::to_string(newton.cg_max));
  addf("mu_min", mu_min);
  addf("margin", margin);
  addf("psi", psi);
  add("seed", std::to_string(seed));
  add("out_dir", out_dir);
  std::string alist;
  for (const std::string& a : audits) alist += (alist.empty() ? "" : ",") + a;
  add("audits", alist.empty() ? "none" : alist);
  return s;
}

}  // namespace cvx
