#include "swapquad/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "swapquad/oracle.hpp"
#include "swapquad/specfun.hpp"

namespace swapquad {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line, section;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line without '=': " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    cfg.values[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_string(ss.str());
}

bool ExperimentConfig::has(const std::string& key) const {
  return values.count(key) > 0;
}

std::string ExperimentConfig::get(const std::string& key,
                                  const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double ExperimentConfig::get_num(const std::string& key, double fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : std::stod(it->second);
}

int ExperimentConfig::get_int(const std::string& key, int fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : std::stoi(it->second);
}

bool ExperimentConfig::get_flag(const std::string& key, bool fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  const std::string& v = it->second;
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("bad flag value for " + key + ": " + v);
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  values[key] = value;
}

double relative_error(Complex computed, Complex reference) {
  return std::abs(computed - reference) / std::max(std::abs(reference), 1e-300);
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

namespace {
const char* kCsvHeader =
    "experiment,n,target_re,target_im,computed_re,computed_im,"
    "reference_re,reference_im,rel_error,strategy,flags,wall_ms";
}

void emit_csv(const ResultTable& table, std::ostream& os) {
  os << kCsvHeader << "\n";
  for (const ResultRow& r : table.rows) {
    os << r.experiment << ',' << r.n << ',' << fmt17(r.target.real()) << ','
       << fmt17(r.target.imag()) << ',' << fmt17(r.computed.real()) << ','
       << fmt17(r.computed.imag()) << ',' << fmt17(r.reference.real()) << ','
       << fmt17(r.reference.imag()) << ',' << fmt17(r.rel_error) << ','
       << r.strategy << ',' << r.flags << ',' << fmt17(r.wall_ms) << "\n";
  }
}

void emit_json(const ResultTable& table, std::ostream& os) {
  nlohmann::json doc;
  doc["experiment"] = table.experiment_id;
  doc["schema"] = "swapquad-result-table-v1";
  nlohmann::json rows = nlohmann::json::array();
  for (const ResultRow& r : table.rows) {
    rows.push_back({{"experiment", r.experiment},
                    {"n", r.n},
                    {"target_re", r.target.real()},
                    {"target_im", r.target.imag()},
                    {"computed_re", r.computed.real()},
                    {"computed_im", r.computed.imag()},
                    {"reference_re", r.reference.real()},
                    {"reference_im", r.reference.imag()},
                    {"rel_error", r.rel_error},
                    {"strategy", r.strategy},
                    {"flags", r.flags},
                    {"wall_ms", r.wall_ms}});
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << "\n";
}

void emit(const ResultTable& table, const std::string& path,
          const std::string& format) {
  if (table.rows.empty()) throw std::invalid_argument("refusing to emit empty table");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write: " + path);
  if (format == "csv") {
    emit_csv(table, os);
  } else if (format == "json") {
    emit_json(table, os);
  } else {
    throw std::invalid_argument("unknown format: " + format);
  }
}

ResultTable parse_result_csv(std::istream& is) {
  ResultTable table;
  std::string line;
  if (!std::getline(is, line) || trim(line) != kCsvHeader) {
    throw std::invalid_argument("bad csv header");
  }
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 12) throw std::invalid_argument("bad csv row: " + line);
    ResultRow r;
    r.experiment = cells[0];
    r.n = std::stoi(cells[1]);
    r.target = {std::stod(cells[2]), std::stod(cells[3])};
    r.computed = {std::stod(cells[4]), std::stod(cells[5])};
    r.reference = {std::stod(cells[6]), std::stod(cells[7])};
    r.rel_error = std::stod(cells[8]);
    r.strategy = cells[9];
    r.flags = cells[10];
    r.wall_ms = std::stod(cells[11]);
    table.rows.push_back(std::move(r));
  }
  if (!table.rows.empty()) table.experiment_id = table.rows.front().experiment;
  return table;
}

// ---------------------------------------------------------------------------
// Config -> problem builders
// ---------------------------------------------------------------------------

PiecewiseBoundary boundary_from_config(const ExperimentConfig& cfg) {
  const std::string name = cfg.get("curve.name", "star");
  if (name == "circle") return make_smooth_boundary(make_unit_circle());
  if (name == "star") {
    return make_smooth_boundary(make_star_curve(cfg.get_num("curve.amplitude", 0.3),
                                                cfg.get_int("curve.frequency", 5)));
  }
  if (name == "inkblot") return make_inkblot_boundary(cfg.get_int("curve.p", 7));
  if (name == "trig") {
    // harmonics = freq:re:im; freq:re:im; ...
    std::vector<ExpSumTerm> terms;
    std::stringstream ss(cfg.get("curve.harmonics", ""));
    std::string item;
    while (std::getline(ss, item, ';')) {
      item = trim(item);
      if (item.empty()) continue;
      double f, re, im;
      if (std::sscanf(item.c_str(), "%lf:%lf:%lf", &f, &re, &im) != 3) {
        throw std::invalid_argument("bad harmonic term: " + item);
      }
      terms.push_back({f, Complex(re, im)});
    }
    if (terms.empty()) throw std::invalid_argument("trig curve needs harmonics");
    return make_smooth_boundary(make_exp_sum_curve(
        std::move(terms), true, cfg.get_num("curve.strip_bound", 1.5)));
  }
  throw std::invalid_argument("unknown curve: " + name);
}

std::function<Complex(Complex)> exact_solution_from_config(const ExperimentConfig& cfg) {
  const Complex x0(cfg.get_num("problem.source_re", 3.0),
                   cfg.get_num("problem.source_im", 3.0));
  if (cfg.get("pde.kind", "laplace") == "laplace") {
    return [x0](Complex x) { return Complex(std::log(std::abs(x - x0)), 0.0); };
  }
  const double kappa = cfg.get_num("pde.kappa", 3.0);
  return [x0, kappa](Complex x) {
    return 0.25 * kImag * hankel1(0, kappa * std::abs(x - x0)).value;
  };
}

BIEProblem problem_from_config(const ExperimentConfig& cfg,
                               const PiecewiseBoundary& boundary) {
  BIEProblem prob;
  prob.boundary = boundary;
  prob.pde = cfg.get("pde.kind", "laplace") == "helmholtz" ? Pde::helmholtz
                                                           : Pde::laplace;
  prob.kappa = prob.pde == Pde::helmholtz ? cfg.get_num("pde.kappa", 3.0) : 0.0;
  prob.interior = cfg.get_flag("problem.interior", true);
  prob.representation = cfg.get("problem.representation", "double") == "single"
                            ? Layer::single
                            : Layer::double_layer;
  prob.dirichlet_data = exact_solution_from_config(cfg);
  prob.n = cfg.get_int("discretization.n", 32);
  return prob;
}

FieldOptions field_options_from_config(const ExperimentConfig& cfg) {
  FieldOptions opt;
  const std::string sub = cfg.get("strategy.subtraction", "auto");
  if (sub == "on") {
    opt.strategy = Strategy::swapped_subtraction;
  } else if (sub == "off") {
    opt.strategy = Strategy::swapped;
    opt.auto_subtraction = false;
  } else if (sub == "auto") {
    opt.strategy = Strategy::swapped;
    opt.auto_subtraction = true;
  } else {
    throw std::invalid_argument("strategy.subtraction must be on|off|auto");
  }
  opt.correction = cfg.get_flag("strategy.correction", false);
  opt.newton_steps = cfg.get_int("strategy.newton_steps", 1);
  opt.threads = cfg.get_int("strategy.threads", 1);
  return opt;
}

std::vector<Complex> nearest_preimages(const PiecewiseBoundary& boundary, Complex x,
                                       std::size_t count) {
  std::vector<Complex> all;
  for (const CurvePiece& piece : boundary.pieces) {
    for (Complex root : preimages_by_multistart(piece, x)) {
      const bool dup = std::any_of(all.begin(), all.end(), [&](Complex r) {
        return std::abs(r - root) < 1e-7;
      });
      if (!dup) all.push_back(root);
    }
  }
  std::sort(all.begin(), all.end(), [](Complex a, Complex b) {
    return std::abs(a.imag()) < std::abs(b.imag());
  });
  if (all.size() > count) all.resize(count);
  return all;
}

// ---------------------------------------------------------------------------
// kernel-convergence
// ---------------------------------------------------------------------------

namespace {

struct KernelPair {
  std::string id;
  std::function<Complex(Complex)> density;  // u(z)
  double density_radius;                    // 0 when not geometric
};

// sqrt on the unit circle resolved as e^{it/2}, t in [0, 2pi)
Complex circle_sqrt(double t) { return std::exp(Complex(0.0, 0.5 * t)); }

KernelPair kernel_pair_by_id(const std::string& id) {
  if (id == "poly") {
    return {id,
            [](Complex z) { return std::pow(z, 10) + std::pow(z, -10); }, 0.0};
  }
  if (id == "entire") {
    return {id, [](Complex z) { return std::exp(z); }, 0.0};
  }
  if (id == "rational") {
    return {id, [](Complex z) { return 1.0 / (z - 2.0); }, 2.0};
  }
  if (id == "smooth") {
    return {id,
            [](Complex z) {
              const Complex w = z + 1.0;
              return std::exp(-1.0 / (w * w));
            },
            0.0};
  }
  if (id == "c2" || id == "c0") {
    // branch-cut densities are evaluated through pair_density_at_t
    return {id, [](Complex) { return Complex(0.0); }, 0.0};
  }
  throw std::invalid_argument("unknown kernel pair: " + id);
}

Complex pair_density_at_t(const std::string& id, double t) {
  const Complex z = std::exp(Complex(0.0, t));
  if (id == "c2") {
    const Complex s = circle_sqrt(t);
    const Complex v = 1.0 / s + s;
    return v * v * v;
  }
  if (id == "c0") {
    const Complex s = circle_sqrt(t);
    return 1.0 / s + s;
  }
  return kernel_pair_by_id(id).density(z);
}

}  // namespace

ResultTable run_kernel_convergence(const ExperimentConfig& cfg) {
  const std::string pair = cfg.get("kernel.pair", "poly");
  const Complex z0(cfg.get_num("kernel.z0_re", 1.1), cfg.get_num("kernel.z0_im", 0.0));
  const int m_min = cfg.get_int("kernel.n_min", 2);
  const int m_max = cfg.get_int("kernel.n_max", 50);

  ResultTable table;
  table.experiment_id = cfg.get("experiment.id", "kernel-convergence-" + pair);

  // reference by adaptive quadrature of the raw integrand
  auto integrand = [&](double t) {
    const Complex z = std::exp(Complex(0.0, t));
    return pair_density_at_t(pair, t) / (z - z0);
  };
  const oracle::ReferenceResult ref = oracle::adaptive_integrate(
      [&](double t) { return integrand(t); }, 0.0, kTwoPi, 1e-13);

  ConvergenceModel model;
  model.kernel_radius = std::max(std::abs(z0), 1.0 / std::abs(z0));
  model.density_radius = kernel_pair_by_id(pair).density_radius;
  model.im_t0 = std::log(model.kernel_radius);

  for (int m = m_min; m <= m_max; ++m) {
    // classic rule with m nodes
    {
      Complex acc = 0.0;
      for (int j = 0; j < m; ++j) {
        const double t = kTwoPi * j / m;
        const Complex z = std::exp(Complex(0.0, t));
        acc += pair_density_at_t(pair, t) / (z - z0);
      }
      acc *= kTwoPi / m;
      ResultRow r;
      r.experiment = table.experiment_id;
      r.n = m;
      r.target = z0;
      r.computed = acc;
      r.reference = ref.value;
      r.rel_error = relative_error(acc, ref.value);
      r.strategy = "classic";
      table.rows.push_back(std::move(r));
    }
    if (m % 2 != 0 || m < 2) continue;
    const int n = m / 2;
    std::vector<Complex> u(m);
    std::vector<Complex> ku(m);
    for (int j = 0; j < m; ++j) {
      const double t = kPi * j / n;
      u[j] = pair_density_at_t(pair, t);
      ku[j] = u[j] / (std::exp(Complex(0.0, t)) - z0);
    }
    // modified rule with the exact pole
    {
      const Complex acc = cauchy_kernel_quadrature(z0, u);
      ResultRow r;
      r.experiment = table.experiment_id;
      r.n = m;
      r.target = z0;
      r.computed = acc;
      r.reference = ref.value;
      r.rel_error = relative_error(acc, ref.value);
      r.strategy = "swapped-exact";
      table.rows.push_back(std::move(r));
    }
    // modified rule with the quadrature pole estimate
    {
      Complex num = 0.0, den = 0.0;
      for (int j = 0; j < m; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const Complex z = std::exp(Complex(0.0, kPi * j / n));
        num += sign * z * ku[j];
        den += sign * ku[j];
      }
      ResultRow r;
      r.experiment = table.experiment_id;
      r.n = m;
      r.target = z0;
      r.strategy = "swapped-estimated";
      if (std::abs(den) < 1e-300) {
        r.flags = "no-detectable-pole";
        r.computed = 0.0;
        r.reference = ref.value;
        r.rel_error = 1.0;
      } else {
        const Complex z0_hat = num / den;
        const Complex acc = cauchy_kernel_quadrature(z0_hat, u);
        r.computed = acc;
        r.reference = ref.value;
        r.rel_error = relative_error(acc, ref.value);
      }
      table.rows.push_back(std::move(r));
    }
    // predicted rates from the convergence model
    {
      ResultRow r;
      r.experiment = table.experiment_id;
      r.n = m;
      r.target = z0;
      r.computed = model.modified_rate(n);
      r.reference = model.plain_rate(m);
      r.rel_error = 0.0;
      r.strategy = "predicted-rate";
      r.flags = "computed=modified;reference=classic";
      table.rows.push_back(std::move(r));
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// field-map / slice / target-convergence / solve / eval
// ---------------------------------------------------------------------------

namespace {

struct SolvedProblem {
  PiecewiseBoundary boundary;
  BIEProblem problem;
  NystromSystem system;
  SolvedDensity density;
};

SolvedProblem solve_from_config(const ExperimentConfig& cfg) {
  SolvedProblem sp;
  sp.boundary = boundary_from_config(cfg);
  sp.problem = problem_from_config(cfg, sp.boundary);
  sp.system = assemble(sp.problem);
  sp.density = solve(sp.system);
  return sp;
}

void append_eval_rows(ResultTable& table, const SolvedProblem& sp,
                      const std::vector<Complex>& targets,
                      const std::function<Complex(Complex)>& exact,
                      const FieldOptions& opt, const std::string& strategy_label,
                      bool timings) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<TargetReport> reports =
      evaluate_field(sp.problem, sp.system, sp.density, targets, opt);
  const auto t1 = std::chrono::steady_clock::now();
  const double ms_total =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const TargetReport& rep = reports[i];
    ResultRow r;
    r.experiment = table.experiment_id;
    r.n = sp.problem.n;
    r.target = targets[i];
    r.computed = rep.value;
    r.reference = exact(targets[i]);
    r.rel_error = relative_error(rep.value, r.reference);
    r.strategy = strategy_label.empty()
                     ? (rep.used == Strategy::plain ? "plain"
                        : rep.used == Strategy::swapped_subtraction
                            ? "swapped-subtraction"
                            : "swapped")
                     : strategy_label;
    if (rep.value == r.reference) {
      r.rel_error = 0.0;
      r.flags = "exact";
    }
    if (rep.near_node) r.flags += (r.flags.empty() ? "" : ";") + std::string("near-node");
    if (rep.on_surface) r.flags += (r.flags.empty() ? "" : ";") + std::string("on-surface");
    r.wall_ms = timings ? ms_total / targets.size() : 0.0;
    table.rows.push_back(std::move(r));
  }
}

}  // namespace

ResultTable run_field_map(const ExperimentConfig& cfg) {
  SolvedProblem sp = solve_from_config(cfg);
  const auto exact = exact_solution_from_config(cfg);
  const bool timings = cfg.get_flag("output.timings", false);

  const double spacing = cfg.get_num("targets.spacing", 0.05);
  double x0 = cfg.get_num("targets.x_min", 0.0);
  double x1 = cfg.get_num("targets.x_max", 0.0);
  double y0 = cfg.get_num("targets.y_min", 0.0);
  double y1 = cfg.get_num("targets.y_max", 0.0);
  if (x0 == x1) {
    // bounding box of the boundary plus a margin
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (const auto& piece : sp.boundary.pieces) {
      for (int j = 0; j < 256; ++j) {
        const Complex g = piece.map(kTwoPi * j / 256.0);
        lo_x = std::min(lo_x, g.real());
        hi_x = std::max(hi_x, g.real());
        lo_y = std::min(lo_y, g.imag());
        hi_y = std::max(hi_y, g.imag());
      }
    }
    x0 = lo_x;
    x1 = hi_x;
    y0 = lo_y;
    y1 = hi_y;
  }

  std::vector<Complex> targets;
  const bool want_inside = sp.problem.interior;
  for (double y = y0; y <= y1 + 1e-12; y += spacing) {
    for (double x = x0; x <= x1 + 1e-12; x += spacing) {
      const Complex pt(x, y);
      if (sp.boundary.contains(pt) != want_inside) continue;
      if (sp.boundary.distance_to_boundary(pt) < 1e-9) continue;
      targets.push_back(pt);
    }
  }

  ResultTable table;
  table.experiment_id = cfg.get("experiment.id", "field-map");
  FieldOptions swapped = field_options_from_config(cfg);
  append_eval_rows(table, sp, targets, exact, swapped, "", timings);
  FieldOptions plain = swapped;
  plain.strategy = Strategy::plain;
  append_eval_rows(table, sp, targets, exact, plain, "plain", timings);
  return table;
}

ResultTable run_slice(const ExperimentConfig& cfg) {
  SolvedProblem sp = solve_from_config(cfg);
  const auto exact = exact_solution_from_config(cfg);
  const bool timings = cfg.get_flag("output.timings", false);
  const std::string kind = cfg.get("targets.kind", "slice");

  std::vector<Complex> targets;
  std::vector<std::string> col_flags;
  if (kind == "slice") {
    const double re0 = cfg.get_num("targets.re_min", 1.66 * kPi);
    const double re1 = cfg.get_num("targets.re_max", 1.76 * kPi);
    const double im0 = cfg.get_num("targets.im_min", 1e-8);
    const double im1 = cfg.get_num("targets.im_max", 0.15);
    const int n_re = cfg.get_int("targets.count_re", 100);
    const int n_im = cfg.get_int("targets.count_im", 100);
    const CurvePiece& piece = sp.boundary.pieces.front();
    const double spacing = kPi / sp.problem.n;
    for (int i = 0; i < n_re; ++i) {
      const double re = re0 + (re1 - re0) * i / (n_re - 1);
      const double node_dist = std::abs(std::remainder(re, spacing));
      const bool near_col = node_dist < 0.2 * spacing;
      for (int j = 0; j < n_im; ++j) {
        const double im =
            im0 * std::pow(im1 / im0, double(j) / (n_im - 1));
        targets.push_back(piece.map(Complex(re, im)));
        col_flags.push_back(near_col ? "near-node-column" : "");
      }
    }
  } else if (kind == "corner-sector") {
    const int joint = cfg.get_int("targets.joint", 0);
    const CurvePiece& piece = sp.boundary.pieces.at(joint);
    const Complex corner = piece.map(0.0);
    const double bisector = cfg.get_num("targets.bisector", std::arg(corner));
    const double half = cfg.get_num("targets.half_angle", std::atan(0.5));
    const double r0 = cfg.get_num("targets.r_min", 1e-8);
    const double r1 = cfg.get_num("targets.r_max", 1.0);
    const int n_r = cfg.get_int("targets.count_r", 100);
    const int n_th = cfg.get_int("targets.count_theta", 100);
    const bool want_inside = sp.problem.interior;
    for (int i = 0; i < n_th; ++i) {
      const double th = bisector - half + 2.0 * half * i / (n_th - 1);
      for (int j = 0; j < n_r; ++j) {
        const double r = r0 * std::pow(r1 / r0, double(j) / (n_r - 1));
        const Complex pt = corner + r * std::exp(Complex(0.0, th));
        if (sp.boundary.contains(pt) != want_inside) continue;
        targets.push_back(pt);
        col_flags.push_back("");
      }
    }
  } else {
    throw std::invalid_argument("slice targets.kind must be slice|corner-sector");
  }

  ResultTable table;
  table.experiment_id = cfg.get("experiment.id", "slice");
  FieldOptions opt = field_options_from_config(cfg);
  append_eval_rows(table, sp, targets, exact, opt, "", timings);
  for (std::size_t i = 0; i < col_flags.size() && i < table.rows.size(); ++i) {
    if (!col_flags[i].empty()) {
      auto& f = table.rows[i].flags;
      f += (f.empty() ? "" : ";") + col_flags[i];
    }
  }
  return table;
}

ResultTable run_target_convergence(const ExperimentConfig& cfg) {
  const Complex target(cfg.get_num("targets.x", 0.5), cfg.get_num("targets.y", 1.0));
  std::vector<int> n_values;
  {
    std::stringstream ss(cfg.get("sweep.n_values", "8,16,24,32,40,48,56,64"));
    std::string item;
    while (std::getline(ss, item, ',')) n_values.push_back(std::stoi(trim(item)));
  }
  const auto exact = exact_solution_from_config(cfg);
  const bool timings = cfg.get_flag("output.timings", false);

  ResultTable table;
  table.experiment_id = cfg.get("experiment.id", "target-convergence");

  // predicted rates use the two nearest preimages and the corner model
  PiecewiseBoundary boundary = boundary_from_config(cfg);
  const auto pre = nearest_preimages(boundary, target, 2);
  double im_sum = 0.0;
  for (Complex t : pre) im_sum += std::abs(t.imag());
  ConvergenceModel corner_model;
  corner_model.alpha = boundary.alphas.empty()
                           ? 1.0
                           : *std::min_element(boundary.alphas.begin(),
                                               boundary.alphas.end());
  corner_model.grading_order = cfg.get_int("curve.p", 7);

  for (int n : n_values) {
    ExperimentConfig sub = cfg;
    sub.set("discretization.n", std::to_string(n));
    SolvedProblem sp = solve_from_config(sub);
    const std::vector<Complex> one{target};
    FieldOptions swapped = field_options_from_config(cfg);
    append_eval_rows(table, sp, one, exact, swapped, "", timings);
    FieldOptions plain = swapped;
    plain.strategy = Strategy::plain;
    append_eval_rows(table, sp, one, exact, plain, "plain", timings);
    ResultRow r;
    r.experiment = table.experiment_id;
    r.n = n;
    r.target = target;
    r.computed = std::exp(-double(n) * im_sum);
    r.reference = corner_model.corner_rate(n);
    r.rel_error = 0.0;
    r.strategy = "predicted-rate";
    r.flags = "computed=exponential;reference=algebraic";
    table.rows.push_back(std::move(r));
  }
  return table;
}

ResultTable run_solve(const ExperimentConfig& cfg) {
  SolvedProblem sp = solve_from_config(cfg);
  ResultTable table;
  table.experiment_id = cfg.get("experiment.id", "solve");
  for (std::size_t p = 0; p < sp.system.samples.size(); ++p) {
    const PieceSamples& s = sp.system.samples[p];
    for (std::size_t j = 0; j < s.g.size(); ++j) {
      ResultRow r;
      r.experiment = table.experiment_id;
      r.n = sp.problem.n;
      r.target = s.g[j];
      r.computed = sp.density.per_piece[p].samples[j];
      r.reference = 0.0;
      r.rel_error = 0.0;
      r.strategy = "density";
      r.flags = "piece=" + std::to_string(p) + ";node=" + std::to_string(j);
      table.rows.push_back(std::move(r));
    }
  }
  return table;
}

ResultTable run_eval(const ExperimentConfig& cfg) {
  SolvedProblem sp = solve_from_config(cfg);
  const auto exact = exact_solution_from_config(cfg);
  std::vector<Complex> targets;
  {
    // points = x,y; x,y; ...
    std::stringstream ss(cfg.get("targets.points", ""));
    std::string item;
    while (std::getline(ss, item, ';')) {
      item = trim(item);
      if (item.empty()) continue;
      double x, y;
      if (std::sscanf(item.c_str(), "%lf , %lf", &x, &y) != 2) {
        throw std::invalid_argument("bad point: " + item);
      }
      targets.emplace_back(x, y);
    }
  }
  if (targets.empty()) throw std::invalid_argument("eval needs targets.points");
  ResultTable table;
  table.experiment_id = cfg.get("experiment.id", "eval");
  append_eval_rows(table, sp, targets, exact, field_options_from_config(cfg), "",
                   cfg.get_flag("output.timings", false));
  return table;
}

}  // namespace swapquad
