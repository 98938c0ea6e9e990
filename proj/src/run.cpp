#include "magspec/run.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "magspec/boundary_ops.hpp"
#include "magspec/capacity.hpp"
#include "magspec/cluster.hpp"
#include "magspec/errors.hpp"
#include "magspec/green_kernel.hpp"
#include "magspec/toeplitz.hpp"

namespace magspec {

using nlohmann::json;

namespace {

json base_record(const std::string& sub, const RunConfig& c) {
  return json{{"schema", kSchema}, {"subcommand", sub}, {"config", to_json(c)}};
}

json strings(const std::vector<BigReal>& v, int digits) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.to_string(digits));
  return a;
}

// Window clipped to the available length; nullopt when fewer than five indices remain.
std::optional<RateWindow> clip(RateWindow w, std::size_t size, int first_index = 1) {
  const int last = first_index + static_cast<int>(size) - 1;
  RateWindow c{std::max(w.j_min, first_index), std::min(w.j_max, last)};
  if (c.j_max - c.j_min < 4) return std::nullopt;
  return c;
}

json rate_json(const RateEstimate& e) {
  return json{{"limit", e.limit},
              {"error_estimate", e.error_estimate},
              {"slope", e.slope},
              {"inverse", e.inverse},
              {"residual", e.residual},
              {"window", {e.window.j_min, e.window.j_max}},
              {"model", to_string(e.model)}};
}

RunResult capacity(const RunConfig& c) {
  RunResult r{base_record("capacity", c), std::nullopt, c.format};
  std::string method = c.method == "auto" ? "" : c.method;
  if (!method.empty() && method != "analytic" && method != "fekete")
    throw ConfigError({"method: capacity accepts auto, analytic or fekete"});
  const bool closed = c.segment || c.shape.kind != ShapeKind::star;
  if (method.empty()) method = closed ? "analytic" : "fekete";
  if (method == "analytic" && !closed) throw ConfigError({"method: no closed form for shape star, use fekete"});
  CapacityResult res;
  if (method == "analytic") {
    if (c.segment) {
      CapacityShape s;
      s.kind = CapacityShape::Kind::segment;
      s.length = c.length;
      res = capacity_analytic(s);
    } else {
      res = capacity_analytic(c.shape);
    }
  } else {
    res = c.segment ? capacity_fekete_segment(c.length, c.points) : capacity_fekete(build_curve(c.shape), c.points);
  }
  r.record["capacity"] = res.value;
  r.record["method"] = to_string(res.method);
  r.record["diagnostics"] = {{"point_count", res.point_count},
                             {"error_estimate", res.error_estimate},
                             {"raw_diameter", res.raw_diameter},
                             {"sweeps", res.sweeps},
                             {"gradient_norm", res.gradient_norm}};
  return r;
}

template <class Real>
json complex_json(const Complex<Real>& z, int digits) {
  if constexpr (std::is_same_v<Real, double>)
    return json{{"re", format_double(z.re, digits)}, {"im", format_double(z.im, digits)}};
  else
    return json{{"re", z.re.to_string(digits)}, {"im", z.im.to_string(digits)}};
}

RunResult kernel(const RunConfig& c) {
  RunResult r{base_record("kernel", c), std::nullopt, c.format};
  const double dx = c.x.x - c.y.x, dy = c.x.y - c.y.y;
  const double sep = std::hypot(dx, dy);
  if (sep < kMinSeparation) throw ConfigError({"x, y: separation below 1e-6"});
  // double unless a precision is requested explicitly
  const bool wide = c.bits != 0 || std::getenv("MAGSPEC_BITS") != nullptr;
  json diag{{"separation", sep}, {"rho", c.b * sep * sep / 2.0}};
  double mag = 0.0;
  if (wide) {
    const Precision p{c.effective_bits()};
    Vec2<BigReal> x{BigReal(c.x.x, p), BigReal(c.x.y, p)}, y{BigReal(c.y.x, p), BigReal(c.y.y, p)};
    auto v = g0_integral<BigReal>(c.b, x, y);
    r.record["value"] = complex_json(v.value, c.digits);
    mag = abs(v.value).to_double();
    diag["error"] = v.error;
    diag["node_count"] = v.node_count;
    diag["bits"] = p.bits;
  } else {
    auto v = g0_integral<double>(c.b, Vec2<double>{c.x.x, c.x.y}, Vec2<double>{c.y.x, c.y.y});
    r.record["value"] = complex_json(v.value, c.digits);
    mag = abs(v.value);
    diag["error"] = v.error;
    diag["node_count"] = v.node_count;
    diag["bits"] = 53;
    if (c.series_terms > 0) {
      auto s = g0_series<double>(c.b, Vec2<double>{c.x.x, c.x.y}, Vec2<double>{c.y.x, c.y.y}, c.series_terms, 2e-9);
      r.record["series"] = complex_json(s.value, c.digits);
      diag["series_difference"] = abs(s.value - v.value);
      diag["series_error"] = s.error;
    }
  }
  r.record["abs"] = mag;
  r.record["diagnostics"] = diag;
  return r;
}

RunResult boundary_ops(const RunConfig& c) {
  RunResult r{base_record("boundary-ops", c), std::nullopt, c.format};
  if (c.segment) throw ConfigError({"shape.kind: boundary-ops needs a closed curve"});
  const Curve curve = build_curve(c.shape);
  const auto grid = build_grid<double>(curve, c.grid_size);
  auto [a, b] = assemble_AB(grid, c.b);
  auto ev = eigenvalues_A(a, grid);
  const RobinThreshold c0 = robin_threshold(b, grid);
  auto gv = robin_values(c.gamma, grid);
  double gmin = std::fabs(gv[0]);
  for (double g : gv) gmin = std::min(gmin, std::fabs(g));
  const bool hypothesis = gmin > c.safety * c0.c0;
  json diag{{"asymmetry_A", asymmetry(a, grid)},
            {"eigenvalue_max_A", ev.front()},
            {"eigenvalue_min_A", ev.back()},
            {"decay_exponent_A", decay_exponent(ev, 4, c.grid_size / 4)},
            {"kernel_error", std::max(a.kernel_error, b.kernel_error)},
            {"norm_B", c0.norm_b},
            {"c0", c0.c0},
            {"gamma_min", gmin},
            {"hypothesis_satisfied", hypothesis}};
  if (hypothesis) {
    TOperator t = build_T(a, b, grid, c.gamma, c0, c.safety);
    diag["asymmetry_T"] = asymmetry(t.t, grid);
    diag["rcond_A"] = t.rcond_a;
    diag["rcond_T_plus"] = t.rcond_plus;
    diag["rcond_T_minus"] = t.rcond_minus;
  }
  if (c.check_jump) {
    BoundaryDensity h = [](double t) { return std::complex<double>(std::cos(2.0 * t) + 0.3, 0.0); };
    JumpReport j = check_jump_single_layer(curve, c.grid_size, c.b, h, 10.0 / c.grid_size);
    r.record["jump"] = {{"epsilon", j.epsilon}, {"jump_error", j.jump_error}, {"continuity", j.continuity}};
  }
  if (c.check_green) {
    std::vector<std::complex<double>> h(grid.n);
    for (int k = 0; k < grid.n; ++k) h[k] = std::cos(2.0 * grid.theta[k]) + 0.3;
    GreenReport g = check_green_identity(a, b, grid, c.gamma, h);
    r.record["green"] = {{"exterior", g.exterior},
                         {"interior", g.interior},
                         {"literal_exterior", g.literal_exterior},
                         {"literal_interior", g.literal_interior}};
  }
  r.record["diagnostics"] = diag;
  return r;
}

RunResult toeplitz(const RunConfig& c) {
  RunResult r{base_record("toeplitz", c), std::nullopt, c.format};
  if (c.segment) throw ConfigError({"shape.kind: toeplitz needs a domain with interior"});
  const Precision p{c.effective_bits()};
  std::string method = c.method;
  if (method == "auto") method = c.shape.kind == ShapeKind::disk ? "closed_form" : "galerkin";
  if (method == "closed_form" && c.n != 1) method = "radial";
  ToeplitzSpectrum s;
  if (method == "closed_form" || method == "radial") {
    if (c.shape.kind != ShapeKind::disk) throw ConfigError({"method: " + method + " needs a disk"});
    s = disk_spectrum(c.n, c.b, c.shape.radius, c.count, p,
                      method == "radial" ? DiskChannel::radial : DiskChannel::closed_form);
  } else if (method == "galerkin") {
    GalerkinOptions o;
    o.stable_count = std::min(c.count, c.basis_size);
    s = galerkin_spectrum(c.n, c.b, build_curve(c.shape), c.basis_size, p, o);
  } else {
    throw ConfigError({"method: toeplitz accepts auto, closed_form, radial or galerkin"});
  }
  auto rho = rho_sequence(s.eigenvalues);
  CsvTable t{{"j", "s_j", "rho_j"}, {}};
  for (std::size_t j = 0; j < s.eigenvalues.size(); ++j)
    t.rows.push_back({std::to_string(j + 1), format_fixed(s.eigenvalues[j], c.digits), format_fixed(rho[j], c.digits)});
  r.table = std::move(t);
  r.record["method"] = method;
  r.record["s"] = strings(s.eigenvalues, c.digits);
  r.record["rho"] = strings(rho, c.digits);
  if (auto w = clip(c.window, rho.size())) r.record["rate"] = rate_json(extrapolate(rho, *w, 1, c.model));
  r.record["diagnostics"] = {{"truncation", s.truncation},
                             {"refinement_error", s.error},
                             {"bits", p.bits},
                             {"required_bits", required_bits(s.eigenvalues)}};
  return r;
}

json spectrum_json(const ClusterSpectrum& s, const std::vector<BigReal>& rho, std::size_t count, int digits) {
  std::vector<BigReal> t(s.t.begin(), s.t.begin() + count), ell(s.ell.begin(), s.ell.begin() + count),
      rr(rho.begin(), rho.begin() + count);
  return json{{"t", strings(t, digits)}, {"ell", strings(ell, digits)}, {"rho", strings(rr, digits)}};
}

RunResult cluster(const RunConfig& c) {
  RunResult r{base_record("cluster", c), std::nullopt, c.format};
  if (c.segment) throw ConfigError({"shape.kind: cluster needs a closed curve"});
  ClusterProblem p(build_curve(c.shape));
  p.b = c.b;
  p.n = c.n;
  p.gamma = c.gamma;
  p.basis_size = c.basis_size;
  p.grid_size = c.grid_size;
  p.precision = Precision{c.effective_bits()};
  p.safety = c.safety;

  std::vector<double> gammas = c.gammas;
  std::vector<ClusterSpectrum> spectra;
  if (gammas.empty()) {
    spectra.push_back(cluster_spectrum(p));
    gammas.push_back(c.gamma.constant);
  } else {
    // the sweep shares assembly; its rates use the clipped window once sizes are known
    GammaSweep g = gamma_sweep(p, gammas, RateWindow{1, 5});
    spectra = std::move(g.spectra);
    r.record["sweep"] = {{"direction", g.direction}, {"consistent", g.consistent}};
  }
  CsvTable t{!c.gammas.empty() ? std::vector<std::string>{"gamma", "j", "t_j", "ell_j", "rho_j"}
                                                    : std::vector<std::string>{"j", "t_j", "ell_j", "rho_j"},
             {}};
  json runs = json::array();
  std::vector<double> limits;
  int clamped = 0;
  for (std::size_t k = 0; k < spectra.size(); ++k) {
    const ClusterSpectrum& s = spectra[k];
    auto rho = rho_sequence(s.t);
    const std::size_t count = std::min<std::size_t>(s.t.size(), static_cast<std::size_t>(c.count));
    for (std::size_t j = 0; j < count; ++j) {
      std::vector<std::string> row{std::to_string(j + 1), format_fixed(s.t[j], c.digits),
                                   format_fixed(s.ell[j], c.digits), format_fixed(rho[j], c.digits)};
      if (t.header.size() == 5) row.insert(row.begin(), format_double(gammas[k], c.digits));
      t.rows.push_back(std::move(row));
    }
    json run = spectrum_json(s, rho, count, c.digits);
    run["gamma"] = gammas[k];
    if (auto w = clip(c.window, rho.size())) {
      RateEstimate e = extrapolate(rho, *w, 1, c.model);
      run["rate"] = rate_json(e);
      limits.push_back(e.limit);
    }
    run["diagnostics"] = {{"clamped", s.clamped},
                          {"clamp_tolerance", s.clamp_tolerance},
                          {"retained", s.t.size()},
                          {"asymmetry", s.asymmetry},
                          {"offdiagonal_ratio", s.offdiagonal_ratio},
                          {"sweeps", s.sweeps}};
    clamped += s.clamped;
    runs.push_back(std::move(run));
  }
  r.table = std::move(t);
  r.record["runs"] = std::move(runs);
  if (limits.size() > 1) {
    double lo = limits[0], hi = limits[0], sum = 0.0;
    for (double l : limits) {
      lo = std::min(lo, l);
      hi = std::max(hi, l);
      sum += l;
    }
    r.record["sweep"]["rate_spread"] = (hi - lo) / (sum / limits.size());
  }
  r.record["diagnostics"] = {{"landau_level", spectra[0].landau_level},
                             {"c0", spectra[0].c0},
                             {"bits", p.precision.bits},
                             {"clamped", clamped}};
  return r;
}

RunResult rate(const RunConfig& c) {
  RunResult r{base_record("rate", c), std::nullopt, c.format};
  if (c.input.empty()) throw ConfigError({"input: rate needs a CSV file"});
  std::ifstream in(c.input, std::ios::binary);
  if (!in) throw ConfigError({"input: cannot open '" + c.input + "'"});
  std::stringstream buf;
  buf << in.rdbuf();
  CsvTable t = parse_csv(buf.str());
  auto index = [&t](const std::string& name) -> int {
    for (std::size_t i = 0; i < t.header.size(); ++i)
      if (t.header[i] == name) return static_cast<int>(i);
    return -1;
  };
  std::string column = c.column;
  if (column.empty())
    for (const char* name : {"s_j", "t_j", "rho_j"})
      if (index(name) >= 0) {
        column = name;
        break;
      }
  const int col = index(column), jcol = index("j");
  if (col < 0) throw ConfigError({"column: '" + column + "' not found in " + c.input});
  if (index("gamma") >= 0) throw ConfigError({"input: sweep tables hold several runs, split by gamma first"});
  if (t.rows.empty()) throw ConfigError({"input: no data rows"});
  const Precision p{c.effective_bits()};
  std::vector<BigReal> v;
  for (const auto& row : t.rows) v.emplace_back(row[col], p);
  int first = 1;
  if (jcol >= 0) {
    first = std::stoi(t.rows[0][jcol]);
    for (std::size_t i = 0; i < t.rows.size(); ++i)
      if (std::stoi(t.rows[i][jcol]) != first + static_cast<int>(i))
        throw ConfigError({"input: j column is not consecutive"});
  }
  std::vector<BigReal> rho = column == "rho_j" ? v : rho_sequence(v, first);
  RateEstimate e = extrapolate(rho, c.window, first, c.model);
  json out = rate_json(e);
  for (auto it = out.begin(); it != out.end(); ++it) r.record[it.key()] = it.value();
  r.record["column"] = column;
  r.record["diagnostics"] = {{"rows", t.rows.size()}, {"first_index", first}, {"bits", p.bits}};
  return r;
}

void flatten(const json& j, const std::string& prefix, CsvTable& t, int digits) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (key == "config") continue;
    if (it->is_object()) {
      flatten(*it, key, t, digits);
    } else if (it->is_number_float()) {
      t.rows.push_back({key, format_double(it->get<double>(), digits)});
    } else if (it->is_string()) {
      t.rows.push_back({key, it->get<std::string>()});
    } else if (!it->is_array()) {
      t.rows.push_back({key, it->dump()});
    }
  }
}

}  // namespace

std::string RunResult::render() const {
  if (format == OutputFormat::json) return record.dump(2) + "\n";
  if (table) return table->str();
  CsvTable t{{"key", "value"}, {}};
  flatten(record, "", t, record["config"]["digits"].get<int>());
  return t.str();
}

RunResult run(const std::string& subcommand, const RunConfig& config) {
  auto errors = validate(config);
  if (!errors.empty()) throw ConfigError(errors);
  if (subcommand == "capacity") return capacity(config);
  if (subcommand == "kernel") return kernel(config);
  if (subcommand == "boundary-ops") return boundary_ops(config);
  if (subcommand == "toeplitz") return toeplitz(config);
  if (subcommand == "cluster") return cluster(config);
  if (subcommand == "rate") return rate(config);
  throw ConfigError({"subcommand: unknown '" + subcommand + "'"});
}

json error_record(const std::string& subcommand, const std::exception& e) {
  json err{{"message", e.what()}};
  if (auto* c = dynamic_cast<const ConfigError*>(&e)) {
    err["type"] = "config";
    err["violations"] = c->violations();
  } else if (dynamic_cast<const HypothesisError*>(&e)) {
    err["type"] = "hypothesis";
  } else if (auto* v = dynamic_cast<const ConvergenceError*>(&e)) {
    err["type"] = "convergence";
    err["residual"] = v->residual();
  } else if (auto* pe = dynamic_cast<const PrecisionError*>(&e)) {
    err["type"] = "precision";
    err["required_bits"] = pe->required_bits();
  } else if (dynamic_cast<const DomainError*>(&e)) {
    err["type"] = "domain";
  } else if (dynamic_cast<const NumericError*>(&e)) {
    err["type"] = "numeric";
  } else {
    err["type"] = "internal";
  }
  return json{{"schema", kSchema}, {"subcommand", subcommand}, {"error", err}};
}

int exit_status(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const HypothesisError*>(&e)) return 3;
  if (dynamic_cast<const ConvergenceError*>(&e) || dynamic_cast<const PrecisionError*>(&e)) return 4;
  return 1;
}

}  // namespace magspec
