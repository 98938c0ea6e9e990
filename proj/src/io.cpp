#include "magspec/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "magspec/errors.hpp"

namespace magspec {

using nlohmann::json;

unsigned RunConfig::effective_bits() const {
  if (bits != 0) return bits;
  if (const char* env = std::getenv("MAGSPEC_BITS"); env && *env) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < static_cast<long>(kMinBits) || v > 65536)
      throw ConfigError({std::string("MAGSPEC_BITS: expected an integer in [64, 65536], got '") + env + "'"});
    return static_cast<unsigned>(v);
  }
  return count > 30 ? 512u : 256u;
}

json to_json(const RunConfig& c) {
  const ShapeDescriptor& s = c.shape;
  json shape = {{"kind", c.segment ? std::string("segment") : to_string(s.kind)},
                {"center", {s.center.x, s.center.y}},
                {"radius", s.radius},
                {"semi_a", s.semi_a},
                {"semi_b", s.semi_b},
                {"epsilon", s.epsilon},
                {"lobes", s.lobes},
                {"rotation", s.rotation},
                {"length", c.length}};
  return json{{"shape", shape},
              {"b", c.b},
              {"n", c.n},
              {"gamma", {{"constant", c.gamma.constant}, {"cos", c.gamma.cos_coeffs}, {"sin", c.gamma.sin_coeffs}}},
              {"gammas", c.gammas},
              {"N", c.grid_size},
              {"M", c.basis_size},
              {"J", c.count},
              {"bits", c.bits},
              {"safety", c.safety},
              {"method", c.method},
              {"points", c.points},
              {"x", {c.x.x, c.x.y}},
              {"y", {c.y.x, c.y.y}},
              {"series_terms", c.series_terms},
              {"check_jump", c.check_jump},
              {"check_green", c.check_green},
              {"input", c.input},
              {"column", c.column},
              {"window", {c.window.j_min, c.window.j_max}},
              {"model", to_string(c.model)},
              {"format", c.format == OutputFormat::csv ? "csv" : "json"},
              {"digits", c.digits}};
}

namespace {

class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  template <class T>
  void get(const json& obj, const std::string& prefix, const char* key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) throw std::invalid_argument("expected a number");
        out = it->template get<double>();
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!it->is_number_integer()) throw std::invalid_argument("expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (it->template get<long long>() < 0) throw std::invalid_argument("expected a non-negative integer");
        }
        out = it->template get<T>();
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw std::invalid_argument("expected a boolean");
        out = it->template get<bool>();
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw std::invalid_argument("expected a string");
        out = it->template get<std::string>();
      } else if constexpr (std::is_same_v<T, std::vector<double>>) {
        if (!it->is_array()) throw std::invalid_argument("expected an array of numbers");
        std::vector<double> v;
        for (const auto& e : *it) {
          if (!e.is_number()) throw std::invalid_argument("expected an array of numbers");
          v.push_back(e.template get<double>());
        }
        out = std::move(v);
      } else if constexpr (std::is_same_v<T, Point>) {
        if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
          throw std::invalid_argument("expected [x, y]");
        out = Point{(*it)[0].template get<double>(), (*it)[1].template get<double>()};
      }
    } catch (const std::exception& e) {
      errors_.push_back(prefix + key + ": " + e.what());
    }
  }

  void unknown(const json& obj, const std::string& prefix, std::initializer_list<const char*> known) {
    std::set<std::string> k(known.begin(), known.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!k.count(it.key())) errors_.push_back(prefix + it.key() + ": unknown field");
  }

  bool object(const json& obj, const std::string& name) {
    if (obj.is_object()) return true;
    errors_.push_back(name + ": expected an object");
    return false;
  }

 private:
  std::vector<std::string>& errors_;
};

void check(std::vector<std::string>& e, bool ok, const std::string& msg) {
  if (!ok) e.push_back(msg);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

RunConfig config_from_json(const json& j) {
  std::vector<std::string> errors;
  RunConfig c;
  Reader r(errors);
  if (!r.object(j, "config")) throw ConfigError(errors);
  r.unknown(j, "",
            {"shape", "b", "n", "gamma", "gammas", "N", "M", "J", "bits", "safety", "method", "points", "x", "y",
             "series_terms", "check_jump", "check_green", "input", "column", "window", "model", "format", "digits"});

  if (auto it = j.find("shape"); it != j.end() && r.object(*it, "shape")) {
    const json& s = *it;
    r.unknown(s, "shape.", {"kind", "center", "radius", "semi_a", "semi_b", "epsilon", "lobes", "rotation", "length"});
    std::string kind;
    r.get(s, "shape.", "kind", kind);
    if (!kind.empty()) {
      c.segment = kind == "segment";
      if (!c.segment) {
        try {
          c.shape.kind = shape_kind_from_string(kind);
        } catch (const DomainError&) {
          errors.push_back("shape.kind: expected disk, ellipse, star or segment, got '" + kind + "'");
        }
      }
    }
    r.get(s, "shape.", "center", c.shape.center);
    r.get(s, "shape.", "radius", c.shape.radius);
    r.get(s, "shape.", "semi_a", c.shape.semi_a);
    r.get(s, "shape.", "semi_b", c.shape.semi_b);
    r.get(s, "shape.", "epsilon", c.shape.epsilon);
    r.get(s, "shape.", "lobes", c.shape.lobes);
    r.get(s, "shape.", "rotation", c.shape.rotation);
    r.get(s, "shape.", "length", c.length);
  }
  r.get(j, "", "b", c.b);
  r.get(j, "", "n", c.n);
  if (auto it = j.find("gamma"); it != j.end()) {
    if (it->is_number()) {
      c.gamma = RobinFunction::uniform(it->get<double>());
    } else if (r.object(*it, "gamma")) {
      r.unknown(*it, "gamma.", {"constant", "cos", "sin"});
      r.get(*it, "gamma.", "constant", c.gamma.constant);
      r.get(*it, "gamma.", "cos", c.gamma.cos_coeffs);
      r.get(*it, "gamma.", "sin", c.gamma.sin_coeffs);
    }
  }
  r.get(j, "", "gammas", c.gammas);
  r.get(j, "", "N", c.grid_size);
  r.get(j, "", "M", c.basis_size);
  r.get(j, "", "J", c.count);
  r.get(j, "", "bits", c.bits);
  r.get(j, "", "safety", c.safety);
  r.get(j, "", "method", c.method);
  r.get(j, "", "points", c.points);
  r.get(j, "", "x", c.x);
  r.get(j, "", "y", c.y);
  r.get(j, "", "series_terms", c.series_terms);
  r.get(j, "", "check_jump", c.check_jump);
  r.get(j, "", "check_green", c.check_green);
  r.get(j, "", "input", c.input);
  r.get(j, "", "column", c.column);
  if (auto it = j.find("window"); it != j.end()) {
    if (it->is_array() && it->size() == 2 && (*it)[0].is_number_integer() && (*it)[1].is_number_integer())
      c.window = RateWindow{(*it)[0].get<int>(), (*it)[1].get<int>()};
    else
      errors.push_back("window: expected [j_min, j_max]");
  }
  std::string model, format;
  r.get(j, "", "model", model);
  if (model == "log")
    c.model = RateModel::log;
  else if (!model.empty() && model != "linear")
    errors.push_back("model: expected linear or log, got '" + model + "'");
  r.get(j, "", "format", format);
  if (format == "csv")
    c.format = OutputFormat::csv;
  else if (!format.empty() && format != "json")
    errors.push_back("format: expected csv or json, got '" + format + "'");
  r.get(j, "", "digits", c.digits);

  for (auto& v : validate(c)) errors.push_back(std::move(v));
  if (!errors.empty()) throw ConfigError(errors);
  return c;
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> e;
  const ShapeDescriptor& s = c.shape;
  if (c.segment) {
    check(e, finite(c.length) && c.length > 0.0, "shape.length: must be positive");
  } else {
    try {
      build_curve(s);
    } catch (const DomainError& ex) {
      e.push_back(std::string("shape: ") + ex.what());
    }
  }
  check(e, finite(c.b) && c.b > 0.0 && c.b <= 1e3, "b: must lie in (0, 1000]");
  check(e, c.n >= 1 && c.n <= 50, "n: must lie in [1, 50]");
  check(e, finite(c.gamma.constant), "gamma.constant: must be finite");
  for (double v : c.gamma.cos_coeffs) check(e, finite(v), "gamma.cos: entries must be finite");
  for (double v : c.gamma.sin_coeffs) check(e, finite(v), "gamma.sin: entries must be finite");
  for (double v : c.gammas) check(e, finite(v), "gammas: entries must be finite");
  check(e, c.grid_size >= 16 && c.grid_size <= 8192 && c.grid_size % 2 == 0, "N: must be even and lie in [16, 8192]");
  check(e, c.basis_size >= 1 && c.basis_size <= 400, "M: must lie in [1, 400]");
  check(e, c.count >= 1 && c.count <= 2000, "J: must lie in [1, 2000]");
  check(e, c.bits == 0 || (c.bits >= kMinBits && c.bits <= 65536), "bits: must be 0 (default) or lie in [64, 65536]");
  check(e, finite(c.safety) && c.safety >= 1.0, "safety: must be at least 1");
  static const std::set<std::string> methods{"auto", "analytic", "fekete", "closed_form", "radial", "galerkin"};
  check(e, methods.count(c.method) == 1, "method: expected auto, analytic, fekete, closed_form, radial or galerkin");
  check(e, c.points >= 3 && c.points <= 5000, "points: must lie in [3, 5000]");
  check(e, finite(c.x.x) && finite(c.x.y) && finite(c.y.x) && finite(c.y.y), "x, y: must be finite");
  check(e, c.series_terms >= 0 && c.series_terms <= 1000000, "series_terms: must lie in [0, 1000000]");
  check(e, c.window.j_min >= 1 && c.window.j_max >= c.window.j_min + 4,
        "window: need 1 <= j_min and at least 5 indices");
  check(e, c.digits >= 1 && c.digits <= 200, "digits: must lie in [1, 200]");
  return e;
}

std::string format_double(double v, int digits) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", std::max(digits - 1, 0), v);
  return buf;
}

std::string format_fixed(const BigReal& v, int digits) {
  if (v.is_zero()) return v.to_fixed(std::max(digits - 1, 0));
  std::string sci = v.to_string(digits);
  long e10 = std::strtol(sci.c_str() + sci.find_last_of("eE") + 1, nullptr, 10);
  return v.to_fixed(static_cast<int>(std::max<long>(digits - 1 - e10, 0)));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size())
        throw DomainError("parse_csv: row " + std::to_string(t.rows.size() + 1) + " has " +
                          std::to_string(cells.size()) + " cells, header has " + std::to_string(t.header.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw DomainError("parse_csv: empty input");
  return t;
}

}  // namespace magspec
