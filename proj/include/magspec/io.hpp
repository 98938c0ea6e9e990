#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "magspec/geometry.hpp"
#include "magspec/numerics/bigreal.hpp"
#include "magspec/rates.hpp"

namespace magspec {

inline constexpr const char* kSchema = "magspec.run/1";

enum class OutputFormat { json, csv };

struct RunConfig {
  ShapeDescriptor shape;
  double length = 4.0;           // capacity of a segment (shape "segment")
  bool segment = false;
  double b = 1.0;
  int n = 1;
  RobinFunction gamma = RobinFunction::uniform(5.0);
  std::vector<double> gammas;    // cluster sweep; empty runs the single gamma
  int grid_size = 256;           // N
  int basis_size = 40;           // M
  int count = 60;                // J
  unsigned bits = 0;             // 0: MAGSPEC_BITS, else 512 when J > 30, else 256
  double safety = 1.5;           // min |gamma| must exceed safety * c0
  std::string method = "auto";   // capacity: analytic | fekete; toeplitz: closed_form | radial | galerkin
  int points = 200;              // Fekete points
  Point x{1.0, 0.0};             // kernel
  Point y{0.0, 0.0};
  int series_terms = 0;          // kernel cross-check against the level series when > 0
  bool check_jump = false;       // boundary-ops
  bool check_green = false;
  std::string input;             // rate: CSV produced by toeplitz or cluster
  std::string column;            // rate: column to read; empty picks s_j, t_j or rho_j
  RateWindow window{20, 60};
  RateModel model = RateModel::linear;
  OutputFormat format = OutputFormat::json;
  int digits = 17;

  // Bits after resolving the default.
  unsigned effective_bits() const;
};

// Every field of RunConfig; shape and gamma are nested objects.
nlohmann::json to_json(const RunConfig& c);
// Missing fields keep their defaults. ConfigError lists every violated or unknown field.
RunConfig config_from_json(const nlohmann::json& j);
std::vector<std::string> validate(const RunConfig& c);

// Scientific notation with `digits` significant digits, locale independent.
std::string format_double(double v, int digits);

// Fixed notation (no exponent) keeping `digits` significant digits.
std::string format_fixed(const BigReal& v, int digits);

// Header row, comma separated, LF line ends.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string str() const;
};
CsvTable parse_csv(const std::string& text);

}  // namespace magspec
