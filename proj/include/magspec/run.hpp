#pragma once

#include <exception>
#include <optional>
#include <string>

#include "magspec/io.hpp"

namespace magspec {

// Result record: schema, subcommand, config echo, produced values at the top level and a
// diagnostics object. Subcommands with per-index output also carry a table.
struct RunResult {
  nlohmann::json record;
  std::optional<CsvTable> table;
  OutputFormat format = OutputFormat::json;

  // CSV: the table, or a key,value listing of the scalar fields. JSON: the record.
  std::string render() const;
};

// capacity | kernel | boundary-ops | toeplitz | cluster | rate
RunResult run(const std::string& subcommand, const RunConfig& config);

// Machine-readable failure record and its exit status:
// 2 configuration, 3 violated hypothesis, 4 convergence or precision, 1 otherwise.
nlohmann::json error_record(const std::string& subcommand, const std::exception& e);
int exit_status(const std::exception& e);

}  // namespace magspec
