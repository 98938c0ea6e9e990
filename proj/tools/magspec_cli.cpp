#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "magspec/errors.hpp"
#include "magspec/run.hpp"
#include "magspec/verify.hpp"

using nlohmann::json;
using namespace magspec;

namespace {

enum class Kind { number, integer, text, flag, numbers, point, window };

struct Flag {
  Flag(std::string n, std::vector<std::string> p, Kind k) : name(std::move(n)), path(std::move(p)), kind(k) {}

  std::string name;               // CLI11 option spec
  std::vector<std::string> path;  // location in the config document
  Kind kind;
  std::vector<std::string> values;
  bool set = false;
  CLI::Option* option = nullptr;
};

std::vector<Flag> config_flags() {
  return {
      {"--shape", {"shape", "kind"}, Kind::text},
      {"--radius", {"shape", "radius"}, Kind::number},
      {"--semi-a", {"shape", "semi_a"}, Kind::number},
      {"--semi-b", {"shape", "semi_b"}, Kind::number},
      {"--epsilon", {"shape", "epsilon"}, Kind::number},
      {"--lobes", {"shape", "lobes"}, Kind::integer},
      {"--rotation", {"shape", "rotation"}, Kind::number},
      {"--center", {"shape", "center"}, Kind::point},
      {"--length", {"shape", "length"}, Kind::number},
      {"--b", {"b"}, Kind::number},
      {"--n", {"n"}, Kind::integer},
      {"--gamma", {"gamma", "constant"}, Kind::number},
      {"--gamma-cos", {"gamma", "cos"}, Kind::numbers},
      {"--gamma-sin", {"gamma", "sin"}, Kind::numbers},
      {"--gammas", {"gammas"}, Kind::numbers},
      {"-N,--grid-size", {"N"}, Kind::integer},
      {"-M,--basis-size", {"M"}, Kind::integer},
      {"-J,--count", {"J"}, Kind::integer},
      {"--bits", {"bits"}, Kind::integer},
      {"--safety", {"safety"}, Kind::number},
      {"--method", {"method"}, Kind::text},
      {"--points", {"points"}, Kind::integer},
      {"--x", {"x"}, Kind::point},
      {"--y", {"y"}, Kind::point},
      {"--series-terms", {"series_terms"}, Kind::integer},
      {"--check-jump", {"check_jump"}, Kind::flag},
      {"--check-green", {"check_green"}, Kind::flag},
      {"--input", {"input"}, Kind::text},
      {"--column", {"column"}, Kind::text},
      {"--window", {"window"}, Kind::window},
      {"--model", {"model"}, Kind::text},
      {"--format", {"format"}, Kind::text},
      {"--digits", {"digits"}, Kind::integer},
  };
}

json number(const std::string& flag, const std::string& text, bool integer, std::vector<std::string>& errors) {
  try {
    std::size_t used = 0;
    if (integer) {
      long long v = std::stoll(text, &used);
      if (used == text.size()) return v;
    } else {
      double v = std::stod(text, &used);
      if (used == text.size()) return v;
    }
  } catch (const std::exception&) {
  }
  errors.push_back(flag + ": expected " + (integer ? "an integer" : "a number") + ", got '" + text + "'");
  return nullptr;
}

// Flags that were given, written over the config document.
void overlay(json& doc, const std::vector<Flag>& flags, std::vector<std::string>& errors) {
  for (const auto& f : flags) {
    if (!f.set) continue;
    const std::string name = f.option->get_name();
    json v;
    switch (f.kind) {
      case Kind::number:
      case Kind::integer:
        v = number(name, f.values.at(0), f.kind == Kind::integer, errors);
        break;
      case Kind::text:
        v = f.values.at(0);
        break;
      case Kind::flag:
        v = true;
        break;
      case Kind::numbers:
        v = json::array();
        for (const auto& s : f.values)
          for (std::stringstream ss(s); ss.good();) {
            std::string item;
            std::getline(ss, item, ',');
            if (!item.empty()) v.push_back(number(name, item, false, errors));
          }
        break;
      case Kind::point: {
        std::vector<std::string> parts;
        for (const auto& s : f.values)
          for (std::stringstream ss(s); ss.good();) {
            std::string item;
            std::getline(ss, item, ',');
            if (!item.empty()) parts.push_back(item);
          }
        if (parts.size() != 2) {
          errors.push_back(name + ": expected x,y");
          continue;
        }
        v = {number(name, parts[0], false, errors), number(name, parts[1], false, errors)};
        break;
      }
      case Kind::window: {
        const std::string& s = f.values.at(0);
        auto colon = s.find(':');
        if (colon == std::string::npos) {
          errors.push_back(name + ": expected j_min:j_max, got '" + s + "'");
          continue;
        }
        v = {number(name, s.substr(0, colon), true, errors), number(name, s.substr(colon + 1), true, errors)};
        break;
      }
    }
    bool bad = v.is_null();
    if (v.is_array())
      for (const auto& e : v) bad = bad || e.is_null();
    if (bad) continue;
    json* target = &doc;
    for (std::size_t i = 0; i + 1 < f.path.size(); ++i) {
      if (!target->contains(f.path[i]) || !(*target)[f.path[i]].is_object()) (*target)[f.path[i]] = json::object();
      target = &(*target)[f.path[i]];
    }
    (*target)[f.path.back()] = v;
  }
}

json read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"config: cannot open '" + path + "'"});
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config: ") + e.what()});
  }
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw ConfigError({"output: cannot open '" + output + "'"});
  out << text;
}

int fail(const std::string& sub, const std::exception& e) {
  std::cout << error_record(sub, e).dump(2) << "\n";
  std::cerr << "magspec " << sub << ": " << e.what() << "\n";
  return exit_status(e);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral computations for magnetic Robin problems outside an obstacle"};
  app.require_subcommand(1);

  const std::vector<std::string> names{"capacity", "kernel", "boundary-ops", "toeplitz", "cluster", "rate"};
  std::map<std::string, std::vector<Flag>> flags;
  std::string config_path, output;
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config document; flags override its fields");
    sub->add_option("--output", output, "write the result here instead of stdout");
    auto& list = flags[name] = config_flags();
    for (auto& f : list) {
      if (f.kind == Kind::flag) {
        f.option = sub->add_flag(f.name);
      } else {
        f.option = sub->add_option(f.name, f.values);
        if (f.kind == Kind::numbers || f.kind == Kind::point)
          f.option->expected(1, 64);
        else
          f.option->expected(1);
      }
    }
  }
  std::string suite = "full", verify_format = "text";
  CLI::App* verify_cmd = app.add_subcommand("verify", "run acceptance suites");
  verify_cmd->add_option("suite", suite, "kernel, boundary, toeplitz, cluster or full");
  verify_cmd->add_option("--format", verify_format, "text or json");
  verify_cmd->add_option("--output", output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string sub = "magspec";
    for (int i = 1; i < argc; ++i)
      if (argv[i][0] != '-') {
        sub = argv[i];
        break;
      }
    return fail(sub, ConfigError({e.what()}));
  }

  if (verify_cmd->parsed()) {
    try {
      if (verify_format != "text" && verify_format != "json")
        throw ConfigError({"format: expected text or json, got '" + verify_format + "'"});
      suite_criteria(suite);
      VerifyReport report = verify(suite, [&](const CriterionResult& r) {
        if (verify_format == "text" && output.empty()) std::cout << format_line(r) << std::endl;
      });
      if (verify_format == "json") {
        emit(report.to_json().dump(2) + "\n", output);
      } else if (!output.empty()) {
        std::string text;
        for (const auto& r : report.criteria) text += format_line(r) + "\n";
        emit(text, output);
      }
      return report.ok() ? 0 : 1;
    } catch (const std::exception& e) {
      return fail("verify", e);
    }
  }

  for (const auto& name : names) {
    CLI::App* sub = app.get_subcommand(name);
    if (!sub->parsed()) continue;
    try {
      auto& list = flags[name];
      for (auto& f : list) f.set = f.option->count() > 0;
      json doc = config_path.empty() ? json::object() : read_config(config_path);
      std::vector<std::string> errors;
      overlay(doc, list, errors);
      RunConfig config;
      try {
        config = config_from_json(doc);
      } catch (const ConfigError& e) {
        errors.insert(errors.end(), e.violations().begin(), e.violations().end());
      }
      if (!errors.empty()) throw ConfigError(errors);
      emit(run(name, config).render(), output);
      return 0;
    } catch (const std::exception& e) {
      return fail(name, e);
    }
  }
  return 1;
}
