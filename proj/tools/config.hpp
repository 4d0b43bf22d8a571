#pragma once

// Scenario configuration: parameter specs, validation against them, and
// typed access in natural units.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "output.hpp"

namespace decolab::cli {

enum class ParamType { number, integer, boolean, choice, complex, number_list };

/// Quantities that rescale between SI and natural units. Lengths, times and
/// rates are shared by both systems.
enum class Dimension { none, mass, temperature, energy };

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::number;
  std::string description;
  /// Null means the parameter is required unless `optional` is set.
  Json default_value = nullptr;
  bool optional = false;
  std::optional<double> minimum;
  bool exclusive_minimum = false;
  std::optional<double> maximum;
  bool exclusive_maximum = false;
  std::vector<std::string> choices;
  Dimension dimension = Dimension::none;
};

struct Issue {
  std::string path;
  std::string message;
};

enum class Units { natural, si };

/// Validated parameters with defaults filled in, as written in the config.
class Params {
 public:
  Params(Json values, Units units, const std::vector<ParamSpec>* specs)
      : values_(std::move(values)), units_(units), specs_(specs) {}

  bool has(const std::string& name) const;
  /// Numbers are converted to natural units according to their dimension.
  double number(const std::string& name) const;
  std::int64_t integer(const std::string& name) const;
  bool boolean(const std::string& name) const;
  std::string choice(const std::string& name) const;
  std::complex<double> complex(const std::string& name) const;
  std::vector<double> list(const std::string& name) const;

  Units units() const noexcept { return units_; }
  const Json& values() const noexcept { return values_; }

 private:
  const ParamSpec& spec(const std::string& name) const;
  Json values_;
  Units units_;
  const std::vector<ParamSpec>* specs_;
};

struct RunContext {
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct ScenarioDef {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  /// Cross-parameter checks; reports through `issues`.
  std::function<void(const Params&, std::vector<Issue>& issues)> check;
  std::function<ResultSeries(const Params&, const RunContext&)> run;
};

struct ScenarioConfig {
  const ScenarioDef* scenario = nullptr;
  Units units = Units::natural;
  Json params;  // resolved, config units
  std::optional<std::string> output_path;
  std::optional<Format> format;
  std::optional<std::uint64_t> seed;

  Params typed_params() const { return Params(params, units, &scenario->params); }
  /// Everything that determines the physics: scenario, units, resolved params, seed.
  Json echo(std::uint64_t resolved_seed) const;
};

struct Validation {
  std::optional<ScenarioConfig> config;  // set when issues is empty
  std::vector<Issue> issues;
};

Validation validate_config(const Json& doc, const std::vector<ScenarioDef>& scenarios);

/// JSON Schema (draft 2020-12) describing every scenario's parameters.
Json config_schema(const std::vector<ScenarioDef>& scenarios);

double to_natural(double value, Dimension dim);
double to_si(double value, Dimension dim);

std::string units_name(Units units);

}  // namespace decolab::cli
