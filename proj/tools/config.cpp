#include "config.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "decolab/units.hpp"

namespace decolab::cli {

double to_natural(double value, Dimension dim) {
  switch (dim) {
    case Dimension::mass: return units::mass_to_natural(value);
    case Dimension::temperature: return units::temperature_to_natural(value);
    case Dimension::energy: return units::energy_to_natural(value);
    case Dimension::none: break;
  }
  return value;
}

double to_si(double value, Dimension dim) {
  switch (dim) {
    case Dimension::mass: return units::mass_to_si(value);
    case Dimension::temperature: return units::temperature_to_si(value);
    case Dimension::energy: return units::energy_to_si(value);
    case Dimension::none: break;
  }
  return value;
}

std::string units_name(Units units) { return units == Units::si ? "si" : "natural"; }

const ParamSpec& Params::spec(const std::string& name) const {
  for (const auto& s : *specs_)
    if (s.name == name) return s;
  throw std::logic_error("scenario has no parameter '" + name + "'");
}

bool Params::has(const std::string& name) const {
  spec(name);
  return values_.contains(name) && !values_[name].is_null();
}

double Params::number(const std::string& name) const {
  const auto& s = spec(name);
  const double v = values_.at(name).get<double>();
  return units_ == Units::si ? to_natural(v, s.dimension) : v;
}

std::int64_t Params::integer(const std::string& name) const {
  spec(name);
  return values_.at(name).get<std::int64_t>();
}

bool Params::boolean(const std::string& name) const {
  spec(name);
  return values_.at(name).get<bool>();
}

std::string Params::choice(const std::string& name) const {
  spec(name);
  return values_.at(name).get<std::string>();
}

std::complex<double> Params::complex(const std::string& name) const {
  const auto& s = spec(name);
  const Json& v = values_.at(name);
  std::complex<double> z = v.is_array() ? std::complex<double>(v[0].get<double>(), v[1].get<double>())
                                        : std::complex<double>(v.get<double>(), 0.0);
  if (units_ == Units::si && s.dimension != Dimension::none) {
    z = {to_natural(z.real(), s.dimension), to_natural(z.imag(), s.dimension)};
  }
  return z;
}

std::vector<double> Params::list(const std::string& name) const {
  const auto& s = spec(name);
  std::vector<double> out;
  for (const auto& x : values_.at(name)) {
    const double v = x.get<double>();
    out.push_back(units_ == Units::si ? to_natural(v, s.dimension) : v);
  }
  return out;
}

Json ScenarioConfig::echo(std::uint64_t resolved_seed) const {
  Json out = Json::object();
  out["scenario"] = scenario->name;
  out["units"] = units_name(units);
  out["params"] = params;
  out["seed"] = resolved_seed;
  return out;
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

std::string show(const Json& v) { return v.dump(); }

const char* type_name(ParamType t) {
  switch (t) {
    case ParamType::number: return "a number";
    case ParamType::integer: return "an integer";
    case ParamType::boolean: return "a boolean";
    case ParamType::choice: return "a string";
    case ParamType::complex: return "a number or a [re, im] pair";
    case ParamType::number_list: return "an array of numbers";
  }
  return "?";
}

bool is_finite_number(const Json& v) { return v.is_number() && std::isfinite(v.get<double>()); }

// Range message for one finite value, empty when within bounds.
std::string range_violation(const ParamSpec& s, double x) {
  std::ostringstream msg;
  if (s.minimum) {
    const bool bad = s.exclusive_minimum ? !(x > *s.minimum) : !(x >= *s.minimum);
    if (bad) {
      msg << "must be " << (s.exclusive_minimum ? "> " : ">= ") << *s.minimum;
      return msg.str();
    }
  }
  if (s.maximum) {
    const bool bad = s.exclusive_maximum ? !(x < *s.maximum) : !(x <= *s.maximum);
    if (bad) {
      msg << "must be " << (s.exclusive_maximum ? "< " : "<= ") << *s.maximum;
      return msg.str();
    }
  }
  return {};
}

void check_param(const ParamSpec& s, const Json& v, const std::string& path, std::vector<Issue>& issues) {
  auto type_error = [&] { issues.push_back({path, std::string("must be ") + type_name(s.type) + " (got " + show(v) + ")"}); };
  auto range = [&](double x) {
    const auto why = range_violation(s, x);
    if (!why.empty()) issues.push_back({path, why + " (got " + show(v) + ")"});
  };
  switch (s.type) {
    case ParamType::number:
      if (!is_finite_number(v)) return type_error();
      return range(v.get<double>());
    case ParamType::integer:
      if (!v.is_number_integer()) return type_error();
      return range(static_cast<double>(v.get<std::int64_t>()));
    case ParamType::boolean:
      if (!v.is_boolean()) return type_error();
      return;
    case ParamType::choice: {
      if (!v.is_string()) return type_error();
      for (const auto& c : s.choices)
        if (c == v.get<std::string>()) return;
      issues.push_back({path, "unknown value " + show(v) + "; allowed: " + join(s.choices)});
      return;
    }
    case ParamType::complex:
      if (is_finite_number(v)) return;
      if (v.is_array() && v.size() == 2 && is_finite_number(v[0]) && is_finite_number(v[1])) return;
      return type_error();
    case ParamType::number_list:
      if (!v.is_array() || v.empty()) return type_error();
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string item = path + "[" + std::to_string(i) + "]";
        if (!is_finite_number(v[i])) {
          issues.push_back({item, "must be a number (got " + show(v[i]) + ")"});
          continue;
        }
        const auto why = range_violation(s, v[i].get<double>());
        if (!why.empty()) issues.push_back({item, why + " (got " + show(v[i]) + ")"});
      }
      return;
  }
}

}  // namespace

Validation validate_config(const Json& doc, const std::vector<ScenarioDef>& scenarios) {
  Validation out;
  auto& issues = out.issues;
  if (!doc.is_object()) {
    issues.push_back({"", "config must be a JSON object"});
    return out;
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "scenario" && key != "units" && key != "params" && key != "output" && key != "seed") {
      issues.push_back({key, "unknown key; allowed: scenario, units, params, output, seed"});
    }
  }

  ScenarioConfig cfg;
  std::vector<std::string> names;
  for (const auto& s : scenarios) names.push_back(s.name);
  if (!doc.contains("scenario")) {
    issues.push_back({"scenario", "required; allowed: " + join(names)});
  } else if (!doc["scenario"].is_string()) {
    issues.push_back({"scenario", "must be a string; allowed: " + join(names)});
  } else {
    for (const auto& s : scenarios)
      if (s.name == doc["scenario"].get<std::string>()) cfg.scenario = &s;
    if (!cfg.scenario) {
      issues.push_back({"scenario", "unknown scenario " + show(doc["scenario"]) + "; allowed: " + join(names)});
    }
  }

  if (doc.contains("units")) {
    const Json& u = doc["units"];
    if (u == "natural") {
      cfg.units = Units::natural;
    } else if (u == "si") {
      cfg.units = Units::si;
    } else {
      issues.push_back({"units", "unknown units " + show(u) + "; allowed: natural, si"});
    }
  }

  if (doc.contains("seed")) {
    const Json& s = doc["seed"];
    if (s.is_number_unsigned()) {
      cfg.seed = s.get<std::uint64_t>();
    } else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) {
      cfg.seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
    } else {
      issues.push_back({"seed", "must be a non-negative integer (got " + show(s) + ")"});
    }
  }

  if (doc.contains("output")) {
    const Json& o = doc["output"];
    if (!o.is_object()) {
      issues.push_back({"output", "must be an object with 'path' and optional 'format'"});
    } else {
      for (const auto& [key, _] : o.items()) {
        if (key != "path" && key != "format") issues.push_back({"output." + key, "unknown key; allowed: path, format"});
      }
      if (o.contains("path")) {
        if (!o["path"].is_string() || o["path"].get<std::string>().empty()) {
          issues.push_back({"output.path", "must be a non-empty string"});
        } else {
          cfg.output_path = o["path"].get<std::string>();
        }
      }
      if (o.contains("format")) {
        if (o["format"] == "csv") {
          cfg.format = Format::csv;
        } else if (o["format"] == "json") {
          cfg.format = Format::json;
        } else {
          issues.push_back({"output.format", "unknown format " + show(o["format"]) + "; allowed: csv, json"});
        }
      }
    }
  }

  Json given = doc.contains("params") ? doc["params"] : Json::object();
  if (!given.is_object()) {
    issues.push_back({"params", "must be an object"});
    given = Json::object();
  }
  if (cfg.scenario) {
    const auto& specs = cfg.scenario->params;
    for (const auto& [key, _] : given.items()) {
      bool known = false;
      for (const auto& s : specs) known = known || s.name == key;
      if (!known) {
        std::vector<std::string> allowed;
        for (const auto& s : specs) allowed.push_back(s.name);
        issues.push_back({"params." + key, "unknown parameter for scenario '" + cfg.scenario->name +
                                               "'; allowed: " + join(allowed)});
      }
    }
    Json resolved = Json::object();
    const std::size_t before = issues.size();
    for (const auto& s : specs) {
      const std::string path = "params." + s.name;
      if (given.contains(s.name) && !given[s.name].is_null()) {
        check_param(s, given[s.name], path, issues);
        resolved[s.name] = given[s.name];
      } else if (!s.default_value.is_null()) {
        resolved[s.name] = s.default_value;
      } else if (!s.optional) {
        issues.push_back({path, "required: " + s.description});
      }
    }
    if (issues.size() == before && cfg.scenario->check) {
      cfg.params = resolved;
      cfg.scenario->check(cfg.typed_params(), issues);
    }
    cfg.params = std::move(resolved);
  }

  if (issues.empty()) out.config = std::move(cfg);
  return out;
}

namespace {

Json param_schema(const ParamSpec& s) {
  Json p = Json::object();
  p["description"] = s.description;
  auto bounds = [&](Json& target) {
    if (s.minimum) target[s.exclusive_minimum ? "exclusiveMinimum" : "minimum"] = *s.minimum;
    if (s.maximum) target[s.exclusive_maximum ? "exclusiveMaximum" : "maximum"] = *s.maximum;
  };
  switch (s.type) {
    case ParamType::number:
      p["type"] = "number";
      bounds(p);
      break;
    case ParamType::integer:
      p["type"] = "integer";
      bounds(p);
      break;
    case ParamType::boolean:
      p["type"] = "boolean";
      break;
    case ParamType::choice:
      p["enum"] = s.choices;
      break;
    case ParamType::complex:
      p["oneOf"] = Json::array({Json{{"type", "number"}},
                                Json{{"type", "array"}, {"items", {{"type", "number"}}}, {"minItems", 2}, {"maxItems", 2}}});
      break;
    case ParamType::number_list: {
      Json items{{"type", "number"}};
      bounds(items);
      p["type"] = "array";
      p["items"] = items;
      p["minItems"] = 1;
      break;
    }
  }
  if (!s.default_value.is_null()) p["default"] = s.default_value;
  if (s.dimension != Dimension::none) {
    static const char* names[] = {"none", "mass", "temperature", "energy"};
    p["x-dimension"] = names[static_cast<int>(s.dimension)];
  }
  return p;
}

}  // namespace

Json config_schema(const std::vector<ScenarioDef>& scenarios) {
  Json schema = Json::object();
  schema["$schema"] = "https://json-schema.org/draft/2020-12/schema";
  schema["title"] = "decolab scenario configuration";
  schema["type"] = "object";
  std::vector<std::string> names;
  for (const auto& s : scenarios) names.push_back(s.name);
  Json props = Json::object();
  props["scenario"] = {{"enum", names}};
  props["units"] = {{"enum", {"natural", "si"}}, {"default", "natural"}};
  props["params"] = {{"type", "object"}};
  props["output"] = {{"type", "object"},
                     {"properties", {{"path", {{"type", "string"}, {"minLength", 1}}}, {"format", {{"enum", {"csv", "json"}}}}}},
                     {"additionalProperties", false}};
  props["seed"] = {{"type", "integer"}, {"minimum", 0}};
  schema["properties"] = props;
  schema["required"] = {"scenario"};
  schema["additionalProperties"] = false;
  Json all_of = Json::array();
  for (const auto& s : scenarios) {
    Json params = Json::object();
    params["type"] = "object";
    params["description"] = s.description;
    Json pp = Json::object();
    Json required = Json::array();
    for (const auto& p : s.params) {
      pp[p.name] = param_schema(p);
      if (p.default_value.is_null() && !p.optional) required.push_back(p.name);
    }
    params["properties"] = pp;
    if (!required.empty()) params["required"] = required;
    params["additionalProperties"] = false;
    Json branch = Json::object();
    branch["if"] = {{"properties", {{"scenario", {{"const", s.name}}}}}};
    branch["then"] = {{"properties", {{"params", params}}}};
    all_of.push_back(branch);
  }
  schema["allOf"] = all_of;
  return schema;
}

}  // namespace decolab::cli
