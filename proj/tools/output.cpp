#include "output.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace decolab::cli {

std::size_t Column::size() const {
  return std::visit([](const auto& v) { return v.size(); }, values);
}

void ResultSeries::push(Column column) {
  if (!columns_.empty() && column.size() != rows()) {
    throw std::logic_error("column '" + column.name + "' length differs from the series");
  }
  for (const auto& c : columns_) {
    if (c.name == column.name) throw std::logic_error("duplicate column '" + column.name + "'");
  }
  columns_.push_back(std::move(column));
}

void ResultSeries::add(std::string name, std::vector<double> values) {
  push({std::move(name), std::move(values)});
}
void ResultSeries::add(std::string name, std::vector<std::complex<double>> values) {
  push({std::move(name), std::move(values)});
}
void ResultSeries::add(std::string name, std::vector<std::string> values) {
  push({std::move(name), std::move(values)});
}

std::size_t ResultSeries::rows() const { return columns_.empty() ? 0 : columns_.front().size(); }

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + text + "' (allowed: csv, json)");
}

std::string format_name(Format format) { return format == Format::csv ? "csv" : "json"; }

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Non-finite doubles have no JSON literal; they are written as strings.
Json json_number(double value) {
  if (std::isfinite(value)) return value;
  return format_double(value);
}

}  // namespace

void write_csv(std::ostream& out, const ResultSeries& series) {
  const auto& cols = series.columns();
  bool first = true;
  auto sep = [&] {
    if (!first) out << ',';
    first = false;
  };
  for (const auto& c : cols) {
    if (std::holds_alternative<std::vector<std::complex<double>>>(c.values)) {
      sep();
      out << csv_field(c.name + "_re");
      sep();
      out << csv_field(c.name + "_im");
    } else {
      sep();
      out << csv_field(c.name);
    }
  }
  out << "\r\n";
  for (std::size_t row = 0; row < series.rows(); ++row) {
    first = true;
    for (const auto& c : cols) {
      std::visit(
          [&](const auto& v) {
            using T = typename std::decay_t<decltype(v)>::value_type;
            if constexpr (std::is_same_v<T, double>) {
              sep();
              out << format_double(v[row]);
            } else if constexpr (std::is_same_v<T, std::complex<double>>) {
              sep();
              out << format_double(v[row].real());
              sep();
              out << format_double(v[row].imag());
            } else {
              sep();
              out << csv_field(v[row]);
            }
          },
          c.values);
    }
    out << "\r\n";
  }
}

Json series_to_json(const ResultSeries& series, const Json& metadata) {
  Json columns = Json::object();
  for (const auto& c : series.columns()) {
    Json arr = Json::array();
    std::visit(
        [&](const auto& v) {
          using T = typename std::decay_t<decltype(v)>::value_type;
          for (const auto& x : v) {
            if constexpr (std::is_same_v<T, double>) {
              arr.push_back(json_number(x));
            } else if constexpr (std::is_same_v<T, std::complex<double>>) {
              arr.push_back(Json::array({json_number(x.real()), json_number(x.imag())}));
            } else {
              arr.push_back(x);
            }
          }
        },
        c.values);
    columns[c.name] = std::move(arr);
  }
  Json out = Json::object();
  out["metadata"] = metadata;
  out["columns"] = std::move(columns);
  return out;
}

}  // namespace decolab::cli
