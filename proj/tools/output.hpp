#pragma once

// Result series and their CSV / JSON serializations.

#include <complex>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace decolab::cli {

using Json = nlohmann::ordered_json;

struct Column {
  std::string name;
  std::variant<std::vector<double>, std::vector<std::complex<double>>, std::vector<std::string>> values;

  std::size_t size() const;
};

/// Named columns of equal length plus metadata. Column order is insertion order.
class ResultSeries {
 public:
  void add(std::string name, std::vector<double> values);
  void add(std::string name, std::vector<std::complex<double>> values);
  void add(std::string name, std::vector<std::string> values);

  /// Scalar results reported alongside the columns (fitted rates, limits).
  void summarize(const std::string& key, Json value) { summary_[key] = std::move(value); }

  const std::vector<Column>& columns() const noexcept { return columns_; }
  const Json& summary() const noexcept { return summary_; }
  std::size_t rows() const;

 private:
  void push(Column column);
  std::vector<Column> columns_;
  Json summary_ = Json::object();
};

enum class Format { csv, json };

Format parse_format(const std::string& text);
std::string format_name(Format format);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// RFC 4180: CRLF line ends; fields with a comma, quote, CR or LF are quoted
/// and embedded quotes doubled. Complex columns become name_re, name_im.
void write_csv(std::ostream& out, const ResultSeries& series);

/// {"metadata": ..., "columns": {...}} with complex values as [re, im].
Json series_to_json(const ResultSeries& series, const Json& metadata);

}  // namespace decolab::cli
