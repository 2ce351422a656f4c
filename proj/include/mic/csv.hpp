#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mic/glm.hpp"

namespace mic {

// Malformed input; row is 1-based counting the header as row 1.
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& what, int row = 0, std::string column = {})
      : std::runtime_error(what), row_(row), column_(std::move(column)) {}
  int row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  int row_;
  std::string column_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column_index(const std::string& name) const;  // -1 if absent
};

// Header row required; ',' separated; double-quoted fields may contain commas.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::string& path);
void write_csv(std::ostream& out, const CsvTable& table);
// Shortest representation that round-trips a double.
std::string format_number(double v);

struct IngestOptions {
  std::string response;
  std::vector<std::string> predictors;    // empty: every column except the response
  std::vector<std::string> interactions;  // "a:b" product columns, built from raw values
  Family family = Family::GaussianIdentity;
  bool add_intercept = false;
  bool standardize = true;
  bool standardize_response = false;
};

// Numeric cells only, except that a column holding exactly two distinct
// non-numeric labels is coded 0/1 in lexicographic label order.
Dataset ingest(const CsvTable& table, const IngestOptions& opts);

}  // namespace mic
