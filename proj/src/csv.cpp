#include "mic/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace mic {

namespace {

std::vector<std::string> split_line(const std::string& line, int row) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw CsvError("unterminated quoted field", row);
  out.push_back(std::move(cur));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

int CsvTable::column_index(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

CsvTable parse_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (row == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_line(line, row);
    for (auto& f : fields) f = trim(f);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      std::ostringstream os;
      os << "row " << row << " has " << fields.size() << " fields, header has " << t.header.size();
      throw CsvError(os.str(), row);
    }
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw CsvError("missing header row", 1);
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open '" + path + "'");
  return parse_csv(in);
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto emit = [&out](const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      const std::string& f = fields[i];
      if (f.find_first_of(",\"") != std::string::npos) {
        out << '"';
        for (char c : f) out << (c == '"' ? "\"\"" : std::string(1, c));
        out << '"';
      } else {
        out << f;
      }
    }
    out << '\n';
  };
  emit(table.header);
  for (const auto& r : table.rows) emit(r);
}

Dataset ingest(const CsvTable& table, const IngestOptions& opts) {
  const int resp = table.column_index(opts.response);
  if (resp < 0) throw CsvError("response column '" + opts.response + "' not found", 1, opts.response);

  std::vector<std::string> predictors = opts.predictors;
  if (predictors.empty()) {
    for (const auto& h : table.header)
      if (h != opts.response) predictors.push_back(h);
  }

  auto numeric_column = [&](const std::string& name) {
    const int c = table.column_index(name);
    if (c < 0) throw CsvError("column '" + name + "' not found", 1, name);
    std::vector<double> vals(table.rows.size());
    std::vector<size_t> bad;
    for (size_t r = 0; r < table.rows.size(); ++r) {
      const auto v = parse_double(table.rows[r][static_cast<size_t>(c)]);
      if (v) vals[r] = *v; else bad.push_back(r);
    }
    if (bad.empty()) return vals;
    std::map<std::string, int> levels;
    for (size_t r = 0; r < table.rows.size(); ++r) levels[table.rows[r][static_cast<size_t>(c)]] = 0;
    const bool all_labels = bad.size() == table.rows.size();
    if (!all_labels || levels.size() != 2 || levels.begin()->first.empty()) {
      std::ostringstream os;
      os << "non-numeric value '" << table.rows[bad.front()][static_cast<size_t>(c)] << "' at row " << bad.front() + 2
         << ", column '" << name << "'";
      throw CsvError(os.str(), static_cast<int>(bad.front()) + 2, name);
    }
    int code = 0;
    for (auto& [label, v] : levels) v = code++;
    for (size_t r = 0; r < table.rows.size(); ++r) vals[r] = levels[table.rows[r][static_cast<size_t>(c)]];
    return vals;
  };

  const size_t n = table.rows.size();
  std::vector<std::string> names = predictors;
  std::vector<std::vector<double>> cols;
  for (const auto& p : predictors) {
    if (p == opts.response) throw CsvError("response '" + p + "' cannot also be a predictor", 1, p);
    cols.push_back(numeric_column(p));
  }
  for (const auto& term : opts.interactions) {
    const auto colon = term.find(':');
    if (colon == std::string::npos) throw CsvError("interaction '" + term + "' must look like a:b", 1, term);
    const auto a = numeric_column(term.substr(0, colon));
    const auto b = numeric_column(term.substr(colon + 1));
    std::vector<double> prod(n);
    for (size_t r = 0; r < n; ++r) prod[r] = a[r] * b[r];
    cols.push_back(std::move(prod));
    names.push_back(term);
  }
  const std::vector<double> y = numeric_column(opts.response);

  Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
  Vector yv(static_cast<Eigen::Index>(n));
  for (size_t r = 0; r < n; ++r) {
    yv[static_cast<Eigen::Index>(r)] = y[r];
    for (size_t c = 0; c < cols.size(); ++c) X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cols[c][r];
  }
  DatasetOptions dopts;
  dopts.standardize = opts.standardize;
  dopts.add_intercept = opts.add_intercept;
  dopts.standardize_response = opts.standardize_response;
  return make_dataset(std::move(X), std::move(yv), opts.family, std::move(names), dopts);
}

}  // namespace mic
