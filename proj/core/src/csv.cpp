#include "tscp/csv.hpp"

#include "tscp/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace tscp {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& field, std::size_t line_no, const std::string& column) {
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw DataError("line " + std::to_string(line_no) + ", column '" + column + "': not a finite number: '" + field +
                    "'");
  }
  return v;
}

}  // namespace

std::vector<std::string> default_ignored_columns() { return {"id", "true_time", "censor_time"}; }

CsvDataset read_survival_csv(std::istream& in, const std::vector<std::string>& ignored) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_line(line);
      break;
    }
  }
  if (header.empty()) throw DataError("CSV is empty: missing header");

  auto find = [&](const std::string& name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  const auto time_col = find("time");
  const auto event_col = find("event");
  if (time_col < 0) throw DataError("CSV header is missing required column 'time'");
  if (event_col < 0) throw DataError("CSV header is missing required column 'event'");

  std::vector<std::size_t> cov_cols;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (static_cast<std::ptrdiff_t>(c) == time_col || static_cast<std::ptrdiff_t>(c) == event_col) continue;
    if (std::find(ignored.begin(), ignored.end(), header[c]) != ignored.end()) continue;
    cov_cols.push_back(c);
    names.push_back(header[c]);
  }

  std::vector<double> values;
  std::vector<double> time;
  std::vector<bool> event;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(fields.size()));
    }
    const double t = parse_number(fields[static_cast<std::size_t>(time_col)], line_no, "time");
    if (t <= 0.0) throw DataError("line " + std::to_string(line_no) + ", column 'time': time must be positive");
    const double e = parse_number(fields[static_cast<std::size_t>(event_col)], line_no, "event");
    if (e != 0.0 && e != 1.0) {
      throw DataError("line " + std::to_string(line_no) + ", column 'event': event must be 0 or 1");
    }
    time.push_back(t);
    event.push_back(e == 1.0);
    for (auto c : cov_cols) values.push_back(parse_number(fields[c], line_no, header[c]));
  }
  if (time.empty()) throw DataError("CSV has a header but no data rows");

  Matrix x(static_cast<Eigen::Index>(time.size()), static_cast<Eigen::Index>(cov_cols.size()));
  std::copy(values.begin(), values.end(), x.data());
  return {SurvivalDataset(std::move(x), std::move(time), std::move(event)), std::move(names)};
}

CsvDataset read_survival_csv(const std::filesystem::path& path, const std::vector<std::string>& ignored) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_survival_csv(in, ignored);
}

void write_synthetic_csv(std::ostream& out, const SyntheticSample& sample) {
  const auto& d = sample.dataset;
  out << "x1,x2,time,event,true_time,censor_time\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto x = d.row(i);
    out << format_number(x[0]) << ',' << format_number(x[1]) << ',' << format_number(d.time(i)) << ','
        << (d.event(i) ? 1 : 0) << ',' << format_number(sample.true_time[i]) << ','
        << format_number(sample.censor_time[i]) << '\n';
  }
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace tscp
