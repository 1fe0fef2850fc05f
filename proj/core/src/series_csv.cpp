#include "waveuio/series_csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "waveuio/errors.hpp"

namespace waveuio {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_series_csv(std::ostream& os, const SimResult& r) {
  os << kSeriesHeader << '\n';
  const bool has_xi = r.xi.size() == r.times.size();
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    os << format_double(r.times[k]) << ',' << format_double(r.e_norm[k]) << ','
       << format_double(r.eps_norm[k]) << ','
       << (has_xi ? format_double(r.xi[k]) : std::string("nan")) << ','
       << format_double(r.d_norm[k]) << ',' << format_double(r.int_e_sq[k]) << ','
       << format_double(r.int_d_sq[k]) << '\n';
  }
}

void write_snapshots_csv(std::ostream& os, const SimResult& r) {
  os << kSnapshotHeader << '\n';
  for (const Snapshot& s : r.snapshots) {
    const std::string t = format_double(s.t);
    for (Index i = 0; i < s.w.cols(); ++i) {
      const std::string x = format_double(r.x[static_cast<std::size_t>(i)]);
      for (Index c = 0; c < s.w.rows(); ++c) {
        os << t << ',' << x << ',' << c << ',' << format_double(s.w(c, i)) << ','
           << format_double(s.what(c, i)) << ',' << format_double(s.e(c, i)) << '\n';
      }
    }
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell) {
  if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw ConfigError("csv: cannot parse number '" + cell + "'");
  }
  return v;
}

}  // namespace

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split(line);
  for (const auto& name : table.header) table.columns[name];
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      std::ostringstream os;
      os << "csv: row " << table.rows + 1 << " has " << cells.size() << " cells, expected "
         << table.header.size();
      throw ConfigError(os.str());
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      table.columns[table.header[c]].push_back(parse_number(cells[c]));
    }
    ++table.rows;
  }
  return table;
}

}  // namespace waveuio
