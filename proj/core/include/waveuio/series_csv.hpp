#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "waveuio/wavesim.hpp"

namespace waveuio {

inline constexpr const char* kSeriesHeader = "t,e_norm,eps_norm,xi,d_norm,int_e_sq,int_d_sq";
inline constexpr const char* kSnapshotHeader = "t,x,comp,w,what,e";

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// One row per recorded step. `xi` is written as "nan" when the run had no
/// certificate.
void write_series_csv(std::ostream& os, const SimResult& result);

/// Long format, one row per (snapshot, grid point, component); comp is 0-based.
void write_snapshots_csv(std::ostream& os, const SimResult& result);

/// Column-oriented numeric table read back from a CSV file.
struct CsvTable {
  std::vector<std::string> header;
  std::map<std::string, std::vector<double>> columns;
  std::size_t rows = 0;

  bool has(const std::string& name) const { return columns.count(name) != 0; }
  const std::vector<double>& at(const std::string& name) const { return columns.at(name); }
};

/// Throws ConfigError on ragged rows or unparsable numbers.
CsvTable read_csv(std::istream& is);

}  // namespace waveuio
