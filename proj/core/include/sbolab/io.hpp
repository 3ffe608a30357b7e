#ifndef SBOLAB_IO_HPP
#define SBOLAB_IO_HPP

#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

#include "sbolab/model.hpp"

namespace sbolab {

// Shortest decimal form that round-trips an IEEE double (17 significant
// digits).  Used for every number the library writes to text output.
std::string format_g17(double x);

// --- binary state snapshots --------------------------------------------
//
// Layout (all integers and doubles little-endian):
//   bytes 0..3   magic "SBO1"
//   u64          N  (grid size)
//   f64          L  (domain length)
//   f64          t  (simulation time)
//   N x (f64,f64) u samples (re, im)
//   N x f64       v samples
//
// write_snapshot / read_snapshot round-trip bit-exactly.

void write_snapshot(const std::string& path, const SboState& state);
SboState read_snapshot(const std::string& path);

// --- CSV ------------------------------------------------------------------
//
// Plain comma-separated text: one header line naming the columns, then one
// row per record, every value printed with format_g17.

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void flush();

 private:
  std::ofstream out_;
  std::size_t ncols_;
  std::string path_;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);

}  // namespace sbolab

#endif  // SBOLAB_IO_HPP
