#include "sbolab/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace sbolab {

namespace {

constexpr char kMagic[4] = {'S', 'B', 'O', '1'};

void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xffu));
}

void put_f64_le(std::string& out, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof(bits));
  put_u64_le(out, bits);
}

std::uint64_t get_u64_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
  return v;
}

double get_f64_le(const unsigned char* p) {
  const std::uint64_t bits = get_u64_le(p);
  double x;
  std::memcpy(&x, &bits, sizeof(x));
  return x;
}

}  // namespace

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

void write_snapshot(const std::string& path, const SboState& state) {
  detail::require_same_grid_pub(state.u.grid(), state.v.grid());
  const std::size_t n = state.u.size();
  std::string buf;
  buf.reserve(4 + 24 + 24 * n);
  buf.append(kMagic, 4);
  put_u64_le(buf, std::uint64_t(n));
  put_f64_le(buf, state.u.grid().length());
  put_f64_le(buf, state.t);
  for (std::size_t i = 0; i < n; ++i) {
    put_f64_le(buf, state.u[i].real());
    put_f64_le(buf, state.u[i].imag());
  }
  for (std::size_t i = 0; i < n; ++i) put_f64_le(buf, state.v[i]);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out.write(buf.data(), std::streamsize(buf.size()));
  if (!out) throw std::runtime_error("failed writing snapshot: " + path);
}

SboState read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file for reading: " + path);
  std::string raw((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  if (raw.size() < 28 || std::memcmp(raw.data(), kMagic, 4) != 0)
    throw std::runtime_error("not a snapshot file (bad magic): " + path);
  const std::uint64_t n64 = get_u64_le(p + 4);
  const double length = get_f64_le(p + 12);
  const double t = get_f64_le(p + 20);
  if (n64 == 0 || n64 > (std::uint64_t(1) << 30))
    throw std::runtime_error("snapshot header invalid: " + path);
  const std::size_t n = std::size_t(n64);
  const std::size_t need = 28 + 24 * n;
  if (raw.size() != need)
    throw std::runtime_error("snapshot file truncated: " + path);

  auto grid = make_grid(length, n);
  std::vector<cplx> u(n);
  std::vector<double> v(n);
  const unsigned char* q = p + 28;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = get_f64_le(q);
    const double im = get_f64_le(q + 8);
    u[i] = cplx{re, im};
    q += 16;
  }
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = get_f64_le(q);
    q += 8;
  }
  return SboState{ComplexField(grid, std::move(u)),
                  RealField(grid, std::move(v)), t};
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : out_(path, std::ios::trunc), ncols_(columns.size()), path_(path) {
  if (!out_) throw std::runtime_error("cannot open file for writing: " + path);
  if (columns.empty())
    throw std::invalid_argument("CSV needs at least one column");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != ncols_)
    throw std::invalid_argument("CSV row width does not match header");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_g17(values[i]);
  }
  out_ << '\n';
}

void CsvWriter::flush() {
  out_.flush();
  if (!out_) throw std::runtime_error("failed writing CSV: " + path_);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file for reading: " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty CSV file: " + path);
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("bad CSV number '" + cell + "' in " + path);
      }
    }
    if (row.size() != table.columns.size())
      throw std::runtime_error("ragged CSV row in " + path);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace sbolab
