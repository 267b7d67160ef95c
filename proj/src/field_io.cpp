#include "fraclab/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace fraclab {
namespace {

constexpr char kMagic[5] = {'C', 'F', 'L', 'D', '1'};

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "CFLD1 writer assumes little-endian host");
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("CFLD1: truncated stream");
  return value;
}

}  // namespace

void write_cfld(std::ostream& out, const ComplexField& f) {
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, std::uint32_t(f.grid().dim()));
  put<std::uint32_t>(out, std::uint32_t(f.grid().points()));
  put<double>(out, f.grid().half_width());
  for (Index i = 0; i < f.size(); ++i) {
    put<double>(out, f[i].real());
    put<double>(out, f[i].imag());
  }
  if (!out) throw std::runtime_error("CFLD1: write failed");
}

void write_cfld(const std::filesystem::path& path, const ComplexField& f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("CFLD1: cannot open " + path.string());
  write_cfld(out, f);
}

ComplexField read_cfld(std::istream& in) {
  char magic[5];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("CFLD1: bad magic");
  const auto dim = get<std::uint32_t>(in);
  const auto n = get<std::uint32_t>(in);
  const auto half_width = get<double>(in);
  GridSpec grid(int(dim), int(n), half_width);
  ComplexField::Vector v(grid.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    v[i] = {re, im};
  }
  return ComplexField(grid, std::move(v));
}

ComplexField read_cfld(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("CFLD1: cannot open " + path.string());
  return read_cfld(in);
}

}  // namespace fraclab
