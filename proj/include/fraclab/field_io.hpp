#pragma once

#include "fraclab/grid.hpp"

#include <filesystem>
#include <iosfwd>

namespace fraclab {

// CFLD1 dump: magic "CFLD1", u32 dim, u32 N, f64 L, then N^n (f64 re, f64 im)
// pairs in row-major order. All little-endian.
void write_cfld(std::ostream& out, const ComplexField& f);
void write_cfld(const std::filesystem::path& path, const ComplexField& f);
ComplexField read_cfld(std::istream& in);
ComplexField read_cfld(const std::filesystem::path& path);

}  // namespace fraclab
