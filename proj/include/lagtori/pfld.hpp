#pragma once

#include "lagtori/field2d.hpp"

#include <iosfwd>
#include <string>
#include <variant>

namespace lagtori {

// PFLD1 text format: header `PFLD1 n1 n2 L1 L2 real|complex`, then n1*n2 samples, x fastest.
void write_pfld(std::ostream& os, const RealField& f);
void write_pfld(std::ostream& os, const ComplexField& f);
void write_pfld(const std::string& path, const RealField& f);
void write_pfld(const std::string& path, const ComplexField& f);

using AnyField = std::variant<RealField, ComplexField>;

AnyField read_pfld(std::istream& is);
AnyField read_pfld(const std::string& path);
// Reads a field and requires it to be stored as real.
RealField read_pfld_real(const std::string& path);

}  // namespace lagtori
