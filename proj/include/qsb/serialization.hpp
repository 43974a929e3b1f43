#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "qsb/canonical_map.hpp"
#include "qsb/qs_group.hpp"

namespace qsb {

// Text formats. Every number is printed in shortest round-trip form, so
// write -> read reproduces the value bit for bit.
//
// Map:
//   a <value>
//   b <value>
//   c <left_slope> <right_slope> <anchor> <breakpoint_count>
//   <y> <value>          (breakpoint_count lines)
//
// Group element:
//   C <left_slope> <right_slope> <anchor> <breakpoint_count>
//   <y> <value>          (breakpoint_count lines)
//   b <value>
//   t <value>
//   sigma <0|1>
//
// Blank lines and lines starting with '#' are ignored.

std::string format_double(double v);
// Accepts decimal and scientific notation; throws Parse on trailing garbage.
double parse_double(std::string_view text);

std::string write_map(const CanonicalQSMap& f);
CanonicalQSMap read_map(std::string_view text);

std::string write_group_element(const QSGroupElement& g);
QSGroupElement read_group_element(std::string_view text);

// "x,y"
BoundaryPoint parse_point(std::string_view text);

}  // namespace qsb
