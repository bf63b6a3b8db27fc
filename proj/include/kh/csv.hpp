#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kh/points.hpp"

namespace kh {

// Point dump: "# p=", "# spec=", "# precision=" comment headers, then one
// row per point, "n,coord1_digits,coord1_float,coord2_digits,...".  The
// digit strings are the normative columns; the floats are a convenience.
struct PointDump {
    std::uint32_t p = 2;
    std::string spec_label;
    std::vector<int> precisions; // per coordinate
    std::vector<std::uint64_t> index;
    std::vector<DigitPoint> points;
};

void write_point_csv(std::ostream& out, const PointDump& dump);

// Accepts exactly what write_point_csv emits.  Throws config_error on a
// malformed or empty dump.
PointDump read_point_csv(std::istream& in);

} // namespace kh
