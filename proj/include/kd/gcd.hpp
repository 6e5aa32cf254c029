#pragma once

#include <vector>

#include "kd/multipoly.hpp"

namespace kd {

// Greatest common divisor over Q[x_1..x_n, h]: primitive (integer
// coefficients with gcd 1) with positive graded-lex leading coefficient.
// gcd(p, 0) is p normalized; gcd(0, 0) throws InvalidInput.
MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b);

// gcd of a list, early exit on 1.
MultiPoly poly_gcd(const std::vector<MultiPoly>& polys);

// Content with respect to `slot`: gcd of the coefficients of p viewed as a
// polynomial in that slot (normalized, free of the slot).
MultiPoly content_in(const MultiPoly& p, int slot);

// p / content_in(p, slot)
MultiPoly primitive_part_in(const MultiPoly& p, int slot);

// lcm, normalized.
MultiPoly poly_lcm(const MultiPoly& a, const MultiPoly& b);

}  // namespace kd
