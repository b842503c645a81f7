#pragma once

#include "asgem/half_int.hpp"

#include <cstddef>

namespace asgem {

/// Wigner 3j symbol
///
///   ( j1 j2 j3 )
///   ( m1 m2 m3 )
///
/// evaluated from the Racah single sum in exact integer arithmetic and
/// rounded to double only at the end. Returns exactly 0 when the triangle
/// condition fails or m1 + m2 + m3 != 0. Throws DomainError when any
/// (j, m) pair is itself invalid.
double wigner_3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3);

/// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}. Returns exactly 0 when any of
/// the four triads (j1 j2 j3), (j1 j5 j6), (j4 j2 j6), (j4 j5 j3) violates
/// the triangle condition. Throws DomainError on a negative argument.
double wigner_6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6);

/// Number of memoized symbols (3j and 6j combined).
std::size_t wigner_cache_size();
void clear_wigner_cache();

} // namespace asgem
