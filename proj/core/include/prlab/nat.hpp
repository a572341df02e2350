#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace prlab {

// Register values, function arguments and program indices are naturals of
// unbounded size: an index is a bijective base-256 numeral over program
// text, and programs may receive their own index as an argument.
using Nat = mpz_class;
using Tuple = std::vector<Nat>;

inline Nat nat(std::uint64_t v) { return Nat(static_cast<unsigned long>(v)); }

inline std::uint64_t to_u64(const Nat& v) { return mpz_get_ui(v.get_mpz_t()); }

inline bool fits_u64(const Nat& v) {
  return v >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

// Truncated subtraction: max(a - b, 0).
inline Nat monus(const Nat& a, const Nat& b) {
  return a > b ? Nat(a - b) : Nat(0);
}

// 0 iff a == b; realized as (a monus b) + (b monus a).
inline Nat eq_indicator(const Nat& a, const Nat& b) {
  return monus(a, b) + monus(b, a);
}

inline Tuple tuple_of(std::initializer_list<std::uint64_t> vs) {
  Tuple t;
  t.reserve(vs.size());
  for (auto v : vs) t.push_back(nat(v));
  return t;
}

}  // namespace prlab
