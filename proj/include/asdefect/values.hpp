#pragma once

#include "asdefect/rational.hpp"

#include <string>

namespace asdefect {

// The subgroup (1/N)·Z·generator_value of the rationals.
struct GroupLattice {
  Rat generator_value;
  BigInt denominator;

  GroupLattice(Rat generator, BigInt n);
  Rat step() const { return generator_value / Rat(denominator); }
};

// [fine : coarse]; throws containment_error when coarse is not inside fine.
BigInt lattice_index(const GroupLattice& fine, const GroupLattice& coarse);

// Bounds on -dist, which is nonnegative for the extensions modeled here.
struct DistanceBound {
  Rat lower;
  Rat upper;
  bool exact = false;

  static constexpr const char* flavor = "s-";

  static DistanceBound point(const Rat& v);
  static DistanceBound interval(const Rat& lo, const Rat& hi);

  Rat width() const { return upper - lower; }
  bool contains(const Rat& v) const { return lower <= v && v <= upper; }
  // "dist = -14/15 (exact)" or "dist in [-1, 0]".
  std::string describe() const;
};

// Limit of a_{n+1} = a_n - d0·r^n, i.e. a0 - d0/(1-r).
Rat limit_of_decrement_series(const Rat& a0, const Rat& d0, const Rat& r);

DistanceBound bound_refine(const DistanceBound& current, const Rat& new_upper);

}  // namespace asdefect
