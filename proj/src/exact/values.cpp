#include "asdefect/values.hpp"

#include "asdefect/errors.hpp"

namespace asdefect {

GroupLattice::GroupLattice(Rat generator, BigInt n)
    : generator_value(std::move(generator)), denominator(std::move(n)) {
  if (denominator < 1) throw domain_error("lattice denominator must be >= 1");
  if (generator_value.sign() <= 0) throw domain_error("lattice generator must be positive");
}

BigInt lattice_index(const GroupLattice& fine, const GroupLattice& coarse) {
  Rat ratio = coarse.step() / fine.step();
  if (!ratio.is_integer()) {
    throw containment_error("lattice with step " + coarse.step().str() +
                            " is not contained in lattice with step " + fine.step().str());
  }
  return ratio.num();
}

DistanceBound DistanceBound::point(const Rat& v) {
  if (v.sign() < 0) throw domain_error("-dist must be nonnegative, got " + v.str());
  return DistanceBound{v, v, true};
}

DistanceBound DistanceBound::interval(const Rat& lo, const Rat& hi) {
  if (lo.sign() < 0 || hi < lo) {
    throw domain_error("invalid distance interval [" + lo.str() + ", " + hi.str() + "]");
  }
  return DistanceBound{lo, hi, false};
}

std::string DistanceBound::describe() const {
  if (exact) return "dist = " + (-upper).pretty() + " (exact)";
  return "dist in [" + (-upper).pretty() + ", " + (-lower).pretty() + "]";
}

Rat limit_of_decrement_series(const Rat& a0, const Rat& d0, const Rat& r) {
  if (r.sign() < 0 || r >= Rat(1)) throw domain_error("ratio must lie in [0, 1), got " + r.str());
  if (d0.sign() < 0) throw domain_error("decrement must be nonnegative, got " + d0.str());
  return a0 - d0 / (Rat(1) - r);
}

DistanceBound bound_refine(const DistanceBound& current, const Rat& new_upper) {
  if (new_upper < current.lower) {
    throw monotonicity_error("new upper bound " + new_upper.str() + " is below lower bound " +
                             current.lower.str());
  }
  DistanceBound out = current;
  out.upper = min(current.upper, new_upper);
  return out;
}

}  // namespace asdefect
