#pragma once

// Linear recurrence sequences: exact evaluation, the sign-preserving
// rescaling v_n = mu * lambda^n * u_n, and the smallness bounds the gadget
// constructions need (standard profile and the stricter cvar profile).

#include <optional>
#include <string>
#include <vector>

#include "lrs2mdp/rational.hpp"

namespace lrs2mdp {

struct Lrs {
  int order = 0;                        // k >= 2
  std::vector<Rational> coefficients;   // alpha_1 .. alpha_k
  std::vector<Rational> initials;       // beta_0 .. beta_{k-1}

  // Throws std::invalid_argument if order/lengths disagree or order < 2.
  void check_shape() const;

  bool operator==(const Lrs&) const = default;
};

struct Normalization {
  Rational lambda;
  Rational mu;
  Lrs normalized;
  bool degenerate = false;  // all coefficients zero (and possibly all initials)
};

enum class AssumptionProfile { Standard, Cvar };

// u_n by direct recurrence unrolling; u_j = beta_j for j < k.
Rational eval(const Lrs& lrs, long n);

// lambda = min(1/(alpha*(5k+5)), 1/(5k+5)), alpha'_i = lambda^i alpha_i,
// mu = min(alpha',1)/(4 k^{2k+2} beta) with beta = max |beta_j| (mu = 1 when
// beta = 0), beta'_j = mu lambda^j beta_j. Degenerate inputs (all
// coefficients zero) are flagged; mu then falls back to a sign-preserving
// positive value.
Normalization normalize(const Lrs& lrs);

// Smallest n <= bound with u_n < 0.
std::optional<long> first_negative(const Lrs& lrs, long bound);

// Empty iff the profile's bounds hold. Zero initials satisfy the beta bound
// vacuously (every use of the bound is an upper estimate on beta terms).
std::vector<std::string> check_assumption(const Lrs& lrs,
                                          AssumptionProfile profile = AssumptionProfile::Standard);

// sum |alpha_i|
Rational coefficient_abs_sum(const Lrs& lrs);

// 4 * k^{2k+2} as an exact rational denominator helper.
Rational beta_bound_denominator(int k);

}  // namespace lrs2mdp
