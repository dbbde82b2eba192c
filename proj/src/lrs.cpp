#include "lrs2mdp/lrs.hpp"

#include <deque>
#include <stdexcept>

namespace lrs2mdp {

void Lrs::check_shape() const {
  if (order < 2) throw std::invalid_argument("Lrs: order must be >= 2");
  if (static_cast<int>(coefficients.size()) != order)
    throw std::invalid_argument("Lrs: coefficient count != order");
  if (static_cast<int>(initials.size()) != order)
    throw std::invalid_argument("Lrs: initial value count != order");
}

Rational eval(const Lrs& lrs, long n) {
  lrs.check_shape();
  if (n < 0) throw std::invalid_argument("eval: n must be >= 0");
  const int k = lrs.order;
  if (n < k) return lrs.initials[static_cast<size_t>(n)];
  // Sliding window of the last k values, window[0] = u_{m-k} .. window[k-1] = u_{m-1}.
  std::deque<Rational> window(lrs.initials.begin(), lrs.initials.end());
  Rational u;
  for (long m = k; m <= n; ++m) {
    u = 0;
    for (int i = 1; i <= k; ++i) u += lrs.coefficients[i - 1] * window[static_cast<size_t>(k - i)];
    window.pop_front();
    window.push_back(u);
  }
  return u;
}

Rational coefficient_abs_sum(const Lrs& lrs) {
  Rational s = 0;
  for (const auto& a : lrs.coefficients) s += a.abs();
  return s;
}

Rational beta_bound_denominator(int k) {
  Rational kk(k);
  return Rational(4) * kk.pow(static_cast<unsigned>(2 * k + 2));
}

Normalization normalize(const Lrs& lrs) {
  lrs.check_shape();
  const int k = lrs.order;
  const Rational alpha = coefficient_abs_sum(lrs);
  const Rational bound(1, 5L * k + 5L);

  Rational lambda = alpha.is_zero() ? bound : min(bound / alpha, bound);

  Normalization out;
  out.lambda = lambda;
  out.normalized.order = k;
  out.normalized.coefficients.resize(static_cast<size_t>(k));
  Rational lam_pow = 1;
  Rational alpha_prime = 0;
  for (int i = 1; i <= k; ++i) {
    lam_pow *= lambda;
    out.normalized.coefficients[static_cast<size_t>(i - 1)] = lam_pow * lrs.coefficients[static_cast<size_t>(i - 1)];
    alpha_prime += out.normalized.coefficients[static_cast<size_t>(i - 1)].abs();
  }

  Rational beta = 0;
  for (const auto& b : lrs.initials) beta = max(beta, b.abs());

  Rational mu;
  if (beta.is_zero()) {
    mu = 1;
  } else if (alpha_prime.is_zero()) {
    // All coefficients zero: the alpha'/4 part of the bound is unsatisfiable,
    // but the sign pattern must survive. Flagged below.
    mu = Rational(1) / (Rational(2) * beta_bound_denominator(k) * beta);
  } else {
    mu = min(alpha_prime, Rational(1)) / (beta_bound_denominator(k) * beta);
  }
  out.mu = mu;
  out.degenerate = alpha_prime.is_zero();

  out.normalized.initials.resize(static_cast<size_t>(k));
  Rational lam_j = 1;
  for (int j = 0; j < k; ++j) {
    out.normalized.initials[static_cast<size_t>(j)] = mu * lam_j * lrs.initials[static_cast<size_t>(j)];
    lam_j *= lambda;
  }
  return out;
}

std::optional<long> first_negative(const Lrs& lrs, long bound) {
  lrs.check_shape();
  if (bound < 0) throw std::invalid_argument("first_negative: bound must be >= 0");
  const int k = lrs.order;
  for (long n = 0; n < k && n <= bound; ++n) {
    if (lrs.initials[static_cast<size_t>(n)].sign() < 0) return n;
  }
  std::deque<Rational> window(lrs.initials.begin(), lrs.initials.end());
  for (long m = k; m <= bound; ++m) {
    Rational u = 0;
    for (int i = 1; i <= k; ++i) u += lrs.coefficients[static_cast<size_t>(i - 1)] * window[static_cast<size_t>(k - i)];
    if (u.sign() < 0) return m;
    window.pop_front();
    window.push_back(u);
  }
  return std::nullopt;
}

std::vector<std::string> check_assumption(const Lrs& lrs, AssumptionProfile profile) {
  lrs.check_shape();
  const int k = lrs.order;
  const Rational alpha = coefficient_abs_sum(lrs);
  Rational beta_max = 0;
  for (const auto& b : lrs.initials) beta_max = max(beta_max, b);

  std::vector<std::string> violations;
  if (profile == AssumptionProfile::Standard) {
    const Rational coeff_bound(1, 5L * k + 5L);
    if (!(alpha < coeff_bound)) {
      violations.push_back("sum |alpha_i| = " + alpha.str() + " >= 1/(5k+5) = " + coeff_bound.str());
    }
    if (!beta_max.is_zero()) {
      const Rational b1 = Rational(1) / beta_bound_denominator(k);
      const Rational b2 = alpha / Rational(4);
      if (!(beta_max < min(b1, b2))) {
        violations.push_back("max beta_j = " + beta_max.str() + " >= min(1/(4k^{2k+2}), alpha/4) = " +
                             min(b1, b2).str());
      }
    }
  } else {
    const Rational coeff_bound(1, 5L * (k + 1L));
    if (!(alpha <= coeff_bound)) {
      violations.push_back("sum |alpha_i| = " + alpha.str() + " > 1/(5(k+1)) = " + coeff_bound.str());
    }
    const Rational b2 = alpha / Rational(3);
    for (int j = 0; j < k; ++j) {
      const Rational& b = lrs.initials[static_cast<size_t>(j)];
      if (b.is_zero()) continue;
      if (!(b <= b2)) {
        violations.push_back("beta_" + std::to_string(j) + " = " + b.str() + " > alpha/3 = " + b2.str());
      }
    }
  }
  return violations;
}

}  // namespace lrs2mdp
