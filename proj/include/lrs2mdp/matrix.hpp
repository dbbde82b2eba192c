#pragma once

// Dense exact rational matrices: just enough linear algebra for the
// threshold computations (products, Gauss-Jordan inverse, Neumann series).

#include <vector>

#include "lrs2mdp/rational.hpp"

namespace lrs2mdp {

class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}
  static RatMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const Rational& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

  RatMatrix operator*(const RatMatrix& o) const;
  RatMatrix operator+(const RatMatrix& o) const;
  RatMatrix operator-(const RatMatrix& o) const;
  RatMatrix scaled(const Rational& s) const;
  std::vector<Rational> apply(const std::vector<Rational>& v) const;

  // max_i sum_j |a_ij|
  Rational inf_norm() const;

  bool operator==(const RatMatrix& o) const = default;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

// Exact Gauss-Jordan with a cheapest-entry pivot heuristic (correct for any
// nonzero pivot). Throws std::invalid_argument on singular input.
RatMatrix mat_inverse(const RatMatrix& m);

// (I - scale*A)^{-1}; requires ||scale*A||_inf < 1 (checked), which makes the
// series sum_n (scale*A)^n converge to it.
RatMatrix neumann(const RatMatrix& a, const Rational& scale);

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b);

}  // namespace lrs2mdp
