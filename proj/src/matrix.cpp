#include "lrs2mdp/matrix.hpp"

#include <stdexcept>

namespace lrs2mdp {

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("RatMatrix: dimension mismatch in product");
  RatMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const Rational& v = at(i, k);
      if (v.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) {
        if (o.at(k, j).is_zero()) continue;
        r.at(i, j) += v * o.at(k, j);
      }
    }
  }
  return r;
}

RatMatrix RatMatrix::operator+(const RatMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("RatMatrix: dimension mismatch in sum");
  RatMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

RatMatrix RatMatrix::operator-(const RatMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("RatMatrix: dimension mismatch in diff");
  RatMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

RatMatrix RatMatrix::scaled(const Rational& s) const {
  RatMatrix r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
  return r;
}

std::vector<Rational> RatMatrix::apply(const std::vector<Rational>& v) const {
  if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("RatMatrix: vector length mismatch");
  std::vector<Rational> r(static_cast<size_t>(rows_));
  for (int i = 0; i < rows_; ++i) {
    Rational s = 0;
    for (int j = 0; j < cols_; ++j) {
      if (!at(i, j).is_zero()) s += at(i, j) * v[static_cast<size_t>(j)];
    }
    r[static_cast<size_t>(i)] = s;
  }
  return r;
}

Rational RatMatrix::inf_norm() const {
  Rational best = 0;
  for (int i = 0; i < rows_; ++i) {
    Rational row = 0;
    for (int j = 0; j < cols_; ++j) row += at(i, j).abs();
    best = max(best, row);
  }
  return best;
}

namespace {
// Pivot preference: fewer total digits in numerator+denominator keeps the
// intermediate entries small. Any nonzero pivot is correct.
size_t pivot_cost(const Rational& r) {
  return mpz_sizeinbase(r.num().get_mpz_t(), 2) + mpz_sizeinbase(r.den().get_mpz_t(), 2);
}
}  // namespace

RatMatrix mat_inverse(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("mat_inverse: matrix not square");
  const int n = m.rows();
  RatMatrix a = m;
  RatMatrix inv = RatMatrix::identity(n);
  std::vector<int> row_of_col(static_cast<size_t>(n), -1);
  std::vector<bool> used(static_cast<size_t>(n), false);

  for (int col = 0; col < n; ++col) {
    int pr = -1;
    size_t best = 0;
    for (int r = 0; r < n; ++r) {
      if (used[static_cast<size_t>(r)] || a.at(r, col).is_zero()) continue;
      size_t c = pivot_cost(a.at(r, col));
      if (pr < 0 || c < best) {
        pr = r;
        best = c;
      }
    }
    if (pr < 0) throw std::invalid_argument("mat_inverse: singular matrix");
    used[static_cast<size_t>(pr)] = true;
    row_of_col[static_cast<size_t>(col)] = pr;

    const Rational piv = a.at(pr, col);
    for (int j = 0; j < n; ++j) {
      a.at(pr, j) /= piv;
      inv.at(pr, j) /= piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == pr || a.at(r, col).is_zero()) continue;
      const Rational f = a.at(r, col);
      for (int j = 0; j < n; ++j) {
        if (!a.at(pr, j).is_zero()) a.at(r, j) -= f * a.at(pr, j);
        if (!inv.at(pr, j).is_zero()) inv.at(r, j) -= f * inv.at(pr, j);
      }
    }
  }

  RatMatrix out(n, n);
  for (int col = 0; col < n; ++col) {
    const int r = row_of_col[static_cast<size_t>(col)];
    for (int j = 0; j < n; ++j) out.at(col, j) = inv.at(r, j);
  }
  return out;
}

RatMatrix neumann(const RatMatrix& a, const Rational& scale) {
  if (a.rows() != a.cols()) throw std::invalid_argument("neumann: matrix not square");
  const RatMatrix sa = a.scaled(scale);
  if (!(sa.inf_norm() < Rational(1))) {
    throw std::invalid_argument("neumann: ||scale*A||_inf = " + sa.inf_norm().str() + " >= 1");
  }
  return mat_inverse(RatMatrix::identity(a.rows()) - sa);
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace lrs2mdp
