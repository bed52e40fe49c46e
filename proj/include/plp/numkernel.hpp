#pragma once

#include "plp/errors.hpp"
#include "plp/rational.hpp"

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace plp {

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RatVec = Vec<Rat>;
using RatMat = Mat<Rat>;

class SingularMatrix : public Error {
 public:
  SingularMatrix() : Error("singular matrix") {}
};

namespace detail {

template <class Scalar>
Scalar magnitude(const Scalar& x) {
  using std::abs;
  return abs(x);
}

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rat& x) { return x.is_zero(); }

}  // namespace detail

/// Solves M·X = R by Gaussian elimination with partial pivoting on the
/// largest pivot magnitude. R may have several columns; all of them share
/// one elimination. Throws SingularMatrix when rank(M) < M.rows().
template <class DerivedM, class DerivedR>
Mat<typename DerivedM::Scalar> gauss_solve_multi(const Eigen::MatrixBase<DerivedM>& M,
                                                 const Eigen::MatrixBase<DerivedR>& R) {
  using Scalar = typename DerivedM::Scalar;
  const Eigen::Index k = M.rows();
  if (M.cols() != k || R.rows() != k) throw Error("gauss_solve: dimension mismatch");

  Mat<Scalar> a = M;
  Mat<Scalar> x = R;
  std::vector<Eigen::Index> support;  // nonzero columns of the pivot row
  for (Eigen::Index col = 0; col < k; ++col) {
    Eigen::Index pivot = -1;
    Scalar best(0);
    for (Eigen::Index r = col; r < k; ++r) {
      if (detail::is_zero(a(r, col))) continue;
      Scalar mag = detail::magnitude(a(r, col));
      if (pivot < 0 || mag > best) {
        pivot = r;
        best = std::move(mag);
      }
    }
    if (pivot < 0) throw SingularMatrix();
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      x.row(pivot).swap(x.row(col));
    }
    support.clear();
    for (Eigen::Index c = col + 1; c < k; ++c)
      if (!detail::is_zero(a(col, c))) support.push_back(c);
    const Scalar inv = Scalar(1) / a(col, col);
    for (Eigen::Index r = col + 1; r < k; ++r) {
      if (detail::is_zero(a(r, col))) continue;
      const Scalar f = a(r, col) * inv;
      a(r, col) = Scalar(0);
      for (Eigen::Index c : support) a(r, c) -= f * a(col, c);
      for (Eigen::Index c = 0; c < x.cols(); ++c)
        if (!detail::is_zero(x(col, c))) x(r, c) -= f * x(col, c);
    }
  }
  for (Eigen::Index r = k - 1; r >= 0; --r) {
    for (Eigen::Index c = r + 1; c < k; ++c) {
      if (detail::is_zero(a(r, c))) continue;
      for (Eigen::Index j = 0; j < x.cols(); ++j)
        if (!detail::is_zero(x(c, j))) x(r, j) -= a(r, c) * x(c, j);
    }
    const Scalar inv = Scalar(1) / a(r, r);
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(r, j) *= inv;
  }
  return x;
}

template <class DerivedM, class DerivedR>
Vec<typename DerivedM::Scalar> gauss_solve(const Eigen::MatrixBase<DerivedM>& M,
                                           const Eigen::MatrixBase<DerivedR>& rhs) {
  return gauss_solve_multi(M, rhs).col(0);
}

/// Indices of a maximal linearly independent subset of the rows of M,
/// chosen greedily in row order.
std::vector<int> independent_rows(const RatMat& M);

inline RatVec rat_vec(std::initializer_list<Rat> values) {
  RatVec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const Rat& x : values) v(i++) = x;
  return v;
}

/// Largest absolute entry, zero for empty vectors.
Rat max_abs(const RatVec& v);

Vec<double> to_float(const RatVec& v);
Mat<double> to_float(const RatMat& m);

std::string format_vec(const RatVec& v);

}  // namespace plp
