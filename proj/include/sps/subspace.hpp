#pragma once

// Subspaces of C^N and the linear-algebra primitives every fibre computation
// reduces to.
//
// A Subspace is stored either as a dense N x k matrix with orthonormal columns,
// or, when it is spanned by standard basis vectors, as the sorted list of those
// coordinates. Monomial ideals stay in coordinate form at every level, which is
// what keeps large-alphabet monomial systems within memory.

#include "sps/core.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <vector>

namespace sps {

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j1 = 0; j1 < a.cols(); ++j1) {
    for (Index i1 = 0; i1 < a.rows(); ++i1) {
      out.block(i1 * b.rows(), j1 * b.cols(), b.rows(), b.cols()) = a(i1, j1) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(Index ambient, const ToleranceConfig& tol = {}) {
    return from_coordinates(ambient, {}, tol);
  }

  static Subspace full(Index ambient, const ToleranceConfig& tol = {}) {
    std::vector<Index> all(static_cast<std::size_t>(ambient));
    for (Index i = 0; i < ambient; ++i) all[static_cast<std::size_t>(i)] = i;
    return from_coordinates(ambient, std::move(all), tol);
  }

  /// Takes ownership of a basis whose columns are already orthonormal.
  static Subspace from_orthonormal(Matrix basis, const ToleranceConfig& tol = {}) {
    Subspace s;
    s.ambient_ = basis.rows();
    s.coordinate_ = false;
    s.basis_ = std::move(basis);
    s.tol_ = tol;
    return s;
  }

  static Subspace from_coordinates(Index ambient, std::vector<Index> coords,
                                   const ToleranceConfig& tol = {}) {
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    if (!coords.empty() && (coords.front() < 0 || coords.back() >= ambient)) {
      throw Error(ErrorKind::OutOfRange, "coordinate outside the ambient space");
    }
    Subspace s;
    s.ambient_ = ambient;
    s.coordinate_ = true;
    s.coords_ = std::move(coords);
    s.tol_ = tol;
    return s;
  }

  Index ambient_dim() const noexcept { return ambient_; }
  Index dim() const noexcept {
    return coordinate_ ? static_cast<Index>(coords_.size()) : basis_.cols();
  }
  bool is_coordinate() const noexcept { return coordinate_; }
  const ToleranceConfig& tolerance() const noexcept { return tol_; }

  const std::vector<Index>& coordinates() const {
    if (!coordinate_) throw Error(ErrorKind::InvalidArgument, "subspace is not in coordinate form");
    return coords_;
  }

  /// Dense orthonormal basis; materialized on the fly for coordinate subspaces.
  Matrix basis() const {
    if (!coordinate_) return basis_;
    Matrix b = Matrix::Zero(ambient_, dim());
    for (std::size_t j = 0; j < coords_.size(); ++j) b(coords_[j], static_cast<Index>(j)) = 1.0;
    return b;
  }

  /// Reference to the stored dense basis; only valid in dense form.
  const Matrix& dense_basis() const {
    if (coordinate_) throw Error(ErrorKind::InvalidArgument, "subspace is in coordinate form");
    return basis_;
  }

  double orthonormality_residual() const {
    if (coordinate_) return 0.0;
    return residual_norm(basis_.adjoint() * basis_ - Matrix::Identity(dim(), dim()));
  }

  /// Orthogonal projection of x onto the subspace.
  Vector project(const Vector& x) const {
    if (x.size() != ambient_) throw Error(ErrorKind::DimensionMismatch, "vector length");
    if (!coordinate_) return basis_ * (basis_.adjoint() * x);
    Vector y = Vector::Zero(ambient_);
    for (Index c : coords_) y(c) = x(c);
    return y;
  }

  /// Basis coordinates of x (B^H x).
  Vector coords_of(const Vector& x) const {
    if (x.size() != ambient_) throw Error(ErrorKind::DimensionMismatch, "vector length");
    if (!coordinate_) return basis_.adjoint() * x;
    Vector y(dim());
    for (std::size_t j = 0; j < coords_.size(); ++j) y(static_cast<Index>(j)) = x(coords_[j]);
    return y;
  }

 private:
  Index ambient_ = 0;
  bool coordinate_ = true;
  Matrix basis_;
  std::vector<Index> coords_;
  ToleranceConfig tol_;
};

namespace detail {

inline void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "subspaces live in different ambient spaces");
  }
}

/// Threshold on sin(angle) equivalent to cos(angle) > 1 - rank_rel_tol.
inline double sine_threshold(const ToleranceConfig& tol) { return std::sqrt(2.0 * tol.rank_rel_tol); }

/// Columns with exactly one nonzero entry, or std::nullopt if any column is not of that shape.
inline std::optional<std::vector<Index>> coordinate_pattern(const Matrix& columns) {
  std::vector<Index> coords;
  for (Index j = 0; j < columns.cols(); ++j) {
    Index hit = -1;
    for (Index i = 0; i < columns.rows(); ++i) {
      if (columns(i, j) != Complex(0.0, 0.0)) {
        if (hit >= 0) return std::nullopt;
        hit = i;
      }
    }
    if (hit >= 0) coords.push_back(hit);
  }
  return coords;
}

/// Orthonormal complement of span(u) inside C^k, u having orthonormal columns.
inline Matrix orthonormal_complement(const Matrix& u, Index k) {
  const Index s = u.cols();
  if (s == 0) return Matrix::Identity(k, k);
  if (s >= k) return Matrix(k, 0);
  Eigen::HouseholderQR<Matrix> qr(u);
  Matrix q = qr.householderQ() * Matrix::Identity(k, k);
  return q.rightCols(k - s);
}

/// Singular values and thin left vectors of m. Eigen's BDCSVD occasionally loses
/// orthogonality on strongly repeated singular values; those results are redone with JacobiSVD.
struct ThinSvd {
  Eigen::VectorXd sigma;
  Matrix u;
};

inline ThinSvd thin_svd(const Matrix& m) {
  const Index k = std::min(m.rows(), m.cols());
  if (k == 0) return {Eigen::VectorXd(0), Matrix(m.rows(), 0)};
  {
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
    ThinSvd out{svd.singularValues(), svd.matrixU()};
    const double scale = std::max(1.0, out.sigma(0));
    const double slack = static_cast<double>(k);
    const double orth = (out.u.adjoint() * out.u - Matrix::Identity(k, k)).norm();
    const Matrix proj = out.u.adjoint() * m;
    double worst = 0.0;
    for (Index i = 0; i < k; ++i) worst = std::max(worst, std::abs(proj.row(i).norm() - out.sigma(i)));
    const double leak = (m - out.u * proj).norm();
    if (orth < 1e-10 * slack && worst < 1e-12 * scale * slack && leak < 1e-12 * scale * slack) return out;
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  return {svd.singularValues(), svd.matrixU()};
}

}  // namespace detail

/// Orthonormal basis of the column span; rank decided by sigma >= rank_rel_tol * sigma_max.
inline Subspace span(const Matrix& columns, const ToleranceConfig& tol = {}) {
  tol.validate();
  const Index n = columns.rows();
  if (columns.cols() == 0) return Subspace::zero(n, tol);
  if (auto coords = detail::coordinate_pattern(columns)) {
    return Subspace::from_coordinates(n, std::move(*coords), tol);
  }
  const auto svd = detail::thin_svd(columns);
  const auto& sigma = svd.sigma;
  if (sigma.size() == 0 || sigma(0) == 0.0) return Subspace::zero(n, tol);
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) >= tol.rank_rel_tol * sigma(0)) ++rank;
  return Subspace::from_orthonormal(svd.u.leftCols(rank), tol);
}

inline Subspace span(const std::vector<Vector>& vectors, Index ambient, const ToleranceConfig& tol = {}) {
  Matrix m(ambient, static_cast<Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != ambient) {
      throw Error(ErrorKind::DimensionMismatch, "vector " + std::to_string(j) + " has the wrong length");
    }
    m.col(static_cast<Index>(j)) = vectors[j];
  }
  return span(m, tol);
}

inline Subspace complement(const Subspace& s) {
  if (s.is_coordinate()) {
    std::vector<Index> rest;
    rest.reserve(static_cast<std::size_t>(s.ambient_dim() - s.dim()));
    auto it = s.coordinates().begin();
    for (Index i = 0; i < s.ambient_dim(); ++i) {
      if (it != s.coordinates().end() && *it == i) {
        ++it;
      } else {
        rest.push_back(i);
      }
    }
    return Subspace::from_coordinates(s.ambient_dim(), std::move(rest), s.tolerance());
  }
  return Subspace::from_orthonormal(detail::orthonormal_complement(s.dense_basis(), s.ambient_dim()),
                                    s.tolerance());
}

/// Intersection via principal angles: directions with cos(angle) > 1 - rank_rel_tol.
inline Subspace intersect(const Subspace& a, const Subspace& b) {
  detail::require_same_ambient(a, b);
  const auto& tol = a.tolerance();
  if (a.is_coordinate() && b.is_coordinate()) {
    std::vector<Index> common;
    std::set_intersection(a.coordinates().begin(), a.coordinates().end(), b.coordinates().begin(),
                          b.coordinates().end(), std::back_inserter(common));
    return Subspace::from_coordinates(a.ambient_dim(), std::move(common), tol);
  }
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient_dim(), tol);
  const Matrix ba = a.basis();
  const Matrix cross = ba.adjoint() * b.basis();
  const auto svd = detail::thin_svd(cross);
  const auto& cosines = svd.sigma;
  Index keep = 0;
  while (keep < cosines.size() && cosines(keep) > 1.0 - tol.rank_rel_tol) ++keep;
  Matrix basis = ba * svd.u.leftCols(keep);
  // Re-orthonormalize to remove the O(tol) drift of nearly-1 cosines.
  if (keep > 0) {
    Eigen::HouseholderQR<Matrix> qr(basis);
    basis = qr.householderQ() * Matrix::Identity(basis.rows(), keep);
  }
  return Subspace::from_orthonormal(std::move(basis), tol);
}

/// span(a ∪ b)
inline Subspace join(const Subspace& a, const Subspace& b) {
  detail::require_same_ambient(a, b);
  if (a.is_coordinate() && b.is_coordinate()) {
    std::vector<Index> all;
    std::set_union(a.coordinates().begin(), a.coordinates().end(), b.coordinates().begin(),
                   b.coordinates().end(), std::back_inserter(all));
    return Subspace::from_coordinates(a.ambient_dim(), std::move(all), a.tolerance());
  }
  Matrix both(a.ambient_dim(), a.dim() + b.dim());
  both << a.basis(), b.basis();
  return span(both, a.tolerance());
}

inline Subspace tensor(const Subspace& a, const Subspace& b) {
  const Index n2 = b.ambient_dim();
  if (a.is_coordinate() && b.is_coordinate()) {
    std::vector<Index> coords;
    coords.reserve(static_cast<std::size_t>(a.dim() * b.dim()));
    for (Index i : a.coordinates())
      for (Index j : b.coordinates()) coords.push_back(i * n2 + j);
    return Subspace::from_coordinates(a.ambient_dim() * n2, std::move(coords), a.tolerance());
  }
  return Subspace::from_orthonormal(kron(a.basis(), b.basis()), a.tolerance());
}

/// Largest distance of a unit basis vector of `inner` from `outer`.
inline double containment_residual(const Subspace& outer, const Subspace& inner) {
  detail::require_same_ambient(outer, inner);
  if (inner.dim() == 0) return 0.0;
  if (outer.is_coordinate() && inner.is_coordinate()) {
    return std::includes(outer.coordinates().begin(), outer.coordinates().end(),
                         inner.coordinates().begin(), inner.coordinates().end())
               ? 0.0
               : 1.0;
  }
  const Matrix bi = inner.basis();
  Matrix residual;
  if (outer.is_coordinate()) {
    residual = bi;
    for (Index c : outer.coordinates()) residual.row(c).setZero();
  } else {
    const Matrix& bo = outer.dense_basis();
    residual = bi - bo * (bo.adjoint() * bi);
  }
  return residual.colwise().norm().maxCoeff();
}

/// inner ⊆ outer up to check_abs_tol.
inline bool contains(const Subspace& outer, const Subspace& inner) {
  return containment_residual(outer, inner) <= outer.tolerance().check_abs_tol;
}

inline bool equal(const Subspace& a, const Subspace& b) {
  detail::require_same_ambient(a, b);
  return a.dim() == b.dim() && contains(a, b);
}

inline Matrix projector(const Subspace& s) {
  if (s.is_coordinate()) {
    Matrix p = Matrix::Zero(s.ambient_dim(), s.ambient_dim());
    for (Index c : s.coordinates()) p(c, c) = 1.0;
    return p;
  }
  const Matrix& b = s.dense_basis();
  return b * b.adjoint();
}

/// Orthonormal basis of {y : ‖M y‖ small}, treating singular values <= threshold as zero.
inline Matrix null_space(const Matrix& m, double threshold) {
  const Index k = m.cols();
  if (m.rows() == 0 || k == 0) return Matrix::Identity(k, k);
  const auto svd = detail::thin_svd(m.adjoint());
  Index rank = 0;
  while (rank < svd.sigma.size() && svd.sigma(rank) > threshold) ++rank;
  if (svd.u.cols() == k) return svd.u.rightCols(k - rank);
  return detail::orthonormal_complement(svd.u.leftCols(rank), k);
}

/// Subspace of `s` annihilated by the rows of `constraint` (an operator on the ambient space).
inline Subspace kernel_within(const Subspace& s, const Matrix& constraint) {
  if (constraint.cols() != s.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "constraint does not act on the ambient space");
  }
  if (constraint.rows() == 0 || s.dim() == 0) return s;
  // The threshold is relative to the constraint's operator norm.
  const double top = detail::thin_svd(constraint).sigma(0);
  if (top == 0.0) return s;
  const Matrix b = s.basis();
  Matrix y = null_space(constraint * b / top, detail::sine_threshold(s.tolerance()));
  return Subspace::from_orthonormal(b * y, s.tolerance());
}

}  // namespace sps
