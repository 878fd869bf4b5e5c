#pragma once

// Truncated Fock spaces of subproduct systems, their Toeplitz shifts, and the
// universal Toeplitz relations of Temperley-Lieb systems.

#include "sps/tl.hpp"

namespace sps {

/// Levels 0..N of ⊕ H_n; level n is identified with the coordinates of its fibre basis.
class TruncatedFock {
 public:
  TruncatedFock(const SubproductSystem& s, int levels) : d_(static_cast<Index>(s.d())), levels_(levels) {
    if (levels < 0) throw Error(ErrorKind::OutOfRange, "level count must be >= 0");
    for (int n = 0; n <= levels; ++n) {
      bases_.push_back(s.fibre(n).basis());
      offsets_.push_back(total_);
      total_ += bases_.back().cols();
    }
  }

  Index d() const noexcept { return d_; }
  int levels() const noexcept { return levels_; }
  Index total_dim() const noexcept { return total_; }
  Index offset(int n) const { return offsets_.at(static_cast<std::size_t>(n)); }
  Index level_dim(int n) const { return bases_.at(static_cast<std::size_t>(n)).cols(); }
  const Matrix& fibre_basis(int n) const { return bases_.at(static_cast<std::size_t>(n)); }

  /// Projection onto levels lo..hi (empty range gives zero).
  Matrix level_range_projector(int lo, int hi) const {
    Matrix p = Matrix::Zero(total_, total_);
    for (int n = std::max(lo, 0); n <= std::min(hi, levels_); ++n) {
      for (Index k = 0; k < level_dim(n); ++k) p(offset(n) + k, offset(n) + k) = 1.0;
    }
    return p;
  }
  Matrix level_projector(int n) const { return level_range_projector(n, n); }
  Matrix vacuum_projector() const { return level_projector(0); }

 private:
  Index d_;
  int levels_;
  std::vector<Matrix> bases_;
  std::vector<Index> offsets_;
  Index total_ = 0;
};

inline TruncatedFock build_fock(const SubproductSystem& s, int levels) { return TruncatedFock(s, levels); }

struct ToeplitzOp {
  Matrix matrix;
  Vector symbol;
};

namespace detail {

/// Block of T_ξ from level n to level n+1: f_{n+1}(ξ ⊗ ·) in fibre coordinates.
inline Matrix toeplitz_block(const TruncatedFock& f, const Vector& xi, int n) {
  const Matrix& bn = f.fibre_basis(n);
  const Matrix& bn1 = f.fibre_basis(n + 1);
  const Index dn = bn.rows();
  Matrix block = Matrix::Zero(bn1.cols(), bn.cols());
  for (Index i = 0; i < f.d(); ++i) {
    if (xi(i) == Complex(0.0)) continue;
    block += xi(i) * (bn1.middleRows(i * dn, dn).adjoint() * bn);
  }
  return block;
}

}  // namespace detail

/// T_ξ ζ = f_{n+1}(ξ ⊗ ζ); the top level maps to zero.
inline ToeplitzOp toeplitz(const TruncatedFock& f, const Vector& xi) {
  if (xi.size() != f.d()) throw Error(ErrorKind::DimensionMismatch, "symbol length must equal d");
  ToeplitzOp op{Matrix::Zero(f.total_dim(), f.total_dim()), xi};
  for (int n = 0; n < f.levels(); ++n) {
    op.matrix.block(f.offset(n + 1), f.offset(n), f.level_dim(n + 1), f.level_dim(n)) =
        detail::toeplitz_block(f, xi, n);
  }
  return op;
}

inline ToeplitzOp shift(const TruncatedFock& f, Index i) {
  Vector e = Vector::Zero(f.d());
  e(i) = 1.0;
  return toeplitz(f, e);
}

/// Matrix-free T_ξ x (or T_ξ^* x), level by level.
inline Vector apply_toeplitz(const TruncatedFock& f, const Vector& xi, const Vector& x, bool adjoint = false) {
  if (x.size() != f.total_dim()) throw Error(ErrorKind::DimensionMismatch, "vector length");
  Vector y = Vector::Zero(f.total_dim());
  for (int n = 0; n < f.levels(); ++n) {
    const Matrix block = detail::toeplitz_block(f, xi, n);
    if (adjoint) {
      y.segment(f.offset(n), f.level_dim(n)) += block.adjoint() * x.segment(f.offset(n + 1), f.level_dim(n + 1));
    } else {
      y.segment(f.offset(n + 1), f.level_dim(n + 1)) += block * x.segment(f.offset(n), f.level_dim(n));
    }
  }
  return y;
}

/// |(1 - Σ T_i T_i^* - e_0) restricted to levels <= N-1|.
inline double vacuum_identity_residual(const TruncatedFock& f) {
  const Index t = f.total_dim();
  Matrix sum = Matrix::Zero(t, t);
  for (Index i = 0; i < f.d(); ++i) {
    const Matrix s = shift(f, i).matrix;
    sum += s * s.adjoint();
  }
  const Matrix zone = f.level_range_projector(0, f.levels() - 1);
  return residual_norm((Matrix::Identity(t, t) - sum - f.vacuum_projector()) * zone);
}

struct RelationResidual {
  std::string name;
  double residual = 0.0;
  bool passed = false;
};

struct RelationReport {
  int zone_max_level = 0;  // relations are evaluated on input levels 0..zone_max_level
  double tolerance = 0.0;
  double q = 1.0;
  std::vector<RelationResidual> relations;
  bool all_passed = false;
};

/// Evaluates the four relation families without checking the Temperley-Lieb precondition.
inline RelationReport evaluate_universal_relations(const TruncatedFock& f, const CoeffMatrix& a, double q,
                                                   const ToleranceConfig& tol = {}) {
  const Index d = f.d();
  if (a.size() != d) throw Error(ErrorKind::DimensionMismatch, "coefficient matrix size must equal d");
  if (f.levels() < 2) throw Error(ErrorKind::InsufficientLevels, "need at least 3 levels");
  const Index t = f.total_dim();
  const int zone_top = f.levels() - 2;
  const Matrix zone = f.level_range_projector(0, zone_top);
  const Matrix id = Matrix::Identity(t, t);

  std::vector<Matrix> s, sh;
  for (Index i = 0; i < d; ++i) {
    s.push_back(shift(f, i).matrix);
    sh.push_back(s.back().adjoint());
  }
  Matrix phi_diag = Matrix::Zero(t, t);
  for (int n = 0; n <= f.levels(); ++n) {
    for (Index k = 0; k < f.level_dim(n); ++k) phi_diag(f.offset(n) + k, f.offset(n) + k) = phi(n, q);
  }

  RelationReport rep;
  rep.zone_max_level = zone_top;
  rep.tolerance = tol.check_abs_tol;
  rep.q = q;

  Matrix rel1 = Matrix::Zero(t, t);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      if (a.entries(i, j) != Complex(0.0)) rel1 += a.entries(i, j) * (s[i] * s[j]);
    }
  rep.relations.push_back({"sum a_ij S_i S_j = 0", residual_norm(rel1 * zone)});

  Matrix rel2 = Matrix::Zero(t, t);
  for (Index i = 0; i < d; ++i) rel2 += s[i] * sh[i];
  rep.relations.push_back({"sum S_i S_i^* = 1 - e_0", residual_norm((rel2 - id + f.vacuum_projector()) * zone)});

  // S_k S_l^* products, reused for every (i, j)
  std::vector<Matrix> sksl(static_cast<std::size_t>(d * d));
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l) sksl[static_cast<std::size_t>(k * d + l)] = (s[k] * (sh[l] * zone)).eval();
  double worst3 = 0.0;
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      Matrix inner = Matrix::Zero(t, t);
      for (Index k = 0; k < d; ++k)
        for (Index l = 0; l < d; ++l) {
          const Complex c = a.entries(i, k) * std::conj(a.entries(j, l));
          if (c != Complex(0.0)) inner += c * sksl[static_cast<std::size_t>(k * d + l)];
        }
      Matrix r = sh[i] * (s[j] * zone) + phi_diag * inner - (i == j ? zone : Matrix::Zero(t, t));
      worst3 = std::max(worst3, residual_norm(r));
    }
  }
  rep.relations.push_back({"S_i^* S_j + phi sum a_ik conj(a_jl) S_k S_l^* = delta_ij", worst3});

  double worst4 = 0.0;
  for (int n = 0; n <= f.levels(); ++n) {
    const Matrix fn = f.level_projector(n);
    const Matrix gfn = f.level_range_projector(n - 1, n - 1);
    for (Index i = 0; i < d; ++i) worst4 = std::max(worst4, residual_norm((fn * s[i] - s[i] * gfn) * zone));
  }
  rep.relations.push_back({"f S_i = S_i gamma(f)", worst4});

  rep.all_passed = true;
  for (auto& r : rep.relations) {
    r.passed = r.residual <= tol.check_abs_tol;
    rep.all_passed = rep.all_passed && r.passed;
  }
  return rep;
}

/// Universal Toeplitz relations for a TL coefficient matrix (A·conj(A) unitary, Tr(A^H A) = q + 1/q).
inline RelationReport check_universal_relations(const TruncatedFock& f, const CoeffMatrix& a, double q,
                                                const ToleranceConfig& tol = {}) {
  if (!(q > 0.0 && q <= 1.0)) throw Error(ErrorKind::QOutOfRange, "q must lie in (0, 1]");
  const Matrix u = a.entries * a.entries.conjugate();
  const double unit_res = residual_norm(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
  if (unit_res > tol.check_abs_tol) {
    throw Error(ErrorKind::NotTemperleyLieb, "A·conj(A) is not unitary (residual " + std::to_string(unit_res) + ")");
  }
  const double trace = a.entries.squaredNorm();
  if (std::abs(trace - (q + 1.0 / q)) > tol.check_abs_tol) {
    throw Error(ErrorKind::NotTemperleyLieb, "Tr(A^H A) = " + std::to_string(trace) + " but q + 1/q = " +
                                                 std::to_string(q + 1.0 / q));
  }
  return evaluate_universal_relations(f, a, q, tol);
}

}  // namespace sps
