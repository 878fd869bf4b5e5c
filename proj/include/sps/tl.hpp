#pragma once

// Temperley-Lieb polynomials: detection, normalization, q-numbers, the isometries w_n
// for single systems and free products, the unitaries W_n^R and the compact defect.

#include "sps/freeprod.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace sps {

/// [n]_q = q^{n-1} + q^{n-3} + ... + q^{1-n}; equals n at q = 1.
inline double q_number(int n, double q) {
  if (n < 0) throw Error(ErrorKind::OutOfRange, "q-number needs n >= 0");
  if (!(q > 0.0 && q <= 1.0)) throw Error(ErrorKind::OutOfRange, "q must lie in (0, 1]");
  if (q == 1.0) return n;
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += std::pow(q, n - 1 - 2 * k);
  return s;
}

inline double phi(int n, double q) { return q_number(n, q) / q_number(n + 1, q); }

/// Root q in (0, 1] of q + 1/q = trace.
inline double q_from_trace(double trace, double tol = 1e-8) {
  if (trace < 2.0 - tol) throw Error(ErrorKind::TraceBelowTwo, "Tr(A^H A) = " + std::to_string(trace) + " < 2");
  if (trace <= 2.0) return 1.0;
  return 2.0 / (trace + std::sqrt(trace * trace - 4.0));
}

struct TLCheck {
  bool is_tl = false;
  std::optional<double> lambda;  // from (e⊗1)(1⊗e)(e⊗1) = λ^{-1}(e⊗1)
  double projection_residual = 0.0;  // relative, route (a)
  double unitarity_residual = 0.0;   // relative, route (b)
};

namespace detail {

/// Relative defect of A·conj(A) from being a scalar multiple of a unitary.
inline double scaled_unitarity_residual(const Matrix& a) {
  const Matrix u = a * a.conjugate();
  const double d = static_cast<double>(a.rows());
  const double s = u.squaredNorm() / d;
  if (s <= 0.0) return std::numeric_limits<double>::infinity();
  return residual_norm(u.adjoint() * u - s * Matrix::Identity(a.rows(), a.rows())) / (s * std::sqrt(d));
}

}  // namespace detail

/// Tests both characterizations of a Temperley-Lieb polynomial and cross-validates them.
inline TLCheck is_temperley_lieb(const NCPoly& p, const ToleranceConfig& tol = {}) {
  const CoeffMatrix cm = coeff_matrix(p);
  const Index d = cm.size();
  const Vector v = cm.vec().normalized();
  TLCheck out;

  // (a) projection identity. Explicit d^3 x d^3 operators when small, else the
  // equivalent reduced form (v⊗1)^H(1⊗v).
  double ratio_re = 0.0, ratio_im = 0.0;
  if (d <= 6) {
    const Matrix e = v * v.adjoint();
    const Matrix id = Matrix::Identity(d, d);
    const Matrix e1 = kron(e, id);
    const Matrix e2 = kron(id, e);
    const Matrix m = e1 * e2 * e1;
    Index bi = 0, bj = 0;
    e1.cwiseAbs().maxCoeff(&bi, &bj);
    const Complex ratio = m(bi, bj) / e1(bi, bj);
    ratio_re = ratio.real();
    ratio_im = ratio.imag();
    out.projection_residual = residual_norm(m - ratio * e1) / (std::max(std::abs(ratio), 1e-300) * std::sqrt(d));
  } else {
    Matrix k(d, d);  // k(b, c) = <v ⊗ e_b, e_c ⊗ v>
    for (Index b = 0; b < d; ++b)
      for (Index c = 0; c < d; ++c) {
        Complex s = 0.0;
        for (Index x = 0; x < d; ++x) s += std::conj(v(c * d + x)) * v(x * d + b);
        k(b, c) = s;
      }
    const Matrix kk = k * k.adjoint();
    const Complex ratio = kk(0, 0);
    ratio_re = ratio.real();
    ratio_im = ratio.imag();
    out.projection_residual =
        residual_norm(kk - ratio * Matrix::Identity(d, d)) / (std::max(std::abs(ratio), 1e-300) * std::sqrt(d));
  }
  const bool route_a = ratio_re > tol.check_abs_tol && std::abs(ratio_im) <= tol.check_abs_tol &&
                       out.projection_residual <= tol.check_abs_tol;

  // (b) A·conj(A) unitary up to scalar.
  out.unitarity_residual = detail::scaled_unitarity_residual(cm.entries);
  const bool route_b = out.unitarity_residual <= tol.check_abs_tol;

  if (route_a != route_b) {
    throw Error(ErrorKind::InconsistentCharacterizations,
                "projection identity and unitarity of A·conj(A) disagree (residuals " +
                    std::to_string(out.projection_residual) + ", " + std::to_string(out.unitarity_residual) + ")");
  }
  out.is_tl = route_a;
  if (route_a) out.lambda = 1.0 / ratio_re;
  return out;
}

struct TLSystem {
  CoeffMatrix a;    // normalized: A·conj(A) unitary
  double q = 1.0;   // Tr(A^H A) = q + 1/q
  Vector v;         // vec(A) / |vec(A)|
  double lambda = 0.0;
  SubproductSystem system;

  std::size_t d() const { return system.d(); }
};

/// Rescales P so that A·conj(A) is unitary, solves for q, and builds the system to max_level.
inline TLSystem normalize_tl(const NCPoly& p, int max_level, const ToleranceConfig& tol = {}) {
  const auto check = is_temperley_lieb(p, tol);
  if (!check.is_tl) throw Error(ErrorKind::NotTemperleyLieb, "A·conj(A) is not unitary up to scalar");
  CoeffMatrix a = coeff_matrix(p);
  const Index d = a.size();
  const double sigma = std::sqrt((a.entries * a.entries.conjugate()).squaredNorm() / static_cast<double>(d));
  a.entries /= std::sqrt(sigma);
  const double trace = a.entries.squaredNorm();
  const double q = q_from_trace(trace, tol.check_abs_tol);
  const NCPoly normalized = poly_from_coeff_matrix(a);
  QuadraticIdeal ideal(static_cast<std::size_t>(d), {normalized});
  auto system = build_quadratic(ideal, max_level, tol);
  system.set_tl_factor_dims({static_cast<std::size_t>(d)});
  Vector v = a.vec().normalized();
  return TLSystem{std::move(a), q, std::move(v), *check.lambda, std::move(system)};
}

// ---------------------------------------------------------------------------
// w-maps. Everything acts on ambient tensor powers of C^D, D the total number of
// variables; fibre bases are embedded there.

namespace detail {

/// Applies the orthogonal projector G G^H to the tensor legs [before, before + nlegs) of
/// each column of x (x has D^(before + nlegs + after) rows), in place.
inline void project_legs(Matrix& x, Index big_d, int before, int nlegs, int after, const Matrix& g) {
  const Index post = ipow(big_d, after);
  const Index mid = ipow(big_d, nlegs);
  const Index pre = ipow(big_d, before);
  if (g.rows() != mid) throw Error(ErrorKind::DimensionMismatch, "projector basis has the wrong size");
  const Matrix gc = g.conjugate();
  const Matrix gt = g.transpose();
  for (Index col = 0; col < x.cols(); ++col) {
    for (Index p = 0; p < pre; ++p) {
      Eigen::Map<Matrix> chunk(x.data() + col * x.rows() + p * mid * post, post, mid);
      if (g.cols() == 0) {
        chunk.setZero();
      } else {
        Matrix tmp = chunk * gc;
        chunk = tmp * gt;
      }
    }
  }
}

}  // namespace detail

/// One Temperley-Lieb factor seen inside a free product on D variables.
struct EmbeddedTLFactor {
  Index offset = 0;
  Index d = 0;
  double q = 1.0;
  Vector v;                     // in C^{D^2}
  std::vector<Matrix> fibres;   // fibres[k]: embedded basis of H_k, D^k x δ_k
};

/// Context for the maps w^i on a free product of TL factors (a single factor gives w_n).
class WMapContext {
 public:
  WMapContext(const std::vector<const TLSystem*>& factors, int max_fibre) {
    if (factors.empty()) throw Error(ErrorKind::InvalidArgument, "no factors");
    for (const auto* f : factors) big_d_ += static_cast<Index>(f->d());
    Index offset = 0;
    for (const auto* f : factors) {
      EmbeddedTLFactor e;
      e.offset = offset;
      e.d = static_cast<Index>(f->d());
      e.q = f->q;
      const Subspace vspace = Subspace::from_orthonormal(Matrix(f->v), f->system.relations().tolerance());
      e.v = embed_letters(vspace, e.d, offset, big_d_, 2).dense_basis().col(0);
      for (int k = 0; k <= max_fibre; ++k) {
        e.fibres.push_back(embed_letters(f->system.fibre(k), e.d, offset, big_d_, k).basis());
      }
      offset += e.d;
      factors_.push_back(std::move(e));
    }
  }

  Index big_d() const noexcept { return big_d_; }
  std::size_t factor_count() const noexcept { return factors_.size(); }
  const EmbeddedTLFactor& factor(std::size_t i) const { return factors_.at(i); }

  /// Length of the maximal suffix of the word (index over D letters, m legs) in factor i.
  int tail_length(std::size_t i, Index word, int m) const {
    const auto& f = factors_[i];
    int t = 0;
    for (; t < m; ++t) {
      const Index letter = word % big_d_;
      if (letter < f.offset || letter >= f.offset + f.d) break;
      word /= big_d_;
    }
    return t;
  }

  /// w^i on level m applied to the columns of x (ambient D^m): tail-t component of ξ goes to
  /// ([2]_{q_i} φ_i(t+1))^{1/2} (1 ⊗ g_{t+1} ⊗ 1)(ξ_t ⊗ v_i).
  Matrix apply(std::size_t i, const Matrix& x, int m) const {
    const auto& f = factors_.at(i);
    require_fibre(f, m + 1);
    const Index dm = ipow(big_d_, m);
    if (x.rows() != dm) throw Error(ErrorKind::DimensionMismatch, "input is not in the level-m ambient space");
    const Index d2 = big_d_ * big_d_;
    const auto tails = tails_for(i, m);
    Matrix out = Matrix::Zero(dm * d2, x.cols());
    for (int t = 0; t <= m; ++t) {
      Matrix y = Matrix::Zero(dm * d2, x.cols());
      bool any = false;
      for (Index z = 0; z < dm; ++z) {
        if (tails[static_cast<std::size_t>(z)] != t) continue;
        for (Index c = 0; c < x.cols(); ++c) {
          const Complex xz = x(z, c);
          if (xz == Complex(0.0)) continue;
          any = true;
          y.col(c).segment(z * d2, d2) = xz * f.v;
        }
      }
      if (!any) continue;
      detail::project_legs(y, big_d_, m - t, t + 1, 1, f.fibres[static_cast<std::size_t>(t + 1)]);
      out += coefficient(f, t) * y;
    }
    return out;
  }

  /// Adjoint of `apply` (same formula, read backwards).
  Matrix apply_adjoint(std::size_t i, const Matrix& y, int m) const {
    const auto& f = factors_.at(i);
    require_fibre(f, m + 1);
    const Index dm = ipow(big_d_, m);
    const Index d2 = big_d_ * big_d_;
    if (y.rows() != dm * d2) throw Error(ErrorKind::DimensionMismatch, "input is not in the level-(m+2) space");
    const auto tails = tails_for(i, m);
    Matrix out = Matrix::Zero(dm, y.cols());
    for (int t = 0; t <= m; ++t) {
      if (std::find(tails.begin(), tails.end(), t) == tails.end()) continue;
      Matrix z = y;
      detail::project_legs(z, big_d_, m - t, t + 1, 1, f.fibres[static_cast<std::size_t>(t + 1)]);
      const double c = coefficient(f, t);
      for (Index w = 0; w < dm; ++w) {
        if (tails[static_cast<std::size_t>(w)] != t) continue;
        for (Index col = 0; col < y.cols(); ++col) {
          out(w, col) += c * f.v.dot(z.col(col).segment(w * d2, d2));
        }
      }
    }
    return out;
  }

  /// (1 ⊗ w^i) on level m: the first leg is left alone, w^i acts on the remaining m - 1 legs.
  Matrix apply_shifted(std::size_t i, const Matrix& x, int m) const {
    const Index rest = ipow(big_d_, m - 1);
    const Index out_rest = rest * big_d_ * big_d_;
    Matrix out(big_d_ * out_rest, x.cols());
    for (Index a = 0; a < big_d_; ++a) {
      out.middleRows(a * out_rest, out_rest) = apply(i, x.middleRows(a * rest, rest), m - 1);
    }
    return out;
  }

  Matrix apply_shifted_adjoint(std::size_t i, const Matrix& y, int m) const {
    const Index rest = ipow(big_d_, m - 1);
    const Index in_rest = rest * big_d_ * big_d_;
    Matrix out(big_d_ * rest, y.cols());
    for (Index a = 0; a < big_d_; ++a) {
      out.middleRows(a * rest, rest) = apply_adjoint(i, y.middleRows(a * in_rest, in_rest), m - 1);
    }
    return out;
  }

 private:
  static double coefficient(const EmbeddedTLFactor& f, int t) {
    return std::sqrt(q_number(2, f.q) * phi(t + 1, f.q));
  }

  static void require_fibre(const EmbeddedTLFactor& f, int level) {
    if (static_cast<int>(f.fibres.size()) <= level) {
      throw Error(ErrorKind::InsufficientLevels, "factor fibre " + std::to_string(level) + " not prepared");
    }
  }

  std::vector<int> tails_for(std::size_t i, int m) const {
    const Index dm = ipow(big_d_, m);
    std::vector<int> tails(static_cast<std::size_t>(dm));
    for (Index z = 0; z < dm; ++z) tails[static_cast<std::size_t>(z)] = tail_length(i, z, m);
    return tails;
  }

  Index big_d_ = 0;
  std::vector<EmbeddedTLFactor> factors_;
};

/// w_n : H_n -> H_{n+1} ⊗ H_1 for a single TL system, as ambient columns (d^{n+2} x δ_n).
inline Matrix w_map_single(const TLSystem& t, int n) {
  if (n < 0) throw Error(ErrorKind::OutOfRange, "level must be >= 0");
  t.system.fibre(n + 1);
  WMapContext ctx({&t}, n + 1);
  return ctx.apply(0, t.system.fibre(n).basis(), n);
}

namespace detail {

/// (B ⊗ I_D)^H x for ambient columns x of length rows(B)·D.
inline Matrix tensor_identity_adjoint_apply(const Matrix& b, Index big_d, const Matrix& x) {
  const Index delta = b.cols();
  Matrix out(delta * big_d, x.cols());
  for (Index c = 0; c < big_d; ++c) {
    const Matrix xc = x(Eigen::seqN(c, b.rows(), big_d), Eigen::all);
    const Matrix part = b.adjoint() * xc;
    for (Index j = 0; j < delta; ++j) out.row(j * big_d + c) = part.row(j);
  }
  return out;
}

/// (B ⊗ I_D) c, the inverse reshape of tensor_identity_adjoint_apply.
inline Matrix tensor_identity_apply(const Matrix& b, Index big_d, const Matrix& c) {
  Matrix out(b.rows() * big_d, c.cols());
  for (Index k = 0; k < big_d; ++k) {
    const Matrix ck = c(Eigen::seqN(k, b.cols(), big_d), Eigen::all);
    out(Eigen::seqN(k, b.rows(), big_d), Eigen::all) = b * ck;
  }
  return out;
}

}  // namespace detail

struct WMapsReport {
  int level = 0;                          // n in W_n^R
  std::vector<double> isometry_residuals;  // |w_i^H w_i - 1| per factor
  double cross_residual = 0.0;             // largest |X^H Y| between distinct ranges
  double leak_residual = 0.0;              // part of the ranges outside H_n ⊗ H_1
  double unitary_left = 0.0;               // |C^H C - 1|
  double unitary_right = 0.0;              // |C C^H - 1|
  Index rows = 0, cols = 0;
  bool passed = false;
};

/// W_n^R = (w^1_{n-1}, ..., w^r_{n-1}, ι_{n,1}) into H_n ⊗ H_1 for the free product `product`
/// of the TL `factors` (a single factor gives the one-relator fusion (ι, w_{n-1})).
inline WMapsReport w_maps_free(const std::vector<const TLSystem*>& factors, const SubproductSystem& product,
                               int n, const ToleranceConfig& tol = {}) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "W_n^R needs n >= 1");
  const Subspace& next = product.fibre(n + 1);
  WMapContext ctx(factors, n);
  const Index big_d = ctx.big_d();
  if (static_cast<Index>(product.d()) != big_d) {
    throw Error(ErrorKind::DimensionMismatch, "product alphabet does not match the factors");
  }
  const Matrix prev = product.fibre(n - 1).basis();
  const Matrix cur = product.fibre(n).basis();

  std::vector<Matrix> parts;
  for (std::size_t i = 0; i < ctx.factor_count(); ++i) parts.push_back(ctx.apply(i, prev, n - 1));
  parts.push_back(next.basis());

  WMapsReport rep;
  rep.level = n;
  Index total_cols = 0;
  for (const auto& p : parts) total_cols += p.cols();
  Matrix full(parts.front().rows(), total_cols);
  Index at = 0;
  for (const auto& p : parts) {
    full.middleCols(at, p.cols()) = p;
    at += p.cols();
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const auto& w = parts[i];
    rep.isometry_residuals.push_back(residual_norm(w.adjoint() * w - Matrix::Identity(w.cols(), w.cols())));
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      rep.cross_residual = std::max(rep.cross_residual, residual_norm(w.adjoint() * parts[j]));
    }
  }
  const Matrix c = detail::tensor_identity_adjoint_apply(cur, big_d, full);
  rep.leak_residual = residual_norm(full - detail::tensor_identity_apply(cur, big_d, c));
  rep.rows = c.rows();
  rep.cols = c.cols();
  rep.unitary_left = residual_norm(c.adjoint() * c - Matrix::Identity(c.cols(), c.cols()));
  rep.unitary_right = c.rows() == c.cols()
                          ? residual_norm(c * c.adjoint() - Matrix::Identity(c.rows(), c.rows()))
                          : std::numeric_limits<double>::infinity();
  const double t = tol.check_abs_tol;
  rep.passed = rep.unitary_left <= t && rep.unitary_right <= t && rep.leak_residual <= t;
  return rep;
}

/// Throws NotUnitary, distinguishing isometry failure from completeness failure.
inline void require_unitary(const WMapsReport& rep, const ToleranceConfig& tol = {}) {
  const double t = tol.check_abs_tol;
  if (rep.unitary_left > t || rep.leak_residual > t) {
    throw Error(ErrorKind::NotUnitary, "W_" + std::to_string(rep.level) + "^R is not an isometry (residual " +
                                           std::to_string(std::max(rep.unitary_left, rep.leak_residual)) + ")");
  }
  if (rep.unitary_right > t) {
    throw Error(ErrorKind::NotUnitary, "W_" + std::to_string(rep.level) + "^R is not onto (residual " +
                                           std::to_string(rep.unitary_right) + ", shape " +
                                           std::to_string(rep.rows) + "x" + std::to_string(rep.cols) + ")");
  }
}

/// 2(1 - (1 - [n+1]_q^{-2})^{1/2})
inline double compact_defect_closed_form(int n, double q) {
  const double qn = q_number(n + 1, q);
  return 2.0 * (1.0 - std::sqrt(1.0 - 1.0 / (qn * qn)));
}

/// |(w^i_n - 1 ⊗ w^i_{n-1}) f_n|^2 on the free product, by power iteration on D^H D
/// applied matrix-free (the outputs live in D^{n+2} dimensions).
inline double compact_defect_norm(const std::vector<const TLSystem*>& factors, const SubproductSystem& product,
                                  std::size_t i, int n, std::uint64_t seed = 7) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "compact defect needs n >= 1");
  if (i >= factors.size()) throw Error(ErrorKind::OutOfRange, "factor index");
  const Matrix b = product.fibre(n).basis();
  WMapContext ctx(factors, n + 1);
  auto normal_op = [&](const Vector& x) -> Vector {
    const Matrix xi = b * x;
    const Matrix dx = ctx.apply(i, xi, n) - ctx.apply_shifted(i, xi, n);
    const Matrix back = ctx.apply_adjoint(i, dx, n) - ctx.apply_shifted_adjoint(i, dx, n);
    return b.adjoint() * back.col(0);
  };
  if (b.cols() == 0) return 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector x(b.cols());
  for (Index k = 0; k < x.size(); ++k) x(k) = Complex(gauss(rng), gauss(rng));
  x.normalize();
  double value = 0.0;
  for (int it = 0; it < 500; ++it) {
    const Vector y = normal_op(x);
    const double next = y.norm();
    if (next == 0.0) return 0.0;
    x = y / next;
    if (std::abs(next - value) <= 1e-15 * std::max(1.0, next)) {
      value = next;
      break;
    }
    value = next;
  }
  return value;
}

inline double compact_defect_norm(const TLSystem& t, int n) { return compact_defect_norm({&t}, t.system, 0, n); }

}  // namespace sps
