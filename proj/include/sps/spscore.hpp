#pragma once

// Quadratic subproduct systems: construction from relation spaces, maximal
// systems with prescribed fibres, Hilbert series and the genericity tests.

#include "sps/ncpoly.hpp"
#include "sps/subspace.hpp"

#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace sps {

/// Truncated Hilbert series; coefficients[n] = dim of the degree-n part.
/// Signed so that recurrence expansions past their first negative term can be represented.
struct HilbertSeries {
  std::vector<long long> coefficients;

  std::size_t size() const noexcept { return coefficients.size(); }
  long long operator[](std::size_t n) const { return coefficients.at(n); }
  friend bool operator==(const HilbertSeries&, const HilbertSeries&) = default;

  HilbertSeries truncated(std::size_t levels) const {
    HilbertSeries h;
    h.coefficients.assign(coefficients.begin(),
                          coefficients.begin() + static_cast<long>(std::min(levels, size())));
    return h;
  }

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < coefficients.size(); ++i) os << (i ? "," : "") << coefficients[i];
    return os.str();
  }
};

/// Ambient-dimension budget: SPS_MAX_AMBIENT if set, else 2e6.
inline std::uint64_t max_ambient_budget() {
  if (const char* env = std::getenv("SPS_MAX_AMBIENT")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 2'000'000;
}

/// Largest N with d^N within the ambient budget (capped at 64 for d = 1).
inline int default_max_level(std::size_t d, std::uint64_t budget = max_ambient_budget()) {
  if (d <= 1) return 64;
  int n = 0;
  while (true) {
    auto next = checked_pow(d, static_cast<unsigned>(n + 1));
    if (!next || *next > budget) return n;
    ++n;
  }
}

class SubproductSystem {
 public:
  SubproductSystem(std::size_t d, Subspace relations, std::vector<Subspace> fibres)
      : d_(d), relations_(std::move(relations)), fibres_(std::move(fibres)) {}

  std::size_t d() const noexcept { return d_; }
  std::size_t r() const noexcept { return static_cast<std::size_t>(relations_.dim()); }
  int max_level() const noexcept { return static_cast<int>(fibres_.size()) - 1; }
  const Subspace& relations() const noexcept { return relations_; }
  const std::vector<Subspace>& fibres() const noexcept { return fibres_; }

  const Subspace& fibre(int n) const {
    if (n < 0 || n > max_level()) {
      throw Error(ErrorKind::InsufficientLevels,
                  "fibre " + std::to_string(n) + " not built (max level " + std::to_string(max_level()) + ")");
    }
    return fibres_[static_cast<std::size_t>(n)];
  }

  /// H_2 = 0: the ideal swallows all of degree 2. Still a valid system.
  bool improper() const { return fibres_.size() > 2 && fibres_[2].dim() == 0; }

  /// Variable counts of the Temperley-Lieb factors when the system is known to be a
  /// free product of TL systems (a single TL system has one entry); empty otherwise.
  const std::vector<std::size_t>& tl_factor_dims() const noexcept { return tl_factors_; }
  void set_tl_factor_dims(std::vector<std::size_t> dims) { tl_factors_ = std::move(dims); }

 private:
  std::size_t d_;
  Subspace relations_;
  std::vector<Subspace> fibres_;
  std::vector<std::size_t> tl_factors_;
};

namespace detail {

inline void check_budget(std::size_t d, int levels) {
  const std::uint64_t budget = max_ambient_budget();
  auto ambient = checked_pow(d, static_cast<unsigned>(levels));
  if (!ambient || *ambient > budget) {
    throw Error(ErrorKind::BudgetExceeded, "d^N = " + std::to_string(d) + "^" + std::to_string(levels) +
                                               " exceeds the ambient budget " + std::to_string(budget));
  }
}

/// H_{m+1} = (H_m ⊗ H_1) ∩ (C^{d^{m-1}} ⊗ H_2), computed as the kernel of 1 ⊗ R^H on H_m ⊗ H_1.
inline Subspace next_quadratic_fibre_dense(const Subspace& hm, const Subspace& relations, Index d, int m) {
  const auto& tol = hm.tolerance();
  const Index prefix = ipow(d, m - 1);
  const Index delta = hm.dim();
  const Index r = relations.dim();
  const Matrix b = hm.basis();
  if (delta == 0) return Subspace::zero(prefix * d * d, tol);
  if (r == 0) return tensor(hm, Subspace::full(d, tol));

  const Matrix rel = relations.basis();
  // m_cols(:, j*d + c) = (1 ⊗ R^H)(b_j ⊗ e_c)
  Matrix constraint(prefix * r, delta * d);
  Eigen::Map<const Matrix> b_as_rows(b.data(), d, prefix * delta);
  for (Index c = 0; c < d; ++c) {
    Matrix rc(r, d);
    for (Index y = 0; y < d; ++y)
      for (Index rho = 0; rho < r; ++rho) rc(rho, y) = std::conj(rel(y * d + c, rho));
    Matrix out = rc * b_as_rows;
    for (Index j = 0; j < delta; ++j) {
      constraint.col(j * d + c) = Eigen::Map<const Vector>(out.data() + j * r * prefix, r * prefix);
    }
  }
  const Matrix y = null_space(constraint, sine_threshold(tol));
  const Index next_dim = y.cols();

  // (B ⊗ I_d) y, batched: stack the d x delta reshapes of the kernel vectors.
  Matrix stacked(d * next_dim, delta);
  for (Index k = 0; k < next_dim; ++k)
    for (Index j = 0; j < delta; ++j)
      for (Index c = 0; c < d; ++c) stacked(k * d + c, j) = y(j * d + c, k);
  const Matrix prod = stacked * b.transpose();
  Matrix next(prefix * d * d, next_dim);
  for (Index k = 0; k < next_dim; ++k) {
    for (Index z = 0; z < prefix * d; ++z)
      for (Index c = 0; c < d; ++c) next(z * d + c, k) = prod(k * d + c, z);
  }
  return Subspace::from_orthonormal(std::move(next), tol);
}

}  // namespace detail

/// Quadratic system with relation space `relations` ⊆ C^{d^2}, fibres 0..max_level.
inline SubproductSystem build_from_relations(std::size_t d, const Subspace& relations, int max_level,
                                             const ToleranceConfig& tol = {}) {
  tol.validate();
  if (d == 0) throw Error(ErrorKind::EmptyAlphabet, "alphabet is empty");
  if (max_level < 2) throw Error(ErrorKind::InvalidArgument, "max_level must be at least 2");
  const Index di = static_cast<Index>(d);
  if (relations.ambient_dim() != di * di) {
    throw Error(ErrorKind::DimensionMismatch, "relation space is not inside C^{d^2}");
  }
  detail::check_budget(d, max_level);

  std::vector<Subspace> fibres;
  fibres.push_back(Subspace::full(1, tol));
  fibres.push_back(Subspace::full(di, tol));
  fibres.push_back(complement(relations));
  const Subspace h1 = fibres[1];
  for (int m = 2; m < max_level; ++m) {
    const Subspace& hm = fibres.back();
    if (hm.is_coordinate() && relations.is_coordinate()) {
      fibres.push_back(intersect(tensor(h1, hm), tensor(hm, h1)));
    } else {
      fibres.push_back(detail::next_quadratic_fibre_dense(hm, relations, di, m));
    }
  }
  return SubproductSystem(d, relations, std::move(fibres));
}

inline Subspace relation_space(const QuadraticIdeal& ideal, const ToleranceConfig& tol = {}) {
  const Index d = static_cast<Index>(ideal.alphabet_size());
  std::vector<Vector> vectors;
  for (const auto& g : ideal.generators()) vectors.push_back(poly_to_vector(g, 2));
  return span(vectors, d * d, tol);
}

inline SubproductSystem build_quadratic(const QuadraticIdeal& ideal, int max_level,
                                        const ToleranceConfig& tol = {}) {
  if (ideal.alphabet_size() == 0) throw Error(ErrorKind::EmptyAlphabet, "alphabet is empty");
  return build_from_relations(ideal.alphabet_size(), relation_space(ideal, tol), max_level, tol);
}

/// Maximal system with prescribed fibres H_0..H_k: H_n = ∩_{i+j=n} H_i ⊗ H_j for n > k.
inline SubproductSystem build_maximal(const std::vector<Subspace>& prescribed, int max_level,
                                      const ToleranceConfig& tol = {}) {
  if (prescribed.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "need at least the fibres H_0 and H_1");
  }
  const Index d = prescribed[1].ambient_dim();
  if (d == 0) throw Error(ErrorKind::EmptyAlphabet, "alphabet is empty");
  if (prescribed[0].ambient_dim() != 1 || prescribed[0].dim() != 1) {
    throw Error(ErrorKind::AxiomViolation, "H_0 must be C");
  }
  const int k = static_cast<int>(prescribed.size()) - 1;
  for (int i = 1; i <= k; ++i) {
    if (prescribed[static_cast<std::size_t>(i)].ambient_dim() != ipow(d, i)) {
      throw Error(ErrorKind::DimensionMismatch, "prescribed H_" + std::to_string(i) + " not inside C^{d^i}");
    }
  }
  for (int n = 2; n <= k; ++n) {
    for (int i = 1; i < n; ++i) {
      const auto& hi = prescribed[static_cast<std::size_t>(i)];
      const auto& hj = prescribed[static_cast<std::size_t>(n - i)];
      if (!contains(tensor(hi, hj), prescribed[static_cast<std::size_t>(n)])) {
        throw Error(ErrorKind::AxiomViolation, "H_" + std::to_string(n) + " is not inside H_" +
                                                   std::to_string(i) + " ⊗ H_" + std::to_string(n - i));
      }
    }
  }
  detail::check_budget(static_cast<std::size_t>(d), max_level);

  std::vector<Subspace> fibres(prescribed.begin(), prescribed.begin() + std::min(k, max_level) + 1);
  for (int n = k + 1; n <= max_level; ++n) {
    Subspace acc = tensor(fibres[1], fibres[static_cast<std::size_t>(n - 1)]);
    for (int i = 2; i < n && acc.dim() > 0; ++i) {
      acc = intersect(acc, tensor(fibres[static_cast<std::size_t>(i)], fibres[static_cast<std::size_t>(n - i)]));
    }
    fibres.push_back(std::move(acc));
  }
  Subspace rel = fibres.size() > 2 ? complement(fibres[2]) : Subspace::zero(d * d, tol);
  return SubproductSystem(static_cast<std::size_t>(d), std::move(rel), std::move(fibres));
}

/// Largest containment residual of H_{m+n} in H_m ⊗ H_n over 1 <= m, n with m + n <= max_total.
inline double subproduct_axiom_residual(const SubproductSystem& s, int max_total) {
  double worst = 0.0;
  max_total = std::min(max_total, s.max_level());
  for (int total = 2; total <= max_total; ++total) {
    for (int m = 1; m < total; ++m) {
      worst = std::max(worst, containment_residual(tensor(s.fibre(m), s.fibre(total - m)), s.fibre(total)));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Hilbert series

inline HilbertSeries hilbert_series(const SubproductSystem& s) {
  HilbertSeries h;
  for (const auto& f : s.fibres()) h.coefficients.push_back(static_cast<long long>(f.dim()));
  return h;
}

/// Expansion of (1 - d z + r z^2)^{-1} to order max_level.
inline HilbertSeries generic_series(long long d, long long r, int max_level) {
  HilbertSeries h;
  if (max_level < 0) return h;
  h.coefficients.push_back(1);
  if (max_level >= 1) h.coefficients.push_back(d);
  for (int n = 1; n < max_level; ++n) {
    const auto& c = h.coefficients;
    h.coefficients.push_back(d * c[static_cast<std::size_t>(n)] - r * c[static_cast<std::size_t>(n - 1)]);
  }
  return h;
}

/// |(1 - d z + r z^2)^{-1}|: the expansion with every term from the first negative one deleted.
inline HilbertSeries anick_lower_bound(long long d, long long r, int max_level) {
  HilbertSeries h = generic_series(d, r, max_level);
  auto neg = std::find_if(h.coefficients.begin(), h.coefficients.end(), [](long long c) { return c < 0; });
  h.coefficients.erase(neg, h.coefficients.end());
  return h;
}

/// Coefficient-wise f >= g on the common truncation range.
inline bool geq(const HilbertSeries& f, const HilbertSeries& g) {
  const std::size_t n = std::min(f.size(), g.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (f.coefficients[i] < g.coefficients[i]) return false;
  }
  return true;
}

inline bool has_few_relations(const SubproductSystem& s) { return 4 * s.r() <= s.d() * s.d(); }

/// Hilbert series matches (1 - d z + r z^2)^{-1} on every computed level
/// ("generic up to level N"; exact under few relations).
inline bool is_generic(const SubproductSystem& s) {
  if (s.max_level() < 3) {
    throw Error(ErrorKind::InsufficientLevels, "genericity needs fibres up to level 3");
  }
  return hilbert_series(s) == generic_series(static_cast<long long>(s.d()),
                                              static_cast<long long>(s.r()), s.max_level());
}

/// Minimal dim A_3 for a quadratic algebra with dim A_1 = d, dim A_2 = s.
inline long long min_dim_A3(long long d, long long s) {
  if (d < 1 || s < 0 || s > d * d) throw Error(ErrorKind::OutOfRange, "need 0 <= s <= d^2");
  if (2 * s <= d * d) return 0;
  return 2 * d * s - d * d * d;
}

/// Checks a witness (U, lambda) for B = lambda U^T A U with U unitary.
inline bool verify_one_relator_equivalence(const CoeffMatrix& a, const CoeffMatrix& b, const Matrix& u,
                                           Complex lambda, const ToleranceConfig& tol = {}) {
  const Index d = a.size();
  if (b.size() != d || u.rows() != d || u.cols() != d || a.entries.cols() != d || b.entries.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "A, B and U must all be d x d");
  }
  if (residual_norm(u.adjoint() * u - Matrix::Identity(d, d)) > tol.check_abs_tol) return false;
  return residual_norm(b.entries - lambda * u.transpose() * a.entries * u) <= tol.check_abs_tol;
}

}  // namespace sps
