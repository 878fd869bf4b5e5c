#pragma once

// Free products of quadratic subproduct systems and their fibre decomposition
// into alternating tensor blocks indexed by compositions.

#include "sps/spscore.hpp"

#include <algorithm>
#include <functional>
#include <optional>

namespace sps {

struct Composition {
  std::vector<int> parts;

  int total() const { return std::accumulate(parts.begin(), parts.end(), 0); }
  std::size_t size() const noexcept { return parts.size(); }
  friend bool operator==(const Composition&, const Composition&) = default;

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
    return s + ")";
  }
};

/// Compositions of n (optionally with exactly p parts), ordered by number of parts,
/// then lexicographically descending: n = 3 gives (3), (2,1), (1,2), (1,1,1).
inline std::vector<Composition> compositions(int n, std::optional<int> p = std::nullopt) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "compositions need n >= 1");
  if (p && (*p < 1 || *p > n)) throw Error(ErrorKind::OutOfRange, "need 1 <= p <= n");
  std::vector<Composition> out;
  std::vector<int> current;
  std::function<void(int, int)> rec = [&](int remaining, int parts_left) {
    if (parts_left == 1) {
      current.push_back(remaining);
      out.push_back({current});
      current.pop_back();
      return;
    }
    for (int first = remaining - parts_left + 1; first >= 1; --first) {
      current.push_back(first);
      rec(remaining - first, parts_left - 1);
      current.pop_back();
    }
  };
  const int lo = p ? *p : 1;
  const int hi = p ? *p : n;
  for (int parts = lo; parts <= hi; ++parts) rec(n, parts);
  return out;
}

/// H^{(s)}_{d_1} ⊗ H^{(1-s)}_{d_2} ⊗ ... with s = start_factor.
struct AlternatingBlock {
  int start_factor = 0;
  Composition composition;

  int factor_of_part(std::size_t k) const { return (start_factor + static_cast<int>(k)) % 2; }
};

namespace detail {

/// Index map from words over d_i letters to words over D letters with the letters shifted by offset.
inline std::vector<Index> shifted_word_indices(Index di, Index offset, Index big_d, int level) {
  std::vector<Index> map{0};
  for (int k = 0; k < level; ++k) {
    std::vector<Index> next;
    next.reserve(map.size() * static_cast<std::size_t>(di));
    for (Index prefix : map)
      for (Index a = 0; a < di; ++a) next.push_back(prefix * big_d + a + offset);
    map = std::move(next);
  }
  return map;
}

}  // namespace detail

/// Image of H ⊆ (C^{d_i})^{⊗level} in (C^D)^{⊗level} with letters shifted by `offset`.
inline Subspace embed_letters(const Subspace& h, Index di, Index offset, Index big_d, int level) {
  const auto map = detail::shifted_word_indices(di, offset, big_d, level);
  if (static_cast<Index>(map.size()) != h.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "subspace does not live in the stated tensor power");
  }
  const Index ambient = ipow(big_d, level);
  if (h.is_coordinate()) {
    std::vector<Index> coords;
    coords.reserve(h.coordinates().size());
    for (Index c : h.coordinates()) coords.push_back(map[static_cast<std::size_t>(c)]);
    return Subspace::from_coordinates(ambient, std::move(coords), h.tolerance());
  }
  const Matrix& b = h.dense_basis();
  Matrix out = Matrix::Zero(ambient, b.cols());
  for (std::size_t i = 0; i < map.size(); ++i) out.row(map[i]) = b.row(static_cast<Index>(i));
  return Subspace::from_orthonormal(std::move(out), h.tolerance());
}

/// Free product of quadratic systems: relation spaces placed on disjoint variable blocks.
inline SubproductSystem free_product(const std::vector<const SubproductSystem*>& factors, int max_level,
                                     const ToleranceConfig& tol = {}) {
  if (factors.empty()) throw Error(ErrorKind::InvalidArgument, "free product of no factors");
  Index big_d = 0;
  for (const auto* f : factors) big_d += static_cast<Index>(f->d());
  std::vector<Subspace> rel_parts;
  std::vector<std::size_t> tl_dims;
  bool all_tl = true;
  Index offset = 0;
  for (const auto* f : factors) {
    const Index di = static_cast<Index>(f->d());
    rel_parts.push_back(embed_letters(f->relations(), di, offset, big_d, 2));
    offset += di;
    if (f->tl_factor_dims().empty()) all_tl = false;
    tl_dims.insert(tl_dims.end(), f->tl_factor_dims().begin(), f->tl_factor_dims().end());
  }
  Subspace rel = rel_parts.front();
  for (std::size_t i = 1; i < rel_parts.size(); ++i) rel = join(rel, rel_parts[i]);
  auto s = build_from_relations(static_cast<std::size_t>(big_d), rel, max_level, tol);
  if (all_tl) s.set_tl_factor_dims(std::move(tl_dims));
  return s;
}

inline SubproductSystem free_product(const SubproductSystem& s1, const SubproductSystem& s2, int max_level,
                                     const ToleranceConfig& tol = {}) {
  return free_product({&s1, &s2}, max_level, tol);
}

/// Block subspace of an alternating word inside the free-product fibre's ambient space.
inline Subspace block_subspace(const SubproductSystem& s1, const SubproductSystem& s2,
                               const AlternatingBlock& block) {
  const Index d1 = static_cast<Index>(s1.d());
  const Index big_d = d1 + static_cast<Index>(s2.d());
  std::optional<Subspace> acc;
  for (std::size_t k = 0; k < block.composition.size(); ++k) {
    const int part = block.composition.parts[k];
    const bool first = block.factor_of_part(k) == 0;
    const auto& sys = first ? s1 : s2;
    Subspace piece = embed_letters(sys.fibre(part), static_cast<Index>(sys.d()), first ? 0 : d1, big_d, part);
    acc = acc ? tensor(*acc, piece) : std::move(piece);
  }
  return *acc;
}

struct BlockEntry {
  AlternatingBlock block;
  Index dim = 0;
  double containment = 0.0;
};

struct DecompositionReport {
  int level = 0;
  std::vector<BlockEntry> blocks;
  long long block_dim_sum = 0;
  long long fibre_dim = 0;
  double max_overlap = 0.0;
  double max_containment = 0.0;
  bool passed = false;
};

namespace detail {

inline double overlap(const Subspace& a, const Subspace& b) {
  if (a.dim() == 0 || b.dim() == 0) return 0.0;
  if (a.is_coordinate() && b.is_coordinate()) {
    std::vector<Index> common;
    std::set_intersection(a.coordinates().begin(), a.coordinates().end(), b.coordinates().begin(),
                          b.coordinates().end(), std::back_inserter(common));
    return common.empty() ? 0.0 : 1.0;
  }
  return residual_norm(a.basis().adjoint() * b.basis());
}

}  // namespace detail

/// Checks (H⋆K)_m = ⊕ over alternating blocks: pairwise orthogonal, each inside the fibre,
/// dimensions summing exactly. Throws DecompositionMismatch naming the first offending block.
inline DecompositionReport verify_fibre_decomposition(const SubproductSystem& s1, const SubproductSystem& s2,
                                                      const SubproductSystem& product, int m) {
  if (m < 1) throw Error(ErrorKind::OutOfRange, "decomposition level must be >= 1");
  const Subspace& fibre = product.fibre(m);
  const double tol = fibre.tolerance().check_abs_tol;
  DecompositionReport rep;
  rep.level = m;
  rep.fibre_dim = fibre.dim();
  std::vector<Subspace> spaces;
  for (const auto& c : compositions(m)) {
    for (int start = 0; start < 2; ++start) {
      AlternatingBlock block{start, c};
      Subspace sub = block_subspace(s1, s2, block);
      BlockEntry entry{block, sub.dim(), containment_residual(fibre, sub)};
      rep.max_containment = std::max(rep.max_containment, entry.containment);
      for (std::size_t j = 0; j < spaces.size(); ++j) {
        const double ov = detail::overlap(spaces[j], sub);
        rep.max_overlap = std::max(rep.max_overlap, ov);
        if (ov > tol) {
          throw Error(ErrorKind::DecompositionMismatch,
                      "block " + std::to_string(start) + c.to_string() + " overlaps an earlier block");
        }
      }
      if (entry.containment > tol) {
        throw Error(ErrorKind::DecompositionMismatch,
                    "block " + std::to_string(start) + c.to_string() + " is not inside the fibre");
      }
      rep.block_dim_sum += entry.dim;
      rep.blocks.push_back(entry);
      spaces.push_back(std::move(sub));
    }
  }
  if (rep.block_dim_sum != rep.fibre_dim) {
    throw Error(ErrorKind::DecompositionMismatch, "block dimensions sum to " + std::to_string(rep.block_dim_sum) +
                                                      " but the fibre has dimension " +
                                                      std::to_string(rep.fibre_dim));
  }
  rep.passed = true;
  return rep;
}

/// δ_m δ_1 = δ_{m+1} + r δ_{m-1} for a generic system.
inline bool fusion_check(const SubproductSystem& s, int m) {
  if (m < 1 || m + 1 > s.max_level()) {
    throw Error(ErrorKind::InsufficientLevels, "fusion check needs fibres up to level m + 1");
  }
  if (!is_generic(s)) throw Error(ErrorKind::NotGeneric, "system is not generic");
  const auto h = hilbert_series(s);
  const auto um = static_cast<std::size_t>(m);
  return h[um] * h[1] == h[um + 1] + static_cast<long long>(s.r()) * h[um - 1];
}

/// Degree-m dimensions of the Hilbert-space free product F(H) * F(K): alternating words
/// of positive-degree blocks, plus the vacuum.
inline HilbertSeries fock_free_product_dims(const HilbertSeries& h1, const HilbertSeries& h2, int max_level) {
  if (h1.size() <= static_cast<std::size_t>(max_level) || h2.size() <= static_cast<std::size_t>(max_level)) {
    throw Error(ErrorKind::InsufficientLevels, "factor series are shorter than the requested level");
  }
  HilbertSeries out;
  out.coefficients.push_back(1);
  for (int m = 1; m <= max_level; ++m) {
    long long total = 0;
    for (const auto& c : compositions(m)) {
      for (int start = 0; start < 2; ++start) {
        long long prod = 1;
        for (std::size_t k = 0; k < c.size(); ++k) {
          const auto& h = (start + static_cast<int>(k)) % 2 == 0 ? h1 : h2;
          prod *= h[static_cast<std::size_t>(c.parts[k])];
        }
        total += prod;
      }
    }
    out.coefficients.push_back(total);
  }
  return out;
}

namespace detail {

/// Formal inverse of a power series with nonzero constant term, truncated to `n` terms.
inline std::vector<double> series_inverse(const std::vector<double>& a, std::size_t n) {
  std::vector<double> b(n, 0.0);
  if (n == 0) return b;
  b[0] = 1.0 / a[0];
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k && j < a.size(); ++j) s += a[j] * b[k - j];
    b[k] = -s / a[0];
  }
  return b;
}

inline std::vector<double> as_real(const HilbertSeries& h, std::size_t n) {
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 0; i < std::min(n, h.size()); ++i) v[i] = static_cast<double>(h.coefficients[i]);
  return v;
}

}  // namespace detail

/// Coefficients of h with h^{-1} = h1^{-1} + h2^{-1} + sign, to order max_level.
inline std::vector<double> free_product_series_coefficients(const HilbertSeries& h1, const HilbertSeries& h2,
                                                            int max_level, double sign) {
  if (h1.size() == 0 || h2.size() == 0 || h1[0] != 1 || h2[0] != 1) {
    throw Error(ErrorKind::NonUnitalSeries, "series must start with 1");
  }
  const auto n = static_cast<std::size_t>(max_level + 1);
  auto i1 = detail::series_inverse(detail::as_real(h1, n), n);
  auto i2 = detail::series_inverse(detail::as_real(h2, n), n);
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = i1[k] + i2[k];
  g[0] += sign;
  if (g[0] == 0.0) throw Error(ErrorKind::NonUnitalSeries, "combined series has zero constant term");
  return detail::series_inverse(g, n);
}

/// Hilbert series of the free product: h^{-1} = h1^{-1} + h2^{-1} - 1.
inline HilbertSeries free_product_series(const HilbertSeries& h1, const HilbertSeries& h2, int max_level) {
  HilbertSeries out;
  for (double c : free_product_series_coefficients(h1, h2, max_level, -1.0)) {
    out.coefficients.push_back(std::llround(c));
  }
  return out;
}

}  // namespace sps
