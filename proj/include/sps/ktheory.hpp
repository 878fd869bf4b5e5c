#pragma once

// Euler class and K-groups of Cuntz-Pimsner and Toeplitz algebras of quadratic
// subproduct systems, via the Gysin sequence.

#include "sps/tl.hpp"

#include <cstdlib>

namespace sps {

/// Finitely generated abelian group Z^free_rank ⊕ Z/t_1 ⊕ ... with each t_i >= 2, sorted.
struct AbelianGroup {
  int free_rank = 0;
  std::vector<long long> torsion;

  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;

  static AbelianGroup integers() { return {1, {}}; }
  static AbelianGroup trivial() { return {0, {}}; }
  static AbelianGroup cyclic(long long order) {
    if (order == 0) return integers();
    order = std::llabs(order);
    return order == 1 ? trivial() : AbelianGroup{0, {order}};
  }

  std::string to_string() const {
    std::vector<std::string> parts;
    if (free_rank == 1) parts.push_back("Z");
    if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
    for (long long t : torsion) parts.push_back("Z/" + std::to_string(t));
    if (parts.empty()) return "0";
    std::string s = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) s += " ⊕ " + parts[i];
    return s;
  }
};

using IntMatrix = std::vector<std::vector<long long>>;

/// Nonzero invariant factors d_1 | d_2 | ... of an integer matrix.
inline std::vector<long long> smith_invariants(IntMatrix m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<long long> diag;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // pivot: smallest nonzero |entry| in the remaining block
    auto find_pivot = [&](std::size_t& pi, std::size_t& pj) {
      long long best = 0;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          if (m[i][j] != 0 && (best == 0 || std::llabs(m[i][j]) < best)) {
            best = std::llabs(m[i][j]);
            pi = i;
            pj = j;
          }
        }
      return best != 0;
    };
    std::size_t pi = 0, pj = 0;
    if (!find_pivot(pi, pj)) break;
    while (true) {
      std::swap(m[t], m[pi]);
      for (auto& row : m) std::swap(row[t], row[pj]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const long long f = m[i][t] / m[t][t];
        for (std::size_t j = t; j < cols; ++j) m[i][j] -= f * m[t][j];
        if (m[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        const long long f = m[t][j] / m[t][t];
        for (std::size_t i = t; i < rows; ++i) m[i][j] -= f * m[i][t];
        if (m[t][j] != 0) clean = false;
      }
      if (clean) {
        // divisibility: fold in any entry not divisible by the pivot
        bool divisible = true;
        for (std::size_t i = t + 1; i < rows && divisible; ++i)
          for (std::size_t j = t + 1; j < cols; ++j) {
            if (m[i][j] % m[t][t] != 0) {
              for (std::size_t k = t; k < cols; ++k) m[t][k] += m[i][k];
              divisible = false;
              break;
            }
          }
        if (divisible) break;
      }
      find_pivot(pi, pj);
    }
    diag.push_back(std::llabs(m[t][t]));
  }
  return diag;
}

/// Cokernel of M : Z^cols -> Z^rows.
inline AbelianGroup cokernel(const IntMatrix& m, std::size_t rows) {
  const auto inv = smith_invariants(m);
  AbelianGroup g;
  g.free_rank = static_cast<int>(rows - inv.size());
  for (long long d : inv) {
    if (d > 1) g.torsion.push_back(d);
  }
  std::sort(g.torsion.begin(), g.torsion.end());
  return g;
}

/// Kernel of M : Z^cols -> Z^rows (free of rank cols - rank M).
inline AbelianGroup kernel(const IntMatrix& m, std::size_t cols) {
  return {static_cast<int>(cols - smith_invariants(m).size()), {}};
}

struct KGroups {
  AbelianGroup k0;
  AbelianGroup k1;
  long long euler = 0;
  bool within_hypotheses = false;  // false: the formula is applied outside the proven class
};

/// χ = 1 - dim H_1 + dim H_2^⊥.
inline long long euler_class(const SubproductSystem& s) {
  return 1 - static_cast<long long>(s.d()) + static_cast<long long>(s.r());
}

/// Whether s is a free product of Temperley-Lieb systems, as recorded at construction or,
/// for a single relation, detected directly.
inline bool is_tl_free_product(const SubproductSystem& s, const ToleranceConfig& tol = {}) {
  const auto& dims = s.tl_factor_dims();
  if (!dims.empty()) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{0}) == s.d() && dims.size() == s.r();
  }
  if (s.r() != 1) return false;
  const NCPoly p = vector_to_poly(s.relations().basis().col(0), s.d(), 2);
  try {
    return is_temperley_lieb(p, tol).is_tl;
  } catch (const Error&) {
    return false;
  }
}

/// K_0 = coker(×χ), K_1 = ker(×χ) on Z.
inline KGroups cuntz_pimsner_kgroups(const SubproductSystem& s, const ToleranceConfig& tol = {}) {
  KGroups k;
  k.euler = euler_class(s);
  const IntMatrix chi{{k.euler}};
  k.k0 = cokernel(chi, 1);
  k.k1 = kernel(chi, 1);
  k.within_hypotheses = is_tl_free_product(s, tol);
  return k;
}

/// The Toeplitz algebra is KK-equivalent to C in the validated class: (Z, 0).
inline KGroups toeplitz_kgroups(const SubproductSystem& s, const ToleranceConfig& tol = {}) {
  return {AbelianGroup::integers(), AbelianGroup::trivial(), euler_class(s), is_tl_free_product(s, tol)};
}

/// K_0 of the multiplicity-free SU_q(2) Cuntz-Pimsner algebra: Z/(Σ n_i - 1).
inline AbelianGroup suq2_k0_formula(const std::vector<int>& weights) {
  long long sum = 0;
  for (int n : weights) sum += n;
  return AbelianGroup::cyclic(sum - 1);
}

}  // namespace sps
