#pragma once

// Determinants of SU_q(2) corepresentations and the subproduct systems they induce.

#include "sps/tl.hpp"

#include <charconv>
#include <set>

namespace sps {

struct Weight {
  int n = 0;  // highest weight; the irreducible has dimension n + 1
  int k = 1;  // multiplicity
  friend bool operator==(const Weight&, const Weight&) = default;
};

struct RepSpec {
  std::vector<Weight> weights;
  double q = 1.0;

  void validate() const {
    if (weights.empty()) throw Error(ErrorKind::EmptyAlphabet, "no weights given");
    if (!(q > 0.0 && q <= 1.0)) throw Error(ErrorKind::OutOfRange, "q must lie in (0, 1]");
    std::set<int> seen;
    for (const auto& w : weights) {
      if (w.n < 0 || w.k < 1) throw Error(ErrorKind::OutOfRange, "need weight >= 0 and multiplicity >= 1");
      if (!seen.insert(w.n).second) {
        throw Error(ErrorKind::InvalidArgument, "weight " + std::to_string(w.n) + " listed twice");
      }
    }
  }

  std::size_t dimension() const {
    std::size_t d = 0;
    for (const auto& w : weights) d += static_cast<std::size_t>(w.k) * static_cast<std::size_t>(w.n + 1);
    return d;
  }

  bool multiplicity_free() const {
    return std::all_of(weights.begin(), weights.end(), [](const Weight& w) { return w.k == 1; });
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      s += (i ? "," : "") + std::to_string(weights[i].n) + ":" + std::to_string(weights[i].k);
    }
    return s;
  }
};

/// "1:1,2:1" (weight:multiplicity pairs; a bare weight means multiplicity 1).
inline RepSpec parse_rep_spec(std::string_view text, double q) {
  RepSpec spec;
  spec.q = q;
  std::size_t pos = 0;
  auto read_int = [&](int& out) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    const char* begin = text.data() + pos;
    auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), out);
    if (ec != std::errc() || ptr == begin) {
      throw Error(ErrorKind::SyntaxError, "expected an integer in weight spec", 1, pos + 1);
    }
    pos += static_cast<std::size_t>(ptr - begin);
    while (pos < text.size() && text[pos] == ' ') ++pos;
  };
  while (pos < text.size()) {
    Weight w;
    read_int(w.n);
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      read_int(w.k);
    }
    spec.weights.push_back(w);
    if (pos < text.size()) {
      if (text[pos] != ',') throw Error(ErrorKind::SyntaxError, "expected ',' in weight spec", 1, pos + 1);
      ++pos;
    }
  }
  spec.validate();
  return spec;
}

/// a_i = (-1)^i q^{(2i-n-2)/2}, i = 1..n+1, placed on X_i X_{n+2-i}; |a_i a_{n+2-i}| = 1.
inline std::vector<double> det_coefficients(int n, double q) {
  if (n < 0) throw Error(ErrorKind::OutOfRange, "weight must be >= 0");
  if (!(q > 0.0 && q <= 1.0)) throw Error(ErrorKind::OutOfRange, "q must lie in (0, 1]");
  std::vector<double> a;
  for (int i = 1; i <= n + 1; ++i) a.push_back((i % 2 ? -1.0 : 1.0) * std::pow(q, (2.0 * i - n - 2) / 2.0));
  return a;
}

/// Determinant vector of the irreducible ρ_n as a polynomial in n+1 variables.
inline NCPoly det_vector_irrep(int n, double q) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "irreducible determinant needs n >= 1");
  const auto a = det_coefficients(n, q);
  NCPoly p(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) p.add_term({i, n - i}, a[static_cast<std::size_t>(i)]);
  return p;
}

/// Basis vectors of det(ρ): for each weight (n, k) and copies (l, r), Σ_i a_i e^{(l)}_i ⊗ e^{(r)}_{n+2-i}.
/// Variables are ordered weight by weight, copy by copy.
inline std::vector<Vector> det_vectors(const RepSpec& spec) {
  spec.validate();
  const Index big_d = static_cast<Index>(spec.dimension());
  std::vector<Vector> out;
  Index base = 0;
  for (const auto& w : spec.weights) {
    const auto a = det_coefficients(w.n, spec.q);
    const Index block = w.n + 1;
    for (int l = 0; l < w.k; ++l) {
      for (int r = 0; r < w.k; ++r) {
        Vector v = Vector::Zero(big_d * big_d);
        for (Index i = 0; i < block; ++i) {
          const Index x = base + l * block + i;
          const Index y = base + r * block + (block - 1 - i);
          v(x * big_d + y) = a[static_cast<std::size_t>(i)];
        }
        out.push_back(v);
      }
    }
    base += block * w.k;
  }
  return out;
}

inline Subspace det_space(const RepSpec& spec, const ToleranceConfig& tol = {}) {
  const Index big_d = static_cast<Index>(spec.dimension());
  return span(det_vectors(spec), big_d * big_d, tol);
}

/// Quadratic system with H_2 = det(ρ)^⊥.
inline SubproductSystem suq2_system(const RepSpec& spec, int max_level, const ToleranceConfig& tol = {}) {
  const std::size_t big_d = spec.dimension();
  QuadraticIdeal ideal(big_d);
  for (const auto& v : det_vectors(spec)) ideal.add(vector_to_poly(v, big_d, 2));
  auto s = build_quadratic(ideal, max_level, tol);
  const bool tl_factors = spec.multiplicity_free() &&
                          std::all_of(spec.weights.begin(), spec.weights.end(), [](const Weight& w) { return w.n >= 1; });
  if (tl_factors) {
    std::vector<std::size_t> dims;
    for (const auto& w : spec.weights) dims.push_back(static_cast<std::size_t>(w.n + 1));
    s.set_tl_factor_dims(std::move(dims));
  }
  return s;
}

struct IsotypicalSeries {
  HilbertSeries recurrence;   // (1 - t(n+1) z + t^2 z^2)^{-1}
  HilbertSeries substituted;  // h_n(t z)
};

inline IsotypicalSeries isotypical_series(int n, int t, int max_level) {
  if (n < 1 || t < 1) throw Error(ErrorKind::OutOfRange, "need n >= 1 and t >= 1");
  IsotypicalSeries out;
  out.recurrence = generic_series(static_cast<long long>(t) * (n + 1), static_cast<long long>(t) * t, max_level);
  const auto base = generic_series(n + 1, 1, max_level);
  long long power = 1;
  for (int m = 0; m <= max_level; ++m) {
    out.substituted.coefficients.push_back(power * base[static_cast<std::size_t>(m)]);
    power *= t;
  }
  if (!(out.recurrence == out.substituted)) {
    throw Error(ErrorKind::InvariantViolation, "h_n(tz) differs from the recurrence expansion");
  }
  return out;
}

}  // namespace sps
