#pragma once

// Shared fixtures for the test binaries: deterministic generators and a few
// brute-force oracles written without the library's own linear algebra.

#include "cragged/cragged.hpp"

#include <random>

namespace testing_support {

using namespace cragged;
using detail::iv;
using detail::ivs;

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline IntMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, long lo, long hi) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform(rng, lo, hi);
  return m;
}

inline IntVector random_vector(Rng& rng, std::size_t n, long lo, long hi) {
  IntVector v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

// Permutation expansion; only for the small sizes used in tests.
inline Integer det_by_permutations(const IntMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  Integer total = 0;
  do {
    Integer term = 1;
    for (std::size_t i = 0; i < n && term != 0; ++i) term *= a(i, p[i]);
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inversions;
    total += inversions % 2 ? -term : term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

inline Integer det2(const IntVector& a, const IntVector& b) { return a[0] * b[1] - a[1] * b[0]; }

// Plain rational Gauss-Jordan: coefficients c with sum c_k gens[k] = x, if any.
inline std::optional<RatVector> solve_columns(const std::vector<IntVector>& gens, const IntVector& x) {
  const std::size_t n = x.size(), k = gens.size();
  std::vector<RatVector> m(n, RatVector(k + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i][j] = gens[j][i];
    m[i][k] = x[i];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < k && r < n; ++c) {
    std::size_t p = r;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (auto& e : m[r]) e *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = 0; j <= k; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < n; ++i)
    if (m[i][k] != 0) return std::nullopt;
  RatVector c(k);
  for (std::size_t i = 0; i < r; ++i) c[pivot_col[i]] = m[i][k];
  return c;
}

// Caratheodory: x is in cone(gens) iff it is a nonnegative combination of
// some linearly independent subset.
inline bool brute_cone_contains(const std::vector<IntVector>& gens, const IntVector& x) {
  if (is_zero(x)) return true;
  const std::size_t k = gens.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    std::vector<IntVector> sub;
    for (std::size_t j = 0; j < k; ++j)
      if (mask >> j & 1) sub.push_back(gens[j]);
    if (sub.size() > x.size()) continue;
    auto c = solve_columns(sub, x);
    if (!c) continue;
    bool independent = true;
    for (std::size_t j = 0; j < sub.size() && independent; ++j) {
      std::vector<IntVector> rest;
      for (std::size_t l = 0; l < sub.size(); ++l)
        if (l != j) rest.push_back(sub[l]);
      if (solve_columns(rest, sub[j])) independent = false;
    }
    if (!independent) continue;
    if (std::all_of(c->begin(), c->end(), [](const Rational& q) { return q >= 0; })) return true;
  }
  return false;
}

inline std::size_t brute_box_count(const Polyhedron& p, std::size_t box, std::vector<IntVector>* points = nullptr) {
  const std::size_t n = p.ambient_dim();
  const long k = static_cast<long>(box);
  std::size_t count = 0;
  std::vector<long> x(n, -k);
  while (true) {
    IntVector v(x.begin(), x.end());
    if (p.contains(v)) {
      ++count;
      if (points) points->push_back(v);
    }
    std::size_t i = n;
    while (i > 0 && x[i - 1] == k) x[--i] = -k;
    if (i == 0) break;
    ++x[i - 1];
  }
  return count;
}

// True when a GL(n,Z) element maps beta1[i] to beta2[i] for every i, if one exists.
inline bool lattice_equivalent(const std::vector<IntVector>& beta1, const std::vector<IntVector>& beta2) {
  if (beta1.size() != beta2.size() || beta1.empty()) return false;
  const std::size_t n = beta1[0].size();
  if (beta2[0].size() != n) return false;
  std::vector<std::size_t> basis;
  for (std::size_t i = 0; i < beta1.size() && basis.size() < n; ++i) {
    std::vector<IntVector> cand;
    for (auto j : basis) cand.push_back(beta1[j]);
    if (!solve_columns(cand, beta1[i])) basis.push_back(i);
  }
  if (basis.size() != n) return false;
  // Row r of U solves sum_i U[r][i] * beta1[basis[c]][i] = beta2[basis[c]][r].
  std::vector<IntVector> cols(n, IntVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < n; ++c) cols[i][c] = beta1[basis[c]][i];
  IntMatrix u(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    IntVector rhs(n);
    for (std::size_t c = 0; c < n; ++c) rhs[c] = beta2[basis[c]][r];
    auto sol = solve_columns(cols, rhs);
    if (!sol) return false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_integer((*sol)[i])) return false;
      u(r, i) = (*sol)[i].get_num();
    }
  }
  Integer d = det_by_permutations(u);
  if (d != 1 && d != -1) return false;
  for (std::size_t i = 0; i < beta1.size(); ++i) {
    for (std::size_t r = 0; r < n; ++r) {
      Integer s = 0;
      for (std::size_t c = 0; c < n; ++c) s += u(r, c) * beta1[i][c];
      if (s != beta2[i][r]) return false;
    }
  }
  return true;
}

// Random complete simplicial 2d fan: 3..8 primitive directions with small
// coordinates, any angular gap below pi, beta multiplicities 1..3.
inline StackyFan random_complete_fan_2d(Rng& rng, long coord = 3, long max_mult = 3) {
  while (true) {
    std::size_t k = static_cast<std::size_t>(uniform(rng, 3, 8));
    std::vector<IntVector> dirs;
    for (int tries = 0; dirs.size() < k && tries < 200; ++tries) {
      IntVector v = {uniform(rng, -coord, coord), uniform(rng, -coord, coord)};
      if (is_zero(v) || content(v) != 1) continue;
      if (std::find(dirs.begin(), dirs.end(), v) != dirs.end()) continue;
      dirs.push_back(v);
    }
    std::vector<IntVector> beta;
    for (auto& d : dirs) {
      Integer m = uniform(rng, 1, max_mult);
      beta.push_back({d[0] * m, d[1] * m});
    }
    // sets that fail to span positively are rejected by validation
    try {
      StackyFan fan = complete_fan_2d(beta, "random-2d");
      if (fan.validation().ok && fan.is_complete()) return fan;
    } catch (const Error&) {
    }
  }
}

// Unimodularity of a complete 2d fan from determinants only: for every pair
// of non-parallel beta-vectors, |det| equals the gcd of the 2x2 minors of
// the beta-vectors in the cone they span.
inline bool oracle_unimodular_2d(const StackyFan& fan) {
  const auto& b = fan.beta();
  auto in_cone = [](const IntVector& u, const IntVector& v, const IntVector& w) {
    // w in cone(u, v) for independent u, v
    Integer d = det2(u, v);
    Integer s = det2(w, v), t = det2(u, w);
    if (d < 0) {
      d = -d;
      s = -s;
      t = -t;
    }
    return s >= 0 && t >= 0;
  };
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      Integer d = abs(det2(b[i], b[j]));
      if (d == 0) continue;
      std::vector<IntVector> inside;
      for (const auto& w : b)
        if (in_cone(b[i], b[j], w)) inside.push_back(w);
      Integer g = 0;
      for (std::size_t k = 0; k < inside.size(); ++k)
        for (std::size_t l = k + 1; l < inside.size(); ++l) g = cragged::gcd(g, det2(inside[k], inside[l]));
      if (d != g) return false;
    }
  }
  return true;
}

// Fan of a product: rays from both factors padded with zeros, cones are
// unions of a maximal cone from each.
inline StackyFan product_fan(const StackyFan& a, const StackyFan& b, std::string name) {
  const std::size_t n = a.rank() + b.rank();
  std::vector<IntVector> beta;
  for (const auto& v : a.beta()) {
    IntVector w(n, 0);
    std::copy(v.begin(), v.end(), w.begin());
    beta.push_back(w);
  }
  for (const auto& v : b.beta()) {
    IntVector w(n, 0);
    std::copy(v.begin(), v.end(), w.begin() + static_cast<long>(a.rank()));
    beta.push_back(w);
  }
  std::vector<RaySet> cones;
  for (const auto& s : a.max_cones()) {
    for (const auto& t : b.max_cones()) {
      RaySet u = s;
      for (auto j : t) u.push_back(j + a.num_rays());
      cones.push_back(u);
    }
  }
  return StackyFan(n, std::move(beta), std::move(cones), std::move(name));
}

// Same cones, beta-vectors scaled by the given multiplicities.
inline StackyFan scaled(const StackyFan& fan, const std::vector<long>& mult, std::string name) {
  std::vector<IntVector> beta = fan.beta();
  for (std::size_t i = 0; i < beta.size(); ++i)
    for (auto& x : beta[i]) x *= mult[i % mult.size()];
  return fan.with_beta(std::move(beta), std::move(name));
}

// Blowup of P^3 at a torus-fixed point: star subdivision of the cone
// {e1,e2,e3} by e1+e2+e3.
inline StackyFan blowup_p3() {
  auto beta = ivs({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}, {1, 1, 1}});
  std::vector<RaySet> cones = {{0, 1, 3}, {0, 2, 3}, {1, 2, 3}, {0, 1, 4}, {0, 2, 4}, {1, 2, 4}};
  return StackyFan(3, std::move(beta), std::move(cones), "blowup-P3");
}

// Boundary fan of the octahedron: P1 x P1 x P1.
inline StackyFan octahedral() {
  auto beta = ivs({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
  std::vector<RaySet> cones;
  for (std::size_t a : {0, 1})
    for (std::size_t b : {2, 3})
      for (std::size_t c : {4, 5}) cones.push_back({a, b, c});
  return StackyFan(3, std::move(beta), std::move(cones), "P1xP1xP1");
}

inline std::vector<StackyFan> curated_3d() {
  std::vector<StackyFan> out;
  out.push_back(make_fwps({1, 1, 1, 1}));
  out.push_back(make_fwps({1, 1, 1, 2}));
  out.push_back(make_fwps({1, 2, 3, 4}));
  out.push_back(octahedral());
  out.push_back(product_fan(catalog("P2"), catalog("P1"), "P2xP1"));
  out.push_back(blowup_p3());
  out.push_back(catalog("cube-triangulated"));
  out.push_back(product_fan(catalog("nonunimodular-2d"), catalog("P1"), "nonunimodular-2d x P1"));
  out.push_back(product_fan(catalog("dP3"), catalog("P1"), "dP3xP1"));
  out.push_back(scaled(octahedral(), {2, 1, 1, 3, 1, 1}, "octahedral-stacky"));
  out.push_back(scaled(blowup_p3(), {1, 1, 1, 1, 2}, "blowup-P3-stacky"));
  out.push_back(scaled(catalog("cube-triangulated"), {1, 2}, "cube-triangulated-stacky"));
  out.push_back(quotient_by_subgroup(make_fwps({1, 1, 1, 1}), {{Rational(1, 2), Rational(1, 2), 0}}));
  return out;
}

// All weight vectors of length 2..4 with entries 1..4 and gcd 1.
inline std::vector<std::vector<Integer>> fwps_weight_suite() {
  std::vector<std::vector<Integer>> out;
  for (std::size_t len = 2; len <= 4; ++len) {
    std::vector<int> w(len, 1);
    while (true) {
      Integer g = 0;
      for (int x : w) g = cragged::gcd(g, Integer(x));
      if (g == 1) out.emplace_back(w.begin(), w.end());
      std::size_t i = len;
      while (i > 0 && w[i - 1] == 4) w[--i] = 1;
      if (i == 0) break;
      ++w[i - 1];
    }
  }
  return out;
}

// Random finite subgroup generators of order at most 6 in N (x) Q / N.
inline std::vector<RatVector> random_subgroup(Rng& rng, std::size_t n) {
  long order = uniform(rng, 2, 6);
  RatVector g(n);
  bool nontrivial = false;
  for (auto& x : g) {
    x = Rational(uniform(rng, 0, order - 1), order);
    nontrivial = nontrivial || x != 0;
  }
  if (!nontrivial) g[0] = Rational(1, order);
  return {g};
}

}  // namespace testing_support
