#pragma once

// Decision procedures for cragged stacky fans.
//
// A fan is cragged when it is exhaustive (the convex hull of any set of cones
// is a union of cones) and unimodular (every linearly independent subset of B
// is a Z-basis of the lattice generated by the b_j inside its hull). The
// equivalent fiber-wise statement: for every phi in M_R the fiber of the
// conical Lagrangian over phi, the union of -tau over the cones tau on whose
// beta-vectors phi is integral, is convex.
//
// Subset enumerations visit ray subsets as sorted index lists in
// lexicographic order, so reported witnesses are the lexicographically least.

#include "cragged/stackyfan.hpp"

namespace cragged {

/// Indices i with phi(b_i) integral.
inline RaySet integral_rays(const StackyFan& fan, const RatVector& phi) {
  require_same_dim(fan.rank(), phi.size(), "integral_rays");
  RaySet out;
  for (std::size_t i = 0; i < fan.num_rays(); ++i)
    if (is_integer(dot(phi, fan.beta(i)))) out.push_back(i);
  return out;
}

inline std::vector<std::size_t> cones_with_rays_in(const StackyFan& fan, const RaySet& allowed) {
  std::vector<std::size_t> ids;
  for (std::size_t id = 0; id < fan.cones().size(); ++id)
    if (is_subset(fan.cones()[id], allowed)) ids.push_back(id);
  return ids;
}

/// S_phi: ids of the cones tau with phi integral on every b_i in tau.
inline std::vector<std::size_t> cones_integral_on(const StackyFan& fan, const RatVector& phi) {
  return cones_with_rays_in(fan, integral_rays(fan, phi));
}

struct LagrangianFiber {
  RatVector phi;
  RaySet zero_set;                  // rays with phi(b_i) integral
  std::vector<std::size_t> s_phi;   // cone ids
  std::vector<Cone> fiber_cones;    // -tau for tau in s_phi
  Cone hull;                        // -<S_phi>
  bool convex = false;
};

namespace detail {

inline Cone hull_of_rays(const StackyFan& fan, const RaySet& rays) {
  return fan.cone_geometry(rays);
}

/// Ray indices of a face of the maximal cone `sigma` given by its geometry,
/// or nullopt if the cone is not a face of sigma.
inline std::optional<RaySet> face_rays(const StackyFan& fan, const RaySet& sigma, const Cone& sigma_geo,
                                       const Cone& candidate) {
  if (!is_face_of(candidate, sigma_geo)) return std::nullopt;
  RaySet out;
  for (const auto& r : candidate.rays())
    for (auto i : sigma)
      if (fan.ray(i) == r) out.push_back(i);
  std::sort(out.begin(), out.end());
  return out;
}

/// The union-covering criterion for a convex cone C (unnegated): every
/// C /\ sigma must be a face of sigma lying in `allowed` (given as a ray set
/// test). Returns the first maximal cone where it fails.
template <class Allowed>
std::optional<std::size_t> covering_failure(const StackyFan& fan, const Cone& c, Allowed&& allowed) {
  for (std::size_t m = 0; m < fan.max_cones().size(); ++m) {
    const RaySet& sigma = fan.max_cones()[m];
    Cone geo = fan.cone_geometry(sigma);
    auto face = face_rays(fan, sigma, geo, cone_intersection(c, geo));
    if (!face || !allowed(*face)) return m;
  }
  return std::nullopt;
}

/// Visits nonempty subsets of {0..r-1} in lexicographic order; the visitor
/// returns false to stop descending below the current subset, and the walk
/// stops as soon as `done` becomes true.
template <class Visit>
void lex_subsets(std::size_t r, Visit&& visit) {
  RaySet current;
  bool done = false;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    for (std::size_t i = start; i < r && !done; ++i) {
      current.push_back(i);
      if (visit(current, done) && !done) self(self, i + 1);
      current.pop_back();
    }
  };
  rec(rec, 0);
}

inline void require_ready(const StackyFan& fan) { fan.require_valid(); }

}  // namespace detail

/// True iff the union of the fiber cones equals their hull. Decided by the
/// covering criterion; a true verdict needs a complete fan.
inline bool fiber_is_convex(const StackyFan& fan, const LagrangianFiber& fiber) {
  Cone c = fiber.hull.negated();
  auto fails = detail::covering_failure(fan, c, [&](const RaySet& face) { return is_subset(face, fiber.zero_set); });
  if (fails) return false;
  if (!fan.is_complete()) {
    throw Error(ErrorKind::IncompleteFan, "fiber_is_convex: covering criterion is only sufficient for complete fans");
  }
  return true;
}

inline LagrangianFiber lambda_fiber(const StackyFan& fan, const RatVector& phi) {
  detail::require_ready(fan);
  LagrangianFiber f;
  f.phi = phi;
  f.zero_set = integral_rays(fan, phi);
  f.s_phi = cones_with_rays_in(fan, f.zero_set);
  RaySet hull_rays;
  for (auto id : f.s_phi) {
    f.fiber_cones.push_back(fan.cone_geometry(fan.cones()[id]).negated());
    if (fan.cones()[id].size() == 1) hull_rays.push_back(fan.cones()[id][0]);
  }
  f.hull = detail::hull_of_rays(fan, hull_rays).negated();
  f.convex = fiber_is_convex(fan, f);
  return f;
}

struct IntegralityPattern {
  RaySet zero_set;
  RatVector representative_phi;
  std::vector<std::size_t> s_phi;
};

namespace detail {

inline bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline std::vector<unsigned long> primes_above(const Integer& bound, std::size_t count) {
  std::vector<unsigned long> out;
  unsigned long p = std::max<unsigned long>(101, bound.get_ui() + 1);
  for (; out.size() < count; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

}  // namespace detail

/// Every realizable S_phi. For a subset P of rays the set of phi integral on
/// {b_i : i in P} is, modulo M, a finite union of translates of ker(B_P);
/// the translates are indexed by the SNF torsion of B_P. On each translate a
/// representative with distinct large-prime denominators on the free
/// directions attains the generic zero set, which is exactly the set of b_j
/// whose pairing is constant and integral there.
inline std::vector<IntegralityPattern> enumerate_integrality_patterns(const StackyFan& fan) {
  const std::size_t n = fan.rank();
  const std::size_t r = fan.num_rays();
  std::map<RaySet, IntegralityPattern> found;
  for (std::size_t mask = 0; mask < (std::size_t{1} << r); ++mask) {
    std::vector<IntVector> rows;
    for (std::size_t i = 0; i < r; ++i)
      if (mask & (std::size_t{1} << i)) rows.push_back(fan.beta(i));
    IntMatrix bp = IntMatrix::from_rows(rows, n);
    SmithForm snf = smith_normal_form(bp);
    const std::size_t k = snf.invariant_factors.size();

    Integer bound = 100;
    for (const auto& d : snf.invariant_factors) bound = std::max(bound, d);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t l = k; l < n; ++l) {
        Integer c = 0;
        for (std::size_t a = 0; a < n; ++a) c += fan.beta(j)[a] * snf.V(a, l);
        bound = std::max(bound, Integer(abs(c)));
      }
    auto primes = detail::primes_above(bound, n - k);

    std::vector<Integer> t(k, 0);
    while (true) {
      RatVector y(n);
      for (std::size_t i = 0; i < k; ++i) y[i] = Rational(t[i], snf.invariant_factors[i]);
      for (std::size_t l = k; l < n; ++l) y[l] = Rational(1, primes[l - k]);
      for (auto& q : y) q.canonicalize();
      RatVector phi(n, 0);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t l = 0; l < n; ++l) phi[a] += snf.V(a, l) * y[l];
      RaySet zero = integral_rays(fan, phi);
      if (!found.count(zero)) found.emplace(zero, IntegralityPattern{zero, phi, cones_with_rays_in(fan, zero)});

      std::size_t i = 0;
      while (i < k && ++t[i] == snf.invariant_factors[i]) t[i++] = 0;
      if (i == k) break;
    }
  }
  std::vector<IntegralityPattern> out;
  for (auto& [z, p] : found) out.push_back(std::move(p));
  return out;
}

struct ExhaustivenessResult {
  bool exhaustive = true;
  std::optional<RaySet> witness;          // rays R' with <R'> not a union of cones
  std::optional<std::size_t> witness_max_cone;  // index into max_cones()
};

/// Some maximal cone meets <rays> in something that is not one of its faces.
inline std::optional<std::size_t> exhaustiveness_failure(const StackyFan& fan, const RaySet& rays) {
  return detail::covering_failure(fan, detail::hull_of_rays(fan, rays), [](const RaySet&) { return true; });
}

inline ExhaustivenessResult check_exhaustiveness(const StackyFan& fan) {
  detail::require_ready(fan);
  ExhaustivenessResult res;
  detail::lex_subsets(fan.num_rays(), [&](const RaySet& s, bool& done) {
    if (auto m = exhaustiveness_failure(fan, s)) {
      res = {false, s, m};
      done = true;
    }
    return true;
  });
  if (res.exhaustive && !fan.is_complete()) {
    throw Error(ErrorKind::IncompleteFan, "check_exhaustiveness: a positive verdict needs a complete fan");
  }
  return res;
}

struct UnimodularityWitness {
  RaySet subset;                     // linearly independent b_i
  RaySet lattice_generators;         // the b_j lying in <rho_i : i in subset>
  IntMatrix nt_basis;                // HNF basis of N_T
  LatticeIndex index;
};

struct UnimodularityResult {
  bool unimodular = true;
  std::optional<UnimodularityWitness> witness;
};

/// The unimodularity datum of one linearly independent subset.
inline UnimodularityWitness unimodularity_datum(const StackyFan& fan, const RaySet& subset) {
  Cone hull = detail::hull_of_rays(fan, subset);
  UnimodularityWitness w;
  w.subset = subset;
  std::vector<IntVector> sub, amb;
  for (auto i : subset) sub.push_back(fan.beta(i));
  for (std::size_t j = 0; j < fan.num_rays(); ++j)
    if (hull.contains(fan.beta(j))) {
      w.lattice_generators.push_back(j);
      amb.push_back(fan.beta(j));
    }
  w.nt_basis = span_basis(amb, fan.rank());
  w.index = sublattice_index(sub, amb, fan.rank());
  return w;
}

inline UnimodularityResult check_unimodularity(const StackyFan& fan) {
  detail::require_ready(fan);
  UnimodularityResult res;
  detail::lex_subsets(fan.num_rays(), [&](const RaySet& s, bool& done) {
    std::vector<IntVector> vs;
    for (auto i : s) vs.push_back(fan.beta(i));
    if (rank(vs, fan.rank()) != s.size()) return false;  // supersets are dependent too
    auto w = unimodularity_datum(fan, s);
    if (!w.index.is_basis()) {
      res = {false, std::move(w)};
      done = true;
    }
    return true;
  });
  return res;
}

struct CrossCheck {
  std::size_t patterns = 0;
  std::size_t nonconvex = 0;
  bool consistent = false;  // cragged <=> every pattern has a convex fiber
};

struct CraggednessReport {
  ExhaustivenessResult exhaustiveness;
  UnimodularityResult unimodularity;
  bool cragged = false;
  std::optional<LagrangianFiber> fiber_witness;
  std::optional<CrossCheck> cross_check;

  bool exhaustive() const { return exhaustiveness.exhaustive; }
  bool unimodular() const { return unimodularity.unimodular; }
};

namespace detail {

/// phi integral on the witness subset but not on some b_0 in N_T; its fiber
/// contains -rho_i for the subset but not -rho_0, which lies in their hull.
inline RatVector phi_from_unimodularity_failure(const StackyFan& fan, const UnimodularityWitness& w) {
  const std::size_t n = fan.rank();
  std::vector<RatVector> cols(n, RatVector(w.subset.size()));
  for (std::size_t a = 0; a < w.subset.size(); ++a)
    for (std::size_t d = 0; d < n; ++d) cols[d][a] = fan.beta(w.subset[a])[d];
  for (auto j : w.lattice_generators) {
    auto c = solve_rational(cols, to_rational(fan.beta(j)), w.subset.size());
    if (!c || is_integral(*c)) continue;
    std::size_t star = 0;
    while (is_integer((*c)[star])) ++star;
    // Rows: the subset vectors, completed by standard basis vectors.
    std::vector<RatVector> rows;
    RatVector rhs;
    std::vector<IntVector> basis;
    for (std::size_t a = 0; a < w.subset.size(); ++a) {
      basis.push_back(fan.beta(w.subset[a]));
      rows.push_back(to_rational(fan.beta(w.subset[a])));
      rhs.push_back(a == star ? 1 : 0);
    }
    for (std::size_t e = 0; e < n && basis.size() < n; ++e) {
      IntVector unit(n, 0);
      unit[e] = 1;
      basis.push_back(unit);
      if (rank(basis, n) < basis.size()) {
        basis.pop_back();
        continue;
      }
      rows.push_back(to_rational(unit));
      rhs.push_back(0);
    }
    return *solve_rational(rows, rhs, n);
  }
  throw std::logic_error("unimodularity witness has no b_0 outside the span of the subset");
}

}  // namespace detail

/// Definition-based verdict, with a non-convex fiber as certificate when the
/// fan is not cragged. `cross_check` also runs every integrality pattern.
inline CraggednessReport is_cragged(const StackyFan& fan, bool cross_check = false) {
  detail::require_ready(fan);
  if (!fan.is_complete()) throw Error(ErrorKind::IncompleteFan, "is_cragged: fan is not complete");
  CraggednessReport rep;
  rep.exhaustiveness = check_exhaustiveness(fan);
  rep.unimodularity = check_unimodularity(fan);
  rep.cragged = rep.exhaustive() && rep.unimodular();

  std::optional<std::vector<IntegralityPattern>> patterns;
  auto all_patterns = [&]() -> const std::vector<IntegralityPattern>& {
    if (!patterns) patterns = enumerate_integrality_patterns(fan);
    return *patterns;
  };

  if (!rep.cragged) {
    if (!rep.unimodular()) {
      auto f = lambda_fiber(fan, detail::phi_from_unimodularity_failure(fan, *rep.unimodularity.witness));
      if (!f.convex) rep.fiber_witness = std::move(f);
    }
    if (!rep.fiber_witness) {
      for (const auto& p : all_patterns()) {
        auto f = lambda_fiber(fan, p.representative_phi);
        if (!f.convex) {
          rep.fiber_witness = std::move(f);
          break;
        }
      }
    }
  }
  if (cross_check) {
    CrossCheck cc;
    for (const auto& p : all_patterns()) {
      ++cc.patterns;
      if (!lambda_fiber(fan, p.representative_phi).convex) ++cc.nonconvex;
    }
    cc.consistent = rep.cragged == (cc.nonconvex == 0);
    rep.cross_check = cc;
  }
  return rep;
}

}  // namespace cragged
