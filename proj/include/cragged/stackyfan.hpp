#pragma once

// Stacky fans (N, Sigma, beta) with N = Z^n: the vectors b_i = beta(e_i),
// a simplicial fan whose i-th ray is spanned by b_i, and its face closure.

#include "cragged/polyhedra.hpp"

#include <numeric>
#include <set>

namespace cragged {

/// Sorted ray indices of a simplicial cone; {} is the zero cone.
using RaySet = std::vector<std::size_t>;

inline bool is_subset(const RaySet& a, const RaySet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct ValidationFailure {
  std::string axiom;
  std::string witness;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationFailure> failures;
  bool is_complete = false;
};

namespace detail {

inline std::string describe(const RaySet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

inline std::string describe(const IntVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].get_str();
  return out + ")";
}

/// Unimodular U with U * v = e_1 for a primitive vector v.
inline IntMatrix unimodular_to_first_axis(const IntVector& v) {
  return hermite_normal_form(IntMatrix::from_columns({v}, v.size())).U;
}

/// Recursive link criterion for completeness of a simplicial fan given by
/// primitive ray vectors and maximal cones.
inline bool link_complete(std::size_t dim, const std::vector<IntVector>& rays,
                          const std::vector<RaySet>& max_cones) {
  if (dim == 0) return true;
  std::set<std::size_t> used;
  for (const auto& c : max_cones) used.insert(c.begin(), c.end());
  for (const auto& c : max_cones)
    if (c.size() != dim) return false;
  if (dim == 1) {
    bool pos = false, neg = false;
    for (auto i : used) (rays[i][0] > 0 ? pos : neg) = true;
    return pos && neg;
  }
  std::map<RaySet, int> ridge_count;
  for (const auto& c : max_cones)
    for (std::size_t skip = 0; skip < c.size(); ++skip) {
      RaySet ridge;
      for (std::size_t j = 0; j < c.size(); ++j)
        if (j != skip) ridge.push_back(c[j]);
      ++ridge_count[ridge];
    }
  for (const auto& [ridge, count] : ridge_count)
    if (count != 2) return false;

  for (auto ray : used) {
    IntMatrix u = unimodular_to_first_axis(rays[ray]);
    std::map<std::size_t, std::size_t> local;
    std::vector<IntVector> link_rays;
    std::vector<RaySet> link_cones;
    for (const auto& c : max_cones) {
      if (!std::binary_search(c.begin(), c.end(), ray)) continue;
      RaySet lc;
      for (auto j : c) {
        if (j == ray) continue;
        auto [it, inserted] = local.emplace(j, link_rays.size());
        if (inserted) {
          IntVector img(dim - 1);
          for (std::size_t a = 1; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b) img[a - 1] += u(a, b) * rays[j][b];
          link_rays.push_back(primitive(std::move(img)));
        }
        lc.push_back(it->second);
      }
      std::sort(lc.begin(), lc.end());
      link_cones.push_back(std::move(lc));
    }
    if (!link_complete(dim - 1, link_rays, link_cones)) return false;
  }
  return true;
}

/// Deterministic direction sample: {-1,0,1}^n minus 0, and a perturbed copy.
inline std::vector<IntVector> direction_sample(std::size_t dim) {
  static const int offsets[] = {1, 2, 3, 5, 7, 11, 13, 17};
  std::vector<IntVector> out;
  IntVector v(dim, -1);
  while (true) {
    if (!is_zero(v)) {
      out.push_back(v);
      IntVector p(dim);
      for (std::size_t i = 0; i < dim; ++i) p[i] = 23 * v[i] + offsets[i % 8];
      out.push_back(std::move(p));
    }
    std::size_t i = 0;
    while (i < dim && v[i] == 1) v[i++] = -1;
    if (i == dim) break;
    ++v[i];
  }
  return out;
}

}  // namespace detail

class StackyFan {
 public:
  /// Structural problems (wrong vector lengths, out-of-range or repeated
  /// indices, duplicate cones) throw ValidationError. Geometric axioms are
  /// checked and recorded in validation().
  StackyFan(std::size_t rank, std::vector<IntVector> beta, std::vector<RaySet> cones, std::string name = {},
            std::string metadata = {})
      : rank_(rank), beta_(std::move(beta)), name_(std::move(name)), metadata_(std::move(metadata)) {
    if (rank_ == 0) throw Error(ErrorKind::ValidationError, "rank must be positive");
    for (std::size_t i = 0; i < beta_.size(); ++i) {
      if (beta_[i].size() != rank_) {
        throw Error(ErrorKind::ValidationError,
                    "beta[" + std::to_string(i) + "] has length " + std::to_string(beta_[i].size()) +
                        ", expected " + std::to_string(rank_));
      }
      rays_.push_back(primitive(beta_[i]));
    }
    std::set<RaySet> seen;
    for (std::size_t c = 0; c < cones.size(); ++c) {
      RaySet s = cones[c];
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
        throw Error(ErrorKind::ValidationError, "max_cones[" + std::to_string(c) + "] repeats a ray index");
      }
      for (auto i : s)
        if (i >= beta_.size()) {
          throw Error(ErrorKind::ValidationError, "max_cones[" + std::to_string(c) + "] index " +
                                                      std::to_string(i) + " out of range");
        }
      if (!seen.insert(s).second) {
        throw Error(ErrorKind::ValidationError, "max_cones[" + std::to_string(c) + "] is a duplicate cone");
      }
    }
    for (const auto& s : seen) {
      bool dominated = std::any_of(seen.begin(), seen.end(),
                                   [&](const RaySet& t) { return t.size() > s.size() && is_subset(s, t); });
      if (!dominated) max_cones_.push_back(s);
    }
    std::set<RaySet> closure{RaySet{}};
    for (const auto& m : max_cones_) {
      for (std::size_t mask = 1; mask < (std::size_t{1} << m.size()); ++mask) {
        RaySet f;
        for (std::size_t j = 0; j < m.size(); ++j)
          if (mask & (std::size_t{1} << j)) f.push_back(m[j]);
        closure.insert(std::move(f));
      }
    }
    cones_.assign(closure.begin(), closure.end());
    report_ = run_validation();
  }

  std::size_t rank() const noexcept { return rank_; }
  std::size_t num_rays() const noexcept { return beta_.size(); }
  const std::vector<IntVector>& beta() const noexcept { return beta_; }
  const IntVector& beta(std::size_t i) const { return beta_.at(i); }
  /// Primitive generator of the i-th ray.
  const IntVector& ray(std::size_t i) const { return rays_.at(i); }
  const std::vector<IntVector>& rays() const noexcept { return rays_; }
  const std::vector<RaySet>& max_cones() const noexcept { return max_cones_; }
  /// All cones, lexicographically sorted; index 0 is the zero cone.
  const std::vector<RaySet>& cones() const noexcept { return cones_; }
  const RaySet& cone(std::size_t id) const {
    if (id >= cones_.size()) throw Error(ErrorKind::ValidationError, "cone id " + std::to_string(id) + " out of range");
    return cones_[id];
  }
  std::optional<std::size_t> cone_id(const RaySet& rays) const {
    auto it = std::lower_bound(cones_.begin(), cones_.end(), rays);
    if (it == cones_.end() || *it != rays) return std::nullopt;
    return static_cast<std::size_t>(it - cones_.begin());
  }
  const std::string& name() const noexcept { return name_; }
  const std::string& metadata() const noexcept { return metadata_; }

  const ValidationReport& validation() const noexcept { return report_; }
  bool is_complete() const noexcept { return report_.is_complete; }

  void require_valid() const {
    if (!report_.ok) {
      const auto& f = report_.failures.front();
      throw Error(ErrorKind::ValidationError, "fan fails axiom '" + f.axiom + "': " + f.witness);
    }
  }

  Cone cone_geometry(const RaySet& rays) const {
    std::vector<IntVector> gens;
    for (auto i : rays) gens.push_back(rays_[i]);
    return Cone::from_generators(rank_, gens);
  }

  /// n x r matrix with columns b_i.
  IntMatrix beta_matrix() const { return IntMatrix::from_columns(beta_, rank_); }

  /// Same cones and name with the beta vectors replaced.
  StackyFan with_beta(std::vector<IntVector> beta, std::string name) const {
    return StackyFan(rank_, std::move(beta), max_cones_, std::move(name), metadata_);
  }

 private:
  ValidationReport run_validation() const {
    ValidationReport rep;
    auto fail = [&](std::string axiom, std::string witness) {
      rep.failures.push_back({std::move(axiom), std::move(witness)});
    };
    for (std::size_t i = 0; i < beta_.size(); ++i)
      if (is_zero(beta_[i])) fail("beta-nonzero", "b_" + std::to_string(i) + " = 0");
    bool simplicial = true;
    for (const auto& c : max_cones_) {
      std::vector<IntVector> vs;
      for (auto i : c) vs.push_back(beta_[i]);
      if (cragged::rank(vs, rank_) != c.size()) {
        simplicial = false;
        fail("simplicial", "cone " + detail::describe(c) + " has dependent beta-vectors");
      }
    }
    if (cragged::rank(beta_, rank_) != rank_) fail("spanning", "beta-vectors do not span N_R");
    bool distinct = true;
    for (std::size_t i = 0; i < rays_.size(); ++i)
      for (std::size_t j = i + 1; j < rays_.size(); ++j)
        if (!is_zero(rays_[i]) && rays_[i] == rays_[j]) {
          distinct = false;
          fail("one-beta-per-ray", "b_" + std::to_string(i) + " and b_" + std::to_string(j) + " span the same ray " +
                                       detail::describe(rays_[i]));
        }
    std::vector<bool> used(beta_.size(), false);
    for (const auto& c : max_cones_)
      for (auto i : c) used[i] = true;
    for (std::size_t i = 0; i < used.size(); ++i)
      if (!used[i]) fail("ray-in-cone", "ray " + std::to_string(i) + " lies in no cone");
    if (simplicial && distinct && rep.failures.empty()) {
      std::vector<Cone> geo;
      for (const auto& c : max_cones_) geo.push_back(cone_geometry(c));
      for (std::size_t a = 0; a < max_cones_.size(); ++a)
        for (std::size_t b = a + 1; b < max_cones_.size(); ++b) {
          RaySet common;
          std::set_intersection(max_cones_[a].begin(), max_cones_[a].end(), max_cones_[b].begin(),
                                max_cones_[b].end(), std::back_inserter(common));
          if (!(cone_intersection(geo[a], geo[b]) == cone_geometry(common))) {
            fail("fan-intersection", "cones " + detail::describe(max_cones_[a]) + " and " +
                                         detail::describe(max_cones_[b]) + " do not meet in a common face");
          }
        }
      if (rep.failures.empty()) {
        rep.is_complete = detail::link_complete(rank_, rays_, max_cones_);
        if (rep.is_complete) {
          for (const auto& s : detail::direction_sample(rank_)) {
            bool covered = std::any_of(geo.begin(), geo.end(), [&](const Cone& c) { return c.contains(s); });
            if (!covered) {
              rep.is_complete = false;
              fail("completeness-sample", "link criterion passed but direction " + detail::describe(s) +
                                              " is not covered");
              break;
            }
          }
        }
      }
    }
    rep.ok = rep.failures.empty();
    return rep;
  }

  std::size_t rank_;
  std::vector<IntVector> beta_;
  std::vector<IntVector> rays_;
  std::vector<RaySet> max_cones_;
  std::vector<RaySet> cones_;
  std::string name_;
  std::string metadata_;
  ValidationReport report_;
};

inline const ValidationReport& validate(const StackyFan& fan) { return fan.validation(); }

/// Ray sets of maximal cones of a complete 2-d fan with the given rays, in
/// angular order.
inline std::vector<RaySet> angular_cones_2d(const std::vector<IntVector>& beta) {
  std::vector<std::size_t> order(beta.size());
  std::iota(order.begin(), order.end(), 0);
  auto half = [](const IntVector& v) { return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1; };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    int ha = half(beta[a]), hb = half(beta[b]);
    if (ha != hb) return ha < hb;
    return beta[a][0] * beta[b][1] - beta[a][1] * beta[b][0] > 0;
  });
  std::vector<RaySet> cones;
  for (std::size_t i = 0; i < order.size(); ++i) {
    RaySet c{order[i], order[(i + 1) % order.size()]};
    std::sort(c.begin(), c.end());
    cones.push_back(std::move(c));
  }
  return cones;
}

inline StackyFan complete_fan_2d(std::vector<IntVector> beta, std::string name = {}) {
  auto cones = angular_cones_2d(beta);
  return StackyFan(2, std::move(beta), std::move(cones), std::move(name));
}

/// Fake weighted projective space with weights m_1..m_{n+1}: b_i is the image
/// of e_i in Z^{n+1} / Z(m_1..m_{n+1}) identified with Z^n, so sum m_i b_i = 0.
inline StackyFan make_fwps(const std::vector<Integer>& weights) {
  if (weights.size() < 2) throw Error(ErrorKind::BadWeights, "make_fwps: need at least two weights");
  Integer g = 0;
  for (const auto& w : weights) {
    if (w <= 0) throw Error(ErrorKind::BadWeights, "make_fwps: weights must be positive");
    g = gcd(g, w);
  }
  if (g != 1) throw Error(ErrorKind::BadWeights, "make_fwps: weights must have gcd 1");
  const std::size_t k = weights.size();
  const std::size_t n = k - 1;
  IntMatrix u = detail::unimodular_to_first_axis(weights);
  std::vector<IntVector> beta(k, IntVector(n));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) beta[i][j] = u(j + 1, i);
  std::vector<RaySet> cones;
  for (std::size_t skip = 0; skip < k; ++skip) {
    RaySet c;
    for (std::size_t i = 0; i < k; ++i)
      if (i != skip) c.push_back(i);
    cones.push_back(std::move(c));
  }
  std::string name = "fwps(";
  for (std::size_t i = 0; i < k; ++i) name += (i ? "," : "") + weights[i].get_str();
  return StackyFan(n, std::move(beta), std::move(cones), name + ")");
}

/// Rows (over Q) of a basis of the lattice generated by Z^n and `gens`.
inline std::vector<RatVector> overlattice_basis(std::size_t n, const std::vector<RatVector>& gens) {
  Integer den = 1;
  for (const auto& g : gens) {
    require_same_dim(n, g.size(), "quotient_by_subgroup");
    for (const auto& q : g) den = lcm(den, q.get_den());
  }
  std::vector<IntVector> rows;
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n, 0);
    e[i] = den;
    rows.push_back(std::move(e));
  }
  for (const auto& g : gens) {
    IntVector r;
    for (const auto& q : g) r.push_back(Integer(q * den));
    rows.push_back(std::move(r));
  }
  IntMatrix h = span_basis(rows, n);
  std::vector<RatVector> basis;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    RatVector b;
    for (std::size_t j = 0; j < n; ++j) b.push_back(Rational(h(i, j), den));
    for (auto& q : b) q.canonicalize();
    basis.push_back(std::move(b));
  }
  return basis;
}

/// Coordinates of v in a rational basis (rows); nullopt if not integral.
inline std::optional<IntVector> integral_coordinates(const std::vector<RatVector>& basis, const RatVector& v) {
  const std::size_t n = v.size();
  std::vector<RatVector> cols(n, RatVector(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) cols[j][i] = basis[i][j];
  auto c = solve_rational(cols, v, basis.size());
  if (!c || !is_integral(*c)) return std::nullopt;
  IntVector out;
  for (const auto& q : *c) out.push_back(q.get_num());
  return out;
}

/// Fan of the quotient by the finite subgroup of the torus generated by
/// `gens` in N (x) Q: the lattice becomes N' = N + sum Z g_j, cones are
/// unchanged, and each b_i is rewritten in the HNF basis of N'.
inline StackyFan quotient_by_subgroup(const StackyFan& fan, const std::vector<RatVector>& gens) {
  if (gens.empty()) return fan;
  auto basis = overlattice_basis(fan.rank(), gens);
  std::vector<IntVector> beta;
  for (const auto& b : fan.beta()) beta.push_back(*integral_coordinates(basis, to_rational(b)));
  return fan.with_beta(std::move(beta), fan.name().empty() ? std::string() : fan.name() + "/G");
}

namespace detail {

inline IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline std::vector<IntVector> ivs(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<IntVector> out;
  for (auto r : rows) out.push_back(iv(r));
  return out;
}

// Vertices of the 16 reflexive polygons, ordered by boundary point count.
inline const std::vector<std::vector<IntVector>>& reflexive_polygons() {
  static const std::vector<std::vector<IntVector>> polys = {
      ivs({{-1, -1}, {1, 0}, {0, 1}}),
      ivs({{-1, -1}, {1, 0}, {-1, 1}}),
      ivs({{-1, -1}, {1, 0}, {0, 1}, {-1, 0}}),
      ivs({{-1, 0}, {1, -1}, {1, 0}, {-1, 1}}),
      ivs({{-1, -1}, {1, -1}, {0, 1}, {-1, 0}}),
      ivs({{-1, -1}, {0, -1}, {1, 0}, {0, 1}, {-1, 0}}),
      ivs({{-1, -1}, {2, -1}, {-1, 1}}),
      ivs({{-1, -1}, {1, -1}, {0, 1}, {-1, 1}}),
      ivs({{-1, -1}, {1, -1}, {1, 0}, {0, 1}, {-1, 0}}),
      ivs({{-1, 0}, {0, -1}, {1, -1}, {1, 0}, {0, 1}, {-1, 1}}),
      ivs({{-1, -1}, {2, -1}, {0, 1}, {-1, 0}}),
      ivs({{-1, -1}, {1, -1}, {1, 0}, {0, 1}, {-1, 1}}),
      ivs({{-1, -1}, {3, -1}, {-1, 1}}),
      ivs({{-1, -1}, {2, -1}, {0, 1}, {-1, 1}}),
      ivs({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}),
      ivs({{-1, -1}, {2, -1}, {-1, 2}}),
  };
  return polys;
}

/// Fan over the boundary of the cube [-1,1]^3 with each square face split
/// along the diagonal through its smallest-index vertex. Complete, but the
/// hull of three vertices of a face across the other diagonal is not a union
/// of cones.
inline StackyFan triangulated_cube() {
  std::vector<IntVector> beta;
  for (int i = 0; i < 8; ++i) beta.push_back(iv({i & 1 ? 1 : -1, i & 2 ? 1 : -1, i & 4 ? 1 : -1}));
  std::vector<RaySet> cones;
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) {
      std::vector<std::size_t> face;
      for (std::size_t i = 0; i < 8; ++i)
        if (((i >> axis) & 1) == static_cast<std::size_t>(side)) face.push_back(i);
      std::size_t v0 = face[0];
      std::size_t v3 = v0 ^ (7u & ~(1u << axis));
      std::vector<std::size_t> others;
      for (auto v : face)
        if (v != v0 && v != v3) others.push_back(v);
      for (auto v : others) {
        RaySet c{v0, v, v3};
        std::sort(c.begin(), c.end());
        cones.push_back(std::move(c));
      }
    }
  return StackyFan(3, std::move(beta), std::move(cones), "cube-triangulated");
}

}  // namespace detail

inline std::vector<std::string> catalog_names() {
  std::vector<std::string> names = {"P1",  "P2",  "P1xP1", "dP1",  "dP2",  "dP3",  "P112",
                                    "nonexhaustive-3d", "nonunimodular-2d", "cube-triangulated"};
  for (int i = 1; i <= 16; ++i) names.push_back((i < 10 ? "reflexive-0" : "reflexive-") + std::to_string(i));
  return names;
}

inline StackyFan catalog(std::string_view name) {
  using detail::ivs;
  const std::string n(name);
  if (n == "P1") return StackyFan(1, ivs({{1}, {-1}}), {{0}, {1}}, n);
  if (n == "P2") return complete_fan_2d(ivs({{1, 0}, {0, 1}, {-1, -1}}), n);
  if (n == "P1xP1") return complete_fan_2d(ivs({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}), n);
  if (n == "dP1") return complete_fan_2d(ivs({{1, 0}, {1, 1}, {0, 1}, {-1, -1}}), n);
  if (n == "dP2") return complete_fan_2d(ivs({{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}}), n);
  if (n == "dP3") return complete_fan_2d(ivs({{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}}), n);
  if (n == "P112") return complete_fan_2d(ivs({{1, 0}, {0, 1}, {-1, -2}}), n);
  if (n == "nonunimodular-2d") return complete_fan_2d(ivs({{1, 0}, {1, 1}, {1, -1}, {-1, 0}}), n);
  if (n == "nonexhaustive-3d") {
    return StackyFan(3, ivs({{1, 1, 1}, {-1, 1, 1}, {1, -1, 1}, {-1, -1, 1}}), {{0, 1, 3}, {0, 2, 3}}, n,
                     "pyramid <r0,r1,r2,r3> over the square with edges <r0,r1>,<r0,r2>,<r1,r3>,<r2,r3>, "
                     "subdivided along the diagonal <r0,r3>");
  }
  if (n == "cube-triangulated") return detail::triangulated_cube();
  if (n.rfind("reflexive-", 0) == 0) {
    int idx = 0;
    try {
      idx = std::stoi(n.substr(10));
    } catch (const std::exception&) {
      idx = 0;
    }
    if (idx >= 1 && idx <= 16 && n.size() == 12) return complete_fan_2d(detail::reflexive_polygons()[idx - 1], n);
  }
  throw Error(ErrorKind::UnknownName, "catalog: unknown fan '" + n + "'");
}

}  // namespace cragged
