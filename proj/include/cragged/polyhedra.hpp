#pragma once

// Exact rational cones and polyhedra.
//
// V-form <-> H-form conversion is done with the double description method
// (incremental Motzkin with the algebraic adjacency test). A Cone always
// carries both forms; they are computed together at construction so a Cone
// is an immutable value that can be shared freely.

#include "cragged/lattice.hpp"

#include <map>

namespace cragged {

namespace detail {

struct Generators {
  std::vector<IntVector> lineality;  // basis of the lineality space
  std::vector<IntVector> rays;       // extreme rays modulo the lineality space
};

inline std::size_t tight_rank(const std::vector<IntVector>& constraints, const std::vector<bool>& tight,
                              std::size_t dim) {
  std::vector<IntVector> rows;
  for (std::size_t i = 0; i < constraints.size(); ++i)
    if (tight[i]) rows.push_back(constraints[i]);
  return rank(rows, dim);
}

/// Generators of {x : <a, x> >= 0 for every a in constraints}.
inline Generators double_description(std::size_t dim, const std::vector<IntVector>& constraints) {
  Generators g;
  for (std::size_t i = 0; i < dim; ++i) {
    IntVector e(dim, 0);
    e[i] = 1;
    g.lineality.push_back(std::move(e));
  }
  std::vector<IntVector> processed;
  for (const auto& a : constraints) {
    require_same_dim(dim, a.size(), "double_description");
    if (is_zero(a)) continue;

    std::size_t hit = g.lineality.size();
    for (std::size_t i = 0; i < g.lineality.size(); ++i) {
      if (dot(a, g.lineality[i]) != 0) {
        hit = i;
        break;
      }
    }
    if (hit != g.lineality.size()) {
      // The new hyperplane cuts the lineality space: one lineality direction
      // becomes a ray, everything else is moved into the hyperplane.
      IntVector l0 = g.lineality[hit];
      Integer al0 = dot(a, l0);
      if (al0 < 0) {
        l0 = negated(l0);
        al0 = -al0;
      }
      auto pushed = [&](const IntVector& v) {
        Integer av = dot(a, v);
        IntVector w(dim);
        for (std::size_t k = 0; k < dim; ++k) w[k] = al0 * v[k] - av * l0[k];
        return primitive(std::move(w));
      };
      std::vector<IntVector> lin;
      for (std::size_t i = 0; i < g.lineality.size(); ++i)
        if (i != hit) lin.push_back(pushed(g.lineality[i]));
      std::vector<IntVector> rays;
      for (const auto& r : g.rays) rays.push_back(pushed(r));
      rays.push_back(primitive(l0));
      g.lineality = std::move(lin);
      g.rays = std::move(rays);
      processed.push_back(a);
      continue;
    }

    std::vector<Integer> values;
    values.reserve(g.rays.size());
    for (const auto& r : g.rays) values.push_back(dot(a, r));

    std::vector<std::vector<bool>> tight(g.rays.size(), std::vector<bool>(processed.size()));
    for (std::size_t i = 0; i < g.rays.size(); ++i)
      for (std::size_t c = 0; c < processed.size(); ++c) tight[i][c] = dot(processed[c], g.rays[i]) == 0;

    const std::size_t pointed_dim = dim - g.lineality.size();
    std::vector<IntVector> next;
    for (std::size_t i = 0; i < g.rays.size(); ++i)
      if (values[i] >= 0) next.push_back(g.rays[i]);
    for (std::size_t p = 0; p < g.rays.size(); ++p) {
      if (values[p] <= 0) continue;
      for (std::size_t q = 0; q < g.rays.size(); ++q) {
        if (values[q] >= 0) continue;
        std::vector<bool> common(processed.size());
        for (std::size_t c = 0; c < processed.size(); ++c) common[c] = tight[p][c] && tight[q][c];
        if (pointed_dim < 2 || tight_rank(processed, common, dim) != pointed_dim - 2) continue;
        IntVector w(dim);
        for (std::size_t k = 0; k < dim; ++k) w[k] = values[p] * g.rays[q][k] - values[q] * g.rays[p][k];
        next.push_back(primitive(std::move(w)));
      }
    }
    g.rays = std::move(next);
    processed.push_back(a);
  }
  return g;
}

/// Canonical form: lineality basis in HNF, rays projected onto the
/// orthogonal complement of the lineality space, primitive, sorted, unique.
inline Generators canonicalize(std::size_t dim, Generators g) {
  IntMatrix lin = span_basis(g.lineality, dim);
  Generators out;
  out.lineality = lin.row_vectors();
  std::vector<RatVector> gram;
  for (const auto& l : out.lineality) {
    RatVector row;
    for (const auto& m : out.lineality) row.push_back(Rational(dot(l, m)));
    gram.push_back(std::move(row));
  }
  for (const auto& r : g.rays) {
    RatVector proj = to_rational(r);
    if (!out.lineality.empty()) {
      RatVector rhs;
      for (const auto& l : out.lineality) rhs.push_back(Rational(dot(l, r)));
      auto coeff = solve_rational(gram, rhs, out.lineality.size());
      for (std::size_t i = 0; i < out.lineality.size(); ++i)
        for (std::size_t k = 0; k < dim; ++k) proj[k] -= (*coeff)[i] * out.lineality[i][k];
    }
    IntVector v = primitive_direction(proj);
    if (!is_zero(v)) out.rays.push_back(std::move(v));
  }
  std::sort(out.rays.begin(), out.rays.end());
  out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
  return out;
}

inline std::vector<IntVector> all_generators(const Generators& g) {
  std::vector<IntVector> out;
  for (const auto& l : g.lineality) {
    out.push_back(l);
    out.push_back(negated(l));
  }
  out.insert(out.end(), g.rays.begin(), g.rays.end());
  return out;
}

}  // namespace detail

/// A closed polyhedral cone in Q^d with both representations.
class Cone {
 public:
  Cone() = default;

  static Cone from_generators(std::size_t dim, const std::vector<IntVector>& gens) {
    for (const auto& v : gens) require_same_dim(dim, v.size(), "cone_from_generators");
    auto dual = detail::canonicalize(dim, detail::double_description(dim, gens));
    auto primal = detail::canonicalize(dim, detail::double_description(dim, detail::all_generators(dual)));
    return Cone(dim, std::move(primal), std::move(dual));
  }

  static Cone from_generators(std::size_t dim, const std::vector<RatVector>& gens) {
    std::vector<IntVector> ints;
    for (const auto& v : gens) {
      require_same_dim(dim, v.size(), "cone_from_generators");
      ints.push_back(primitive_direction(v));
    }
    return from_generators(dim, ints);
  }

  /// {x : <a, x> >= 0 for every a}.
  static Cone from_inequalities(std::size_t dim, const std::vector<IntVector>& covectors) {
    auto primal = detail::canonicalize(dim, detail::double_description(dim, covectors));
    auto dual = detail::canonicalize(dim, detail::double_description(dim, detail::all_generators(primal)));
    return Cone(dim, std::move(primal), std::move(dual));
  }

  static Cone origin(std::size_t dim) { return from_generators(dim, std::vector<IntVector>{}); }
  static Cone whole_space(std::size_t dim) { return from_inequalities(dim, {}); }

  std::size_t ambient_dim() const noexcept { return dim_; }
  const std::vector<IntVector>& lineality() const noexcept { return primal_.lineality; }
  const std::vector<IntVector>& rays() const noexcept { return primal_.rays; }
  bool is_pointed() const noexcept { return primal_.lineality.empty(); }

  /// Lineality basis with both signs, then rays; a generating set.
  std::vector<IntVector> generators() const { return detail::all_generators(primal_); }

  /// H-form: the cone is {x : <u, x> >= 0 for every u in facets()}.
  std::vector<IntVector> facets() const { return detail::all_generators(dual_); }

  std::size_t dimension() const { return primal_.lineality.size() + rank(primal_.rays, dim_); }

  bool contains(const IntVector& x) const {
    require_same_dim(dim_, x.size(), "cone_contains");
    for (const auto& l : dual_.lineality)
      if (dot(l, x) != 0) return false;
    for (const auto& u : dual_.rays)
      if (dot(u, x) < 0) return false;
    return true;
  }

  bool contains(const RatVector& x) const {
    require_same_dim(dim_, x.size(), "cone_contains");
    return contains(primitive_direction(x));
  }

  bool contains(const Cone& other) const {
    for (const auto& g : other.generators())
      if (!contains(g)) return false;
    return true;
  }

  /// {u : <u, g> >= 0 for every g in the cone}.
  Cone dual() const { return Cone(dim_, dual_, primal_); }

  Cone negated() const {
    std::vector<IntVector> gens;
    for (const auto& g : generators()) gens.push_back(cragged::negated(g));
    return from_generators(dim_, gens);
  }

  friend bool operator==(const Cone& a, const Cone& b) {
    return a.dim_ == b.dim_ && a.primal_.lineality == b.primal_.lineality && a.primal_.rays == b.primal_.rays;
  }

 private:
  Cone(std::size_t dim, detail::Generators primal, detail::Generators dual)
      : dim_(dim), primal_(std::move(primal)), dual_(std::move(dual)) {}

  std::size_t dim_ = 0;
  detail::Generators primal_;
  detail::Generators dual_;
};

inline Cone cone_from_generators(std::size_t dim, const std::vector<IntVector>& gens) {
  return Cone::from_generators(dim, gens);
}

inline bool cone_contains(const Cone& c, const RatVector& x) { return c.contains(x); }

inline Cone dual_cone(const Cone& c) { return c.dual(); }

inline Cone cone_intersection(const Cone& a, const Cone& b) {
  require_same_dim(a.ambient_dim(), b.ambient_dim(), "cone_intersection");
  auto constraints = a.facets();
  auto more = b.facets();
  constraints.insert(constraints.end(), more.begin(), more.end());
  return Cone::from_inequalities(a.ambient_dim(), constraints);
}

inline bool is_simplicial(const Cone& c) {
  return c.is_pointed() && rank(c.rays(), c.ambient_dim()) == c.rays().size();
}

/// True iff `face` is the cone on a subset of the rays of the simplicial cone.
inline bool is_face_of(const Cone& face, const Cone& simplicial) {
  if (!is_simplicial(simplicial)) throw Error(ErrorKind::NotSimplicial, "is_face_of: cone is not simplicial");
  require_same_dim(simplicial.ambient_dim(), face.ambient_dim(), "is_face_of");
  if (!face.is_pointed()) return false;
  const auto& rays = simplicial.rays();
  return std::all_of(face.rays().begin(), face.rays().end(), [&](const IntVector& r) {
    return std::binary_search(rays.begin(), rays.end(), r);
  });
}

/// <normal, x> >= bound
struct Inequality {
  IntVector normal;
  Integer bound;

  friend bool operator==(const Inequality&, const Inequality&) = default;
};

class Polyhedron {
 public:
  Polyhedron() = default;
  Polyhedron(std::size_t dim, std::vector<Inequality> inequalities)
      : dim_(dim), inequalities_(std::move(inequalities)) {
    for (const auto& ineq : inequalities_) require_same_dim(dim_, ineq.normal.size(), "Polyhedron");
  }

  static Polyhedron whole_space(std::size_t dim) { return Polyhedron(dim, {}); }

  std::size_t ambient_dim() const noexcept { return dim_; }
  const std::vector<Inequality>& inequalities() const noexcept { return inequalities_; }

  bool contains(const RatVector& x) const {
    require_same_dim(dim_, x.size(), "Polyhedron::contains");
    return std::all_of(inequalities_.begin(), inequalities_.end(),
                       [&](const Inequality& q) { return dot(x, q.normal) >= q.bound; });
  }

  bool contains(const IntVector& x) const { return contains(to_rational(x)); }

  /// {(x, t) : <a, x> - c t >= 0, t >= 0}. Generators with t > 0 are the
  /// points (x / t) of a V-representation, those with t = 0 the recession cone.
  Cone homogenization() const {
    std::vector<IntVector> constraints;
    for (const auto& q : inequalities_) {
      IntVector row = q.normal;
      row.push_back(-q.bound);
      constraints.push_back(std::move(row));
    }
    IntVector t(dim_ + 1, 0);
    t[dim_] = 1;
    constraints.push_back(std::move(t));
    return Cone::from_inequalities(dim_ + 1, constraints);
  }

  bool is_empty() const {
    Cone h = homogenization();
    return std::none_of(h.rays().begin(), h.rays().end(), [&](const IntVector& g) { return g[dim_] > 0; });
  }

  /// Translate by an integer vector.
  Polyhedron translated(const IntVector& shift) const {
    require_same_dim(dim_, shift.size(), "Polyhedron::translated");
    std::vector<Inequality> out;
    for (const auto& q : inequalities_) out.push_back({q.normal, q.bound + dot(q.normal, shift)});
    return Polyhedron(dim_, std::move(out));
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Inequality> inequalities_;
};

/// P is contained in Q, decided on the V-representation of P.
inline bool polyhedron_contains_polyhedron(const Polyhedron& p, const Polyhedron& q) {
  require_same_dim(p.ambient_dim(), q.ambient_dim(), "polyhedron_contains_polyhedron");
  Cone h = p.homogenization();
  const std::size_t d = p.ambient_dim();
  if (std::none_of(h.rays().begin(), h.rays().end(), [&](const IntVector& g) { return g[d] > 0; })) {
    throw Error(ErrorKind::EmptyInput, "polyhedron_contains_polyhedron: P is empty");
  }
  for (const auto& ineq : q.inequalities()) {
    IntVector row = ineq.normal;
    row.push_back(-ineq.bound);
    for (const auto& g : h.generators())
      if (dot(row, g) < 0) return false;
  }
  return true;
}

namespace detail {

struct RationalInequality {
  IntVector normal;  // content 1
  Rational bound;
};

inline std::vector<RationalInequality> normalize_system(std::vector<RationalInequality> sys) {
  std::map<IntVector, Rational> best;
  for (auto& q : sys) {
    Integer g = content(q.normal);
    if (g == 0) continue;  // constant constraints are handled by the caller
    for (auto& x : q.normal) x /= g;
    q.bound /= g;
    auto [it, inserted] = best.emplace(q.normal, q.bound);
    if (!inserted && q.bound > it->second) it->second = q.bound;
  }
  std::vector<RationalInequality> out;
  for (auto& [n, b] : best) out.push_back({n, b});
  return out;
}

/// Fourier-Motzkin elimination of variable k. Returns nullopt if a
/// constant constraint 0 >= c with c > 0 appears (the system is empty).
inline std::optional<std::vector<RationalInequality>> eliminate(const std::vector<RationalInequality>& sys,
                                                                std::size_t k) {
  std::vector<RationalInequality> out, pos, neg;
  for (const auto& q : sys) {
    if (q.normal[k] > 0) pos.push_back(q);
    else if (q.normal[k] < 0) neg.push_back(q);
    else out.push_back(q);
  }
  for (const auto& p : pos)
    for (const auto& n : neg) {
      Integer wp = -n.normal[k];
      Integer wn = p.normal[k];
      RationalInequality c{IntVector(p.normal.size()), wp * p.bound + wn * n.bound};
      for (std::size_t i = 0; i < p.normal.size(); ++i) c.normal[i] = wp * p.normal[i] + wn * n.normal[i];
      if (is_zero(c.normal)) {
        if (c.bound > 0) return std::nullopt;
        continue;
      }
      out.push_back(std::move(c));
    }
  return normalize_system(std::move(out));
}

}  // namespace detail

struct LatticePointList {
  std::size_t count = 0;
  std::vector<IntVector> points;  // lexicographically sorted
};

/// Integer points of P with every coordinate in [-K, K]. Bounds on each
/// coordinate are exact for the projection of P onto the fixed prefix.
inline LatticePointList lattice_points_in_box(const Polyhedron& p, std::size_t box) {
  const std::size_t d = p.ambient_dim();
  const Integer k(static_cast<unsigned long>(box));
  std::vector<detail::RationalInequality> sys;
  for (const auto& q : p.inequalities()) {
    if (is_zero(q.normal)) {
      if (q.bound > 0) return {};
      continue;
    }
    sys.push_back({q.normal, Rational(q.bound)});
  }
  for (std::size_t i = 0; i < d; ++i) {
    IntVector e(d, 0);
    e[i] = 1;
    sys.push_back({e, Rational(-k)});
    e[i] = -1;
    sys.push_back({e, Rational(-k)});
  }
  // levels[i] involves only coordinates 0..i.
  std::vector<std::vector<detail::RationalInequality>> levels(d);
  if (d == 0) return {1, {IntVector{}}};
  levels[d - 1] = detail::normalize_system(std::move(sys));
  for (std::size_t i = d - 1; i > 0; --i) {
    auto reduced = detail::eliminate(levels[i], i);
    if (!reduced) return {};
    levels[i - 1] = std::move(*reduced);
  }

  LatticePointList out;
  IntVector x(d, 0);
  auto recurse = [&](auto&& self, std::size_t level) -> void {
    Rational lo(-k), hi(k);
    for (const auto& q : levels[level]) {
      const Integer& a = q.normal[level];
      if (a == 0) continue;
      Rational rest = q.bound;
      for (std::size_t i = 0; i < level; ++i) rest -= q.normal[i] * x[i];
      Rational bound = rest / a;
      if (a > 0) lo = std::max(lo, bound);
      else hi = std::min(hi, bound);
    }
    for (Integer v = ceil_of(lo); v <= floor_of(hi); ++v) {
      x[level] = v;
      if (level + 1 == d) {
        if (p.contains(x)) out.points.push_back(x);
      } else {
        self(self, level + 1);
      }
    }
  };
  recurse(recurse, 0);
  out.count = out.points.size();
  return out;
}

}  // namespace cragged
