#pragma once

// Characters chi in M_sigma, the shifted dual cones sigma^v_chi and Hom
// dimension counts between the generators (sigma, chi).
//
// A character of a simplicial cone is stored as its values on the
// beta-vectors of the cone (sorted by ray index); those vectors are a basis
// of N_sigma, so every integer tuple is a character.

#include "cragged/stackyfan.hpp"

namespace cragged {

struct Character {
  std::size_t cone = 0;  // cone id in fan.cones()
  IntVector values;      // <chi, b_i> for the rays of the cone, in order

  friend bool operator==(const Character&, const Character&) = default;
};

inline Character make_character(const StackyFan& fan, std::size_t cone, IntVector values) {
  require_same_dim(fan.cone(cone).size(), values.size(), "character");
  return {cone, std::move(values)};
}

inline bool cone_contained_in(const StackyFan& fan, std::size_t tau, std::size_t sigma) {
  return is_subset(fan.cone(tau), fan.cone(sigma));
}

/// Restriction M_sigma -> M_tau along the face tau of sigma.
inline Character restrict_character(const StackyFan& fan, const Character& chi, std::size_t tau) {
  const RaySet& s = fan.cone(chi.cone);
  const RaySet& t = fan.cone(tau);
  if (!is_subset(t, s)) throw Error(ErrorKind::NotAFace, "restrict_character: target is not a face of the source cone");
  Character out{tau, {}};
  for (auto i : t) {
    auto pos = static_cast<std::size_t>(std::lower_bound(s.begin(), s.end(), i) - s.begin());
    out.values.push_back(chi.values[pos]);
  }
  return out;
}

/// {x in M_R : <x, b_i> >= chi_i for the rays i of the character's cone}.
inline Polyhedron shifted_dual_cone(const StackyFan& fan, const Character& chi) {
  const RaySet& t = fan.cone(chi.cone);
  require_same_dim(t.size(), chi.values.size(), "shifted_dual_cone");
  std::vector<Inequality> ineqs;
  for (std::size_t a = 0; a < t.size(); ++a) ineqs.push_back({fan.beta(t[a]), chi.values[a]});
  return Polyhedron(fan.rank(), std::move(ineqs));
}

/// chi2 - chi1|tau, an element of M_tau. Requires tau to be a face of sigma.
inline Character character_difference(const StackyFan& fan, const Character& chi1, const Character& chi2) {
  Character restricted = restrict_character(fan, chi1, chi2.cone);
  Character diff{chi2.cone, chi2.values};
  for (std::size_t a = 0; a < diff.values.size(); ++a) diff.values[a] -= restricted.values[a];
  return diff;
}

struct ContainmentVerdict {
  bool polyhedral = false;     // sigma^v_chi1 is contained in tau^v_{chi2 + xi|tau}
  bool combinatorial = false;  // tau subset of sigma and -xi in tau^v_{chi2 - chi1}
};

inline ContainmentVerdict containment_predicate(const StackyFan& fan, const Character& chi1, const Character& chi2,
                                                const IntVector& xi) {
  require_same_dim(fan.rank(), xi.size(), "containment_predicate");
  require_same_dim(fan.cone(chi1.cone).size(), chi1.values.size(), "containment_predicate");
  require_same_dim(fan.cone(chi2.cone).size(), chi2.values.size(), "containment_predicate");
  Character shifted = chi2;
  const RaySet& t = fan.cone(chi2.cone);
  for (std::size_t a = 0; a < t.size(); ++a) shifted.values[a] += dot(xi, fan.beta(t[a]));
  ContainmentVerdict v;
  v.polyhedral = polyhedron_contains_polyhedron(shifted_dual_cone(fan, chi1), shifted_dual_cone(fan, shifted));
  if (cone_contained_in(fan, chi2.cone, chi1.cone)) {
    v.combinatorial = shifted_dual_cone(fan, character_difference(fan, chi1, chi2)).contains(negated(xi));
  }
  return v;
}

struct HomDimension {
  bool zero = true;                     // tau is not a face of sigma
  std::size_t truncated_count = 0;
  std::size_t box = 0;
  std::vector<IntVector> basis_points;  // lexicographic
};

/// Hom from (sigma, chi1) to (tau, chi2) in degree 0: the lattice points of
/// tau^v_{chi2 - chi1} inside [-K, K]^n, or zero when tau is not in sigma.
inline HomDimension hom_dimension(const StackyFan& fan, const Character& source, const Character& target,
                                  std::size_t box) {
  HomDimension h;
  h.box = box;
  if (!cone_contained_in(fan, target.cone, source.cone)) return h;
  auto pts = lattice_points_in_box(shifted_dual_cone(fan, character_difference(fan, source, target)), box);
  h.zero = false;
  h.truncated_count = pts.count;
  h.basis_points = std::move(pts.points);
  return h;
}

/// Ext^i between these generators vanishes identically for i != 0; only
/// degree 0 is computed (by hom_dimension).
inline constexpr bool ext_vanishes(int degree) { return degree != 0; }

inline std::vector<std::vector<HomDimension>> hom_matrix(const StackyFan& fan, const std::vector<Character>& gens,
                                                         std::size_t box) {
  std::vector<std::vector<HomDimension>> m(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j) m[i].push_back(hom_dimension(fan, gens[i], gens[j], box));
  return m;
}

}  // namespace cragged
