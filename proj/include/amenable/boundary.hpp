#pragma once

#include <functional>

#include "amenable/group.hpp"
#include "amenable/report.hpp"

namespace amenable {

// ∂_K(T) = {g : Kg ∩ T ≠ ∅ and Kg ⊄ T}.
// Every such g satisfies kg ∈ T for some k, so g ∈ K^{-1}T; that finite
// window is the whole search space.
FiniteSubset k_boundary(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k);

// Definitional boundary of an arbitrary (possibly infinite) set given by a
// membership predicate, evaluated at the points of `window`.
FiniteSubset boundary_in_window(const GroupModel& g, const std::function<bool(const Element&)>& member,
                                const FiniteSubset& k, const FiniteSubset& window);

// ∂^r(Λ): points of Λ within distance r of the complement, and points of the
// complement within distance r of Λ. Computed by breadth-first search.
FiniteSubset r_boundary(const GroupModel& g, const FiniteSubset& lambda, int r);

// |∂_K(T)| / |T|
double boundary_ratio(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k);

// strict: |∂_K(T)| / |T| < δ
bool is_invariant(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& k, double delta);

// Set relations satisfied by K-boundaries, checked exactly on one instance:
//   complement     ∂_K(T) = ∂_K(G∖T)
//   union          ∂_K(S∪T) ⊆ ∂_K(S) ∪ ∂_K(T)
//   difference     ∂_K(S∖T) ⊆ ∂_K(S) ∪ ∂_K(T)
//   difference_size |∂_K(S∖T)| ≤ |∂_K(S)| + |∂_K(T)|
//   monotone       K ⊆ L  ⇒  ∂_K(T) ⊆ ∂_L(T)
//   translation    ∂_K(Tx) = ∂_K(T)x
//   product        ∂_K(TS) ⊆ ∂_K(T)S
//   interior       id ∈ K  ⇒  ∂_K(T∖S) ⊆ ∂_K(T) ∪ (∂_K(S) ∩ T)
// L is taken as K ∪ extra, and the interior relation uses K ∪ {id}.
Report check_boundary_identities(const GroupModel& g, const FiniteSubset& t, const FiniteSubset& s,
                                 const FiniteSubset& k, const FiniteSubset& extra, const Element& x);

}  // namespace amenable
