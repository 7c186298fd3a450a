#pragma once
// Permutation groups on the ground set [d]: cycle-notation parsing and
// printing, BFS closure with full element lists, point orbits, orbital
// schemes on the power set, strong and weak automorphism groups of a
// partition, the schurian test, the named generator table used by the
// catalog, and an exhaustive subgroup scan for small symmetric groups.

#include <cstdint>
#include <string>
#include <vector>

#include "sas/core.hpp"

namespace sas {

inline constexpr int kMaxGroupDegree = 10;

struct Permutation {
  std::vector<std::uint8_t> img; // img[i] = image of point i (0-based)

  int degree() const { return static_cast<int>(img.size()); }
  bool is_identity() const;
  static Permutation identity(int degree);
  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;
};

// Function composition: (p * q)(x) = p(q(x)).
Permutation compose(const Permutation& p, const Permutation& q);
Permutation inverse(const Permutation& p);
Subset apply_subset(const Permutation& p, Subset a);
bool is_even(const Permutation& p);

// Cycle notation on 1-based points: "(1,3,5,7)(2,4,6,8)"; identity is "()".
std::string to_cycles(const Permutation& p);
Permutation from_cycles(const std::string& text, int degree);

// Packs the image array 4 bits per point (degree <= 16).
std::uint64_t encode_permutation(const Permutation& p);

struct PermGroup {
  int degree = 0;
  std::vector<Permutation> generators;       // possibly empty (trivial group)
  std::vector<Permutation> elements;         // full closure, BFS order from identity
  std::vector<std::uint64_t> element_keys;   // sorted encodings for membership

  std::int64_t order() const { return static_cast<std::int64_t>(elements.size()); }
  bool contains(const Permutation& p) const;
};

// BFS closure of the generators; deterministic element order.  Degree must
// be at most kMaxGroupDegree.
PermGroup closure(const std::vector<Permutation>& generators, int degree);

PermGroup trivial_group(int degree);
PermGroup symmetric_group(int degree);
PermGroup alternating_group(int degree);
PermGroup cyclic_group(int degree); // generated by the d-cycle (1,...,d)

// Named generator table: G1..G4, H1..H4 act on 8 points, A9 and M27 on 9.
// The affine ones are generated by maps z -> az+b on Z/8 or Z/9 transported
// to 1-based points via z -> z+1.
PermGroup named_group(const std::string& id);
std::vector<std::string> named_group_ids();

// Orbits on points, 1-based, each sorted; orbits ordered by least point.
std::vector<std::vector<int>> point_orbits(const PermGroup& g);
bool is_transitive(const PermGroup& g);

// A short generating chain extracted greedily from the element list.
std::vector<Permutation> small_generating_set(const PermGroup& g);

// The partition of the power set into G-orbits (always a fully coherent
// set association scheme).
SetPartition orbital_scheme(const PermGroup& g);

// Strong automorphisms: permutations fixing every cell setwise.
PermGroup automorphism_group(const SetPartition& s);
// Weak automorphisms: permutations mapping cells onto cells.
PermGroup weak_automorphism_group(const SetPartition& s);

// S is schurian when it equals the orbit partition of its own strong
// automorphism group.
bool is_schurian(const SetPartition& s);

// Structural description used in tables: cyclic invariant-factor form for
// abelian groups ("C4 x C2"), "Sym(d)"/"Alt(d)", the order-8 and order-16
// and order-27 fingerprints needed by the catalog ("Q8", "D4", "Q8 o C4",
// "C9 : C3", "He3"), otherwise "order N".
std::string describe_group(const PermGroup& g);

// Every subgroup of Sym(degree), degree <= 6, as full element lists.
// Deterministic order (BFS over single-generator extensions).
std::vector<PermGroup> all_subgroups(int degree);

} // namespace sas
