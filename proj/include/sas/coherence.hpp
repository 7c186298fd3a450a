#pragma once
// Coherence machinery for partitions of the power set: one-step Weisfeiler-
// Leman-style refinement over subset triples, iteration to the coarsest
// coherent refinement, exact structure-constant tables with incoherence
// witnesses, and the full-coherence test over all triple types.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "sas/core.hpp"
#include "sas/groups.hpp"

namespace sas {

enum class CoherenceMode {
  kTriangles, // scan triangle triples only (the defining condition)
  kAllTypes   // scan every ordered triple (full coherence)
};

struct WlStepResult {
  SetPartition partition;
  bool stable = false; // nothing split (input already size-homogeneous)
};

// One refinement pass: if the input is not size-homogeneous it is split by
// cardinality (that counts as the pass); otherwise each subset a receives
// the multiset fingerprint of (color(b), color(c), intersection pattern of
// (a,b,c)) over the scanned triples and cells split by fingerprint.
// Fingerprints are hashed 64-bit multiset digests; every merge decision is
// re-verified against exact sorted item vectors, so hash collisions cannot
// produce a wrong partition.  If `aut` (a subgroup of the automorphism
// group) is given, fingerprints are computed for one representative per
// subset orbit and broadcast.
WlStepResult wl_step(const SetPartition& s, CoherenceMode mode,
                     const PermGroup* aut = nullptr);

// Iterates wl_step to its fixpoint: the coarsest coherent refinement.  Any
// coherent partition refining s also refines the result.
SetPartition wl_stabilize(const SetPartition& s, CoherenceMode mode,
                          const PermGroup* aut = nullptr);

struct StructureKey {
  std::uint32_t alpha = 0, beta = 0, gamma = 0;
  TripleType tau;
  friend bool operator==(const StructureKey&, const StructureKey&) = default;
  friend auto operator<=>(const StructureKey&, const StructureKey&) = default;
};

struct StructureConstantTable {
  int degree = 0;
  std::uint32_t rank = 0;
  CoherenceMode mode = CoherenceMode::kTriangles;
  std::map<StructureKey, std::uint64_t> p;

  // Columns: alpha,beta,gamma,t_a,t_b,t_c,t_ab,t_ac,t_bc,t_abc,p
  std::string to_csv() const;
};

struct IncoherenceWitness {
  std::uint32_t alpha = 0;
  Subset representative = 0, other = 0;
  std::uint32_t beta = 0, gamma = 0;
  TripleType tau;
  std::uint64_t representative_count = 0, other_count = 0;
  std::string to_string() const;
};

struct CoherenceReport {
  bool coherent = false;
  std::optional<StructureConstantTable> table;  // present when coherent
  std::optional<IncoherenceWitness> witness;    // present when incoherent
};

// Exact structure constants of a size-homogeneous partition.  For each cell
// the counts are computed for every member and compared against the cell's
// first member; the first disagreement (scanning cells in color order,
// members in bitmask order, keys lexicographically) becomes the witness.
CoherenceReport structure_constants(const SetPartition& s,
                                    CoherenceMode mode = CoherenceMode::kTriangles);

// Convenience: triangle-coherence of a size-homogeneous partition.
bool is_coherent(const SetPartition& s);

// A triangle-coherent scheme is fully coherent when the all-types pass
// leaves it unchanged.
bool is_fully_coherent(const SetPartition& s);

// Refine cells by member cardinality (identity on size-homogeneous input).
SetPartition refine_by_size(const SetPartition& s);

} // namespace sas
