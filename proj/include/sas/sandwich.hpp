#pragma once
// Hamming powers of a subset partition: the configuration on m^d vertices
// whose pair color is the cell of the disagreement set, pairwise
// Weisfeiler-Leman refinement for arbitrary edge colorings, closed-form
// structure constants with representative-independence assertion, recovery
// of the subset partition from a sandwiched coloring, and the property
// report (rank, primitivity, automorphism order, schurian flags).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sas/core.hpp"

namespace sas {

using BigInt = boost::multiprecision::cpp_int;

// An edge coloring of the complete directed graph on vertex_count vertices.
// `color` is the lazy rule; `table` is the optional n*n materialization
// (required by the WL pass, row-major by first vertex).
struct Configuration {
  std::uint64_t vertex_count = 0;
  std::uint32_t rank = 0;
  std::function<std::uint16_t(std::uint64_t, std::uint64_t)> color;
  std::vector<std::uint16_t> table;

  bool materialized() const { return !table.empty(); }
  std::uint16_t color_at(std::uint64_t u, std::uint64_t v) const {
    return table.empty() ? color(u, v) : table[u * vertex_count + v];
  }
};

// Largest vertex count whose n*n color table we are willing to hold; also
// the bound for the cubic WL pass.
inline constexpr std::uint64_t kMaxDenseVertices = 10000;

// The configuration on [m]^d whose vertices are tuples encoded in base m
// (coordinate i = digit i) and whose pair color is s.colors[disagreement
// set].  The color rule is lazy; pass materialize = true (vertex count at
// most kMaxDenseVertices) to fill the table.
Configuration hamming_sandwich(const SetPartition& s, int m, bool materialize = false);

// Fills c.table (vertex count at most kMaxDenseVertices).
void materialize(Configuration& c);

// Coarsest coherent refinement of the pair coloring: colors are first
// split by (diagonal membership, color, transposed color), then repeatedly
// by the multiset of (color(u,w), color(w,v)) over all w, until stable.
// The result is a coherent configuration refining the input; the input is
// unchanged (same rank) exactly when it is already coherent.  Exact
// multiset comparison throughout; cost n^3 per round, so the vertex count
// is capped at kMaxDenseVertices.
Configuration cc_wl_stabilize(const Configuration& c);

// The number of vertices w of [m]^d at disagreement cell beta from u and
// gamma from v, where u, v disagree exactly on a:
//   sum over b in beta, c in gamma with (a,b,c) a triangle of
//   (m-1)^{|b n c \ a|} (m-2)^{|a n b n c|}.
// a must lie in cell alpha.  The sum is evaluated for every member of
// alpha and must not depend on the choice (logic_error otherwise: that is
// exactly coherence of s).
BigInt sandwich_structure_constant(const SetPartition& s, int m, std::uint32_t alpha,
                                   std::uint32_t beta, std::uint32_t gamma, Subset a);

struct RecoveredScheme {
  SetPartition partition;
  bool coherent = false;         // triangle coherence of the recovered partition
  bool guarantee_applies = false; // m >= 3^d + 4: coherent input forces a scheme
};

// Rebuilds the subset partition from a configuration on m^d vertices whose
// colors factor through disagreement sets and respect disagreement size
// classes.  Throws std::invalid_argument when the coloring is not
// sandwiched that way.  Scans all vertex pairs.
RecoveredScheme recover_sas(const Configuration& c, int m, int d);

struct SandwichReport {
  std::uint32_t rank = 0;
  bool primitive = false;
  BigInt aut_order;        // (m!)^d * |Aut(s)|
  bool schurian = false;
  bool aut_primitive = false;
  bool connectivity_checked = false; // the explicit union-find verification ran
};

// Properties of the Hamming power of a scheme s: rank carries over,
// primitive iff s homogeneous and m >= 3, automorphism order
// (m!)^d * |Aut(s)|, schurian iff s is, primitive automorphism group iff
// Aut(s) transitive and m >= 3.  When m^d <= kMaxDenseVertices the
// primitivity claim is verified against per-color connectivity computed by
// union-find over one pair scan; a mismatch throws std::logic_error.
SandwichReport sandwich_report(const SetPartition& s, int m);

} // namespace sas
