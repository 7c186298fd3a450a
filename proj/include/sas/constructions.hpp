#pragma once
// Scheme constructions: direct sums, wreath products by a group permuting
// coordinate blocks, index-2 splitting of orbit schemes, the built-in
// catalog of nonschurian examples, and computed table rows.

#include <cstdint>
#include <string>
#include <vector>

#include "sas/core.hpp"
#include "sas/groups.hpp"

namespace sas {

// Cells are pairs of cells on disjoint ground sets; the first summand takes
// points 1..d1, the second d1+1..d1+d2.  Rank multiplies.
SetPartition direct_sum(const SetPartition& s1, const SetPartition& s2);

// k = g.degree copies of s on consecutive blocks of points; the color of a
// subset is the g-orbit of its k-tuple of slice colors.
SetPartition wreath_product(const SetPartition& s, const PermGroup& g);

// Requires H <= G of index 2 on the same points.  Cells of the orbit scheme
// of G that break into two H-orbits, as ascending G-scheme color ids.
std::vector<std::uint32_t> split_cells(const PermGroup& g, const PermGroup& h);

// Splits exactly the selected splitting cells into their two H-orbit halves.
// `which` must be a nonempty proper subset of split_cells(g,h).
SetPartition split_scheme(const PermGroup& g, const PermGroup& h,
                          const std::vector<std::uint32_t>& which);

struct TableRow {
  std::uint32_t rank = 0;
  std::int64_t aut_order = 0;
  std::string aut_name;
  bool homogeneous = false;
  bool vertex_transitive = false; // Aut(S) transitive on the ground set
  bool fully_coherent = false;
  bool schurian = false;
  friend bool operator==(const TableRow&, const TableRow&) = default;
};

TableRow table_row(const SetPartition& s);

struct CatalogEntry {
  std::string id;
  SetPartition scheme;
  TableRow expected; // published properties; expected.schurian is false
};

// Ids: S1..S8 on degree 8, N9a/N9b on degree 9.  Construction is verified
// on the fly (coherence and the documented cell splittings); a failure
// throws std::logic_error.
CatalogEntry catalog(const std::string& id);
std::vector<std::string> catalog_ids();

} // namespace sas
