#pragma once
// Exhaustive isomorph-free enumeration of the lattice of set association
// schemes of a given degree: cells are split along design-like subsets, each
// split is WL-stabilized, and the search tree is deduplicated by canonical
// form.  The walk starts at the coarsest scheme, so every coherent partition
// of the power set appears exactly once up to relabelling.

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sas/core.hpp"
#include "sas/groups.hpp"

namespace sas {

// Cells of s in split-search order: increasing member size, ties broken by
// the cell's smallest member bitmask.  Members ascend within each cell.
std::vector<std::vector<Subset>> ordered_cells(const SetPartition& s);

// Indices into ordered_cells(s) of one representative per complement-pair
// of cells, the representative holding members of size <= degree/2.
std::vector<std::size_t> split_candidate_cells(const SetPartition& s);

// One item per g-orbit, where g acts on an item by mapping each subset and
// re-sorting.  The representative is the lexicographically least member
// encoding in its orbit; images that leave the item list are ignored.
// Output sorted by that encoding.
std::vector<std::vector<Subset>> orbit_reps(
    const std::vector<std::vector<Subset>>& items, const PermGroup& g);

// Candidate splits of cell `cell_index` (an index into ordered_cells):
// subsets alpha with 0 < 2|alpha| <= |cell| whose containment graph against
// every cell of strictly smaller member size is biregular, reduced to one
// representative per orbit of the weak automorphisms stabilizing the cell.
// Found by backtracking with running coverage counters and suffix pruning.
std::vector<std::vector<Subset>> design_like_subsets(const SetPartition& s,
                                                     std::size_t cell_index);

// The WL stabilizations of all design-like splits of s, deduplicated by
// canonical form and sorted by it.  Every coherent strict refinement of a
// coherent s refines at least one child.
std::vector<SetPartition> refinement_children(const SetPartition& s);

struct EnumeratedScheme {
  SetPartition scheme;
  bool schurian = false;
};

struct EnumerationOptions {
  double max_seconds = 0.0;        // 0 = no limit
  std::string checkpoint_path;     // save/resume state here when nonempty
  double checkpoint_interval = 60.0;
  bool long_run = false;           // required to unlock degrees 8 and 9
};

struct EnumerationState {
  int degree = 0;
  // Canonical forms pending expansion, ordered by (rank, form).
  std::set<std::pair<std::uint32_t, std::string>> frontier;
  std::set<std::string> seen;      // every canonical form discovered
  std::vector<EnumeratedScheme> results; // sorted by canonical form
  std::uint64_t expanded = 0;      // schemes whose children were computed
  bool complete = false;
  std::string timestamp;           // of the last checkpoint write
};

// Walks the refinement lattice from the coarsest scheme of the degree.
// Results hold every scheme up to relabelling, each tagged schurian or not.
// A timeout leaves complete == false with the partial state checkpointed
// (when a path is configured) and resumable by a later call.
EnumerationState enumerate_all(int degree, const EnumerationOptions& options = {});

// Checkpoint format: JSON with degree, frontier, seen, results, counters.
std::string serialize_state(const EnumerationState& state);
EnumerationState parse_state(const std::string& text);
void save_state(const EnumerationState& state, const std::string& path);
EnumerationState load_state(const std::string& path);

} // namespace sas
