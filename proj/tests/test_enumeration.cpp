#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "sas/coherence.hpp"
#include "sas/core.hpp"
#include "sas/enumeration.hpp"
#include "sas/groups.hpp"

using namespace sas;

namespace {

// Orbit schemes of every subgroup, independently canonicalized: the set the
// schurian part of the census must reproduce.
std::set<std::string> subgroup_scan(int degree) {
  std::set<std::string> forms;
  for (const auto& g : all_subgroups(degree)) forms.insert(canonical_form(orbital_scheme(g)));
  return forms;
}

// Biregularity of one candidate half against a fixed cell, recomputed
// directly: every member of `alpha` contains the same number of members of
// `cell`, and every member of `cell` lies in the same number of members.
bool biregular_against(const std::vector<Subset>& alpha, const std::vector<Subset>& cell) {
  std::set<std::size_t> up, down;
  for (const Subset a : alpha) {
    std::size_t count = 0;
    for (const Subset b : cell) count += (b & ~a) == 0;
    up.insert(count);
  }
  for (const Subset b : cell) {
    std::size_t count = 0;
    for (const Subset a : alpha) count += (b & ~a) == 0;
    down.insert(count);
  }
  return up.size() <= 1 && down.size() <= 1;
}

}  // namespace

TEST_CASE("cells are ordered by member size then smallest member") {
  const SetPartition t = trivial_scheme(4);
  const auto cells = ordered_cells(t);
  REQUIRE(cells.size() == 5);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (const Subset a : cells[i]) CHECK(set_size(a) == static_cast<int>(i));
    CHECK(std::is_sorted(cells[i].begin(), cells[i].end()));
  }
}

TEST_CASE("one candidate cell per complement pair, holding the small side") {
  const SetPartition t = trivial_scheme(4);
  const auto cells = ordered_cells(t);
  const auto candidates = split_candidate_cells(t);
  // degree 4: size classes 0..4; pairs (0,4), (1,3), (2,2) -> candidates
  // are the cells of member sizes 0, 1, 2
  CHECK(candidates == std::vector<std::size_t>{0, 1, 2});
  for (const std::size_t i : candidates)
    for (const Subset a : cells[i]) CHECK(2 * set_size(a) <= 4);
}

TEST_CASE("orbit representatives are minimal and hit every orbit once") {
  // items: the six 2-subsets of [4] as singleton lists
  std::vector<std::vector<Subset>> items;
  for (Subset a = 0; a < 16; ++a)
    if (set_size(a) == 2) items.push_back({a});
  const auto all = orbit_reps(items, trivial_group(4));
  CHECK(all.size() == 6);  // trivial group: every item its own orbit
  const auto sym = orbit_reps(items, symmetric_group(4));
  REQUIRE(sym.size() == 1);  // transitive on 2-subsets
  CHECK(sym.front() == std::vector<Subset>{0b0011});
  const PermGroup swap12 = closure({from_cycles("(1,2)", 4)}, 4);
  // orbits of {1,2},{1,3}~{2,3},{1,4}~{2,4},{3,4}: four orbits
  CHECK(orbit_reps(items, swap12).size() == 4);
}

TEST_CASE("design-like halves of the pair cell of degree 4 reduce to the perfect matching") {
  const SetPartition t = trivial_scheme(4);
  const auto candidates = split_candidate_cells(t);
  const auto cells = ordered_cells(t);
  // cell index 2 holds the 2-subsets
  REQUIRE(std::find(candidates.begin(), candidates.end(), std::size_t{2}) != candidates.end());
  const auto halves = design_like_subsets(t, 2);
  // frozen: the only admissible half up to weak automorphisms is the
  // perfect matching {1,2} | {3,4}
  REQUIRE(halves.size() == 1);
  CHECK(halves.front() == std::vector<Subset>{0b0011, 0b1100});
  // and it is biregular against every smaller cell
  for (const auto& alpha : halves) {
    CHECK(2 * alpha.size() <= cells[2].size());
    for (std::size_t smaller = 0; smaller < 2; ++smaller)
      CHECK(biregular_against(alpha, cells[smaller]));
  }
}

TEST_CASE("singleton cells admit design-like halves only when balanced") {
  // the size-1 cell of degree 4 has four members; halves of size 1 are
  // never biregular against the size-0 cell... they are (one empty set in
  // each singleton).  The real constraint comes from coherence later, so
  // here just sanity-check the structural contract.
  const SetPartition t = trivial_scheme(4);
  for (const auto& alpha : design_like_subsets(t, 1)) {
    CHECK(!alpha.empty());
    CHECK(2 * alpha.size() <= 4);
    CHECK(std::is_sorted(alpha.begin(), alpha.end()));
  }
}

TEST_CASE("refinement children are coherent strict refinements, deduplicated") {
  for (int d = 3; d <= 5; ++d) {
    const SetPartition t = trivial_scheme(d);
    const auto children = refinement_children(t);
    std::set<std::string> forms;
    for (const auto& child : children) {
      CHECK(child.rank > t.rank);
      CHECK(testutil::refines_oracle(child, t));
      CHECK(is_coherent(child));
      CHECK(forms.insert(canonical_form(child)).second);  // no duplicates
    }
    // sorted by canonical form
    std::vector<std::string> order;
    for (const auto& child : children) order.push_back(canonical_form(child));
    CHECK(std::is_sorted(order.begin(), order.end()));
  }
}

TEST_CASE("census counts for small degrees are stable") {
  const std::vector<std::size_t> expected = {1, 2, 3, 8, 11};  // degrees 1..5
  for (int d = 1; d <= 5; ++d) {
    const EnumerationState state = enumerate_all(d);
    CHECK(state.complete);
    CHECK(state.results.size() == expected[d - 1]);
    for (const auto& e : state.results) {
      CHECK(e.schurian);  // no nonschurian scheme below degree 8
      CHECK(is_coherent(e.scheme));
      CHECK(testutil::complement_closed(e.scheme));
      CHECK(testutil::containment_biregular(e.scheme));
    }
    // results arrive sorted by canonical form with no repeats
    std::vector<std::string> forms;
    for (const auto& e : state.results) forms.push_back(canonical_form(e.scheme));
    CHECK(std::is_sorted(forms.begin(), forms.end()));
    CHECK(std::adjacent_find(forms.begin(), forms.end()) == forms.end());
  }
}

TEST_CASE("census equals the subgroup scan up to weak isomorphism") {
  for (int d = 1; d <= 4; ++d) {
    const EnumerationState state = enumerate_all(d);
    std::set<std::string> census;
    for (const auto& e : state.results)
      if (e.schurian) census.insert(canonical_form(e.scheme));
    CHECK(census == subgroup_scan(d));
  }
}

TEST_CASE("the orbit scheme of the automorphism group of every result is also a result") {
  const EnumerationState state = enumerate_all(5);
  std::set<std::string> forms;
  for (const auto& e : state.results) forms.insert(canonical_form(e.scheme));
  for (const auto& e : state.results) {
    const SetPartition closure_scheme = orbital_scheme(automorphism_group(e.scheme));
    CHECK(forms.count(canonical_form(closure_scheme)) == 1);
  }
}

TEST_CASE("interrupted runs checkpoint and resume to the same census") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "census_checkpoint_test.json").string();
  std::remove(path.c_str());
  const EnumerationState fresh = enumerate_all(5);

  EnumerationOptions options;
  options.checkpoint_path = path;
  options.max_seconds = 1e-9;  // force an immediate timeout
  EnumerationState partial = enumerate_all(5, options);
  CHECK(!partial.complete);
  CHECK(std::filesystem::exists(path));

  // serialize/parse round-trip preserves the state
  const EnumerationState reloaded = parse_state(serialize_state(partial));
  CHECK(reloaded.degree == partial.degree);
  CHECK(reloaded.frontier == partial.frontier);
  CHECK(reloaded.seen == partial.seen);
  CHECK(reloaded.expanded == partial.expanded);
  CHECK(reloaded.results.size() == partial.results.size());

  // resuming from the checkpoint file finishes the census
  EnumerationOptions resume;
  resume.checkpoint_path = path;
  EnumerationState finished = enumerate_all(5, resume);
  int rounds = 0;
  while (!finished.complete && ++rounds < 100) finished = enumerate_all(5, resume);
  REQUIRE(finished.complete);
  CHECK(finished.results.size() == fresh.results.size());
  for (std::size_t i = 0; i < finished.results.size(); ++i) {
    CHECK(finished.results[i].scheme == fresh.results[i].scheme);
    CHECK(finished.results[i].schurian == fresh.results[i].schurian);
  }
  std::remove(path.c_str());
}

TEST_CASE("thread count does not change the census") {
  set_thread_count(1);
  const EnumerationState one = enumerate_all(5);
  set_thread_count(4);
  const EnumerationState four = enumerate_all(5);
  set_thread_count(1);
  REQUIRE(one.results.size() == four.results.size());
  for (std::size_t i = 0; i < one.results.size(); ++i) {
    CHECK(one.results[i].scheme == four.results[i].scheme);
    CHECK(one.results[i].schurian == four.results[i].schurian);
  }
  CHECK(one.expanded == four.expanded);
}

TEST_CASE("long degrees are gated") {
  CHECK_THROWS_AS(enumerate_all(8), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_all(9), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_all(10), std::invalid_argument);
  EnumerationOptions long_run;
  long_run.long_run = true;
  CHECK_THROWS_AS(enumerate_all(10, long_run), std::invalid_argument);
}
