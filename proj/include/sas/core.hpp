#pragma once
// Core objects for set association schemes: subsets of a ground set [d]
// stored as bitmasks, isomorphism invariants of subset triples, partitions
// of the power set 2^[d], canonical forms under relabelling of the ground
// set, and the JSON interchange format for partitions.
//
// Conventions: the ground set is {1, ..., d} externally; element i is bit
// i-1 of the mask.  Partitions keep their cell ids normalized: consecutive
// from 0, numbered by first occurrence in bitmask order.

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sas {

using Subset = std::uint32_t;

inline constexpr int kMaxDegree = 16;      // bitmask representation limit
inline constexpr int kMaxCanonDegree = 10; // canonical-form / relabelling scans

inline int set_size(Subset a) { return std::popcount(a); }
inline Subset full_set(int degree) { return (Subset{1} << degree) - 1; }
inline Subset set_complement(Subset a, int degree) { return full_set(degree) & ~a; }

// 1-based element list, strictly increasing.
std::vector<int> set_elements(Subset a);
// Validates: elements in [1, degree], strictly increasing not required (sorted
// internally), duplicates rejected.
Subset subset_from_elements(const std::vector<int>& elements, int degree);
std::string set_to_string(Subset a); // "{1,3,4}", "{}" for the empty set

// (a, b, c) form a triangle when each set is contained in the union of the
// other two; equivalently all three pairwise unions coincide.
inline bool is_triangle(Subset a, Subset b, Subset c) {
  return (a & ~(b | c)) == 0 && (b & ~(a | c)) == 0 && (c & ~(a | b)) == 0;
}

// Relabelling invariant of an ordered triple:
// (|a|, |b|, |c|, |a&b|, |a&c|, |b&c|, |a&b&c|).
struct TripleType {
  std::array<std::uint8_t, 7> v{};
  friend bool operator==(const TripleType&, const TripleType&) = default;
  friend auto operator<=>(const TripleType&, const TripleType&) = default;
  std::string to_string() const; // "(2,1,1,1,1,0,0)"
};

TripleType triple_invariant(Subset a, Subset b, Subset c);

// The four intersection sizes packed 5 bits each (values <= 16 fit).  The
// full TripleType is recoverable from this plus |a|, |b|, |c|.
inline std::uint32_t packed_intersections(Subset a, Subset b, Subset c) {
  const std::uint32_t ab = static_cast<std::uint32_t>(std::popcount(a & b));
  const std::uint32_t ac = static_cast<std::uint32_t>(std::popcount(a & c));
  const std::uint32_t bc = static_cast<std::uint32_t>(std::popcount(b & c));
  const std::uint32_t abc = static_cast<std::uint32_t>(std::popcount(a & b & c));
  return (ab << 15) | (ac << 10) | (bc << 5) | abc;
}

// A partition of the power set of [degree].  colors[x] is the cell id of the
// subset with bitmask x.  Normalized: cell ids consecutive from 0 in order of
// first occurrence as x runs over 0 .. 2^degree - 1.
struct SetPartition {
  int degree = 0;
  std::vector<std::uint16_t> colors;
  std::uint32_t rank = 0;

  std::size_t num_subsets() const { return colors.size(); }
  friend bool operator==(const SetPartition&, const SetPartition&) = default;
};

// Renumbers an arbitrary color array into normalized form.
SetPartition make_partition(int degree, const std::vector<std::uint16_t>& colors);
// Same, from arbitrary 64-bit keys (composite colors from constructions).
SetPartition make_partition_from_keys(int degree, const std::vector<std::uint64_t>& keys);
// Cells are the cardinality classes; the coarsest set association scheme.
SetPartition trivial_scheme(int degree);
// Every subset its own cell; the finest partition.
SetPartition discrete_partition(int degree);

bool is_size_homogeneous(const SetPartition& s);
// The singletons form a single cell.
bool is_homogeneous(const SetPartition& s);

// Cell members in ascending bitmask order.
std::vector<std::vector<Subset>> cells_of(const SetPartition& s);
// Member size of each cell (meaningful when size-homogeneous; otherwise the
// size of the cell's smallest-bitmask member).
std::vector<int> cell_member_sizes(const SetPartition& s);

// True when s0 refines s (every cell of s0 lies inside a cell of s).
bool refines(const SetPartition& s0, const SetPartition& s);

// Applies the point relabelling g (0-based images) to a subset.
Subset apply_relabelling(const std::vector<int>& g, Subset a);
// The image partition: cell ids attached to relabelled subsets, renumbered.
SetPartition relabel_partition(const SetPartition& s, const std::vector<int>& g);

// Canonical form: the lexicographically least normalized color array over
// all d! relabellings, packed two big-endian bytes per subset.  Two
// partitions have equal canonical forms iff one is a relabelling of the
// other.  Degrees above kMaxCanonDegree are rejected.
std::string canonical_form(const SetPartition& s);

struct CanonicalResult {
  std::string form;
  std::vector<int> relabelling; // g with relabel_partition(s, g) normalized == form
};
CanonicalResult canonicalize(const SetPartition& s);

std::string bytes_to_hex(const std::string& bytes);
std::string hex_to_bytes(const std::string& hex);
// Rebuilds a partition from a canonical (or any normalized) byte form.
SetPartition partition_from_form(const std::string& form);

// JSON interchange: {"degree": d, "cells": [[[1,2],[3]], ...]} where each
// subset is a strictly increasing array of elements of [1, d].  Serialization
// is canonical: subsets within a cell ascend by bitmask, cells are ordered by
// (member size, smallest member bitmask).  Parsing rejects malformed JSON,
// non-partitions (missing or repeated subsets) and out-of-range elements
// with distinct messages.
SetPartition parse_partition(const std::string& json_text);
std::string serialize_partition(const SetPartition& s);
SetPartition load_partition_file(const std::string& path);
void save_partition_file(const SetPartition& s, const std::string& path);

// Number of worker threads used by the bulk scans (WL refinement, sandwich
// connectivity).  Results are identical for any value; default 1.
void set_thread_count(int n);
int thread_count();

// Splits [0, n) into roughly equal chunks and runs fn(begin, end) on each,
// using the configured thread count.  fn must write to disjoint state.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace sas
