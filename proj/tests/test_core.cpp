#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <random>
#include <set>
#include <vector>

#include "helpers.hpp"
#include "sas/core.hpp"

using namespace sas;

namespace {

// Element-level reference for the triangle predicate: each set lies in the
// union of the other two.
bool triangle_oracle(Subset a, Subset b, Subset c, int degree) {
  for (int e = 0; e < degree; ++e) {
    const bool in_a = a >> e & 1, in_b = b >> e & 1, in_c = c >> e & 1;
    if (in_a && !(in_b || in_c)) return false;
    if (in_b && !(in_a || in_c)) return false;
    if (in_c && !(in_a || in_b)) return false;
  }
  return true;
}

std::vector<std::vector<int>> all_permutations(int d) {
  std::vector<int> p(d);
  for (int i = 0; i < d; ++i) p[i] = i;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

TEST_CASE("subset helpers round-trip elements and strings") {
  CHECK(full_set(4) == 0b1111u);
  CHECK(set_complement(0b0101, 4) == 0b1010u);
  CHECK(set_size(0b1011) == 3);
  CHECK(set_elements(0b0101) == std::vector<int>{1, 3});
  CHECK(subset_from_elements({1, 3}, 4) == 0b0101u);
  CHECK(set_to_string(0b0101) == "{1,3}");
  CHECK(set_to_string(0) == "{}");
  for (Subset a = 0; a < 32; ++a) CHECK(subset_from_elements(set_elements(a), 5) == a);
  CHECK_THROWS_AS(subset_from_elements({0}, 4), std::invalid_argument);
  CHECK_THROWS_AS(subset_from_elements({5}, 4), std::invalid_argument);
}

TEST_CASE("triangle predicate agrees with the element-level definition") {
  const int d = 4;
  for (Subset a = 0; a < 16; ++a)
    for (Subset b = 0; b < 16; ++b)
      for (Subset c = 0; c < 16; ++c) CHECK(is_triangle(a, b, c) == triangle_oracle(a, b, c, d));
}

TEST_CASE("triangle predicate is symmetric in its arguments") {
  for (Subset a = 0; a < 16; ++a)
    for (Subset b = 0; b < 16; ++b)
      for (Subset c = 0; c < 16; ++c) {
        const bool t = is_triangle(a, b, c);
        CHECK(t == is_triangle(a, c, b));
        CHECK(t == is_triangle(b, a, c));
        CHECK(t == is_triangle(b, c, a));
        CHECK(t == is_triangle(c, a, b));
        CHECK(t == is_triangle(c, b, a));
      }
}

TEST_CASE("triangles have equal pairwise unions and the size identity") {
  for (Subset a = 0; a < 32; ++a)
    for (Subset b = 0; b < 32; ++b)
      for (Subset c = 0; c < 32; ++c) {
        if (!is_triangle(a, b, c)) continue;
        CHECK((a | b) == (b | c));
        CHECK((a | c) == (b | c));
        CHECK(set_size(a) + set_size(b) + set_size(c) ==
              2 * set_size(a | b | c) + set_size(a & b & c));
      }
}

TEST_CASE("triple invariant components and permutation invariance") {
  const TripleType t = triple_invariant(0b0011, 0b0110, 0b0101);
  CHECK(t.v == std::array<std::uint8_t, 7>{2, 2, 2, 1, 1, 1, 0});
  CHECK(t.to_string() == "(2,2,2,1,1,1,0)");

  for (const auto& g : all_permutations(4)) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<Subset> pick(0, 15);
    for (int trial = 0; trial < 50; ++trial) {
      const Subset a = pick(rng), b = pick(rng), c = pick(rng);
      CHECK(triple_invariant(a, b, c) ==
            triple_invariant(apply_relabelling(g, a), apply_relabelling(g, b),
                             apply_relabelling(g, c)));
    }
  }
}

TEST_CASE("trivial and discrete partitions have the expected shape") {
  const SetPartition t = trivial_scheme(3);
  CHECK(t.degree == 3);
  CHECK(t.rank == 4);  // cardinality classes 0..3
  for (Subset a = 0; a < 8; ++a)
    for (Subset b = 0; b < 8; ++b)
      CHECK((t.colors[a] == t.colors[b]) == (set_size(a) == set_size(b)));
  CHECK(is_size_homogeneous(t));
  CHECK(is_homogeneous(t));

  const SetPartition disc = discrete_partition(3);
  CHECK(disc.rank == 8);
  CHECK(is_size_homogeneous(disc));
  CHECK(testutil::refines_oracle(disc, t));
  CHECK(refines(disc, t));
  CHECK(!refines(t, disc));
  CHECK(refines(t, t));
}

TEST_CASE("make_partition validates length and renumbers by first occurrence") {
  CHECK_THROWS_AS(make_partition(2, {0, 1, 2}), std::invalid_argument);  // wrong length
  const SetPartition renumbered = make_partition(2, {0, 2, 2, 1});
  CHECK(renumbered.colors == std::vector<std::uint16_t>{0, 1, 1, 2});
  CHECK(renumbered.rank == 3);
  const SetPartition s = make_partition_from_keys(2, {7, 9, 9, 7});
  CHECK(s.rank == 2);
  CHECK(s.colors == std::vector<std::uint16_t>{0, 1, 1, 0});
}

TEST_CASE("cells_of and cell_member_sizes describe the partition") {
  const SetPartition t = trivial_scheme(3);
  const auto cells = cells_of(t);
  REQUIRE(cells.size() == 4);
  std::size_t total = 0;
  for (const auto& cell : cells) total += cell.size();
  CHECK(total == 8);
  const auto sizes = cell_member_sizes(t);
  CHECK(sizes == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("canonical form is a relabelling invariant") {
  std::mt19937 rng(11);
  const int d = 5;
  const auto perms = all_permutations(d);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::uint64_t> keys(1u << d);
    std::uniform_int_distribution<std::uint64_t> color(0, 4);
    for (auto& k : keys) k = color(rng);
    const SetPartition s = make_partition_from_keys(d, keys);
    const std::string form = canonical_form(s);
    std::uniform_int_distribution<std::size_t> pick(0, perms.size() - 1);
    for (int rep = 0; rep < 6; ++rep) {
      const SetPartition moved = relabel_partition(s, perms[pick(rng)]);
      CHECK(canonical_form(moved) == form);
      CHECK(testutil::equal_partitions(partition_from_form(canonical_form(moved)),
                                       partition_from_form(form)));
    }
  }
}

TEST_CASE("canonicalize returns a witnessing relabelling") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::uint64_t> keys(16);
    std::uniform_int_distribution<std::uint64_t> color(0, 3);
    for (auto& k : keys) k = color(rng);
    const SetPartition s = make_partition_from_keys(4, keys);
    const CanonicalResult r = canonicalize(s);
    CHECK(r.form == canonical_form(s));
    const SetPartition moved = relabel_partition(s, r.relabelling);
    // the relabelled partition, with colors renumbered by first occurrence,
    // is exactly the canonical form
    CHECK(canonical_form(moved) == r.form);
    CHECK(testutil::equal_partitions(moved, partition_from_form(r.form)));
  }
}

TEST_CASE("trivial scheme of degree 3 is fixed by every relabelling") {
  const SetPartition t = trivial_scheme(3);
  for (const auto& g : all_permutations(3)) CHECK(relabel_partition(t, g) == t);
  CHECK(partition_from_form(canonical_form(t)) == t);
}

TEST_CASE("hex encoding round-trips") {
  const std::string bytes{'\x00', '\x7f', '\xff', '\x10'};
  CHECK(bytes_to_hex(bytes) == "007fff10");
  CHECK(hex_to_bytes("007fff10") == bytes);
  CHECK_THROWS_AS(hex_to_bytes("0g"), std::invalid_argument);
  CHECK_THROWS_AS(hex_to_bytes("012"), std::invalid_argument);
}

TEST_CASE("serialization round-trips and is canonical") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<std::uint64_t> keys(32);
    std::uniform_int_distribution<std::uint64_t> color(0, 5);
    for (auto& k : keys) k = color(rng);
    const SetPartition s = make_partition_from_keys(5, keys);
    const std::string text = serialize_partition(s);
    const SetPartition back = parse_partition(text);
    CHECK(testutil::equal_partitions(back, s));
    CHECK(serialize_partition(back) == text);  // canonical: stable under re-serialization
  }
}

TEST_CASE("parser rejects malformed input with distinct messages") {
  const auto message_of = [](const std::string& text) {
    try {
      parse_partition(text);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message_of("{nope").find("malformed JSON") != std::string::npos);
  CHECK(message_of(R"({"cells": []})") != "no error");
  // {1} listed twice, {2} missing
  const std::string dup =
      R"({"degree": 2, "cells": [[[],[1],[1]],[[1,2],[2]]]})";
  CHECK(message_of(dup).find("twice") != std::string::npos);
  const std::string missing = R"({"degree": 2, "cells": [[[],[1]],[[1,2]]]})";
  CHECK(message_of(missing).find("missing") != std::string::npos);
  const std::string out_of_range = R"({"degree": 2, "cells": [[[],[1],[2],[3]],[[1,2]]]})";
  CHECK(message_of(out_of_range) != "no error");
  CHECK_THROWS_AS(load_partition_file("/nonexistent/file.json"), std::invalid_argument);
}

TEST_CASE("degree guards") {
  CHECK_THROWS_AS(trivial_scheme(0), std::invalid_argument);
  CHECK_THROWS_AS(trivial_scheme(17), std::invalid_argument);
  CHECK_THROWS_AS(canonical_form(trivial_scheme(11)), std::invalid_argument);
}

TEST_CASE("parallel_chunks covers the range exactly once for any thread count") {
  for (const int threads : {1, 2, 3, 8}) {
    set_thread_count(threads);
    CHECK(thread_count() == threads);
    std::vector<std::atomic<int>> hits(1000);
    parallel_chunks(1000, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) hits[i].fetch_add(1);
    });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
  set_thread_count(1);
}
