#include "sas/constructions.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "sas/coherence.hpp"

namespace sas {

SetPartition direct_sum(const SetPartition& s1, const SetPartition& s2) {
  const int degree = s1.degree + s2.degree;
  if (degree > kMaxDegree) throw std::invalid_argument("direct sum degree too large");
  const std::size_t n = std::size_t{1} << degree;
  const Subset low_mask = full_set(s1.degree);
  std::vector<std::uint64_t> keys(n);
  for (std::size_t x = 0; x < n; ++x) {
    Subset low = static_cast<Subset>(x) & low_mask;
    Subset high = static_cast<Subset>(x) >> s1.degree;
    keys[x] = (static_cast<std::uint64_t>(s1.colors[low]) << 32) | s2.colors[high];
  }
  return make_partition_from_keys(degree, keys);
}

SetPartition wreath_product(const SetPartition& s, const PermGroup& g) {
  const int k = g.degree;
  const int degree = s.degree * k;
  if (degree > kMaxDegree) throw std::invalid_argument("wreath product degree too large");
  const std::size_t n = std::size_t{1} << degree;
  const std::size_t rank = s.rank;

  // Orbits of g on color tuples [rank]^k, tuples encoded in base `rank`.
  std::size_t tuples = 1;
  for (int i = 0; i < k; ++i) tuples *= rank;
  std::vector<std::uint32_t> root(tuples);
  std::iota(root.begin(), root.end(), 0);
  std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  const auto& gens = g.generators.empty() ? g.elements : g.generators;
  std::vector<std::size_t> digits(k);
  for (const auto& p : gens) {
    for (std::size_t t = 0; t < tuples; ++t) {
      std::size_t rest = t;
      for (int i = 0; i < k; ++i) {
        digits[i] = rest % rank;
        rest /= rank;
      }
      std::size_t image = 0;
      for (int i = k - 1; i >= 0; --i) image = image * rank + digits[p.img[i]];
      std::uint32_t a = find(static_cast<std::uint32_t>(t));
      std::uint32_t b = find(static_cast<std::uint32_t>(image));
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }
  }

  const Subset slice_mask = full_set(s.degree);
  std::vector<std::uint64_t> keys(n);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t t = 0;
    for (int i = k - 1; i >= 0; --i) {
      Subset slice = (static_cast<Subset>(x) >> (i * s.degree)) & slice_mask;
      t = t * rank + s.colors[slice];
    }
    keys[x] = find(static_cast<std::uint32_t>(t));
  }
  return make_partition_from_keys(degree, keys);
}

namespace {

void check_index_two(const PermGroup& g, const PermGroup& h) {
  if (g.degree != h.degree) throw std::invalid_argument("split: degree mismatch");
  if (2 * h.order() != g.order())
    throw std::invalid_argument("split: H must have index 2 in G");
  for (const auto& e : h.elements)
    if (!g.contains(e)) throw std::invalid_argument("split: H is not a subgroup of G");
}

} // namespace

std::vector<std::uint32_t> split_cells(const PermGroup& g, const PermGroup& h) {
  check_index_two(g, h);
  SetPartition sg = orbital_scheme(g);
  SetPartition sh = orbital_scheme(h);
  std::vector<std::set<std::uint16_t>> parts(sg.rank);
  for (std::size_t x = 0; x < sg.num_subsets(); ++x)
    parts[sg.colors[x]].insert(sh.colors[x]);
  std::vector<std::uint32_t> out;
  for (std::uint32_t c = 0; c < sg.rank; ++c)
    if (parts[c].size() > 1) out.push_back(c);
  return out;
}

SetPartition split_scheme(const PermGroup& g, const PermGroup& h,
                          const std::vector<std::uint32_t>& which) {
  check_index_two(g, h);
  SetPartition sg = orbital_scheme(g);
  SetPartition sh = orbital_scheme(h);
  std::vector<std::uint32_t> splitting = split_cells(g, h);
  std::vector<bool> selected(sg.rank, false);
  for (std::uint32_t c : which) {
    if (std::find(splitting.begin(), splitting.end(), c) == splitting.end())
      throw std::invalid_argument("split: cell " + std::to_string(c) +
                                  " does not split under H");
    selected[c] = true;
  }
  std::size_t count = std::count(selected.begin(), selected.end(), true);
  if (count == 0) throw std::invalid_argument("split: selection is empty");
  if (count == splitting.size())
    throw std::invalid_argument("split: selection must be a proper subset of the splitting cells");

  std::vector<std::uint64_t> keys(sg.num_subsets());
  for (std::size_t x = 0; x < sg.num_subsets(); ++x) {
    std::uint64_t key = static_cast<std::uint64_t>(sg.colors[x]) << 32;
    if (selected[sg.colors[x]]) key |= sh.colors[x];
    keys[x] = key;
  }
  return make_partition_from_keys(sg.degree, keys);
}

TableRow table_row(const SetPartition& s) {
  TableRow row;
  row.rank = s.rank;
  PermGroup aut = automorphism_group(s);
  row.aut_order = aut.order();
  row.aut_name = describe_group(aut);
  row.homogeneous = is_homogeneous(s);
  row.vertex_transitive = is_transitive(aut);
  row.fully_coherent = is_fully_coherent(s);
  row.schurian = orbital_scheme(aut) == s;
  return row;
}

namespace {

Subset subset_of(const std::vector<int>& elements, int degree) {
  return subset_from_elements(elements, degree);
}

// Orbit of a subset under a group, as a sorted list.
std::vector<Subset> subset_orbit(const PermGroup& g, Subset a) {
  std::set<Subset> orbit{a};
  std::vector<Subset> queue{a};
  while (!queue.empty()) {
    Subset cur = queue.back();
    queue.pop_back();
    const auto& gens = g.generators.empty() ? g.elements : g.generators;
    for (const auto& p : gens) {
      Subset img = apply_subset(p, cur);
      if (orbit.insert(img).second) queue.push_back(img);
    }
  }
  return {orbit.begin(), orbit.end()};
}

std::vector<Subset> cell_members(const SetPartition& s, std::uint16_t color) {
  std::vector<Subset> out;
  for (std::size_t x = 0; x < s.num_subsets(); ++x)
    if (s.colors[x] == color) out.push_back(static_cast<Subset>(x));
  return out;
}

// The catalog recipe: split the selected splitting cells of the orbit scheme
// of G into their two H-orbit halves, verify coherence, and package the
// published properties.
CatalogEntry build_split_entry(const std::string& id, const PermGroup& g, const PermGroup& h,
                               const std::vector<std::uint32_t>& which, TableRow expected) {
  CatalogEntry entry;
  entry.id = id;
  entry.scheme = split_scheme(g, h, which);
  entry.expected = expected;
  if (!is_coherent(entry.scheme))
    throw std::logic_error("catalog " + id + ": constructed partition is not coherent");
  return entry;
}

// All 4-term arithmetic progressions {a, a+e, a+2e, a+3e} mod 8 with even
// start and difference 1 or 5, carried to points 1..8.
std::vector<Subset> ap_split_half() {
  std::set<Subset> half;
  for (int a = 0; a < 8; a += 2)
    for (int e : {1, 5}) {
      std::vector<int> elems;
      for (int t = 0; t < 4; ++t) elems.push_back((a + t * e) % 8 + 1);
      std::sort(elems.begin(), elems.end());
      half.insert(subset_of(elems, 8));
    }
  return {half.begin(), half.end()};
}

// Checks that splitting `cell` of the G-scheme under H produces exactly
// {half, complement-in-cell}.
void verify_halves(const std::string& id, const PermGroup& g, const PermGroup& h, Subset member,
                   const std::vector<Subset>& expected_half) {
  SetPartition sg = orbital_scheme(g);
  std::vector<Subset> cell = cell_members(sg, sg.colors[member]);
  std::vector<Subset> orbit = subset_orbit(h, expected_half.front());
  if (orbit != expected_half)
    throw std::logic_error("catalog " + id + ": H-orbit does not match the documented half");
  std::vector<Subset> rest;
  std::set_difference(cell.begin(), cell.end(), orbit.begin(), orbit.end(),
                      std::back_inserter(rest));
  if (orbit.size() + rest.size() != cell.size() || rest.empty())
    throw std::logic_error("catalog " + id + ": documented half is not half of the cell");
}

} // namespace

std::vector<std::string> catalog_ids() {
  return {"S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "N9a", "N9b"};
}

CatalogEntry catalog(const std::string& id) {
  const Subset ap_member = subset_of({1, 2, 3, 4}, 8); // {0,1,2,3} mod 8

  auto degree8_pair = [&](const std::string& gid, const std::string& hid) {
    return std::pair<PermGroup, PermGroup>(named_group(gid), named_group(hid));
  };

  // Selections: the listed cells, or all splitting cells except them.
  auto pick = [](const SetPartition& sg, const std::vector<std::uint32_t>& splitting,
                 const std::vector<Subset>& members,
                 bool complement) -> std::vector<std::uint32_t> {
    std::set<std::uint32_t> base;
    for (Subset m : members) base.insert(sg.colors[m]);
    std::vector<std::uint32_t> out;
    for (std::uint32_t c : splitting) {
      bool in_base = base.count(c) > 0;
      if (in_base != complement) out.push_back(c);
    }
    return out;
  };

  if (id == "S1" || id == "S2" || id == "S3" || id == "S4" || id == "S5" || id == "S6") {
    std::string gid, hid;
    TableRow expected;
    bool complement = false;
    if (id == "S1" || id == "S2") {
      gid = "G1";
      hid = "H1";
      complement = (id == "S2");
      expected = {complement ? 30u : 25u, 16, "Q8 o C4", true, true, true, false};
    } else if (id == "S3" || id == "S4") {
      gid = "G2";
      hid = "H2";
      complement = (id == "S4");
      expected = {complement ? 36u : 28u, 8, "Q8", true, true, true, false};
    } else {
      gid = "G3";
      hid = "H3";
      complement = (id == "S6");
      expected = {complement ? 51u : 28u, 8, "C4 x C2", !complement, false, true, false};
    }
    auto [g, h] = degree8_pair(gid, hid);
    verify_halves(id, g, h, ap_member, ap_split_half());
    SetPartition sg = orbital_scheme(g);
    auto which = pick(sg, split_cells(g, h), {ap_member}, complement);
    return build_split_entry(id, g, h, which, expected);
  }

  if (id == "S7" || id == "S8") {
    PermGroup g = named_group("G4");
    PermGroup h = named_group("H4");
    // The three separated cells: the orbit of the eight listed 3-sets, its
    // complementary 5-set orbit, and the self-complementary 4-set orbit
    // containing the four listed blocks.
    std::vector<Subset> alpha;
    for (const auto& e : std::vector<std::vector<int>>{{1, 2, 3},
                                                       {1, 3, 6},
                                                       {1, 4, 7},
                                                       {1, 7, 8},
                                                       {2, 5, 7},
                                                       {3, 4, 5},
                                                       {3, 5, 8},
                                                       {5, 6, 7}})
      alpha.push_back(subset_of(e, 8));
    std::sort(alpha.begin(), alpha.end());
    std::vector<Subset> beta;
    for (const auto& e : std::vector<std::vector<int>>{
             {1, 2, 3, 6}, {1, 4, 7, 8}, {2, 5, 6, 7}, {3, 4, 5, 8}})
      beta.push_back(subset_of(e, 8));
    std::sort(beta.begin(), beta.end());
    std::vector<Subset> alpha_c;
    for (Subset a : alpha) alpha_c.push_back(set_complement(a, 8));
    std::sort(alpha_c.begin(), alpha_c.end());

    verify_halves(id, g, h, alpha.front(), alpha);
    verify_halves(id, g, h, alpha_c.front(), alpha_c);
    verify_halves(id, g, h, beta.front(), beta);

    SetPartition sg = orbital_scheme(g);
    bool complement = (id == "S8");
    auto which =
        pick(sg, split_cells(g, h), {alpha.front(), alpha_c.front(), beta.front()}, complement);
    TableRow expected{complement ? 49u : 43u, 8, "C4 x C2", false, false, true, false};
    return build_split_entry(id, g, h, which, expected);
  }

  if (id == "N9a" || id == "N9b") {
    PermGroup g = named_group("A9");
    PermGroup h = named_group("M27");
    // {1,2,3,5} mod 9 -> points {2,3,4,6}; its H-orbit is one documented
    // half, the other is the H-orbit of {1,2,3,6} -> {2,3,4,7}.  The
    // complementary 5-set cell splits alongside.
    Subset quad = subset_of({2, 3, 4, 6}, 9);
    Subset quad_other = subset_of({2, 3, 4, 7}, 9);
    SetPartition sg = orbital_scheme(g);
    std::vector<Subset> cell = cell_members(sg, sg.colors[quad]);
    std::vector<Subset> half = subset_orbit(h, quad);
    std::vector<Subset> other = subset_orbit(h, quad_other);
    std::vector<Subset> merged(half);
    merged.insert(merged.end(), other.begin(), other.end());
    std::sort(merged.begin(), merged.end());
    if (merged != cell)
      throw std::logic_error("catalog " + id + ": documented halves do not tile the cell");

    bool complement = (id == "N9b");
    auto which = pick(sg, split_cells(g, h), {quad, set_complement(quad, 9)}, complement);
    TableRow expected{complement ? 26u : 24u, 27, "C9 : C3", true, true, true, false};
    return build_split_entry(id, g, h, which, expected);
  }

  throw std::invalid_argument("unknown catalog id: " + id);
}

} // namespace sas
