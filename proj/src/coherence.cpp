#include "sas/coherence.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace sas {

namespace {

inline std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Fingerprint item for the triple (a,b,c): colors of b and c plus the four
// intersection sizes.  |a|,|b|,|c| are implied by size-homogeneous cells.
inline std::uint64_t make_item(std::uint16_t cb, std::uint16_t cc, std::uint32_t packed) {
  return (static_cast<std::uint64_t>(cb) << 48) | (static_cast<std::uint64_t>(cc) << 32) |
         packed;
}

template <typename Sink>
void scan_items(const SetPartition& s, Subset a, CoherenceMode mode, Sink&& sink) {
  const std::size_t n = s.num_subsets();
  for (std::size_t b = 0; b < n; ++b) {
    const Subset bs = static_cast<Subset>(b);
    const std::uint16_t cb = s.colors[b];
    for (std::size_t c = 0; c < n; ++c) {
      const Subset cs = static_cast<Subset>(c);
      if (mode == CoherenceMode::kTriangles && !is_triangle(a, bs, cs)) continue;
      sink(make_item(cb, s.colors[c], packed_intersections(a, bs, cs)));
    }
  }
}

std::uint64_t digest_of(const SetPartition& s, Subset a, CoherenceMode mode) {
  std::uint64_t d = 0;
  scan_items(s, a, mode, [&](std::uint64_t item) { d += mix64(item); });
  return d;
}

std::vector<std::uint64_t> exact_items(const SetPartition& s, Subset a, CoherenceMode mode) {
  std::vector<std::uint64_t> items;
  scan_items(s, a, mode, [&](std::uint64_t item) { items.push_back(item); });
  std::sort(items.begin(), items.end());
  return items;
}

// Union-find over subsets under the group generators.
std::vector<std::uint32_t> subset_orbit_roots(int degree, const PermGroup& g) {
  const std::size_t n = std::size_t{1} << degree;
  std::vector<std::uint32_t> root(n);
  std::iota(root.begin(), root.end(), 0);
  std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  const auto& gens = g.generators.empty() ? g.elements : g.generators;
  for (const auto& p : gens)
    for (std::size_t x = 0; x < n; ++x) {
      std::uint32_t a = find(static_cast<std::uint32_t>(x));
      std::uint32_t b = find(static_cast<std::uint32_t>(apply_subset(p, static_cast<Subset>(x))));
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }
  for (std::size_t x = 0; x < n; ++x) root[x] = find(static_cast<std::uint32_t>(x));
  return root;
}

} // namespace

SetPartition refine_by_size(const SetPartition& s) {
  std::vector<std::uint64_t> keys(s.num_subsets());
  for (std::size_t x = 0; x < s.num_subsets(); ++x) {
    std::uint64_t sz = static_cast<std::uint64_t>(std::popcount(static_cast<Subset>(x)));
    keys[x] = (static_cast<std::uint64_t>(s.colors[x]) << 8) | sz;
  }
  return make_partition_from_keys(s.degree, keys);
}

WlStepResult wl_step(const SetPartition& s, CoherenceMode mode, const PermGroup* aut) {
  if (!is_size_homogeneous(s)) {
    SetPartition refined = refine_by_size(s);
    return {std::move(refined), false};
  }
  const std::size_t n = s.num_subsets();

  // Orbit representatives (everything is its own representative without aut).
  std::vector<std::uint32_t> rep(n);
  if (aut) {
    if (aut->degree != s.degree) throw std::invalid_argument("aut degree mismatch");
    rep = subset_orbit_roots(s.degree, *aut);
  } else {
    std::iota(rep.begin(), rep.end(), 0);
  }
  std::vector<std::uint32_t> reps;
  for (std::size_t x = 0; x < n; ++x)
    if (rep[x] == x) reps.push_back(static_cast<std::uint32_t>(x));

  std::vector<std::uint64_t> digest(n, 0);
  parallel_chunks(reps.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      digest[reps[i]] = digest_of(s, static_cast<Subset>(reps[i]), mode);
  });

  // Group representatives by (old color, digest).
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> groups;
  groups.reserve(reps.size() * 2);
  for (std::uint32_t r : reps)
    groups[mix64(digest[r]) ^ (static_cast<std::uint64_t>(s.colors[r]) << 1)].push_back(r);

  // Guard against hash collisions: within every candidate group compare the
  // exact sorted item vectors, splitting off any member that differs from
  // its group's first representative.
  std::vector<std::uint32_t> group_id(n, 0);
  std::uint32_t next_group = 0;
  for (auto& [k, members] : groups) {
    (void)k;
    std::sort(members.begin(), members.end());
  }
  // Deterministic processing order: by least member.
  std::vector<std::vector<std::uint32_t>*> ordered;
  ordered.reserve(groups.size());
  for (auto& [k, members] : groups) {
    (void)k;
    ordered.push_back(&members);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* a, const auto* b) { return a->front() < b->front(); });
  for (auto* members : ordered) {
    if (members->size() == 1) {
      group_id[members->front()] = next_group++;
      continue;
    }
    std::vector<std::uint64_t> ref_items = exact_items(s, (*members)[0], mode);
    std::vector<std::uint32_t> mismatched;
    group_id[(*members)[0]] = next_group;
    for (std::size_t i = 1; i < members->size(); ++i) {
      if ((s.colors[(*members)[i]] == s.colors[(*members)[0]]) &&
          exact_items(s, static_cast<Subset>((*members)[i]), mode) == ref_items)
        group_id[(*members)[i]] = next_group;
      else
        mismatched.push_back((*members)[i]);
    }
    ++next_group;
    // Extremely unlikely: re-group collided members exactly.
    while (!mismatched.empty()) {
      std::vector<std::uint32_t> rest;
      std::vector<std::uint64_t> ref2 = exact_items(s, mismatched[0], mode);
      std::uint16_t col2 = s.colors[mismatched[0]];
      group_id[mismatched[0]] = next_group;
      for (std::size_t i = 1; i < mismatched.size(); ++i) {
        if (s.colors[mismatched[i]] == col2 &&
            exact_items(s, static_cast<Subset>(mismatched[i]), mode) == ref2)
          group_id[mismatched[i]] = next_group;
        else
          rest.push_back(mismatched[i]);
      }
      ++next_group;
      mismatched = std::move(rest);
    }
  }

  std::vector<std::uint16_t> colors(n);
  for (std::size_t x = 0; x < n; ++x)
    colors[x] = static_cast<std::uint16_t>(group_id[rep[x]] & 0xffff);
  SetPartition refined = make_partition(s.degree, colors);
  bool stable = refined.rank == s.rank;
  if (stable) refined = s; // identical partition; keep the exact object
  return {std::move(refined), stable};
}

SetPartition wl_stabilize(const SetPartition& s, CoherenceMode mode, const PermGroup* aut) {
  SetPartition cur = s;
  for (;;) {
    WlStepResult step = wl_step(cur, mode, aut);
    if (step.stable) return cur;
    if (step.partition.rank <= cur.rank)
      throw std::logic_error("wl_step failed to refine");
    cur = std::move(step.partition);
  }
}

std::string StructureConstantTable::to_csv() const {
  std::ostringstream out;
  out << "alpha,beta,gamma,t_a,t_b,t_c,t_ab,t_ac,t_bc,t_abc,p\n";
  for (const auto& [key, count] : p) {
    out << key.alpha << ',' << key.beta << ',' << key.gamma;
    for (int i = 0; i < 7; ++i) out << ',' << static_cast<int>(key.tau.v[i]);
    out << ',' << count << '\n';
  }
  return out.str();
}

std::string IncoherenceWitness::to_string() const {
  std::ostringstream out;
  out << "cell " << alpha << ": representatives " << set_to_string(representative) << " and "
      << set_to_string(other) << " disagree at (beta=" << beta << ", gamma=" << gamma
      << ", tau=" << tau.to_string() << "): counts " << representative_count << " vs "
      << other_count;
  return out.str();
}

namespace {

// Sorted (item, count) pairs for one subset; items encode (beta, gamma,
// intersection pattern).
std::vector<std::pair<std::uint64_t, std::uint64_t>> counted_items(const SetPartition& s,
                                                                   Subset a,
                                                                   CoherenceMode mode) {
  std::vector<std::uint64_t> items = exact_items(s, a, mode);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counted;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    while (j < items.size() && items[j] == items[i]) ++j;
    counted.emplace_back(items[i], j - i);
    i = j;
  }
  return counted;
}

TripleType tau_from_item(std::uint64_t item, int size_a, const std::vector<int>& cell_sizes) {
  TripleType t;
  const std::uint32_t packed = static_cast<std::uint32_t>(item & 0xfffff);
  const std::uint16_t cb = static_cast<std::uint16_t>(item >> 48);
  const std::uint16_t cc = static_cast<std::uint16_t>((item >> 32) & 0xffff);
  t.v = {static_cast<std::uint8_t>(size_a),
         static_cast<std::uint8_t>(cell_sizes[cb]),
         static_cast<std::uint8_t>(cell_sizes[cc]),
         static_cast<std::uint8_t>((packed >> 15) & 31),
         static_cast<std::uint8_t>((packed >> 10) & 31),
         static_cast<std::uint8_t>((packed >> 5) & 31),
         static_cast<std::uint8_t>(packed & 31)};
  return t;
}

} // namespace

CoherenceReport structure_constants(const SetPartition& s, CoherenceMode mode) {
  if (!is_size_homogeneous(s))
    throw std::invalid_argument("structure constants require a size-homogeneous partition");
  const auto cells = cells_of(s);
  const auto sizes = cell_member_sizes(s);

  CoherenceReport report;
  StructureConstantTable table;
  table.degree = s.degree;
  table.rank = s.rank;
  table.mode = mode;

  for (std::uint32_t alpha = 0; alpha < s.rank; ++alpha) {
    const auto& members = cells[alpha];
    auto ref = counted_items(s, members[0], mode);
    for (std::size_t mi = 1; mi < members.size(); ++mi) {
      auto cur = counted_items(s, members[mi], mode);
      if (cur == ref) continue;
      // Locate the lexicographically least differing key.
      IncoherenceWitness w;
      w.alpha = alpha;
      w.representative = members[0];
      w.other = members[mi];
      std::size_t i = 0, j = 0;
      std::uint64_t item = 0;
      for (;;) {
        if (i < ref.size() && (j >= cur.size() || ref[i].first < cur[j].first)) {
          item = ref[i].first;
          w.representative_count = ref[i].second;
          w.other_count = 0;
          break;
        }
        if (j < cur.size() && (i >= ref.size() || cur[j].first < ref[i].first)) {
          item = cur[j].first;
          w.representative_count = 0;
          w.other_count = cur[j].second;
          break;
        }
        if (ref[i].second != cur[j].second) {
          item = ref[i].first;
          w.representative_count = ref[i].second;
          w.other_count = cur[j].second;
          break;
        }
        ++i;
        ++j;
      }
      w.beta = static_cast<std::uint32_t>(item >> 48);
      w.gamma = static_cast<std::uint32_t>((item >> 32) & 0xffff);
      w.tau = tau_from_item(item, sizes[alpha], sizes);
      report.coherent = false;
      report.witness = std::move(w);
      return report;
    }
    for (const auto& [item, count] : ref) {
      StructureKey key;
      key.alpha = alpha;
      key.beta = static_cast<std::uint32_t>(item >> 48);
      key.gamma = static_cast<std::uint32_t>((item >> 32) & 0xffff);
      key.tau = tau_from_item(item, sizes[alpha], sizes);
      table.p.emplace(key, count);
    }
  }
  report.coherent = true;
  report.table = std::move(table);
  return report;
}

bool is_coherent(const SetPartition& s) {
  return is_size_homogeneous(s) && structure_constants(s, CoherenceMode::kTriangles).coherent;
}

bool is_fully_coherent(const SetPartition& s) {
  return wl_step(s, CoherenceMode::kAllTypes).stable;
}

} // namespace sas
