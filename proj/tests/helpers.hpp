#pragma once
// Independent oracles shared by the test files.  Everything here recomputes
// properties from first principles (element loops, brute-force refinement,
// direct triple counts) so that agreement with the library is meaningful.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "sas/coherence.hpp"
#include "sas/core.hpp"
#include "sas/groups.hpp"
#include "sas/vas.hpp"

namespace testutil {

using sas::SetPartition;
using sas::Subset;

// Two partitions of the same index set are equal as partitions when their
// color classes coincide, regardless of how the classes are numbered.
inline bool equal_partitions(const SetPartition& a, const SetPartition& b) {
  if (a.degree != b.degree || a.rank != b.rank) return false;
  std::map<std::uint16_t, std::uint16_t> fwd, bwd;
  for (std::size_t i = 0; i < a.colors.size(); ++i) {
    const auto x = a.colors[i], y = b.colors[i];
    const auto f = fwd.emplace(x, y);
    if (!f.second && f.first->second != y) return false;
    const auto g = bwd.emplace(y, x);
    if (!g.second && g.first->second != x) return false;
  }
  return true;
}

// first refines second: every cell of the first lies inside a cell of the
// second (computed directly, not via the library's refines()).
inline bool refines_oracle(const SetPartition& fine, const SetPartition& coarse) {
  if (fine.degree != coarse.degree) return false;
  std::map<std::uint16_t, std::uint16_t> image;
  for (std::size_t i = 0; i < fine.colors.size(); ++i) {
    const auto f = image.emplace(fine.colors[i], coarse.colors[i]);
    if (!f.second && f.first->second != coarse.colors[i]) return false;
  }
  return true;
}

// Orbit count of g acting on rank-tuples of length g.degree, counted by
// direct union-find — the expected rank of a wreath product.
inline std::size_t tuple_orbit_count(std::uint32_t rank, const sas::PermGroup& g) {
  const int k = g.degree;
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= rank;
  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  const std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::uint32_t> digits(k);
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t rest = t;
    for (int i = 0; i < k; ++i) {
      digits[i] = rest % rank;
      rest /= rank;
    }
    for (const auto& p : g.elements) {
      std::size_t image = 0, base = 1;
      for (int i = 0; i < k; ++i) {
        image += digits[p.img[i]] * base;
        base *= rank;
      }
      const std::size_t a = find(t), b = find(image);
      if (a != b) parent[a] = b;
    }
  }
  std::set<std::size_t> roots;
  for (std::size_t t = 0; t < total; ++t) roots.insert(find(t));
  return roots.size();
}

// The subgroup of Sym(k) whose action on rank-tuples preserves every
// g-orbit setwise: the wreath product's top group per the product formula.
inline std::size_t orbit_preserving_order(std::uint32_t rank, const sas::PermGroup& g) {
  const int k = g.degree;
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= rank;
  // orbit id of each tuple under g
  std::vector<int> orbit(total, -1);
  std::vector<std::uint32_t> digits(k);
  int next = 0;
  for (std::size_t t = 0; t < total; ++t) {
    if (orbit[t] != -1) continue;
    // BFS over the g-action
    std::vector<std::size_t> queue{t};
    orbit[t] = next;
    while (!queue.empty()) {
      const std::size_t cur = queue.back();
      queue.pop_back();
      std::size_t rest = cur;
      for (int i = 0; i < k; ++i) {
        digits[i] = rest % rank;
        rest /= rank;
      }
      for (const auto& p : g.elements) {
        std::size_t image = 0, base = 1;
        for (int i = 0; i < k; ++i) {
          image += digits[p.img[i]] * base;
          base *= rank;
        }
        if (orbit[image] == -1) {
          orbit[image] = next;
          queue.push_back(image);
        }
      }
    }
    ++next;
  }
  // count sigma in Sym(k) fixing every orbit setwise
  std::vector<std::uint8_t> sigma(k);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::size_t count = 0;
  do {
    bool preserves = true;
    for (std::size_t t = 0; t < total && preserves; ++t) {
      std::size_t rest = t;
      for (int i = 0; i < k; ++i) {
        digits[i] = rest % rank;
        rest /= rank;
      }
      std::size_t image = 0, base = 1;
      for (int i = 0; i < k; ++i) {
        image += digits[sigma[i]] * base;
        base *= rank;
      }
      preserves = orbit[image] == orbit[t];
    }
    count += preserves;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return count;
}

// Complement closure: the set of complements of each cell is again a cell.
inline bool complement_closed(const SetPartition& s) {
  for (std::uint16_t cell = 0; cell < s.rank; ++cell) {
    std::set<std::uint16_t> images;
    for (Subset a = 0; a < s.num_subsets(); ++a)
      if (s.colors[a] == cell) images.insert(s.colors[sas::set_complement(a, s.degree)]);
    if (images.size() != 1) return false;
    // and the image cell maps back onto this cell with the same size
    const auto image = *images.begin();
    std::size_t size = 0, image_size = 0;
    for (Subset a = 0; a < s.num_subsets(); ++a) {
      size += s.colors[a] == cell;
      image_size += s.colors[a] == image;
    }
    if (size != image_size) return false;
  }
  return true;
}

// Containment biregularity: for every ordered pair of cells, each member of
// the first is a subset of the same number of members of the second, and
// each member of the second contains the same number of members of the first.
inline bool containment_biregular(const SetPartition& s) {
  const auto cells = sas::cells_of(s);
  for (const auto& alpha : cells) {
    for (const auto& beta : cells) {
      std::set<std::size_t> up, down;
      for (const Subset a : alpha) {
        std::size_t count = 0;
        for (const Subset b : beta) count += a != b && (a & ~b) == 0;
        up.insert(count);
      }
      for (const Subset b : beta) {
        std::size_t count = 0;
        for (const Subset a : alpha) count += a != b && (a & ~b) == 0;
        down.insert(count);
      }
      if (up.size() != 1 || down.size() != 1) return false;
    }
  }
  return true;
}

// Direct triple count: the number of pairs (b, c) in beta x gamma with the
// given 7-component type, restricted to triangles when triangles_only.
inline std::uint64_t recount_triples(const SetPartition& s, Subset a, std::uint32_t beta,
                                     std::uint32_t gamma, const sas::TripleType& tau,
                                     bool triangles_only) {
  std::uint64_t count = 0;
  for (Subset b = 0; b < s.num_subsets(); ++b) {
    if (s.colors[b] != beta) continue;
    for (Subset c = 0; c < s.num_subsets(); ++c) {
      if (s.colors[c] != gamma) continue;
      if (triangles_only && !sas::is_triangle(a, b, c)) continue;
      if (sas::triple_invariant(a, b, c) == tau) ++count;
    }
  }
  return count;
}

// From-scratch Weisfeiler–Leman refinement: cardinality split first, then
// iterate full multiset fingerprints with no hashing, orbit shortcuts or
// parallelism.  The reference implementation for wl_stabilize.
inline SetPartition naive_wl(const SetPartition& s, sas::CoherenceMode mode) {
  const std::size_t n = s.num_subsets();
  const bool triangles_only = mode == sas::CoherenceMode::kTriangles;
  std::vector<std::uint32_t> color(n);
  {
    std::map<std::pair<std::uint16_t, int>, std::uint32_t> renumber;
    for (Subset a = 0; a < n; ++a) {
      const auto key = std::make_pair(s.colors[a], sas::set_size(a));
      auto it = renumber.find(key);
      if (it == renumber.end())
        it = renumber.emplace(key, static_cast<std::uint32_t>(renumber.size())).first;
      color[a] = it->second;
    }
  }
  while (true) {
    std::vector<std::vector<std::tuple<std::uint32_t, std::uint32_t, sas::TripleType>>> fp(n);
    for (Subset a = 0; a < n; ++a) {
      for (Subset b = 0; b < n; ++b) {
        for (Subset c = 0; c < n; ++c) {
          if (triangles_only && !sas::is_triangle(a, b, c)) continue;
          fp[a].emplace_back(color[b], color[c], sas::triple_invariant(a, b, c));
        }
      }
      std::sort(fp[a].begin(), fp[a].end());
    }
    std::map<std::pair<std::uint32_t, std::vector<std::tuple<std::uint32_t, std::uint32_t,
                                                             sas::TripleType>>>,
             std::uint32_t>
        renumber;
    std::vector<std::uint32_t> next(n);
    for (Subset a = 0; a < n; ++a) {
      auto key = std::make_pair(color[a], std::move(fp[a]));
      auto it = renumber.find(key);
      if (it == renumber.end())
        it = renumber.emplace(std::move(key), static_cast<std::uint32_t>(renumber.size())).first;
      next[a] = it->second;
    }
    const bool stable =
        renumber.size() == *std::max_element(color.begin(), color.end()) + 1;
    color = std::move(next);
    if (stable) break;
  }
  std::vector<std::uint64_t> keys(color.begin(), color.end());
  return sas::make_partition_from_keys(s.degree, keys);
}

// A random coarsening: repeatedly merge two distinct color classes.
inline SetPartition random_coarsening(const SetPartition& s, std::mt19937& rng, int merges) {
  std::vector<std::uint64_t> keys(s.colors.begin(), s.colors.end());
  for (int step = 0; step < merges; ++step) {
    std::set<std::uint64_t> distinct(keys.begin(), keys.end());
    if (distinct.size() <= 1) break;
    std::vector<std::uint64_t> pool(distinct.begin(), distinct.end());
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const std::uint64_t from = pool[pick(rng)];
    std::uint64_t to = from;
    while (to == from) to = pool[pick(rng)];
    for (auto& k : keys)
      if (k == from) k = to;
  }
  return sas::make_partition_from_keys(s.degree, keys);
}

// ---------------------------------------------------------------------------
// Vector-scheme oracles.

// Complement closure over profiles: a -> (k - a_1, ..., k - a_d).
inline bool vas_complement_closed(const sas::VectorPartition& s) {
  const std::size_t n = s.num_profiles();
  std::vector<int> scratch(s.d);
  for (std::uint16_t cell = 0; cell < s.rank; ++cell) {
    std::set<std::uint16_t> images;
    std::size_t size = 0, image_size = 0;
    std::uint16_t image = 0;
    for (std::size_t p = 0; p < n; ++p) {
      if (s.colors[p] != cell) continue;
      auto prof = sas::profile_at(p, s.k, s.d);
      for (int i = 0; i < s.d; ++i) prof[i] = s.k - prof[i];
      images.insert(s.colors[sas::profile_index(prof, s.k)]);
    }
    if (images.size() != 1) return false;
    image = *images.begin();
    for (std::size_t p = 0; p < n; ++p) {
      size += s.colors[p] == cell;
      image_size += s.colors[p] == image;
    }
    if (size != image_size) return false;
  }
  return true;
}

// Domination biregularity: for cells alpha, beta the graph
// {(a, b) : a <= b componentwise} is biregular.
inline bool vas_domination_biregular(const sas::VectorPartition& s) {
  const std::size_t n = s.num_profiles();
  std::vector<std::vector<std::size_t>> members(s.rank);
  for (std::size_t p = 0; p < n; ++p) members[s.colors[p]].push_back(p);
  const auto dominates = [&](std::size_t lo, std::size_t hi) {
    const auto a = sas::profile_at(lo, s.k, s.d), b = sas::profile_at(hi, s.k, s.d);
    for (int i = 0; i < s.d; ++i)
      if (a[i] > b[i]) return false;
    return true;
  };
  for (const auto& alpha : members) {
    for (const auto& beta : members) {
      std::set<std::size_t> up, down;
      for (const auto a : alpha) {
        std::size_t count = 0;
        for (const auto b : beta) count += dominates(a, b);
        up.insert(count);
      }
      for (const auto b : beta) {
        std::size_t count = 0;
        for (const auto a : alpha) count += dominates(a, b);
        down.insert(count);
      }
      if (up.size() != 1 || down.size() != 1) return false;
    }
  }
  return true;
}

// Row-sum balance on homogeneous schemes: for every cell the componentwise
// sum of its member profiles is a constant vector.
inline bool vas_row_sums_balanced(const sas::VectorPartition& s) {
  const std::size_t n = s.num_profiles();
  for (std::uint16_t cell = 0; cell < s.rank; ++cell) {
    std::vector<long> sums(s.d, 0);
    for (std::size_t p = 0; p < n; ++p) {
      if (s.colors[p] != cell) continue;
      const auto prof = sas::profile_at(p, s.k, s.d);
      for (int i = 0; i < s.d; ++i) sums[i] += prof[i];
    }
    for (int i = 1; i < s.d; ++i)
      if (sums[i] != sums[0]) return false;
  }
  return true;
}

}  // namespace testutil
