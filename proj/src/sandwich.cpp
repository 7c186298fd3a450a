#include "sas/sandwich.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "sas/coherence.hpp"
#include "sas/groups.hpp"

namespace sas {

namespace {

std::uint64_t checked_power(int m, int d) {
  std::uint64_t n = 1;
  for (int i = 0; i < d; ++i) {
    if (n > std::uint64_t{1} << 58) throw std::overflow_error("m^d does not fit in 64 bits");
    n *= static_cast<std::uint64_t>(m);
  }
  return n;
}

BigInt big_power(BigInt base, int exponent) {
  BigInt out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

BigInt factorial(int m) {
  BigInt out = 1;
  for (int i = 2; i <= m; ++i) out *= i;
  return out;
}

struct Dsu {
  std::vector<std::uint32_t> parent;
  explicit Dsu(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  bool connected_all() {
    for (std::uint32_t x = 0; x < parent.size(); ++x)
      if (find(x) != find(0)) return false;
    return true;
  }
};

} // namespace

Configuration hamming_sandwich(const SetPartition& s, int m, bool want_table) {
  if (m < 2) throw std::invalid_argument("Hamming power needs m >= 2");
  const int d = s.degree;
  Configuration c;
  c.vertex_count = checked_power(m, d);
  c.rank = s.rank;
  c.color = [m, d, colors = s.colors](std::uint64_t u, std::uint64_t v) {
    Subset diff = 0;
    for (int i = 0; i < d; ++i) {
      if (u % m != v % m) diff |= Subset{1} << i;
      u /= m;
      v /= m;
    }
    return colors[diff];
  };
  if (want_table) materialize(c);
  return c;
}

void materialize(Configuration& c) {
  if (c.materialized()) return;
  if (c.vertex_count > kMaxDenseVertices)
    throw std::overflow_error("configuration too large to materialize");
  const std::uint64_t n = c.vertex_count;
  c.table.resize(n * n);
  parallel_chunks(n, [&](std::size_t begin, std::size_t end) {
    for (std::uint64_t u = begin; u < end; ++u)
      for (std::uint64_t v = 0; v < n; ++v) c.table[u * n + v] = c.color(u, v);
  });
}

Configuration cc_wl_stabilize(const Configuration& input) {
  if (input.vertex_count > kMaxDenseVertices)
    throw std::overflow_error("configuration too large for the WL pass");
  const std::uint64_t n = input.vertex_count;

  Configuration work = input;
  materialize(work);

  // Seed: split by (diagonal, color, transposed color) so that the fixpoint
  // satisfies the configuration axioms, renumbering by first occurrence.
  {
    std::map<std::tuple<bool, std::uint16_t, std::uint16_t>, std::uint16_t> fresh;
    std::vector<std::uint16_t> colors(n * n);
    for (std::uint64_t u = 0; u < n; ++u)
      for (std::uint64_t v = 0; v < n; ++v) {
        auto key = std::make_tuple(u == v, work.table[u * n + v], work.table[v * n + u]);
        auto [it, inserted] = fresh.try_emplace(key, static_cast<std::uint16_t>(fresh.size()));
        colors[u * n + v] = it->second;
      }
    work.table = std::move(colors);
    work.rank = static_cast<std::uint32_t>(fresh.size());
  }

  for (;;) {
    std::map<std::pair<std::uint16_t, std::vector<std::uint32_t>>, std::uint16_t> fresh;
    std::vector<std::uint16_t> next(n * n);
    std::vector<std::uint32_t> fingerprint(n);
    for (std::uint64_t u = 0; u < n; ++u)
      for (std::uint64_t v = 0; v < n; ++v) {
        for (std::uint64_t w = 0; w < n; ++w)
          fingerprint[w] = (static_cast<std::uint32_t>(work.table[u * n + w]) << 16) |
                           work.table[w * n + v];
        std::sort(fingerprint.begin(), fingerprint.end());
        auto [it, inserted] = fresh.try_emplace(
            std::make_pair(work.table[u * n + v], fingerprint),
            static_cast<std::uint16_t>(fresh.size()));
        next[u * n + v] = it->second;
      }
    if (fresh.size() == work.rank) break; // nothing split: coherent
    work.table = std::move(next);
    work.rank = static_cast<std::uint32_t>(fresh.size());
  }

  work.color = nullptr;
  return work;
}

BigInt sandwich_structure_constant(const SetPartition& s, int m, std::uint32_t alpha,
                                   std::uint32_t beta, std::uint32_t gamma, Subset a) {
  if (m < 2) throw std::invalid_argument("Hamming power needs m >= 2");
  if (alpha >= s.rank || beta >= s.rank || gamma >= s.rank)
    throw std::invalid_argument("cell id out of range");
  if (a >= s.num_subsets() || s.colors[a] != alpha)
    throw std::invalid_argument("representative does not lie in the stated cell");

  std::vector<Subset> alpha_cell, beta_cell, gamma_cell;
  for (std::size_t x = 0; x < s.num_subsets(); ++x) {
    if (s.colors[x] == alpha) alpha_cell.push_back(static_cast<Subset>(x));
    if (s.colors[x] == beta) beta_cell.push_back(static_cast<Subset>(x));
    if (s.colors[x] == gamma) gamma_cell.push_back(static_cast<Subset>(x));
  }

  auto evaluate = [&](Subset rep) {
    BigInt total = 0;
    for (Subset b : beta_cell)
      for (Subset c : gamma_cell) {
        if (!is_triangle(rep, b, c)) continue;
        int outer = std::popcount(b & c & ~rep);
        int inner = std::popcount(rep & b & c);
        total += big_power(m - 1, outer) * big_power(m - 2, inner);
      }
    return total;
  };

  const BigInt value = evaluate(a);
  for (Subset other : alpha_cell)
    if (evaluate(other) != value)
      throw std::logic_error("structure constant depends on the representative: " +
                             set_to_string(a) + " vs " + set_to_string(other) +
                             " (the partition is not coherent)");
  return value;
}

RecoveredScheme recover_sas(const Configuration& c, int m, int d) {
  if (m < 2) throw std::invalid_argument("Hamming power needs m >= 2");
  if (c.vertex_count != checked_power(m, d))
    throw std::invalid_argument("vertex count is not m^d");
  const std::uint64_t n = c.vertex_count;
  const std::size_t subsets = std::size_t{1} << d;

  constexpr std::uint32_t kUnseen = 0xffffffff;
  std::vector<std::uint32_t> color_of(subsets, kUnseen);
  for (std::uint64_t u = 0; u < n; ++u)
    for (std::uint64_t v = 0; v < n; ++v) {
      std::uint64_t uu = u, vv = v;
      Subset diff = 0;
      for (int i = 0; i < d; ++i) {
        if (uu % m != vv % m) diff |= Subset{1} << i;
        uu /= m;
        vv /= m;
      }
      std::uint32_t col = c.color_at(u, v);
      if (color_of[diff] == kUnseen)
        color_of[diff] = col;
      else if (color_of[diff] != col)
        throw std::invalid_argument(
            "coloring does not factor through disagreement sets at " + set_to_string(diff));
    }

  std::vector<std::uint64_t> keys(subsets);
  for (std::size_t x = 0; x < subsets; ++x) keys[x] = color_of[x];
  RecoveredScheme out;
  out.partition = make_partition_from_keys(d, keys);
  if (!is_size_homogeneous(out.partition))
    throw std::invalid_argument("coloring does not respect disagreement sizes");
  out.coherent = is_coherent(out.partition);
  std::int64_t three_pow = 1;
  for (int i = 0; i < d; ++i) three_pow *= 3;
  out.guarantee_applies = m >= three_pow + 4;
  return out;
}

SandwichReport sandwich_report(const SetPartition& s, int m) {
  if (m < 2) throw std::invalid_argument("Hamming power needs m >= 2");
  SandwichReport report;
  report.rank = s.rank;
  // On two vertices (m = 2, degree 1) the one color graph is a single edge,
  // so the m >= 3 imprimitivity argument (a disconnected perfect matching)
  // does not apply.
  const bool two_vertices = m == 2 && s.degree == 1;
  report.primitive = is_homogeneous(s) && (m >= 3 || two_vertices);

  PermGroup aut = automorphism_group(s);
  report.aut_order = big_power(factorial(m), s.degree) * aut.order();
  report.schurian = (orbital_scheme(aut) == s);
  report.aut_primitive = is_transitive(aut) && m >= 3;

  const std::uint64_t n = checked_power(m, s.degree);
  if (n <= kMaxDenseVertices) {
    // One pass over unordered vertex pairs feeding a union-find per color.
    const int d = s.degree;
    std::vector<std::vector<std::uint8_t>> digits(n, std::vector<std::uint8_t>(d));
    for (std::uint64_t u = 0; u < n; ++u) {
      std::uint64_t x = u;
      for (int i = 0; i < d; ++i) {
        digits[u][i] = static_cast<std::uint8_t>(x % m);
        x /= m;
      }
    }

    const int threads = std::min<std::uint64_t>(std::max(1, thread_count()), n);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
    const std::uint64_t chunk = (n + threads - 1) / threads;
    for (std::uint64_t b = 0; b < n; b += chunk) ranges.emplace_back(b, std::min(b + chunk, n));

    std::vector<std::vector<Dsu>> partial(ranges.size(), std::vector<Dsu>(s.rank, Dsu(n)));
    auto scan_range = [&](std::size_t slot) {
      auto& dsus = partial[slot];
      for (std::uint64_t u = ranges[slot].first; u < ranges[slot].second; ++u)
        for (std::uint64_t v = u + 1; v < n; ++v) {
          Subset diff = 0;
          for (int i = 0; i < d; ++i)
            if (digits[u][i] != digits[v][i]) diff |= Subset{1} << i;
          dsus[s.colors[diff]].unite(static_cast<std::uint32_t>(u),
                                     static_cast<std::uint32_t>(v));
        }
    };
    if (ranges.size() == 1) {
      scan_range(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(ranges.size());
      for (std::size_t slot = 0; slot < ranges.size(); ++slot)
        pool.emplace_back(scan_range, slot);
      for (auto& t : pool) t.join();
    }

    std::vector<Dsu> merged(s.rank, Dsu(n));
    for (auto& dsus : partial)
      for (std::uint32_t c = 0; c < s.rank; ++c)
        for (std::uint32_t x = 0; x < n; ++x) merged[c].unite(x, dsus[c].find(x));

    const std::uint16_t diagonal = s.colors[0];
    bool all_connected = true;
    for (std::uint32_t c = 0; c < s.rank; ++c) {
      if (c == diagonal) continue;
      if (!merged[c].connected_all()) all_connected = false;
    }
    if (all_connected != report.primitive)
      throw std::logic_error("connectivity scan disagrees with the primitivity rule");
    report.connectivity_checked = true;
  }
  return report;
}

} // namespace sas
