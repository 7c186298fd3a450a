#include "sas/groups.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace sas {

bool Permutation::is_identity() const {
  for (int i = 0; i < degree(); ++i)
    if (img[i] != i) return false;
  return true;
}

Permutation Permutation::identity(int degree) {
  Permutation p;
  p.img.resize(degree);
  std::iota(p.img.begin(), p.img.end(), 0);
  return p;
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree()) throw std::invalid_argument("degree mismatch in compose");
  Permutation r;
  r.img.resize(p.degree());
  for (int i = 0; i < p.degree(); ++i) r.img[i] = p.img[q.img[i]];
  return r;
}

Permutation inverse(const Permutation& p) {
  Permutation r;
  r.img.resize(p.degree());
  for (int i = 0; i < p.degree(); ++i) r.img[p.img[i]] = static_cast<std::uint8_t>(i);
  return r;
}

Subset apply_subset(const Permutation& p, Subset a) {
  Subset out = 0;
  while (a) {
    out |= Subset{1} << p.img[std::countr_zero(a)];
    a &= a - 1;
  }
  return out;
}

bool is_even(const Permutation& p) {
  std::vector<bool> seen(p.degree(), false);
  int transpositions = 0;
  for (int i = 0; i < p.degree(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = p.img[j]) {
      seen[j] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 0;
}

std::string to_cycles(const Permutation& p) {
  std::string out;
  std::vector<bool> seen(p.degree(), false);
  for (int i = 0; i < p.degree(); ++i) {
    if (seen[i] || p.img[i] == i) {
      seen[i] = true;
      continue;
    }
    out += "(";
    bool first = true;
    for (int j = i; !seen[j]; j = p.img[j]) {
      seen[j] = true;
      if (!first) out += ",";
      out += std::to_string(j + 1);
      first = false;
    }
    out += ")";
  }
  return out.empty() ? "()" : out;
}

Permutation from_cycles(const std::string& text, int degree) {
  if (degree < 1 || degree > kMaxDegree)
    throw std::invalid_argument("degree out of range");
  Permutation p = Permutation::identity(degree);
  std::vector<bool> used(degree, false);
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_space();
  bool any = false;
  while (i < text.size()) {
    if (text[i] != '(') throw std::invalid_argument("expected '(' in cycle notation");
    ++i;
    std::vector<int> cycle;
    skip_space();
    while (i < text.size() && text[i] != ')') {
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw std::invalid_argument("expected point number in cycle notation");
      int v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        v = v * 10 + (text[i++] - '0');
      if (v < 1 || v > degree)
        throw std::invalid_argument("point " + std::to_string(v) + " out of range");
      if (used[v - 1])
        throw std::invalid_argument("point " + std::to_string(v) + " repeated");
      used[v - 1] = true;
      cycle.push_back(v - 1);
      skip_space();
      if (i < text.size() && text[i] == ',') {
        ++i;
        skip_space();
      }
    }
    if (i == text.size()) throw std::invalid_argument("unterminated cycle");
    ++i; // ')'
    skip_space();
    any = true;
    for (std::size_t k = 0; k < cycle.size(); ++k)
      p.img[cycle[k]] = static_cast<std::uint8_t>(cycle[(k + 1) % cycle.size()]);
  }
  if (!any) throw std::invalid_argument("empty cycle notation (identity is \"()\")");
  return p;
}

std::uint64_t encode_permutation(const Permutation& p) {
  std::uint64_t key = 0;
  for (int i = 0; i < p.degree(); ++i)
    key |= static_cast<std::uint64_t>(p.img[i]) << (4 * i);
  return key;
}

bool PermGroup::contains(const Permutation& p) const {
  return std::binary_search(element_keys.begin(), element_keys.end(), encode_permutation(p));
}

namespace {

PermGroup finish_group(int degree, std::vector<Permutation> generators,
                       std::vector<Permutation> elements) {
  PermGroup g;
  g.degree = degree;
  g.generators = std::move(generators);
  g.elements = std::move(elements);
  g.element_keys.reserve(g.elements.size());
  for (const auto& e : g.elements) g.element_keys.push_back(encode_permutation(e));
  std::sort(g.element_keys.begin(), g.element_keys.end());
  return g;
}

} // namespace

PermGroup closure(const std::vector<Permutation>& generators, int degree) {
  if (degree < 1 || degree > kMaxGroupDegree)
    throw std::invalid_argument("group degree limited to " + std::to_string(kMaxGroupDegree));
  for (const auto& g : generators)
    if (g.degree() != degree) throw std::invalid_argument("generator degree mismatch");
  std::vector<Permutation> elements{Permutation::identity(degree)};
  std::unordered_set<std::uint64_t> seen{encode_permutation(elements[0])};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    Permutation e = elements[head]; // copy: vector may reallocate
    for (const auto& g : generators) {
      Permutation f = compose(e, g);
      if (seen.insert(encode_permutation(f)).second) elements.push_back(std::move(f));
    }
  }
  return finish_group(degree, generators, std::move(elements));
}

PermGroup trivial_group(int degree) { return closure({}, degree); }

PermGroup symmetric_group(int degree) {
  if (degree == 1) return trivial_group(1);
  std::vector<Permutation> gens{from_cycles("(1,2)", degree)};
  if (degree >= 3) {
    std::string cyc = "(1";
    for (int i = 2; i <= degree; ++i) cyc += "," + std::to_string(i);
    cyc += ")";
    gens.push_back(from_cycles(cyc, degree));
  }
  return closure(gens, degree);
}

PermGroup alternating_group(int degree) {
  if (degree <= 2) return trivial_group(degree);
  std::vector<Permutation> gens;
  for (int i = 3; i <= degree; ++i)
    gens.push_back(from_cycles("(1,2," + std::to_string(i) + ")", degree));
  return closure(gens, degree);
}

PermGroup cyclic_group(int degree) {
  if (degree == 1) return trivial_group(1);
  std::string cyc = "(1";
  for (int i = 2; i <= degree; ++i) cyc += "," + std::to_string(i);
  cyc += ")";
  return closure({from_cycles(cyc, degree)}, degree);
}

namespace {

// The map z -> a*z + b on Z/n carried to points 1..n via z -> z+1.
Permutation affine_map(int n, int a, int b) {
  Permutation p;
  p.img.resize(n);
  for (int z = 0; z < n; ++z) p.img[z] = static_cast<std::uint8_t>((a * z + b) % n);
  return p;
}

} // namespace

PermGroup named_group(const std::string& id) {
  if (id == "G1") return closure({affine_map(8, 1, 1), affine_map(8, 3, 0), affine_map(8, 5, 0)}, 8);
  if (id == "H1") return closure({affine_map(8, 1, 2), affine_map(8, 3, 1), affine_map(8, 5, 0)}, 8);
  if (id == "G2") return closure({affine_map(8, 1, 1), affine_map(8, 3, 0)}, 8);
  if (id == "H2") return closure({affine_map(8, 1, 2), affine_map(8, 3, 1)}, 8);
  if (id == "G3") return closure({affine_map(8, 1, 1), affine_map(8, 5, 0)}, 8);
  if (id == "H3") return closure({affine_map(8, 1, 2), affine_map(8, 5, 0)}, 8);
  if (id == "G4")
    return closure({from_cycles("(1,3,5,7)(2,4,6,8)", 8), from_cycles("(2,4)(6,8)", 8)}, 8);
  if (id == "H4")
    return closure({from_cycles("(1,3,5,7)(2,4,6,8)", 8), from_cycles("(2,6)(4,8)", 8)}, 8);
  if (id == "A9") return closure({affine_map(9, 1, 1), affine_map(9, 2, 0)}, 9);
  if (id == "M27") return closure({affine_map(9, 1, 1), affine_map(9, 4, 0)}, 9);
  throw std::invalid_argument("unknown named group: " + id);
}

std::vector<std::string> named_group_ids() {
  return {"G1", "H1", "G2", "H2", "G3", "H3", "G4", "H4", "A9", "M27"};
}

std::vector<std::vector<int>> point_orbits(const PermGroup& g) {
  std::vector<int> root(g.degree);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  const auto& gens = g.generators.empty() ? g.elements : g.generators;
  for (const auto& p : gens)
    for (int i = 0; i < g.degree; ++i) {
      int a = find(i), b = find(p.img[i]);
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < g.degree; ++i) groups[find(i)].push_back(i + 1);
  std::vector<std::vector<int>> out;
  for (auto& [r, pts] : groups) out.push_back(std::move(pts));
  return out;
}

bool is_transitive(const PermGroup& g) { return point_orbits(g).size() == 1; }

std::vector<Permutation> small_generating_set(const PermGroup& g) {
  std::vector<Permutation> gens;
  std::unordered_set<std::uint64_t> span{encode_permutation(Permutation::identity(g.degree))};
  for (const auto& e : g.elements) {
    if (span.count(encode_permutation(e))) continue;
    gens.push_back(e);
    // Re-close the span with the enlarged generating set.
    std::vector<Permutation> members{Permutation::identity(g.degree)};
    span = {encode_permutation(members[0])};
    for (std::size_t head = 0; head < members.size(); ++head) {
      Permutation cur = members[head];
      for (const auto& gen : gens) {
        Permutation f = compose(cur, gen);
        if (span.insert(encode_permutation(f)).second) members.push_back(std::move(f));
      }
    }
    if (members.size() == g.elements.size()) break;
  }
  return gens;
}

SetPartition orbital_scheme(const PermGroup& g) {
  if (g.degree > kMaxDegree) throw std::invalid_argument("degree too large");
  const std::size_t n = std::size_t{1} << g.degree;
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
  std::vector<std::uint16_t> colors(n);
  for (std::size_t x = 0; x < n; ++x)
    colors[x] = static_cast<std::uint16_t>(find(static_cast<std::uint32_t>(x)) & 0xffff);
  // Roots fit 16 bits only up to degree 16; make_partition renumbers anyway.
  return make_partition(g.degree, colors);
}

namespace {

// Iterates all of Sym(d) in lexicographic image order, keeping the
// permutations accepted by `test`.
template <typename Test>
std::vector<Permutation> scan_symmetric(int degree, Test&& test) {
  std::vector<int> h(degree);
  std::iota(h.begin(), h.end(), 0);
  std::vector<Permutation> found;
  do {
    if (test(h)) {
      Permutation p;
      p.img.assign(h.begin(), h.end());
      found.push_back(std::move(p));
    }
  } while (std::next_permutation(h.begin(), h.end()));
  return found;
}

} // namespace

PermGroup automorphism_group(const SetPartition& s) {
  if (s.degree > kMaxGroupDegree)
    throw std::invalid_argument("automorphism scan limited to degree " +
                                std::to_string(kMaxGroupDegree));
  const std::size_t n = s.num_subsets();
  std::vector<Subset> img(n);
  auto test = [&](const std::vector<int>& h) {
    for (int i = 0; i < s.degree; ++i)
      if (s.colors[std::size_t{1} << h[i]] != s.colors[std::size_t{1} << i]) return false;
    std::array<Subset, kMaxDegree> bit{};
    for (int i = 0; i < s.degree; ++i) bit[i] = Subset{1} << h[i];
    img[0] = 0;
    for (std::size_t x = 1; x < n; ++x) {
      img[x] = img[x & (x - 1)] | bit[std::countr_zero(static_cast<Subset>(x))];
      if (s.colors[img[x]] != s.colors[x]) return false;
    }
    return true;
  };
  std::vector<Permutation> elements = scan_symmetric(s.degree, test);
  PermGroup g = finish_group(s.degree, {}, std::move(elements));
  g.generators = small_generating_set(g);
  return g;
}

PermGroup weak_automorphism_group(const SetPartition& s) {
  if (s.degree > kMaxGroupDegree)
    throw std::invalid_argument("automorphism scan limited to degree " +
                                std::to_string(kMaxGroupDegree));
  const std::size_t n = s.num_subsets();
  std::vector<Subset> img(n);
  std::vector<std::uint16_t> map_to(s.rank);
  std::vector<std::uint32_t> stamp(s.rank, 0);
  std::uint32_t epoch = 0;
  auto test = [&](const std::vector<int>& h) {
    ++epoch;
    std::array<Subset, kMaxDegree> bit{};
    for (int i = 0; i < s.degree; ++i) bit[i] = Subset{1} << h[i];
    img[0] = 0;
    for (std::size_t x = 0; x < n; ++x) {
      if (x) img[x] = img[x & (x - 1)] | bit[std::countr_zero(static_cast<Subset>(x))];
      std::uint16_t c = s.colors[x], c2 = s.colors[img[x]];
      if (stamp[c] != epoch) {
        stamp[c] = epoch;
        map_to[c] = c2;
      } else if (map_to[c] != c2) {
        return false;
      }
    }
    return true;
  };
  std::vector<Permutation> elements = scan_symmetric(s.degree, test);
  PermGroup g = finish_group(s.degree, {}, std::move(elements));
  g.generators = small_generating_set(g);
  return g;
}

bool is_schurian(const SetPartition& s) {
  return orbital_scheme(automorphism_group(s)) == s;
}

namespace {

std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

int element_order(const Permutation& p) {
  Permutation q = p;
  int ord = 1;
  while (!q.is_identity()) {
    q = compose(q, p);
    ++ord;
  }
  return ord;
}

// Invariant factors of an abelian group from its element-order statistics.
std::vector<std::int64_t> abelian_invariant_factors(const std::vector<int>& orders) {
  const std::int64_t n = static_cast<std::int64_t>(orders.size());
  std::vector<std::int64_t> primes;
  for (std::int64_t p = 2, m = n; m > 1; ++p)
    if (m % p == 0) {
      primes.push_back(p);
      while (m % p == 0) m /= p;
    }
  // For each prime, the partition lambda with N(p^k) = p^{sum_i min(lambda_i,k)}.
  std::vector<std::vector<int>> primary(primes.size());
  for (std::size_t pi = 0; pi < primes.size(); ++pi) {
    std::int64_t p = primes[pi];
    std::vector<int> exp_counts; // e_k = log_p #{x : x^{p^k} = 1}
    exp_counts.push_back(0);
    for (std::int64_t pk = p;; pk *= p) {
      std::int64_t cnt = 0;
      for (int o : orders)
        if (pk % o == 0) ++cnt;
      int e = 0;
      while (cnt > 1) {
        cnt /= p;
        ++e;
      }
      exp_counts.push_back(e);
      if (static_cast<std::size_t>(exp_counts.back()) ==
          static_cast<std::size_t>(exp_counts[exp_counts.size() - 2]))
        break;
      if (pk > n) break;
    }
    std::vector<int> parts_ge; // number of lambda parts >= k
    for (std::size_t k = 1; k < exp_counts.size(); ++k) {
      int diff = exp_counts[k] - exp_counts[k - 1];
      if (diff == 0) break;
      parts_ge.push_back(diff);
    }
    // lambda_i = #{k : parts_ge[k] >= i+1}, i from 0.
    if (!parts_ge.empty()) {
      for (int i = 0; i < parts_ge[0]; ++i) {
        int lam = 0;
        for (int pg : parts_ge)
          if (pg >= i + 1) ++lam;
        primary[pi].push_back(lam);
      }
    }
  }
  std::size_t rows = 0;
  for (auto& v : primary) rows = std::max(rows, v.size());
  std::vector<std::int64_t> factors(rows, 1);
  for (std::size_t pi = 0; pi < primes.size(); ++pi)
    for (std::size_t i = 0; i < primary[pi].size(); ++i) {
      std::int64_t pk = 1;
      for (int e = 0; e < primary[pi][i]; ++e) pk *= primes[pi];
      factors[i] *= pk;
    }
  return factors; // descending divisibility chain
}

} // namespace

std::string describe_group(const PermGroup& g) {
  const std::int64_t n = g.order();
  if (n == 1) return "C1";

  const auto gens = g.generators.empty() ? small_generating_set(g) : g.generators;
  bool abelian = true;
  for (std::size_t i = 0; i < gens.size() && abelian; ++i)
    for (std::size_t j = i + 1; j < gens.size() && abelian; ++j)
      if (compose(gens[i], gens[j]) != compose(gens[j], gens[i])) abelian = false;

  if (abelian) {
    std::vector<int> orders;
    orders.reserve(g.elements.size());
    for (const auto& e : g.elements) orders.push_back(element_order(e));
    auto factors = abelian_invariant_factors(orders);
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) out += " x ";
      out += "C" + std::to_string(factors[i]);
    }
    return out;
  }

  if (n == factorial(g.degree)) return "Sym(" + std::to_string(g.degree) + ")";
  if (g.degree >= 3 && n == factorial(g.degree) / 2) {
    bool all_even = true;
    for (const auto& e : g.elements)
      if (!is_even(e)) {
        all_even = false;
        break;
      }
    if (all_even) return "Alt(" + std::to_string(g.degree) + ")";
  }

  auto involutions = [&] {
    int cnt = 0;
    for (const auto& e : g.elements)
      if (!e.is_identity() && compose(e, e).is_identity()) ++cnt;
    return cnt;
  };

  if (n == 8) return involutions() == 1 ? "Q8" : "D4";

  if (n == 16) {
    std::vector<Permutation> center;
    for (const auto& e : g.elements) {
      bool central = true;
      for (const auto& h : gens)
        if (compose(e, h) != compose(h, e)) {
          central = false;
          break;
        }
      if (central) center.push_back(e);
    }
    if (center.size() == 4) {
      int inv = 0;
      for (const auto& z : center)
        if (!z.is_identity() && compose(z, z).is_identity()) ++inv;
      if (inv == 1) return "Q8 o C4"; // cyclic centre of order 4
    }
    return "order 16";
  }

  if (n == 27) {
    int max_order = 0;
    for (const auto& e : g.elements) max_order = std::max(max_order, element_order(e));
    return max_order == 9 ? "C9 : C3" : "He3";
  }

  return "order " + std::to_string(n);
}

std::vector<PermGroup> all_subgroups(int degree) {
  if (degree < 1 || degree > 6)
    throw std::invalid_argument("subgroup scan limited to degree 6");
  // Index the whole symmetric group and precompute the multiplication table.
  std::vector<Permutation> perms;
  {
    std::vector<int> h(degree);
    std::iota(h.begin(), h.end(), 0);
    do {
      Permutation p;
      p.img.assign(h.begin(), h.end());
      perms.push_back(std::move(p));
    } while (std::next_permutation(h.begin(), h.end()));
  }
  const std::size_t order = perms.size();
  std::unordered_map<std::uint64_t, std::uint16_t> index;
  index.reserve(order * 2);
  for (std::size_t i = 0; i < order; ++i)
    index[encode_permutation(perms[i])] = static_cast<std::uint16_t>(i);
  std::vector<std::uint16_t> mult(order * order);
  for (std::size_t i = 0; i < order; ++i)
    for (std::size_t j = 0; j < order; ++j)
      mult[i * order + j] = index[encode_permutation(compose(perms[i], perms[j]))];
  const std::uint16_t id_idx = index[encode_permutation(Permutation::identity(degree))];

  // BFS closure over element indices, reusing stamped membership marks.
  std::vector<std::uint32_t> stamp(order, 0);
  std::uint32_t epoch = 0;
  std::vector<std::uint16_t> closure_buf;
  auto close_indices = [&](const std::vector<std::uint16_t>& gens) {
    ++epoch;
    closure_buf.clear();
    closure_buf.push_back(id_idx);
    stamp[id_idx] = epoch;
    for (std::size_t head = 0; head < closure_buf.size(); ++head) {
      std::uint16_t e = closure_buf[head];
      for (std::uint16_t gidx : gens) {
        std::uint16_t f = mult[static_cast<std::size_t>(e) * order + gidx];
        if (stamp[f] != epoch) {
          stamp[f] = epoch;
          closure_buf.push_back(f);
        }
      }
    }
    std::vector<std::uint16_t> sorted(closure_buf);
    std::sort(sorted.begin(), sorted.end());
    return sorted;
  };

  struct Node {
    std::vector<std::uint16_t> elements; // sorted indices
    std::vector<std::uint16_t> gens;
  };
  auto key_of = [](const std::vector<std::uint16_t>& v) {
    return std::string(reinterpret_cast<const char*>(v.data()), v.size() * 2);
  };
  std::deque<Node> queue;
  std::unordered_set<std::string> seen;
  std::vector<Node> found;
  Node triv{{id_idx}, {}};
  seen.insert(key_of(triv.elements));
  found.push_back(triv);
  queue.push_back(std::move(triv));
  std::vector<bool> member(order);
  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    std::fill(member.begin(), member.end(), false);
    for (std::uint16_t e : node.elements) member[e] = true;
    for (std::uint16_t gidx = 0; gidx < order; ++gidx) {
      if (member[gidx]) continue;
      std::vector<std::uint16_t> gens = node.gens;
      gens.push_back(gidx);
      auto elements = close_indices(gens);
      std::string key = key_of(elements);
      if (seen.insert(std::move(key)).second) {
        Node next{std::move(elements), std::move(gens)};
        found.push_back(next);
        queue.push_back(std::move(next));
      }
    }
  }

  std::sort(found.begin(), found.end(), [](const Node& a, const Node& b) {
    if (a.elements.size() != b.elements.size()) return a.elements.size() < b.elements.size();
    return a.elements < b.elements;
  });
  std::vector<PermGroup> out;
  out.reserve(found.size());
  for (const auto& node : found) {
    std::vector<Permutation> elements, gens;
    for (std::uint16_t e : node.elements) elements.push_back(perms[e]);
    for (std::uint16_t e : node.gens) gens.push_back(perms[e]);
    out.push_back(finish_group(degree, std::move(gens), std::move(elements)));
  }
  return out;
}

} // namespace sas
