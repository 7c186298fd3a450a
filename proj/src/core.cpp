#include "sas/core.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include <json.hpp>

namespace sas {

std::vector<int> set_elements(Subset a) {
  std::vector<int> out;
  while (a) {
    out.push_back(std::countr_zero(a) + 1);
    a &= a - 1;
  }
  return out;
}

Subset subset_from_elements(const std::vector<int>& elements, int degree) {
  Subset a = 0;
  for (int e : elements) {
    if (e < 1 || e > degree)
      throw std::invalid_argument("subset element " + std::to_string(e) +
                                  " out of range [1," + std::to_string(degree) + "]");
    Subset bit = Subset{1} << (e - 1);
    if (a & bit)
      throw std::invalid_argument("repeated subset element " + std::to_string(e));
    a |= bit;
  }
  return a;
}

std::string set_to_string(Subset a) {
  std::string out = "{";
  bool first = true;
  for (int e : set_elements(a)) {
    if (!first) out += ",";
    out += std::to_string(e);
    first = false;
  }
  return out + "}";
}

std::string TripleType::to_string() const {
  std::string out = "(";
  for (int i = 0; i < 7; ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out + ")";
}

TripleType triple_invariant(Subset a, Subset b, Subset c) {
  TripleType t;
  t.v = {static_cast<std::uint8_t>(std::popcount(a)),
         static_cast<std::uint8_t>(std::popcount(b)),
         static_cast<std::uint8_t>(std::popcount(c)),
         static_cast<std::uint8_t>(std::popcount(a & b)),
         static_cast<std::uint8_t>(std::popcount(a & c)),
         static_cast<std::uint8_t>(std::popcount(b & c)),
         static_cast<std::uint8_t>(std::popcount(a & b & c))};
  return t;
}

namespace {

void check_degree(int degree) {
  if (degree < 1 || degree > kMaxDegree)
    throw std::invalid_argument("degree " + std::to_string(degree) +
                                " out of range [1," + std::to_string(kMaxDegree) + "]");
}

constexpr std::uint16_t kUnset = 0xffff;

} // namespace

SetPartition make_partition(int degree, const std::vector<std::uint16_t>& colors) {
  check_degree(degree);
  const std::size_t n = std::size_t{1} << degree;
  if (colors.size() != n)
    throw std::invalid_argument("color array has wrong length");
  SetPartition s;
  s.degree = degree;
  s.colors.assign(n, 0);
  std::vector<std::uint16_t> relabel(n, kUnset);
  std::uint32_t next = 0;
  for (std::size_t x = 0; x < n; ++x) {
    std::uint16_t c = colors[x];
    if (relabel[c] == kUnset) relabel[c] = static_cast<std::uint16_t>(next++);
    s.colors[x] = relabel[c];
  }
  s.rank = next;
  return s;
}

SetPartition make_partition_from_keys(int degree, const std::vector<std::uint64_t>& keys) {
  check_degree(degree);
  const std::size_t n = std::size_t{1} << degree;
  if (keys.size() != n)
    throw std::invalid_argument("key array has wrong length");
  SetPartition s;
  s.degree = degree;
  s.colors.assign(n, 0);
  std::unordered_map<std::uint64_t, std::uint16_t> relabel;
  relabel.reserve(n * 2);
  std::uint32_t next = 0;
  for (std::size_t x = 0; x < n; ++x) {
    auto [it, inserted] = relabel.try_emplace(keys[x], static_cast<std::uint16_t>(next));
    if (inserted) ++next;
    s.colors[x] = it->second;
  }
  s.rank = next;
  return s;
}

SetPartition trivial_scheme(int degree) {
  check_degree(degree);
  const std::size_t n = std::size_t{1} << degree;
  std::vector<std::uint16_t> colors(n);
  for (std::size_t x = 0; x < n; ++x)
    colors[x] = static_cast<std::uint16_t>(std::popcount(static_cast<Subset>(x)));
  return make_partition(degree, colors);
}

SetPartition discrete_partition(int degree) {
  check_degree(degree);
  const std::size_t n = std::size_t{1} << degree;
  std::vector<std::uint16_t> colors(n);
  for (std::size_t x = 0; x < n; ++x) colors[x] = static_cast<std::uint16_t>(x);
  return make_partition(degree, colors);
}

bool is_size_homogeneous(const SetPartition& s) {
  std::vector<int> size_of_cell(s.rank, -1);
  for (std::size_t x = 0; x < s.num_subsets(); ++x) {
    int sz = std::popcount(static_cast<Subset>(x));
    int& slot = size_of_cell[s.colors[x]];
    if (slot == -1)
      slot = sz;
    else if (slot != sz)
      return false;
  }
  return true;
}

bool is_homogeneous(const SetPartition& s) {
  std::uint16_t c = s.colors[1]; // cell of {1}
  std::vector<std::uint32_t> count(s.rank, 0);
  for (std::size_t x = 0; x < s.num_subsets(); ++x) ++count[s.colors[x]];
  return count[c] == static_cast<std::uint32_t>(s.degree);
}

std::vector<std::vector<Subset>> cells_of(const SetPartition& s) {
  std::vector<std::vector<Subset>> cells(s.rank);
  for (std::size_t x = 0; x < s.num_subsets(); ++x)
    cells[s.colors[x]].push_back(static_cast<Subset>(x));
  return cells;
}

std::vector<int> cell_member_sizes(const SetPartition& s) {
  std::vector<int> sizes(s.rank, -1);
  for (std::size_t x = 0; x < s.num_subsets(); ++x)
    if (sizes[s.colors[x]] == -1)
      sizes[s.colors[x]] = std::popcount(static_cast<Subset>(x));
  return sizes;
}

bool refines(const SetPartition& s0, const SetPartition& s) {
  if (s0.degree != s.degree) return false;
  std::vector<std::uint16_t> image(s0.rank, kUnset);
  for (std::size_t x = 0; x < s.num_subsets(); ++x) {
    std::uint16_t& slot = image[s0.colors[x]];
    if (slot == kUnset)
      slot = s.colors[x];
    else if (slot != s.colors[x])
      return false;
  }
  return true;
}

Subset apply_relabelling(const std::vector<int>& g, Subset a) {
  Subset out = 0;
  while (a) {
    out |= Subset{1} << g[std::countr_zero(a)];
    a &= a - 1;
  }
  return out;
}

SetPartition relabel_partition(const SetPartition& s, const std::vector<int>& g) {
  if (static_cast<int>(g.size()) != s.degree)
    throw std::invalid_argument("relabelling degree mismatch");
  std::vector<std::uint16_t> colors(s.num_subsets());
  for (std::size_t x = 0; x < s.num_subsets(); ++x)
    colors[apply_relabelling(g, static_cast<Subset>(x))] = s.colors[x];
  return make_partition(s.degree, colors);
}

namespace {

// Scans y = 0..2^d-1 computing the normalized color array of the partition
// relabelled by h^{-1} (i.e. entry y is the renumbered color of h(y)),
// comparing against `best` on the fly.  Returns true and overwrites `best`
// when strictly smaller.
bool relabelled_form_improves(const SetPartition& s, const std::vector<int>& h,
                              std::vector<std::uint16_t>& best,
                              std::vector<std::uint16_t>& cand,
                              std::vector<Subset>& img,
                              std::vector<std::uint16_t>& relabel,
                              std::vector<std::uint32_t>& stamp,
                              std::uint32_t epoch) {
  const std::size_t n = s.num_subsets();
  std::array<Subset, kMaxDegree> bit{};
  for (int i = 0; i < s.degree; ++i) bit[i] = Subset{1} << h[i];
  std::uint16_t next = 0;
  bool better = false;
  img[0] = 0;
  for (std::size_t y = 0; y < n; ++y) {
    if (y) img[y] = img[y & (y - 1)] | bit[std::countr_zero(static_cast<Subset>(y))];
    std::uint16_t c = s.colors[img[y]];
    if (stamp[c] != epoch) {
      stamp[c] = epoch;
      relabel[c] = next++;
    }
    std::uint16_t nc = relabel[c];
    cand[y] = nc;
    if (!better) {
      if (nc < best[y]) better = true;
      else if (nc > best[y]) return false;
    }
  }
  if (better) best = cand;
  return better;
}

} // namespace

CanonicalResult canonicalize(const SetPartition& s) {
  if (s.degree > kMaxCanonDegree)
    throw std::invalid_argument("canonical form limited to degree " +
                                std::to_string(kMaxCanonDegree));
  const std::size_t n = s.num_subsets();
  std::vector<int> h(s.degree);
  std::iota(h.begin(), h.end(), 0);
  std::vector<std::uint16_t> best(n, kUnset), cand(n);
  std::vector<Subset> img(n);
  std::vector<std::uint16_t> relabel(s.rank);
  std::vector<std::uint32_t> stamp(s.rank, 0);
  std::uint32_t epoch = 0;
  std::vector<int> best_h(h);
  do {
    ++epoch;
    if (relabelled_form_improves(s, h, best, cand, img, relabel, stamp, epoch))
      best_h = h;
  } while (std::next_permutation(h.begin(), h.end()));

  CanonicalResult out;
  out.form.resize(2 * n);
  for (std::size_t y = 0; y < n; ++y) {
    out.form[2 * y] = static_cast<char>(best[y] >> 8);
    out.form[2 * y + 1] = static_cast<char>(best[y] & 0xff);
  }
  // best entry y is the color of best_h(y) in s; the witness g with
  // relabel_partition(s, g) == best is the inverse of best_h.
  out.relabelling.assign(s.degree, 0);
  for (int i = 0; i < s.degree; ++i) out.relabelling[best_h[i]] = i;
  return out;
}

std::string canonical_form(const SetPartition& s) { return canonicalize(s).form; }

std::string bytes_to_hex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char b : bytes) {
    out += digits[b >> 4];
    out += digits[b & 0xf];
  }
  return out;
}

std::string hex_to_bytes(const std::string& hex) {
  if (hex.size() % 2) throw std::invalid_argument("odd-length hex string");
  auto val = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("invalid hex digit");
  };
  std::string out(hex.size() / 2, '\0');
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<char>((val(hex[2 * i]) << 4) | val(hex[2 * i + 1]));
  return out;
}

SetPartition partition_from_form(const std::string& form) {
  const std::size_t n = form.size() / 2;
  if (n == 0 || form.size() % 2 || (n & (n - 1)))
    throw std::invalid_argument("byte form length is not twice a power of two");
  int degree = std::countr_zero(n);
  std::vector<std::uint16_t> colors(n);
  for (std::size_t y = 0; y < n; ++y)
    colors[y] = static_cast<std::uint16_t>((static_cast<unsigned char>(form[2 * y]) << 8) |
                                           static_cast<unsigned char>(form[2 * y + 1]));
  return make_partition(degree, colors);
}

SetPartition parse_partition(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("degree") || !j.contains("cells"))
    throw std::invalid_argument("expected object with \"degree\" and \"cells\"");
  if (!j["degree"].is_number_integer())
    throw std::invalid_argument("\"degree\" must be an integer");
  int degree = j["degree"].get<int>();
  check_degree(degree);
  if (!j["cells"].is_array())
    throw std::invalid_argument("\"cells\" must be an array");

  const std::size_t n = std::size_t{1} << degree;
  std::vector<std::uint16_t> colors(n, kUnset);
  std::uint16_t cell_id = 0;
  for (const auto& cell : j["cells"]) {
    if (!cell.is_array() || cell.empty())
      throw std::invalid_argument("each cell must be a nonempty array of subsets");
    for (const auto& sub : cell) {
      if (!sub.is_array())
        throw std::invalid_argument("each subset must be an array of elements");
      std::vector<int> elements;
      for (const auto& e : sub) {
        if (!e.is_number_integer())
          throw std::invalid_argument("subset elements must be integers");
        elements.push_back(e.get<int>());
      }
      Subset a = subset_from_elements(elements, degree);
      if (colors[a] != kUnset)
        throw std::invalid_argument("not a partition: subset " + set_to_string(a) +
                                    " appears twice");
      colors[a] = cell_id;
    }
    ++cell_id;
    if (cell_id == 0) throw std::invalid_argument("too many cells");
  }
  for (std::size_t x = 0; x < n; ++x)
    if (colors[x] == kUnset)
      throw std::invalid_argument("not a partition: subset " +
                                  set_to_string(static_cast<Subset>(x)) + " is missing");
  return make_partition(degree, colors);
}

std::string serialize_partition(const SetPartition& s) {
  auto cells = cells_of(s);
  // Order cells by (member size, smallest member bitmask); members of each
  // cell already ascend by bitmask.
  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    auto key = [&](std::size_t idx) {
      return std::pair<int, Subset>(std::popcount(cells[idx].front()), cells[idx].front());
    };
    return key(i) < key(j);
  });
  nlohmann::json j;
  j["degree"] = s.degree;
  j["cells"] = nlohmann::json::array();
  for (std::size_t idx : order) {
    nlohmann::json cell = nlohmann::json::array();
    for (Subset a : cells[idx]) cell.push_back(set_elements(a));
    j["cells"].push_back(std::move(cell));
  }
  return j.dump(1);
}

SetPartition load_partition_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_partition(buf.str());
}

void save_partition_file(const SetPartition& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
  out << serialize_partition(s) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {
int g_threads = 1;
}

void set_thread_count(int n) { g_threads = n < 1 ? 1 : n; }
int thread_count() { return g_threads; }

void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  int workers = g_threads;
  if (workers <= 1 || n < 2048) {
    fn(0, n);
    return;
  }
  if (static_cast<std::size_t>(workers) > n) workers = static_cast<int>(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::size_t begin = w * chunk;
    std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

} // namespace sas
