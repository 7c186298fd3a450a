#include "sas/enumeration.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sas/coherence.hpp"

namespace sas {

namespace {

std::string encode_colors(const SetPartition& s) {
  std::string out;
  out.reserve(2 * s.colors.size());
  for (std::uint16_t c : s.colors) {
    out.push_back(static_cast<char>(c >> 8));
    out.push_back(static_cast<char>(c & 0xff));
  }
  return out;
}

// Runs fn(0), ..., fn(n-1) on the configured number of threads.  fn must
// write only to per-index state; the work-stealing order is irrelevant.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int threads = std::min<std::size_t>(thread_count(), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

std::string iso_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<Subset> sorted_image(const Permutation& p, const std::vector<Subset>& item) {
  std::vector<Subset> out;
  out.reserve(item.size());
  for (Subset a : item) out.push_back(apply_subset(p, a));
  std::sort(out.begin(), out.end());
  return out;
}

// Permutations of w that fix the given cell setwise.  Cells map onto cells
// under weak automorphisms, so checking one member suffices.
PermGroup cell_stabilizer(const PermGroup& w, const SetPartition& s, Subset member) {
  PermGroup stab;
  stab.degree = w.degree;
  for (const auto& p : w.elements)
    if (s.colors[apply_subset(p, member)] == s.colors[member]) stab.elements.push_back(p);
  stab.element_keys.reserve(stab.elements.size());
  for (const auto& p : stab.elements) stab.element_keys.push_back(encode_permutation(p));
  std::sort(stab.element_keys.begin(), stab.element_keys.end());
  return stab;
}

std::vector<std::vector<Subset>> design_like_impl(const SetPartition& s,
                                                  const std::vector<std::vector<Subset>>& cells,
                                                  std::size_t cell_index,
                                                  const PermGroup& weak_aut) {
  const std::vector<Subset>& target = cells.at(cell_index);
  const std::size_t m = target.size();
  if (m < 2) return {};
  const int member_size = set_size(target.front());

  // Flatten the members of every smaller-size cell into "slots" whose final
  // coverage counts must be constant within each cell.
  std::vector<Subset> slots;
  std::vector<std::pair<std::size_t, std::size_t>> slot_ranges;
  for (const auto& cell : cells) {
    if (set_size(cell.front()) >= member_size) continue;
    slot_ranges.emplace_back(slots.size(), slots.size() + cell.size());
    slots.insert(slots.end(), cell.begin(), cell.end());
  }

  std::vector<std::vector<std::uint16_t>> covers(m);
  for (std::size_t t = 0; t < m; ++t)
    for (std::size_t sl = 0; sl < slots.size(); ++sl)
      if ((slots[sl] & ~target[t]) == 0) covers[t].push_back(static_cast<std::uint16_t>(sl));

  // suffix[pos][sl] = how many of members pos..m-1 still cover slot sl.
  std::vector<std::vector<int>> suffix(m + 1, std::vector<int>(slots.size(), 0));
  for (std::size_t pos = m; pos-- > 0;) {
    suffix[pos] = suffix[pos + 1];
    for (std::uint16_t sl : covers[pos]) ++suffix[pos][sl];
  }

  std::vector<int> cov(slots.size(), 0);
  std::vector<Subset> chosen;
  std::vector<std::vector<Subset>> found;

  auto feasible = [&](std::size_t pos) {
    for (auto [lo, hi] : slot_ranges) {
      int max_cov = 0;
      for (std::size_t sl = lo; sl < hi; ++sl) max_cov = std::max(max_cov, cov[sl]);
      for (std::size_t sl = lo; sl < hi; ++sl)
        if (cov[sl] + suffix[pos][sl] < max_cov) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> walk = [&](std::size_t pos) {
    if (pos == m) {
      if (chosen.empty()) return;
      for (auto [lo, hi] : slot_ranges)
        for (std::size_t sl = lo + 1; sl < hi; ++sl)
          if (cov[sl] != cov[lo]) return;
      found.push_back(chosen);
      return;
    }
    if (!feasible(pos)) return;
    if (2 * (chosen.size() + 1) <= m) {
      chosen.push_back(target[pos]);
      for (std::uint16_t sl : covers[pos]) ++cov[sl];
      walk(pos + 1);
      for (std::uint16_t sl : covers[pos]) --cov[sl];
      chosen.pop_back();
    }
    walk(pos + 1);
  };
  walk(0);

  return orbit_reps(found, cell_stabilizer(weak_aut, s, target.front()));
}

} // namespace

std::vector<std::vector<Subset>> ordered_cells(const SetPartition& s) {
  std::vector<std::vector<Subset>> cells = cells_of(s);
  std::stable_sort(cells.begin(), cells.end(),
                   [](const std::vector<Subset>& a, const std::vector<Subset>& b) {
                     int sa = set_size(a.front()), sb = set_size(b.front());
                     if (sa != sb) return sa < sb;
                     return a.front() < b.front();
                   });
  return cells;
}

std::vector<std::size_t> split_candidate_cells(const SetPartition& s) {
  std::vector<std::vector<Subset>> cells = ordered_cells(s);
  std::vector<std::size_t> index_of_color(s.rank);
  for (std::size_t i = 0; i < cells.size(); ++i) index_of_color[s.colors[cells[i].front()]] = i;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    Subset partner_member = set_complement(cells[i].front(), s.degree);
    std::size_t partner = index_of_color[s.colors[partner_member]];
    if (i <= partner) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<Subset>> orbit_reps(const std::vector<std::vector<Subset>>& items,
                                            const PermGroup& g) {
  std::map<std::vector<Subset>, std::size_t> index;
  for (std::size_t i = 0; i < items.size(); ++i) index.emplace(items[i], i);

  std::vector<std::size_t> root(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) root[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };

  const auto& gens = g.generators.empty() ? g.elements : g.generators;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (const auto& p : gens) {
      auto it = index.find(sorted_image(p, items[i]));
      if (it == index.end()) continue; // image outside the list: not our orbit problem
      std::size_t a = find(i), b = find(it->second);
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }
  }

  std::map<std::size_t, std::vector<Subset>> best;
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::size_t r = find(i);
    auto it = best.find(r);
    if (it == best.end() || items[i] < it->second) best[r] = items[i];
  }
  std::vector<std::vector<Subset>> out;
  out.reserve(best.size());
  for (auto& [r, item] : best) out.push_back(std::move(item));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<Subset>> design_like_subsets(const SetPartition& s,
                                                     std::size_t cell_index) {
  return design_like_impl(s, ordered_cells(s), cell_index, weak_automorphism_group(s));
}

std::vector<SetPartition> refinement_children(const SetPartition& s) {
  const std::vector<std::vector<Subset>> cells = ordered_cells(s);
  const PermGroup weak_aut = weak_automorphism_group(s);

  std::vector<std::vector<Subset>> splits; // candidate alpha, any cell
  for (std::size_t i : split_candidate_cells(s))
    for (auto& alpha : design_like_impl(s, cells, i, weak_aut))
      splits.push_back(std::move(alpha));

  std::vector<SetPartition> stabilized(splits.size());
  for_each_index(splits.size(), [&](std::size_t i) {
    std::vector<std::uint64_t> keys(s.num_subsets());
    for (std::size_t x = 0; x < s.num_subsets(); ++x)
      keys[x] = static_cast<std::uint64_t>(s.colors[x]) << 1;
    for (Subset a : splits[i]) keys[a] |= 1;
    stabilized[i] = wl_stabilize(make_partition_from_keys(s.degree, keys),
                                 CoherenceMode::kTriangles);
  });

  std::map<std::string, SetPartition> by_form;
  for (auto& child : stabilized) by_form.emplace(canonical_form(child), std::move(child));
  std::vector<SetPartition> out;
  out.reserve(by_form.size());
  for (auto& [form, child] : by_form) out.push_back(std::move(child));
  return out;
}

std::string serialize_state(const EnumerationState& state) {
  nlohmann::json j;
  j["degree"] = state.degree;
  j["expanded"] = state.expanded;
  j["complete"] = state.complete;
  j["timestamp"] = state.timestamp;
  auto& frontier = j["frontier"] = nlohmann::json::array();
  for (const auto& [rank, form] : state.frontier) frontier.push_back(bytes_to_hex(form));
  auto& seen = j["seen"] = nlohmann::json::array();
  for (const auto& form : state.seen) seen.push_back(bytes_to_hex(form));
  auto& results = j["results"] = nlohmann::json::array();
  for (const auto& r : state.results)
    results.push_back({{"form", bytes_to_hex(encode_colors(r.scheme))},
                       {"schurian", r.schurian}});
  return j.dump(2) + "\n";
}

EnumerationState parse_state(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw std::invalid_argument("malformed JSON: not a checkpoint object");
  EnumerationState state;
  state.degree = j.at("degree").get<int>();
  state.expanded = j.at("expanded").get<std::uint64_t>();
  state.complete = j.at("complete").get<bool>();
  state.timestamp = j.value("timestamp", std::string{});
  for (const auto& hex : j.at("frontier")) {
    std::string form = hex_to_bytes(hex.get<std::string>());
    state.frontier.emplace(partition_from_form(form).rank, form);
  }
  for (const auto& hex : j.at("seen")) state.seen.insert(hex_to_bytes(hex.get<std::string>()));
  for (const auto& r : j.at("results")) {
    EnumeratedScheme e;
    e.scheme = partition_from_form(hex_to_bytes(r.at("form").get<std::string>()));
    e.schurian = r.at("schurian").get<bool>();
    state.results.push_back(std::move(e));
  }
  return state;
}

void save_state(const EnumerationState& state, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << serialize_state(state);
  }
  std::filesystem::rename(tmp, path);
}

EnumerationState load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state(buf.str());
}

EnumerationState enumerate_all(int degree, const EnumerationOptions& options) {
  if (degree < 1 || degree > 9)
    throw std::invalid_argument("enumeration supports degrees 1 through 9");
  if (degree >= 8 && !options.long_run)
    throw std::invalid_argument("degrees 8 and 9 take a long time; set the long-run option");

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  EnumerationState state;
  bool resumed = false;
  if (!options.checkpoint_path.empty() &&
      std::filesystem::exists(options.checkpoint_path)) {
    state = load_state(options.checkpoint_path);
    if (state.degree != degree)
      throw std::invalid_argument("checkpoint degree mismatch: file has degree " +
                                  std::to_string(state.degree));
    resumed = true;
  }

  // Results keyed by canonical form so checkpoints and the final list come
  // out sorted.
  std::map<std::string, EnumeratedScheme> results;
  if (resumed) {
    for (auto& r : state.results) results.emplace(encode_colors(r.scheme), std::move(r));
    state.results.clear();
  } else {
    SetPartition coarsest = trivial_scheme(degree);
    std::string form = canonical_form(coarsest);
    SetPartition canon = partition_from_form(form);
    state.degree = degree;
    state.frontier.emplace(canon.rank, form);
    state.seen.insert(form);
    results.emplace(form, EnumeratedScheme{canon, is_schurian(canon)});
  }

  auto materialize = [&] {
    state.results.clear();
    state.results.reserve(results.size());
    for (const auto& [form, r] : results) state.results.push_back(r);
  };
  auto checkpoint = [&] {
    if (options.checkpoint_path.empty()) return;
    state.timestamp = iso_timestamp();
    materialize();
    save_state(state, options.checkpoint_path);
  };

  double last_checkpoint = elapsed();
  while (!state.frontier.empty()) {
    if (options.max_seconds > 0 && elapsed() > options.max_seconds) {
      state.complete = false;
      checkpoint();
      materialize();
      return state;
    }

    auto it = state.frontier.begin();
    SetPartition scheme = partition_from_form(it->second);
    state.frontier.erase(it);

    for (SetPartition& child : refinement_children(scheme)) {
      std::string form = canonical_form(child);
      if (!state.seen.insert(form).second) continue;
      SetPartition canon = partition_from_form(form);
      state.frontier.emplace(canon.rank, form);
      results.emplace(form, EnumeratedScheme{canon, is_schurian(canon)});
    }
    ++state.expanded;

    if (!options.checkpoint_path.empty() &&
        elapsed() - last_checkpoint >= options.checkpoint_interval) {
      checkpoint();
      last_checkpoint = elapsed();
    }
  }

  state.complete = true;
  checkpoint();
  materialize();
  return state;
}

} // namespace sas
