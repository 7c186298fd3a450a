// Command-line surface for the scheme library: coherence checking, WL
// stabilization, automorphisms, enumeration, the nonschurian catalog with
// published-table diffing, sandwich reports, vector schemes, and weak
// isomorphism.  Exit codes: 0 success, 1 semantic failure (incoherent,
// nonschurian, table diff, not isomorphic, incomplete run), 2 input or
// usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sas/coherence.hpp"
#include "sas/constructions.hpp"
#include "sas/core.hpp"
#include "sas/enumeration.hpp"
#include "sas/groups.hpp"
#include "sas/sandwich.hpp"
#include "sas/vas.hpp"

namespace {

using namespace sas;

std::string g_format = "md";  // md | csv | json
std::string g_out;

// ---------------------------------------------------------------------------
// Tabular output in the three supported formats.

struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;
};

void print_table(const Table& t, std::ostream& os) {
  if (g_format == "csv") {
    const auto emit = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ",";
        os << cells[i];
      }
      os << "\n";
    };
    emit(t.headers);
    for (const auto& row : t.rows) emit(row);
    return;
  }
  if (g_format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& row : t.rows) {
      nlohmann::json obj;
      for (std::size_t i = 0; i < t.headers.size(); ++i) obj[t.headers[i]] = row[i];
      j.push_back(std::move(obj));
    }
    os << j.dump(2) << "\n";
    return;
  }
  std::vector<std::size_t> width(t.headers.size());
  for (std::size_t i = 0; i < t.headers.size(); ++i) width[i] = t.headers[i].size();
  for (const auto& row : t.rows)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  const auto emit = [&](const std::vector<std::string>& cells) {
    os << "|";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      os << " " << cells[i] << std::string(width[i] - cells[i].size(), ' ') << " |";
    }
    os << "\n";
  };
  emit(t.headers);
  os << "|";
  for (const std::size_t w : width) os << std::string(w + 2, '-') << "|";
  os << "\n";
  for (const auto& row : t.rows) emit(row);
}

std::string yn(bool b) { return b ? "Y" : "N"; }

std::vector<std::string> row_cells(const std::string& id, const TableRow& r) {
  return {id,
          std::to_string(r.rank),
          std::to_string(r.aut_order),
          r.aut_name,
          yn(r.homogeneous),
          yn(r.vertex_transitive),
          yn(r.fully_coherent),
          yn(r.schurian)};
}

const std::vector<std::string> kRowHeaders = {"id",          "rank",       "aut_order",
                                              "aut",         "homogeneous", "transitive",
                                              "fully_coherent", "schurian"};

// ---------------------------------------------------------------------------
// Group specifications: catalog names plus sym:N, alt:N, cyc:N, trivial:N.

PermGroup parse_group_spec(const std::string& spec) {
  const auto ids = named_group_ids();
  if (std::find(ids.begin(), ids.end(), spec) != ids.end()) return named_group(spec);
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string family = spec.substr(0, colon);
    const int degree = std::stoi(spec.substr(colon + 1));
    if (family == "sym") return symmetric_group(degree);
    if (family == "alt") return alternating_group(degree);
    if (family == "cyc") return cyclic_group(degree);
    if (family == "trivial") return trivial_group(degree);
  }
  throw std::invalid_argument("unknown group spec \"" + spec +
                              "\" (catalog id, sym:N, alt:N, cyc:N or trivial:N)");
}

// ---------------------------------------------------------------------------
// Subcommand implementations.  Each returns the process exit code.

int cmd_check(const std::string& path, bool all_types) {
  const SetPartition s = load_partition_file(path);
  const CoherenceMode mode = all_types ? CoherenceMode::kAllTypes : CoherenceMode::kTriangles;
  const SetPartition sized = refine_by_size(s);
  if (sized.rank != s.rank) {
    std::cout << "incoherent: not size-homogeneous (cardinality refinement has rank "
              << sized.rank << " > " << s.rank << ")\n";
    return 1;
  }
  const CoherenceReport report = structure_constants(s, mode);
  if (report.coherent) {
    std::cout << "coherent: degree " << s.degree << ", rank " << s.rank << ", "
              << (all_types ? "all triple types" : "triangle types") << "\n";
    return 0;
  }
  std::cout << "incoherent: " << report.witness->to_string() << "\n";
  return 1;
}

int cmd_stabilize(const std::string& path, bool all_types) {
  const SetPartition s = load_partition_file(path);
  const CoherenceMode mode = all_types ? CoherenceMode::kAllTypes : CoherenceMode::kTriangles;
  const SetPartition stable = wl_stabilize(s, mode);
  std::cout << "rank " << s.rank << " -> " << stable.rank << "\n";
  if (!g_out.empty()) {
    save_partition_file(stable, g_out);
    if (!load_partition_file(g_out).rank) throw std::logic_error("emitted file failed to re-parse");
    std::cout << "wrote " << g_out << "\n";
  } else {
    std::cout << serialize_partition(stable) << "\n";
  }
  return 0;
}

int cmd_aut(const std::string& path) {
  const SetPartition s = load_partition_file(path);
  const PermGroup strong = automorphism_group(s);
  const PermGroup weak = weak_automorphism_group(s);
  std::cout << "automorphism group: order " << strong.order() << " (" << describe_group(strong)
            << ")\n";
  std::cout << "generators:";
  if (strong.generators.empty()) std::cout << " ()";
  for (const auto& g : strong.generators) std::cout << " " << to_cycles(g);
  std::cout << "\nweak automorphism group: order " << weak.order() << "\n";
  return 0;
}

int cmd_schurian(const std::string& path) {
  const SetPartition s = load_partition_file(path);
  const PermGroup aut = automorphism_group(s);
  const bool ok = orbital_scheme(aut) == s;
  std::cout << (ok ? "schurian" : "nonschurian") << ": rank " << s.rank
            << ", automorphism group order " << aut.order() << ", orbit scheme rank "
            << orbital_scheme(aut).rank << "\n";
  return ok ? 0 : 1;
}

int cmd_enumerate(int degree, bool long_run, const std::string& checkpoint, int interval,
                  long max_seconds, const std::string& summary_path) {
  EnumerationOptions options;
  options.long_run = long_run;
  options.checkpoint_path = checkpoint;
  if (interval > 0) options.checkpoint_interval = interval;
  if (max_seconds > 0) options.max_seconds = max_seconds;
  const EnumerationState state = enumerate_all(degree, options);
  Table t;
  t.headers = {"canonical_id", "rank",       "aut_order",      "schurian",
               "homogeneous",  "transitive", "fully_coherent", "file"};
  std::size_t index = 0;
  std::vector<std::string> csv_lines;
  for (const auto& e : state.results) {
    ++index;
    const TableRow r = table_row(e.scheme);
    std::string file;
    if (!g_out.empty()) {
      std::filesystem::create_directories(g_out);
      std::ostringstream name;
      name << "scheme_d" << degree << "_" << std::setw(3) << std::setfill('0') << index
           << ".json";
      file = (std::filesystem::path(g_out) / name.str()).string();
      save_partition_file(e.scheme, file);
      const SetPartition back = load_partition_file(file);
      if (!(back == e.scheme) || !is_coherent(back))
        throw std::logic_error("emitted scheme file failed re-verification: " + file);
    }
    t.rows.push_back({bytes_to_hex(canonical_form(e.scheme)), std::to_string(r.rank),
                      std::to_string(r.aut_order), yn(r.schurian), yn(r.homogeneous),
                      yn(r.vertex_transitive), yn(r.fully_coherent), file});
  }
  if (!summary_path.empty()) {
    std::ofstream out(summary_path);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + summary_path);
    const std::string saved = g_format;
    g_format = "csv";
    print_table(t, out);
    g_format = saved;
    std::cout << "wrote " << summary_path << "\n";
  }
  print_table(t, std::cout);
  std::cout << state.results.size() << " schemes, " << state.expanded << " nodes expanded"
            << (state.complete ? "" : " [INCOMPLETE: timed out, checkpoint saved]") << "\n";
  return state.complete ? 0 : 1;
}

int cmd_catalog(const std::string& id) {
  std::vector<std::string> ids = id.empty() ? catalog_ids() : std::vector<std::string>{id};
  Table t;
  t.headers = kRowHeaders;
  for (const auto& entry_id : ids) {
    const CatalogEntry entry = catalog(entry_id);
    t.rows.push_back(row_cells(entry_id, table_row(entry.scheme)));
    if (!g_out.empty()) {
      std::filesystem::create_directories(g_out);
      const std::string file =
          (std::filesystem::path(g_out) / (entry_id + ".json")).string();
      save_partition_file(entry.scheme, file);
      const SetPartition back = load_partition_file(file);
      if (!(back == entry.scheme) || !is_coherent(back))
        throw std::logic_error("emitted scheme file failed re-verification: " + file);
      std::cout << "wrote " << file << "\n";
    }
  }
  print_table(t, std::cout);
  return 0;
}

int cmd_table(const std::string& which) {
  std::vector<std::string> ids;
  if (which == "table1")
    ids = {"S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8"};
  else if (which == "table2")
    ids = {"N9a", "N9b"};
  else
    throw std::invalid_argument("expected table1 or table2");
  Table t;
  t.headers = kRowHeaders;
  std::vector<std::string> diffs;
  for (const auto& id : ids) {
    const CatalogEntry entry = catalog(id);
    const TableRow computed = table_row(entry.scheme);
    t.rows.push_back(row_cells(id, computed));
    const TableRow& expected = entry.expected;
    const auto diff = [&](const std::string& column, const std::string& got,
                          const std::string& want) {
      if (got != want)
        diffs.push_back(id + " " + column + ": computed " + got + ", published " + want);
    };
    diff("rank", std::to_string(computed.rank), std::to_string(expected.rank));
    diff("aut_order", std::to_string(computed.aut_order), std::to_string(expected.aut_order));
    diff("aut", computed.aut_name, expected.aut_name);
    diff("homogeneous", yn(computed.homogeneous), yn(expected.homogeneous));
    diff("transitive", yn(computed.vertex_transitive), yn(expected.vertex_transitive));
    diff("fully_coherent", yn(computed.fully_coherent), yn(expected.fully_coherent));
    diff("schurian", yn(computed.schurian), yn(expected.schurian));
  }
  print_table(t, std::cout);
  if (!diffs.empty()) {
    for (const auto& d : diffs) std::cout << "DIFF " << d << "\n";
    return 1;
  }
  std::cout << "all rows match the published values\n";
  return 0;
}

int cmd_sandwich(const std::string& path, int m, bool materialize_flag, bool verify_wl,
                 bool full_report) {
  const SetPartition s = load_partition_file(path);
  const Configuration config = hamming_sandwich(s, m);
  nlohmann::json j;
  j["degree"] = s.degree;
  j["m"] = m;
  j["vertices"] = config.vertex_count;
  j["rank"] = config.rank;
  bool wl_fixed = true;
  if (materialize_flag || verify_wl) {
    Configuration dense = hamming_sandwich(s, m, true);
    if (verify_wl) {
      const Configuration stable = cc_wl_stabilize(dense);
      wl_fixed = stable.rank == dense.rank;
      j["wl_fixed"] = wl_fixed;
      j["wl_rank"] = stable.rank;
    }
  }
  if (full_report) {
    const SandwichReport report = sandwich_report(s, m);
    j["primitive"] = report.primitive;
    j["aut_order"] = report.aut_order.str();
    j["schurian"] = report.schurian;
    j["aut_primitive"] = report.aut_primitive;
    j["connectivity_checked"] = report.connectivity_checked;
  }
  const std::string text = j.dump(2);
  std::cout << text << "\n";
  if (!g_out.empty()) {
    std::ofstream out(g_out);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + g_out);
    out << text << "\n";
    std::cout << "wrote " << g_out << "\n";
  }
  return wl_fixed ? 0 : 1;
}

int cmd_vas(int k, int d, const std::string& check_path, bool enumerate_flag,
            const std::string& orbital_spec) {
  if (!check_path.empty()) {
    const VectorPartition s = vas_load_file(check_path);
    const VasReport report = vas_check(s);
    if (report.coherent) {
      std::cout << "coherent: k " << s.k << ", d " << s.d << ", rank " << s.rank << "\n";
      return 0;
    }
    std::cout << "incoherent: " << report.witness->to_string() << "\n";
    return 1;
  }
  if (enumerate_flag) {
    const auto found = vas_enumerate(k, d);
    Table t;
    t.headers = {"canonical_id", "rank", "homogeneous", "schurian", "aut_order", "file"};
    std::size_t index = 0;
    for (const auto& e : found) {
      ++index;
      std::string file;
      if (!g_out.empty()) {
        std::filesystem::create_directories(g_out);
        std::ostringstream name;
        name << "vas_k" << k << "_d" << d << "_" << std::setw(3) << std::setfill('0') << index
             << ".json";
        file = (std::filesystem::path(g_out) / name.str()).string();
        vas_save_file(e.scheme, file);
        const VectorPartition back = vas_load_file(file);
        if (!(back == e.scheme) || !vas_check(back).coherent)
          throw std::logic_error("emitted file failed re-verification: " + file);
      }
      t.rows.push_back({bytes_to_hex(vas_canonical_form(e.scheme)), std::to_string(e.scheme.rank),
                        yn(e.homogeneous), yn(e.schurian),
                        std::to_string(vas_automorphism_group(e.scheme).order()), file});
    }
    print_table(t, std::cout);
    std::cout << found.size() << " vector schemes\n";
    return 0;
  }
  if (!orbital_spec.empty()) {
    const PermGroup g = parse_group_spec(orbital_spec);
    const VectorPartition s = vas_orbital(g, k);
    std::cout << "orbit scheme of " << orbital_spec << " with k " << k << ": d " << s.d
              << ", rank " << s.rank << ", homogeneous " << yn(vas_is_homogeneous(s))
              << ", schurian " << yn(vas_is_schurian(s)) << "\n";
    if (!g_out.empty()) {
      vas_save_file(s, g_out);
      if (!(vas_load_file(g_out) == s)) throw std::logic_error("emitted file failed to re-parse");
      std::cout << "wrote " << g_out << "\n";
    }
    return 0;
  }
  throw std::invalid_argument("one of --check, --enumerate, --orbital is required");
}

int cmd_iso(const std::string& path_a, const std::string& path_b) {
  const SetPartition a = load_partition_file(path_a);
  const SetPartition b = load_partition_file(path_b);
  if (a.degree != b.degree)
    throw std::invalid_argument("degree mismatch: " + std::to_string(a.degree) + " vs " +
                                std::to_string(b.degree));
  if (a.rank != b.rank) {
    std::cout << "not weakly isomorphic: ranks " << a.rank << " vs " << b.rank << "\n";
    return 1;
  }
  const CanonicalResult ca = canonicalize(a), cb = canonicalize(b);
  if (ca.form != cb.form) {
    std::cout << "not weakly isomorphic: canonical forms differ\n";
    return 1;
  }
  // a relabelled by ga equals b relabelled by gb; the witness is gb^-1 . ga.
  std::vector<int> inverse_b(b.degree), mapping(a.degree);
  for (int i = 0; i < b.degree; ++i) inverse_b[cb.relabelling[i]] = i;
  for (int i = 0; i < a.degree; ++i) mapping[i] = inverse_b[ca.relabelling[i]];
  if (!(relabel_partition(a, mapping) == b))
    throw std::logic_error("canonical forms matched but the composed mapping failed");
  Permutation p;
  p.img.assign(mapping.begin(), mapping.end());
  std::cout << "weakly isomorphic via point mapping " << to_cycles(p) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact engine for set and vector association schemes"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 1;
  app.add_option("--threads", threads, "worker threads for bulk scans")->check(CLI::Range(1, 256));
  app.add_option("--format", g_format, "table output format")
      ->check(CLI::IsMember({"md", "csv", "json"}));
  app.add_option("--out", g_out, "output file or directory");

  // check
  auto* check = app.add_subcommand("check", "verify coherence of a scheme file");
  std::string check_file;
  bool check_all = false;
  check->add_option("file", check_file, "scheme JSON file")->required();
  check->add_flag("--all-types", check_all, "require full coherence over all triple types");

  // stabilize
  auto* stabilize = app.add_subcommand("stabilize", "coarsest coherent refinement");
  std::string stabilize_file;
  bool stabilize_all = false;
  stabilize->add_option("file", stabilize_file, "scheme JSON file")->required();
  stabilize->add_flag("--all-types", stabilize_all, "refine over all triple types");

  // aut
  auto* aut = app.add_subcommand("aut", "automorphism groups of a scheme file");
  std::string aut_file;
  aut->add_option("file", aut_file, "scheme JSON file")->required();

  // schurian
  auto* schurian = app.add_subcommand("schurian", "compare against the orbit scheme of Aut");
  std::string schurian_file;
  schurian->add_option("file", schurian_file, "scheme JSON file")->required();

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "all schemes of one degree");
  int enum_degree = 0;
  bool enum_long = false;
  std::string enum_checkpoint, enum_summary;
  int enum_interval = 0;
  long enum_max_seconds = 0;
  enumerate->add_option("--degree", enum_degree, "ground-set size")->required();
  enumerate->add_flag("--long-run", enum_long, "allow multi-hour degrees (8 and 9)");
  enumerate->add_option("--checkpoint", enum_checkpoint, "resumable state file");
  enumerate->add_option("--checkpoint-interval", enum_interval, "seconds between saves");
  enumerate->add_option("--max-seconds", enum_max_seconds, "stop and checkpoint after this long");
  enumerate->add_option("--summary", enum_summary, "write the result table as CSV");

  // catalog
  auto* catalog_cmd = app.add_subcommand("catalog", "build the nonschurian examples");
  std::string catalog_id;
  catalog_cmd->add_option("--id", catalog_id, "one of S1..S8, N9a, N9b (default: all)");

  // table
  auto* table_cmd = app.add_subcommand("table", "reproduce a published table and diff it");
  std::string table_which;
  table_cmd->add_option("which", table_which, "table1 or table2")->required();

  // sandwich
  auto* sandwich = app.add_subcommand("sandwich", "vertex coloring of [m]^S");
  std::string sandwich_file;
  int sandwich_m = 0;
  bool sandwich_materialize = false, sandwich_verify = false, sandwich_report_flag = false;
  sandwich->add_option("--scheme", sandwich_file, "scheme JSON file")->required();
  sandwich->add_option("--m", sandwich_m, "alphabet size (>= 2)")->required();
  sandwich->add_flag("--materialize", sandwich_materialize, "force the dense color table");
  sandwich->add_flag("--verify-wl", sandwich_verify, "check the coloring is WL-stable");
  sandwich->add_flag("--report", sandwich_report_flag,
                     "primitivity, automorphism order, schurian flags");

  // vas
  auto* vas = app.add_subcommand("vas", "vector schemes on {0..k}^d");
  int vas_k = 1, vas_d = 1;
  std::string vas_check_file, vas_orbital_spec;
  bool vas_enum = false;
  vas->add_option("--k", vas_k, "maximum profile entry");
  vas->add_option("--d", vas_d, "profile length");
  vas->add_option("--check", vas_check_file, "verify a vector-scheme JSON file");
  vas->add_flag("--enumerate", vas_enum, "all vector schemes for (k, d)");
  vas->add_option("--orbital", vas_orbital_spec, "orbit scheme of a group (e.g. sym:3, alt:3)");

  // iso
  auto* iso = app.add_subcommand("iso", "weak isomorphism of two scheme files");
  std::string iso_a, iso_b;
  iso->add_option("fileA", iso_a, "first scheme")->required();
  iso->add_option("fileB", iso_b, "second scheme")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    set_thread_count(threads);
    if (*check) return cmd_check(check_file, check_all);
    if (*stabilize) return cmd_stabilize(stabilize_file, stabilize_all);
    if (*aut) return cmd_aut(aut_file);
    if (*schurian) return cmd_schurian(schurian_file);
    if (*enumerate)
      return cmd_enumerate(enum_degree, enum_long, enum_checkpoint, enum_interval,
                           enum_max_seconds, enum_summary);
    if (*catalog_cmd) return cmd_catalog(catalog_id);
    if (*table_cmd) return cmd_table(table_which);
    if (*sandwich)
      return cmd_sandwich(sandwich_file, sandwich_m, sandwich_materialize, sandwich_verify,
                          sandwich_report_flag);
    if (*vas) return cmd_vas(vas_k, vas_d, vas_check_file, vas_enum, vas_orbital_spec);
    if (*iso) return cmd_iso(iso_a, iso_b);
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
