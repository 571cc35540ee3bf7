#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nucache/converse.hpp"
#include "nucache/optimizer.hpp"
#include "nucache/scheme.hpp"
#include "nucache/serialization.hpp"

namespace {

using namespace nucache;

constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint32_t default_prime() {
  if (const char* env = std::getenv("NUCACHE_FIELD_PRIME")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (!end || *end != '\0' || v < 3 || v > 0x7fffffffUL ||
        !is_prime(static_cast<std::uint32_t>(v)))
      throw UsageError("NUCACHE_FIELD_PRIME must be an odd prime below 2^31");
    return static_cast<std::uint32_t>(v);
  }
  return kDefaultPrime;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    out.push_back(std::stoi(item, &pos));
    if (pos != item.size()) throw UsageError("bad integer list: " + text);
  }
  if (out.empty()) throw UsageError("empty list: " + text);
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(Rational::parse(item));
  if (out.empty()) throw UsageError("empty list: " + text);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::string digest_hex(const std::vector<Symbol>& data) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a over the symbol stream
  for (Symbol s : data) {
    for (int b = 0; b < 4; ++b) {
      h ^= (s >> (8 * b)) & 0xff;
      h *= 1099511628211ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string frac_and_float(const Rational& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", r.to_double());
  return r.str() + "," + buf;
}

// Sorts the values descending; order[i] is the 1-based original file whose
// payload becomes internal file i+1.
template <typename T>
std::vector<int> popularity_order(std::vector<T>& values) {
  std::vector<int> order(values.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i) + 1;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values[static_cast<size_t>(b - 1)] < values[static_cast<size_t>(a - 1)];
  });
  std::vector<T> sorted;
  sorted.reserve(values.size());
  for (int f : order) sorted.push_back(values[static_cast<size_t>(f - 1)]);
  values = std::move(sorted);
  return order;
}

struct PlaceArgs {
  int users = 0;
  int files = 2;
  std::string r_list;
  std::string t_list;
  int subfile_len = 16;
  std::uint64_t seed = 1;
  std::uint32_t prime = kDefaultPrime;
  std::uint32_t matrix_seed = 0;
  bool no_embed_files = false;
  std::string out = "-";
};

int run_place(const PlaceArgs& args) {
  if (args.r_list.empty() == args.t_list.empty())
    throw UsageError("place: exactly one of --r and --t is required");

  if (!args.t_list.empty()) {
    std::vector<Rational> t = parse_rational_list(args.t_list);
    if (t.size() != 2 || args.files != 2)
      throw UsageError("place: --t takes two values and requires --files 2");
    std::vector<int> order = popularity_order(t);
    if (order != std::vector<int>{1, 2})
      std::cerr << "note: allocations were not non-increasing; files relabeled as "
                << order[0] << "," << order[1] << "\n";
    SharePlan plan = share_plan(args.users, t[0], t[1]);
    long long F = minimal_file_length(plan, args.users, args.subfile_len);
    PlacementConfig gen;
    gen.K = args.users;
    gen.N = 2;
    gen.r = {0, 0};
    gen.subfile_len = static_cast<int>(F);
    gen.prime = args.prime;
    auto files_orig = random_files(gen, args.seed);
    std::vector<std::vector<Symbol>> files = {files_orig[static_cast<size_t>(order[0] - 1)],
                                              files_orig[static_cast<size_t>(order[1] - 1)]};
    JointPlacement placement = joint_place(args.users, t[0], t[1], files, args.subfile_len,
                                           args.prime, args.matrix_seed);
    write_file(args.out,
               joint_placement_to_json(placement, args.no_embed_files ? nullptr : &files));
    std::cerr << "joint placement: K=" << args.users << " t=(" << t[0].str() << ","
              << t[1].str() << ") segments=" << placement.segments.size() << " F=" << F
              << " M=" << ((t[0] + t[1]) / Rational(args.users)).str() << "\n";
    return 0;
  }

  std::vector<int> r = parse_int_list(args.r_list);
  if (static_cast<int>(r.size()) != args.files)
    throw UsageError("place: --r needs one value per file");
  std::vector<int> order = popularity_order(r);
  bool relabeled = false;
  for (size_t i = 0; i < order.size(); ++i) relabeled |= order[i] != static_cast<int>(i) + 1;
  if (relabeled) {
    std::cerr << "note: --r was not non-increasing; files relabeled as ";
    for (size_t i = 0; i < order.size(); ++i) std::cerr << (i ? "," : "") << order[i];
    std::cerr << "\n";
  }

  PlacementConfig cfg;
  cfg.K = args.users;
  cfg.N = args.files;
  cfg.r = r;
  cfg.subfile_len = args.subfile_len;
  cfg.prime = args.prime;
  cfg.matrix_seed = args.matrix_seed;
  cfg.validate();

  auto files_orig = random_files(cfg, args.seed);
  std::vector<std::vector<Symbol>> files;
  files.reserve(files_orig.size());
  for (int f : order) files.push_back(files_orig[static_cast<size_t>(f - 1)]);

  CacheMap map = place(cfg, files);
  write_file(args.out, cache_map_to_json(map, args.no_embed_files ? nullptr : &files));
  std::cerr << "placement: K=" << cfg.K << " N=" << cfg.N << " S=" << cfg.subpacketization()
            << " F=" << cfg.file_len() << " M=" << cfg.total_cache().str() << "\n";
  return 0;
}

int run_deliver(const std::string& map_path, const std::string& demand_list,
                const std::string& out) {
  std::string text = read_file(map_path);
  std::vector<int> demand = parse_int_list(demand_list);
  std::string kind = json_kind(text);
  if (kind == "placement") {
    std::vector<std::vector<Symbol>> files;
    CacheMap map = cache_map_from_json(text, &files);
    if (files.empty())
      throw UsageError("deliver: the placement file does not embed the file payloads");
    if (map.cfg.N != 2)
      throw UsageError("deliver: coded delivery is implemented for two files");
    DeliveryMessage msg = encode_delivery(demand, files, map.cfg);
    write_file(out, delivery_message_to_json(msg));
    std::cerr << "message: rows=" << msg.payload.rows << " columns=" << msg.manifest.size()
              << " rate=" << Rational(msg.payload.rows, map.cfg.subpacketization()).str()
              << "\n";
    return 0;
  }
  if (kind == "joint-placement") {
    std::vector<std::vector<Symbol>> files;
    JointPlacement placement = joint_placement_from_json(text, &files);
    if (files.empty())
      throw UsageError("deliver: the placement file does not embed the file payloads");
    auto messages = joint_deliver(demand, placement, files);
    write_file(out, joint_messages_to_json(messages));
    std::cerr << "joint message: segments=" << messages.size()
              << " rate=" << realized_joint_rate(messages, placement.file_len).str() << "\n";
    return 0;
  }
  throw UsageError("deliver: " + map_path + " is not a placement document");
}

int run_decode(const std::string& map_path, const std::string& msg_path, int user) {
  std::string map_text = read_file(map_path);
  std::string msg_text = read_file(msg_path);
  std::string kind = json_kind(map_text);

  std::vector<std::vector<Symbol>> files;
  std::vector<Symbol> decoded;
  int requested = 0;
  if (kind == "placement") {
    CacheMap map = cache_map_from_json(map_text, &files);
    DeliveryMessage msg = delivery_message_from_json(msg_text);
    if (user < 1 || user > map.cfg.K) throw UsageError("decode: bad --user");
    requested = msg.demand.at(static_cast<size_t>(user - 1));
    decoded = decode(user, map, msg);
  } else if (kind == "joint-placement") {
    JointPlacement placement = joint_placement_from_json(map_text, &files);
    auto messages = joint_messages_from_json(msg_text);
    if (user < 1 || user > placement.K) throw UsageError("decode: bad --user");
    if (messages.empty()) throw UsageError("decode: empty joint message");
    requested = messages[0].demand.at(static_cast<size_t>(user - 1));
    decoded = joint_decode(user, placement, messages);
  } else {
    throw UsageError("decode: " + map_path + " is not a placement document");
  }

  std::cout << "user " << user << " file " << requested << " digest " << digest_hex(decoded)
            << "\n";
  if (!files.empty()) {
    if (decoded == files.at(static_cast<size_t>(requested - 1))) {
      std::cout << "verified: decoded file matches the ground truth\n";
      return 0;
    }
    std::cout << "MISMATCH: decoded file differs from the ground truth\n";
    return kExitVerification;
  }
  std::cout << "no ground truth embedded; digest only\n";
  return 0;
}

int run_rate_table(int K, const std::string& out) {
  if (K < 1) throw UsageError("rate-table: --users must be positive");
  std::ostringstream csv;
  csv << "r1,r2,R_both,R_1,R_2\n";
  for (int r1 = 0; r1 <= K; ++r1)
    for (int r2 = 0; r2 <= r1; ++r2)
      csv << r1 << "," << r2 << "," << delivery_rate(K, r1, r2, {1, 2}).str() << ","
          << delivery_rate(K, r1, r2, {1}).str() << "," << delivery_rate(K, r1, r2, {2}).str()
          << "\n";
  write_file(out, csv.str());
  return 0;
}

Rational canonical_p1(const Rational& p1, bool* swapped = nullptr) {
  if (p1 <= Rational(0) || p1 >= Rational(1))
    throw UsageError("p1 must lie strictly between 0 and 1");
  if (p1 < Rational(1, 2)) {
    if (swapped) *swapped = true;
    return Rational(1) - p1;
  }
  return p1;
}

int run_optimal(int K, const std::string& p1_text, const std::string& memory_text) {
  bool swapped = false;
  Rational p1 = canonical_p1(Rational::parse(p1_text), &swapped);
  Rational M = Rational::parse(memory_text);
  OptimalAllocation best = optimal_allocation(K, p1, M);
  if (swapped)
    std::cout << "note: p1 < 1/2; file labels swapped so the popular file is file 1\n";
  std::cout << "t1 = " << best.point.t1.str() << "\n";
  std::cout << "t2 = " << best.point.t2.str() << "\n";
  std::cout << "R_opt = " << best.point.rbar.str() << " = " << best.point.rbar.to_double()
            << "\n";
  Rational run = baseline_uniform(K, p1, M);
  Rational rnc = baseline_grouping(K, p1, M);
  std::cout << "R_un = " << run.str() << " = " << run.to_double() << "\n";
  std::cout << "R_nc = " << rnc.str() << " = " << rnc.to_double() << "\n";
  if (best.tie) std::cout << "note: the next breakpoint achieves the same rate\n";
  return 0;
}

int run_converse(int K, int N, const std::string& p_text, const std::string& memory_text) {
  std::vector<Rational> p = parse_rational_list(p_text);
  if (static_cast<int>(p.size()) != N)
    throw UsageError("converse: --p needs one value per file");
  Rational M = Rational::parse(memory_text);
  ConverseResult bound = converse_bound(K, N, p, M);
  std::cout << "bound = " << bound.value.str() << " = " << bound.value.to_double() << "\n";
  std::cout << "minimizer =";
  for (const auto& t : bound.minimizer) std::cout << " " << t.str();
  std::cout << "\n";
  std::cout << (bound.exact ? "exact: full breakpoint enumeration\n"
                            : "certified-numeric minimum\n");
  if (!bound.exact) std::cout << "certificate_slack = " << bound.certificate_slack << "\n";
  for (const auto& locus : bound.tie_loci)
    std::cout << "tie locus: permutation maximum tied on subset " << locus << "\n";
  return 0;
}

int run_sweep(const std::string& mode, int K, const std::string& p1_text,
              const std::string& memory_text, const std::string& step_text,
              const std::string& out) {
  std::ostringstream csv;
  Rational step = Rational::parse(step_text);
  if (step <= Rational(0)) throw UsageError("sweep: --step must be positive");

  if (mode == "prob") {
    Rational M = Rational::parse(memory_text);
    csv << "p1,t1,t2,R_opt,R_opt_float,R_un,R_un_float,R_nc,R_nc_float\n";
    for (Rational p1(1, 2); p1 < Rational(1); p1 += step) {
      OptimalAllocation best = optimal_allocation(K, p1, M);
      csv << p1.str() << "," << best.point.t1.str() << "," << best.point.t2.str() << ","
          << frac_and_float(best.point.rbar) << ","
          << frac_and_float(baseline_uniform(K, p1, M)) << ","
          << frac_and_float(baseline_grouping(K, p1, M)) << "\n";
    }
  } else if (mode == "memory") {
    Rational p1 = canonical_p1(Rational::parse(p1_text));
    csv << "M,t1,t2,R_opt,R_opt_float,R_un,R_un_float,R_nc,R_nc_float\n";
    for (Rational M(0); M <= Rational(2); M += step) {
      OptimalAllocation best = optimal_allocation(K, p1, M);
      csv << M.str() << "," << best.point.t1.str() << "," << best.point.t2.str() << ","
          << frac_and_float(best.point.rbar) << ","
          << frac_and_float(baseline_uniform(K, p1, M)) << ","
          << frac_and_float(baseline_grouping(K, p1, M)) << "\n";
    }
  } else if (mode == "surface") {
    Rational p1 = canonical_p1(Rational::parse(p1_text));
    csv << "r1,r2,M,Rbar,Rbar_float\n";
    for (int r1 = 0; r1 <= K; ++r1)
      for (int r2 = 0; r2 <= r1; ++r2)
        csv << r1 << "," << r2 << "," << Rational(r1 + r2, K).str() << ","
            << frac_and_float(expected_rate(K, p1, Rational(r1), Rational(r2))) << "\n";
  } else {
    throw UsageError("sweep: --mode must be prob, memory or surface");
  }
  write_file(out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nucache: placement, aligned delivery and rate calculus for two-file "
               "coded caching with skewed popularity"};
  app.require_subcommand(1);

  PlaceArgs place_args;
  try {
    place_args.prime = default_prime();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  auto* place_cmd = app.add_subcommand("place", "split files into subfiles and fill caches");
  place_cmd->add_option("--users", place_args.users, "number of users K")->required();
  place_cmd->add_option("--files", place_args.files, "number of files N (default 2)");
  place_cmd->add_option("--r", place_args.r_list, "integer per-file shares, e.g. 2,1");
  place_cmd->add_option("--t", place_args.t_list,
                        "fractional two-file allocation, e.g. 2.3,1.2 (memory sharing)");
  place_cmd->add_option("--subfile-len", place_args.subfile_len, "symbols per subfile");
  place_cmd->add_option("--seed", place_args.seed, "payload generator seed");
  place_cmd->add_option("--prime", place_args.prime, "field prime");
  place_cmd->add_option("--matrix-seed", place_args.matrix_seed,
                        "MDS evaluation-point offset");
  place_cmd->add_flag("--no-embed-files", place_args.no_embed_files,
                      "do not store the ground-truth files in the output");
  place_cmd->add_option("--out", place_args.out, "output path (- for stdout)");

  std::string map_path, msg_path, demand_list, out = "-";
  int user = 1;
  auto* deliver_cmd = app.add_subcommand("deliver", "encode the broadcast for a demand vector");
  deliver_cmd->add_option("--map", map_path, "placement JSON")->required();
  deliver_cmd->add_option("--demand", demand_list, "requested file per user, e.g. 1,1,1,2")
      ->required();
  deliver_cmd->add_option("--out", out, "output path (- for stdout)");

  auto* decode_cmd = app.add_subcommand("decode", "decode one user's file from the broadcast");
  decode_cmd->add_option("--map", map_path, "placement JSON")->required();
  decode_cmd->add_option("--msg", msg_path, "message JSON")->required();
  decode_cmd->add_option("--user", user, "user index (1-based)")->required();

  int users = 0, files = 2;
  auto* table_cmd =
      app.add_subcommand("rate-table", "per-split delivery rates as exact fractions");
  table_cmd->add_option("--users", users, "number of users K")->required();
  table_cmd->add_option("--out", out, "output path (- for stdout)");

  std::string p1_text = "0.5", memory_text = "1", p_text, step_text = "0.01";
  auto* optimal_cmd = app.add_subcommand("optimal", "optimal two-file allocation and baselines");
  optimal_cmd->add_option("--users", users, "number of users K")->required();
  optimal_cmd->add_option("--p1", p1_text, "probability of file 1")->required();
  optimal_cmd->add_option("--memory", memory_text, "cache size M in file units")->required();

  auto* converse_cmd = app.add_subcommand("converse", "lower bound under uncoded placement");
  converse_cmd->add_option("--users", users, "number of users K")->required();
  converse_cmd->add_option("--files", files, "number of files N")->required();
  converse_cmd->add_option("--p", p_text, "file probabilities, e.g. 0.5,0.3,0.2")->required();
  converse_cmd->add_option("--memory", memory_text, "cache size M in file units")->required();

  std::string mode;
  auto* sweep_cmd = app.add_subcommand("sweep", "CSV sweeps of the rate curves");
  sweep_cmd->add_option("--mode", mode, "prob | memory | surface")->required();
  sweep_cmd->add_option("--users", users, "number of users K")->required();
  sweep_cmd->add_option("--p1", p1_text, "probability of file 1 (memory/surface)");
  sweep_cmd->add_option("--memory", memory_text, "cache size M (prob)");
  sweep_cmd->add_option("--step", step_text, "grid step");
  sweep_cmd->add_option("--out", out, "output path (- for stdout)");

  try {
    app.parse(argc, argv);
    if (place_cmd->parsed()) return run_place(place_args);
    if (deliver_cmd->parsed()) return run_deliver(map_path, demand_list, out);
    if (decode_cmd->parsed()) return run_decode(map_path, msg_path, user);
    if (table_cmd->parsed()) return run_rate_table(users, out);
    if (optimal_cmd->parsed()) return run_optimal(users, p1_text, memory_text);
    if (converse_cmd->parsed()) return run_converse(users, files, p_text, memory_text);
    if (sweep_cmd->parsed())
      return run_sweep(mode, users, p1_text, memory_text, step_text, out);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what()
              << " (exact 128-bit arithmetic exceeded; use a coarser probability or "
                 "memory grid)\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitVerification;
  }
}
