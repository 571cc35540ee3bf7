#include "nucache/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace nucache {

namespace {

void require_two_files(const PlacementConfig& cfg) {
  if (cfg.N != 2 || cfg.r.size() != 2)
    throw std::invalid_argument("oracle: two-file configurations only");
}

long long var_count(const PlacementConfig& cfg) { return 2 * cfg.subpacketization(); }

int var_index(int file, long long chain, long long S) {
  return static_cast<int>((file - 1) * S + chain);
}

FieldMatrix inner_code(const GroupDims& dims, const PlacementConfig& cfg) {
  return mds_cauchy(static_cast<int>(dims.theta), static_cast<int>(dims.kappa), cfg.prime,
                    cfg.matrix_seed);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

FieldMatrix file_selector(int file, const PlacementConfig& cfg) {
  require_two_files(cfg);
  long long S = cfg.subpacketization();
  FieldMatrix m(static_cast<int>(S), static_cast<int>(var_count(cfg)), cfg.prime);
  for (long long q = 0; q < S; ++q) m.at(static_cast<int>(q), var_index(file, q, S)) = 1;
  return m;
}

FieldMatrix cache_selector(int user, const PlacementConfig& cfg) {
  require_two_files(cfg);
  long long S = cfg.subpacketization();
  auto chains = enumerate_chains(cfg.K, cfg.r);
  std::vector<int> vars;
  for (long long q = 0; q < S; ++q) {
    for (int file = 1; file <= 2; ++file) {
      const auto& level = chains[static_cast<size_t>(q)].sets[static_cast<size_t>(file - 1)];
      if (std::binary_search(level.begin(), level.end(), user))
        vars.push_back(var_index(file, q, S));
    }
  }
  FieldMatrix m(static_cast<int>(vars.size()), static_cast<int>(var_count(cfg)), cfg.prime);
  for (size_t i = 0; i < vars.size(); ++i) m.at(static_cast<int>(i), vars[i]) = 1;
  return m;
}

FieldMatrix description_map(int file, const std::vector<int>& demand,
                            const PlacementConfig& cfg) {
  require_two_files(cfg);
  long long S = cfg.subpacketization();
  Description desc = build_description(file, demand, cfg);
  FieldMatrix m(static_cast<int>(desc.total_elements), static_cast<int>(var_count(cfg)),
                cfg.prime);
  int row = 0;
  for (const auto& group : desc.groups) {
    if (group.dims.theta == 0) continue;
    FieldMatrix inner = inner_code(group.dims, cfg);
    for (int e = 0; e < group.dims.theta; ++e, ++row) {
      for (size_t i = 0; i < group.constituent_ranks.size(); ++i)
        m.at(row, var_index(file, group.constituent_ranks[i], S)) =
            inner.at(e, static_cast<int>(i));
    }
  }
  return m;
}

long long linear_entropy(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.cols != b.cols || a.p != b.p)
    throw std::invalid_argument("linear_entropy: maps must share the variable space");
  return rank(vstack(a, b)) - rank(b);
}

EntropyReport verify_entropy_identities(const PlacementConfig& cfg, const std::vector<int>& demand) {
  require_two_files(cfg);
  cfg.validate();
  EntropyReport report;
  report.K = cfg.K;
  report.r = {cfg.r[0], cfg.r[1]};
  report.demand = demand;

  long long S = cfg.subpacketization();
  std::vector<int> omega[3] = {{}, users_demanding(demand, 1), users_demanding(demand, 2)};
  if (omega[1].empty() || omega[2].empty())
    throw std::invalid_argument("verify_entropy_identities: demand must be two-sided");

  auto add = [&](const std::string& name, long long got, long long expected) {
    report.checks.push_back({name, got, expected, got == expected});
  };

  std::vector<FieldMatrix> caches;
  caches.reserve(static_cast<size_t>(cfg.K));
  for (int u = 1; u <= cfg.K; ++u) caches.push_back(cache_selector(u, cfg));

  for (int file = 1; file <= 2; ++file) {
    long long len = description_length(cfg.K, cfg.r[static_cast<size_t>(file - 1)], S);
    long long unknown = outsider_unknown_count(cfg.K, cfg.r[static_cast<size_t>(file - 1)], S);
    FieldMatrix files_m = file_selector(file, cfg);
    FieldMatrix desc_m = description_map(file, demand, cfg);
    std::string tag = "W" + std::to_string(file);

    for (int u : omega[file])
      add("H(" + tag + "|W*,Z" + std::to_string(u) + ")",
          linear_entropy(files_m, vstack(desc_m, caches[static_cast<size_t>(u - 1)])), 0);

    long long max_in = -1, max_out = -1;
    for (int u = 1; u <= cfg.K; ++u) {
      long long h = linear_entropy(desc_m, caches[static_cast<size_t>(u - 1)]);
      bool in = std::binary_search(omega[file].begin(), omega[file].end(), u);
      (in ? max_in : max_out) = std::max(in ? max_in : max_out, h);
    }
    add("max_in H(W*" + std::to_string(file) + "|Z)", max_in, len);
    add("max_out H(W*" + std::to_string(file) + "|Z)", max_out, unknown);

    for (int u = 1; u <= cfg.K; ++u)
      add("H(" + tag + "|Z" + std::to_string(u) + ")",
          linear_entropy(files_m, caches[static_cast<size_t>(u - 1)]), len);
    for (int u = 1; u <= cfg.K; ++u)
      for (int v = u + 1; v <= cfg.K; ++v)
        add("H(" + tag + "|Z" + std::to_string(u) + ",Z" + std::to_string(v) + ")",
            linear_entropy(files_m,
                           vstack(caches[static_cast<size_t>(u - 1)],
                                  caches[static_cast<size_t>(v - 1)])),
            unknown);
  }

  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const EntropyCheck& c) { return c.pass; });
  return report;
}

bool tightness_witness(const std::vector<int>& demand, const PlacementConfig& cfg,
                       int dropped_row) {
  std::set<int> requested = requested_set(demand);
  if (requested.size() != 2) throw std::invalid_argument("tightness_witness: two-sided only");
  long long rows = outer_row_count(cfg, requested);
  if (dropped_row < 0 || dropped_row >= rows)
    throw std::invalid_argument("tightness_witness: bad row");
  long long cols = description_length(cfg.K, cfg.r[0], cfg.subpacketization()) +
                   description_length(cfg.K, cfg.r[1], cfg.subpacketization());
  FieldMatrix outer = mds_cauchy(static_cast<int>(rows), static_cast<int>(cols), cfg.prime,
                                 cfg.matrix_seed);
  FieldMatrix reduced(static_cast<int>(rows) - 1, outer.cols, cfg.prime);
  for (int i = 0, w = 0; i < outer.rows; ++i) {
    if (i == dropped_row) continue;
    for (int j = 0; j < outer.cols; ++j) reduced.at(w, j) = outer.at(i, j);
    ++w;
  }
  for (int user = 1; user <= cfg.K; ++user) {
    std::vector<int> known = known_columns(user, demand, cfg);
    std::vector<bool> is_known(static_cast<size_t>(cols), false);
    for (int j : known) is_known[static_cast<size_t>(j)] = true;
    std::vector<int> unknown;
    for (int j = 0; j < static_cast<int>(cols); ++j)
      if (!is_known[static_cast<size_t>(j)]) unknown.push_back(j);
    if (rank(submatrix_cols(reduced, unknown)) < static_cast<int>(unknown.size())) return true;
  }
  return false;
}

DecodeSweepReport exhaustive_decode(int K_max, const std::vector<std::uint64_t>& seeds,
                                    std::uint32_t prime, int subfile_len) {
  if (K_max > 6)
    throw std::invalid_argument("exhaustive_decode: the sweep is sized for K_max <= 6");
  DecodeSweepReport report;
  for (int K = 1; K <= K_max; ++K) {
    for (int r1 = 0; r1 <= K; ++r1) {
      for (int r2 = 0; r2 <= r1; ++r2) {
        PlacementConfig cfg;
        cfg.K = K;
        cfg.N = 2;
        cfg.r = {r1, r2};
        cfg.subfile_len = subfile_len;
        cfg.prime = prime;
        for (long long bits = 0; bits < (1LL << K); ++bits) {
          std::vector<int> demand(static_cast<size_t>(K));
          for (int k = 0; k < K; ++k) demand[static_cast<size_t>(k)] = (bits >> k) & 1 ? 2 : 1;
          for (std::uint64_t seed : seeds) {
            std::uint64_t instance_seed = mix(mix(mix(seed, static_cast<std::uint64_t>(K)),
                                                  static_cast<std::uint64_t>(r1 * 64 + r2)),
                                              static_cast<std::uint64_t>(bits));
            ++report.instances;
            DecodeInstance inst{K, {r1, r2}, demand, instance_seed, true, ""};
            try {
              auto files = random_files(cfg, instance_seed);
              auto cache = place(cfg, files);
              auto msg = encode_delivery(demand, files, cfg);
              for (int user = 1; user <= K; ++user) {
                auto decoded = decode(user, cache, msg);
                if (decoded != files[static_cast<size_t>(demand[static_cast<size_t>(user - 1)] - 1)]) {
                  inst.pass = false;
                  inst.failure = "decode mismatch for user " + std::to_string(user);
                  break;
                }
              }
              if (inst.pass && requested_set(demand).size() == 2 && msg.payload.rows > 0) {
                if (!tightness_witness(demand, cfg, msg.payload.rows - 1)) {
                  inst.pass = false;
                  inst.failure = "tightness witness: no user lost rank after a row drop";
                  ++report.witness_failures;
                }
              }
            } catch (const std::exception& e) {
              inst.pass = false;
              inst.failure = e.what();
            }
            if (!inst.pass) {
              if (inst.failure.find("witness") == std::string::npos) ++report.decode_failures;
              report.failed.push_back(std::move(inst));
            }
          }
        }
      }
    }
  }
  report.pass = report.failed.empty();
  return report;
}

std::string to_json(const EntropyReport& report) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["K"] = report.K;
  j["r"] = report.r;
  j["demand"] = report.demand;
  j["pass"] = report.pass;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : report.checks)
    j["checks"].push_back({{"name", c.name}, {"got", c.got}, {"expected", c.expected},
                           {"pass", c.pass}});
  return j.dump();
}

std::string to_json(const DecodeSweepReport& report) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["instances"] = report.instances;
  j["decode_failures"] = report.decode_failures;
  j["witness_failures"] = report.witness_failures;
  j["pass"] = report.pass;
  j["failed"] = nlohmann::json::array();
  for (const auto& inst : report.failed)
    j["failed"].push_back({{"K", inst.K}, {"r", inst.r}, {"demand", inst.demand},
                           {"seed", inst.seed}, {"failure", inst.failure}});
  return j.dump();
}

}  // namespace nucache
