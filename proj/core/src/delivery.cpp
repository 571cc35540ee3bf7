#include "nucache/delivery.hpp"

#include <algorithm>
#include <stdexcept>

namespace nucache {

std::vector<int> users_demanding(const std::vector<int>& demand, int file) {
  std::vector<int> users;
  for (size_t k = 0; k < demand.size(); ++k)
    if (demand[k] == file) users.push_back(static_cast<int>(k) + 1);
  return users;
}

std::set<int> requested_set(const std::vector<int>& demand) {
  return {demand.begin(), demand.end()};
}

GroupDims group_dims(int file, int s1, int s2, int own_count, int r1, int r2) {
  if (file != 1 && file != 2) throw std::invalid_argument("group_dims: file must be 1 or 2");
  if (s2 < 0 || s2 > s1) throw std::invalid_argument("group_dims: need 0 <= s2 <= s1");
  if (s1 > r1 || s2 > r2) throw std::invalid_argument("group_dims: need s_i <= r_i");
  long long a = r2 - s2;              // fresh users added at the inner level
  long long b = (r1 - s1) - a;        // extra users only at the outer level
  GroupDims d;
  d.kappa = binom(own_count, a) * binom(own_count - a, b);
  d.theta = file == 1 ? binom(own_count - 1, a) * binom(own_count - 1 - a, b)
                      : binom(own_count - 1, a) * binom(own_count - a, b);
  // theta/kappa = (own - (r_file - s_file)) / own; degenerate cases are 0 = 0.
  long long s_own = file == 1 ? s1 : s2;
  long long r_own = file == 1 ? r1 : r2;
  if (d.theta * own_count != (own_count - (r_own - s_own)) * d.kappa)
    throw std::logic_error("group_dims: ratio identity violated");
  return d;
}

namespace {

void require_two_files(const PlacementConfig& cfg) {
  if (cfg.N != 2 || cfg.r.size() != 2)
    throw std::invalid_argument("delivery: coded delivery is defined for exactly two files");
}

void require_demand(const std::vector<int>& demand, const PlacementConfig& cfg) {
  if (static_cast<int>(demand.size()) != cfg.K)
    throw std::invalid_argument("delivery: demand must list one file per user");
  for (int d : demand)
    if (d < 1 || d > cfg.N) throw std::invalid_argument("delivery: demand entry out of range");
}

FieldMatrix mat_sub(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols || a.p != b.p)
    throw std::invalid_argument("mat_sub: shape mismatch");
  FieldMatrix out = a;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = fp_sub(out.data[i], b.data[i], a.p);
  return out;
}

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Subfile q of `file` as a 1 x L slice view copied into a row of `dst`.
void copy_subfile(FieldMatrix& dst, int row, const std::vector<Symbol>& file, long long q, int L) {
  for (int j = 0; j < L; ++j)
    dst.at(row, j) = file[static_cast<size_t>(q) * L + j];
}

FieldMatrix gather_subfiles(const std::vector<Symbol>& file, const std::vector<long long>& ranks,
                            int L, std::uint32_t p) {
  FieldMatrix out(static_cast<int>(ranks.size()), L, p);
  for (size_t i = 0; i < ranks.size(); ++i) copy_subfile(out, static_cast<int>(i), file, ranks[i], L);
  return out;
}

// Per-group inner MDS code; all groups with the same dims share one matrix.
FieldMatrix inner_code(const GroupDims& dims, const PlacementConfig& cfg) {
  return mds_cauchy(static_cast<int>(dims.theta), static_cast<int>(dims.kappa), cfg.prime,
                    cfg.matrix_seed);
}

}  // namespace

Description build_description(int file, const std::vector<int>& demand,
                              const PlacementConfig& cfg,
                              const std::vector<std::vector<Symbol>>* files) {
  require_two_files(cfg);
  require_demand(demand, cfg);
  std::vector<int> own = users_demanding(demand, file);
  std::vector<int> opp = users_demanding(demand, 3 - file);
  if (own.empty() || opp.empty())
    throw std::invalid_argument(
        "build_description: both files must be requested; use the one-sided path otherwise");

  int r1 = cfg.r[0], r2 = cfg.r[1];
  Description desc;
  desc.file = file;
  for (const GroupKey& key : enumerate_group_keys(opp, r1, r2)) {
    DescriptionGroup group;
    group.key = key;
    int s1 = static_cast<int>(key.rho1.size());
    int s2 = static_cast<int>(key.rho2.size());
    group.dims = group_dims(file, s1, s2, static_cast<int>(own.size()), r1, r2);

    if (group.dims.kappa > 0) {
      // Constituents: chains (rho1 u x1, rho2 u x2) with x2 <= x1 inside the
      // requester set, in colexicographic (x1, x2) order.
      std::vector<std::pair<std::vector<int>, std::vector<int>>> extensions;
      for (const auto& x1 : subsets_of_size(own, r1 - s1))
        for (const auto& x2 : subsets_of_size(x1, r2 - s2)) extensions.emplace_back(x1, x2);
      std::sort(extensions.begin(), extensions.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return colex_less(a.first, b.first);
        return colex_less(a.second, b.second);
      });
      if (static_cast<long long>(extensions.size()) != group.dims.kappa)
        throw std::logic_error("build_description: constituent count != kappa");
      for (auto& [x1, x2] : extensions) {
        ChainIndex chain;
        chain.sets = {sorted_union(key.rho1, x1), sorted_union(key.rho2, x2)};
        group.constituent_ranks.push_back(chain_rank(chain, cfg.K, cfg.r));
        group.constituents.push_back(std::move(chain));
      }
      if (files && group.dims.theta > 0) {
        FieldMatrix subfiles = gather_subfiles((*files)[static_cast<size_t>(file - 1)],
                                               group.constituent_ranks, cfg.subfile_len,
                                               cfg.prime);
        group.coded = matmul(inner_code(group.dims, cfg), subfiles);
      }
    }
    desc.total_elements += group.dims.theta;
    desc.groups.push_back(std::move(group));
  }
  return desc;
}

long long description_length(int K, int r_i, long long S) {
  Rational len = Rational(S) * coverage_ratio(K, 1, r_i);
  if (!len.is_integer()) throw std::logic_error("description_length: non-integer");
  return static_cast<long long>(len.num());
}

long long outsider_unknown_count(int K, int r_i, long long S) {
  Rational e = Rational(S) * coverage_ratio(K, 2, r_i);
  if (!e.is_integer()) throw std::logic_error("outsider_unknown_count: non-integer");
  return static_cast<long long>(e.num());
}

long long outer_row_count(const PlacementConfig& cfg, const std::set<int>& requested) {
  require_two_files(cfg);
  Rational rows = Rational(cfg.subpacketization()) *
                  delivery_rate(cfg.K, cfg.r[0], cfg.r[1], requested);
  if (!rows.is_integer()) throw std::logic_error("outer_row_count: non-integer");
  return static_cast<long long>(rows.num());
}

PlacementConfig DeliveryMessage::config() const {
  PlacementConfig cfg;
  cfg.K = K;
  cfg.N = 2;
  cfg.r = {r[0], r[1]};
  cfg.subfile_len = subfile_len;
  cfg.prime = prime;
  cfg.matrix_seed = matrix_seed;
  return cfg;
}

DeliveryMessage encode_delivery(const std::vector<int>& demand,
                                const std::vector<std::vector<Symbol>>& files,
                                const PlacementConfig& cfg) {
  require_two_files(cfg);
  require_demand(demand, cfg);
  cfg.validate();
  if (static_cast<int>(files.size()) != 2)
    throw std::invalid_argument("encode_delivery: expected two files");
  for (const auto& f : files)
    if (static_cast<long long>(f.size()) != cfg.file_len())
      throw std::invalid_argument("encode_delivery: file length mismatch");

  DeliveryMessage msg;
  msg.K = cfg.K;
  msg.r = {cfg.r[0], cfg.r[1]};
  msg.prime = cfg.prime;
  msg.subfile_len = cfg.subfile_len;
  msg.matrix_seed = cfg.matrix_seed;
  msg.demand = demand;

  long long S = cfg.subpacketization();
  std::set<int> requested = requested_set(demand);
  long long rows = outer_row_count(cfg, requested);

  if (requested.size() == 1) {
    int file = *requested.begin();
    for (long long q = 0; q < S; ++q) {
      ColumnLabel label;
      label.file = file;
      label.coded = false;
      label.chain = q;
      msg.manifest.push_back(label);
    }
    std::vector<long long> all(static_cast<size_t>(S));
    for (long long q = 0; q < S; ++q) all[static_cast<size_t>(q)] = q;
    FieldMatrix stacked = gather_subfiles(files[static_cast<size_t>(file - 1)], all,
                                          cfg.subfile_len, cfg.prime);
    FieldMatrix outer = mds_cauchy(static_cast<int>(rows), static_cast<int>(S), cfg.prime,
                                   cfg.matrix_seed);
    msg.payload = matmul(outer, stacked);
    return msg;
  }

  FieldMatrix stacked(0, cfg.subfile_len, cfg.prime);
  for (int file : {1, 2}) {
    Description desc = build_description(file, demand, cfg, &files);
    for (const auto& group : desc.groups) {
      for (int e = 0; e < group.dims.theta; ++e) {
        ColumnLabel label;
        label.file = file;
        label.key = group.key;
        label.element = e;
        msg.manifest.push_back(label);
      }
      if (group.dims.theta > 0) stacked = vstack(stacked, group.coded);
    }
  }
  FieldMatrix outer = mds_cauchy(static_cast<int>(rows), static_cast<int>(msg.manifest.size()),
                                 cfg.prime, cfg.matrix_seed);
  msg.payload = matmul(outer, stacked);
  return msg;
}

std::vector<int> known_columns(int user, const std::vector<int>& demand,
                               const PlacementConfig& cfg) {
  require_two_files(cfg);
  require_demand(demand, cfg);
  if (user < 1 || user > cfg.K) throw std::invalid_argument("known_columns: bad user");
  std::set<int> requested = requested_set(demand);
  std::vector<int> known;

  if (requested.size() == 1) {
    int file = *requested.begin();
    auto chains = enumerate_chains(cfg.K, cfg.r);
    for (long long q = 0; q < static_cast<long long>(chains.size()); ++q) {
      const auto& level = chains[static_cast<size_t>(q)].sets[static_cast<size_t>(file - 1)];
      if (std::binary_search(level.begin(), level.end(), user))
        known.push_back(static_cast<int>(q));
    }
    return known;
  }

  int col = 0;
  for (int file : {1, 2}) {
    Description desc = build_description(file, demand, cfg);
    bool outsider = demand[static_cast<size_t>(user - 1)] != file;
    for (const auto& group : desc.groups) {
      const auto& rho_own = file == 1 ? group.key.rho1 : group.key.rho2;
      bool knows = outsider && std::binary_search(rho_own.begin(), rho_own.end(), user);
      for (int e = 0; e < group.dims.theta; ++e, ++col)
        if (knows) known.push_back(col);
    }
  }
  return known;
}

std::vector<Symbol> decode(int user, const CacheMap& cache, const DeliveryMessage& msg) {
  const PlacementConfig cfg = msg.config();
  cfg.validate();
  if (cache.cfg.K != cfg.K || cache.cfg.r != cfg.r || cache.cfg.prime != cfg.prime ||
      cache.cfg.subfile_len != cfg.subfile_len)
    throw std::invalid_argument("decode: cache placement does not match the message");
  if (!cache.has_payloads) throw std::invalid_argument("decode: cache has no payloads");
  require_demand(msg.demand, cfg);
  if (user < 1 || user > cfg.K) throw std::invalid_argument("decode: bad user");

  int own = msg.demand[static_cast<size_t>(user - 1)];
  long long S = cfg.subpacketization();
  int L = cfg.subfile_len;
  std::set<int> requested = requested_set(msg.demand);
  long long rows = outer_row_count(cfg, requested);
  if (msg.payload.rows != rows || msg.payload.cols != L)
    throw std::invalid_argument("decode: message payload has unexpected shape");

  auto chains = enumerate_chains(cfg.K, cfg.r);
  auto cached_payload = [&](int file, long long q) -> const std::vector<Symbol>* {
    return cache.find_payload(user, file, chains[static_cast<size_t>(q)]);
  };

  std::vector<Symbol> out(static_cast<size_t>(S) * L, 0);
  auto emit = [&](long long q, const FieldMatrix& m, int row) {
    for (int j = 0; j < L; ++j) out[static_cast<size_t>(q) * L + j] = m.at(row, j);
  };
  auto emit_cached = [&](long long q, const std::vector<Symbol>& payload) {
    std::copy(payload.begin(), payload.end(), out.begin() + static_cast<ptrdiff_t>(q * L));
  };

  if (requested.size() == 1) {
    // Single-file broadcast: drop the cached chains and erasure-decode.
    std::vector<int> known;
    FieldMatrix known_vals(0, L, cfg.prime);
    for (long long q = 0; q < S; ++q) {
      if (const auto* payload = cached_payload(own, q)) {
        known.push_back(static_cast<int>(q));
        FieldMatrix row(1, L, cfg.prime);
        for (int j = 0; j < L; ++j) row.at(0, j) = (*payload)[static_cast<size_t>(j)];
        known_vals = vstack(known_vals, row);
        emit_cached(q, *payload);
      }
    }
    FieldMatrix outer = mds_cauchy(static_cast<int>(rows), static_cast<int>(S), cfg.prime,
                                   cfg.matrix_seed);
    FieldMatrix adjusted = mat_sub(
        msg.payload, matmul(submatrix_cols(outer, known), known_vals));
    FieldMatrix sol = solve_after_drop(outer, known, adjusted);
    int row = 0;
    for (long long q = 0; q < S; ++q)
      if (!cached_payload(own, q)) emit(q, sol, row++);
    return out;
  }

  // Step 1: recover the full stacked description pair.
  Description descs[2] = {build_description(1, msg.demand, cfg),
                          build_description(2, msg.demand, cfg)};
  int total_cols = static_cast<int>(descs[0].total_elements + descs[1].total_elements);
  if (static_cast<int>(msg.manifest.size()) != total_cols)
    throw std::invalid_argument("decode: manifest does not match the demand");

  std::vector<int> known;
  FieldMatrix known_vals(0, L, cfg.prime);
  int col = 0;
  for (int file : {1, 2}) {
    const Description& desc = descs[file - 1];
    bool outsider = own != file;
    for (const auto& group : desc.groups) {
      if (group.dims.theta == 0) continue;
      const auto& rho_own = file == 1 ? group.key.rho1 : group.key.rho2;
      bool knows = outsider && std::binary_search(rho_own.begin(), rho_own.end(), user);
      if (knows) {
        // Every constituent sits in this user's cache; re-code the group.
        FieldMatrix constituents(static_cast<int>(group.dims.kappa), L, cfg.prime);
        for (size_t i = 0; i < group.constituent_ranks.size(); ++i) {
          const auto* payload = cached_payload(file, group.constituent_ranks[i]);
          if (!payload) throw std::logic_error("decode: expected cached constituent missing");
          for (int j = 0; j < L; ++j) constituents.at(static_cast<int>(i), j) = (*payload)[static_cast<size_t>(j)];
        }
        known_vals = vstack(known_vals, matmul(inner_code(group.dims, cfg), constituents));
        for (int e = 0; e < group.dims.theta; ++e) known.push_back(col + e);
      }
      col += static_cast<int>(group.dims.theta);
    }
  }

  FieldMatrix outer = mds_cauchy(static_cast<int>(rows), total_cols, cfg.prime, cfg.matrix_seed);
  FieldMatrix adjusted = msg.payload;
  if (!known.empty())
    adjusted = mat_sub(msg.payload, matmul(submatrix_cols(outer, known), known_vals));
  FieldMatrix sol = solve_after_drop(outer, known, adjusted);

  // Element values of the user's own description, in manifest order.
  std::vector<bool> is_known(static_cast<size_t>(total_cols), false);
  for (int j : known) is_known[static_cast<size_t>(j)] = true;
  std::vector<int> unknown_row(static_cast<size_t>(total_cols), -1);
  int next = 0;
  for (int j = 0; j < total_cols; ++j)
    if (!is_known[static_cast<size_t>(j)]) unknown_row[static_cast<size_t>(j)] = next++;

  int own_offset = own == 1 ? 0 : static_cast<int>(descs[0].total_elements);
  const Description& own_desc = descs[own - 1];

  // Step 2: peel each group of the own-file description.
  int group_col = own_offset;
  for (const auto& group : own_desc.groups) {
    if (group.dims.theta == 0) continue;
    FieldMatrix elements(static_cast<int>(group.dims.theta), L, cfg.prime);
    for (int e = 0; e < group.dims.theta; ++e) {
      int row = unknown_row[static_cast<size_t>(group_col + e)];
      if (row < 0) throw std::logic_error("decode: own description element marked known");
      for (int j = 0; j < L; ++j) elements.at(e, j) = sol.at(row, j);
    }
    group_col += static_cast<int>(group.dims.theta);

    std::vector<int> cached_pos;
    FieldMatrix cached_vals(0, L, cfg.prime);
    std::vector<long long> unknown_ranks;
    for (size_t i = 0; i < group.constituents.size(); ++i) {
      const auto& level = group.constituents[i].sets[static_cast<size_t>(own - 1)];
      if (std::binary_search(level.begin(), level.end(), user)) {
        const auto* payload = cached_payload(own, group.constituent_ranks[i]);
        if (!payload) throw std::logic_error("decode: expected cached constituent missing");
        cached_pos.push_back(static_cast<int>(i));
        FieldMatrix row(1, L, cfg.prime);
        for (int j = 0; j < L; ++j) row.at(0, j) = (*payload)[static_cast<size_t>(j)];
        cached_vals = vstack(cached_vals, row);
      } else {
        unknown_ranks.push_back(group.constituent_ranks[i]);
      }
    }
    if (static_cast<long long>(unknown_ranks.size()) != group.dims.theta)
      throw std::logic_error("decode: unknown constituent count != theta");

    FieldMatrix inner = inner_code(group.dims, cfg);
    FieldMatrix adjusted_inner = elements;
    if (!cached_pos.empty())
      adjusted_inner = mat_sub(elements, matmul(submatrix_cols(inner, cached_pos), cached_vals));
    FieldMatrix recovered = solve_after_drop(inner, cached_pos, adjusted_inner);
    for (size_t i = 0; i < unknown_ranks.size(); ++i)
      emit(unknown_ranks[i], recovered, static_cast<int>(i));
  }

  // Cached subfiles of the requested file fill the remaining slots.
  for (long long q = 0; q < S; ++q)
    if (const auto* payload = cached_payload(own, q)) emit_cached(q, *payload);
  return out;
}

}  // namespace nucache
