#include "nucache/placement.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace nucache {

long long subpacketization(int K, const std::vector<int>& r) { return chain_count(K, r); }

long long PlacementConfig::subpacketization() const { return chain_count(K, r); }

long long PlacementConfig::file_len() const { return subpacketization() * subfile_len; }

Rational PlacementConfig::cache_share(int file) const {
  return {r.at(static_cast<size_t>(file - 1)), K};
}

Rational PlacementConfig::total_cache() const {
  long long sum = 0;
  for (int ri : r) sum += ri;
  return {sum, K};
}

void PlacementConfig::validate() const {
  if (K < 1) throw std::invalid_argument("PlacementConfig: K must be positive");
  if (N < 1 || static_cast<int>(r.size()) != N)
    throw std::invalid_argument("PlacementConfig: r must have one entry per file");
  int prev = K;
  for (int ri : r) {
    if (ri < 0 || ri > prev)
      throw std::invalid_argument("PlacementConfig: r must be non-increasing within [0, K]");
    prev = ri;
  }
  if (subfile_len < 1) throw std::invalid_argument("PlacementConfig: subfile_len must be >= 1");
  if (!is_prime(prime)) throw std::invalid_argument("PlacementConfig: prime is not prime");
}

const std::vector<Symbol>* CacheMap::find_payload(int user, int file,
                                                  const ChainIndex& chain) const {
  for (const auto& entry : users.at(static_cast<size_t>(user - 1))) {
    if (entry.file == file && entry.chain == chain) return &entry.payload;
  }
  return nullptr;
}

namespace {

void check_files(const PlacementConfig& cfg, const std::vector<std::vector<Symbol>>& files) {
  if (static_cast<int>(files.size()) != cfg.N)
    throw std::invalid_argument("place: expected one payload vector per file");
  long long F = cfg.file_len();
  for (const auto& f : files) {
    if (static_cast<long long>(f.size()) != F)
      throw std::invalid_argument("place: every file must have exactly S * subfile_len symbols");
  }
}

std::vector<Symbol> slice(const std::vector<Symbol>& file, long long chain_idx, int L) {
  auto begin = file.begin() + static_cast<ptrdiff_t>(chain_idx * L);
  return {begin, begin + L};
}

CacheMap place_impl(const PlacementConfig& cfg, const std::vector<std::vector<Symbol>>* files,
                    const std::vector<std::vector<int>>* perms) {
  cfg.validate();
  if (files) check_files(cfg, *files);
  if (perms) {
    if (static_cast<int>(perms->size()) != cfg.K)
      throw std::invalid_argument("place: expected one permutation per user");
    for (const auto& perm : *perms) {
      std::vector<int> seen(static_cast<size_t>(cfg.N), 0);
      if (static_cast<int>(perm.size()) != cfg.N)
        throw std::invalid_argument("place: permutation must cover all files");
      for (int v : perm) {
        if (v < 1 || v > cfg.N || seen[static_cast<size_t>(v - 1)]++)
          throw std::invalid_argument("place: user permutation is not a bijection");
      }
    }
  }

  CacheMap map;
  map.cfg = cfg;
  map.has_payloads = files != nullptr;
  map.users.resize(static_cast<size_t>(cfg.K));

  auto chains = enumerate_chains(cfg.K, cfg.r);
  for (long long q = 0; q < static_cast<long long>(chains.size()); ++q) {
    const ChainIndex& chain = chains[static_cast<size_t>(q)];
    for (int user = 1; user <= cfg.K; ++user) {
      for (int file = 1; file <= cfg.N; ++file) {
        int level = perms ? (*perms)[static_cast<size_t>(user - 1)][static_cast<size_t>(file - 1)]
                          : file;
        const auto& set = chain.sets[static_cast<size_t>(level - 1)];
        if (!std::binary_search(set.begin(), set.end(), user)) continue;
        CacheEntry entry;
        entry.file = file;
        entry.chain = chain;
        if (files) entry.payload = slice((*files)[static_cast<size_t>(file - 1)], q, cfg.subfile_len);
        map.users[static_cast<size_t>(user - 1)].push_back(std::move(entry));
      }
    }
  }
  return map;
}

}  // namespace

CacheMap place(const PlacementConfig& cfg) { return place_impl(cfg, nullptr, nullptr); }

CacheMap place(const PlacementConfig& cfg, const std::vector<std::vector<Symbol>>& files) {
  return place_impl(cfg, &files, nullptr);
}

CacheMap place_with_permutations(const PlacementConfig& cfg,
                                 const std::vector<std::vector<Symbol>>& files,
                                 const std::vector<std::vector<int>>& perms) {
  return place_impl(cfg, &files, &perms);
}

std::vector<std::vector<Symbol>> random_files(const PlacementConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> dist(0, cfg.prime - 1);
  std::vector<std::vector<Symbol>> files(static_cast<size_t>(cfg.N));
  for (auto& f : files) {
    f.resize(static_cast<size_t>(cfg.file_len()));
    for (auto& s : f) s = dist(rng);
  }
  return files;
}

}  // namespace nucache
