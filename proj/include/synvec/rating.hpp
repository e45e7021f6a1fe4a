// Copyright 2026 The synvec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SYNVEC_RATING_HPP
#define SYNVEC_RATING_HPP

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "synvec/embeddings.hpp"
#include "synvec/hash.hpp"
#include "synvec/vocab.hpp"

namespace synvec {

struct RatingParams {
  // Impact factor of the letter-bigram overlap penalty.
  double s = 0.0;

  // s must lie in [0, 1]; values above 0.4 are legal but outside the
  // evaluated grid, so callers get a warning string to surface.
  std::optional<std::string> validate() const {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw std::invalid_argument("bigram impact factor s must be in [0, 1], got " +
                                  std::to_string(s));
    }
    if (s > 0.4) {
      return "bigram impact factor s=" + std::to_string(s) +
             " is outside the evaluated grid {0, 0.1, 0.2, 0.3, 0.4}";
    }
    return std::nullopt;
  }
};

// Dice coefficient on letter-bigram multisets:
//   2 * |bigrams(v) /\ bigrams(w)| / (|bigrams(v)| + |bigrams(w)|)
// Words shorter than two bytes have an empty bigram multiset; two empty
// multisets compare as 1 when the words are equal and 0 otherwise. Symmetric.
inline double bigram_overlap(std::string_view v, std::string_view w) {
  auto bigrams = [](std::string_view word) {
    std::vector<std::uint16_t> out;
    if (word.size() < 2) return out;
    out.reserve(word.size() - 1);
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
      out.push_back(static_cast<std::uint16_t>(
          (static_cast<unsigned char>(word[i]) << 8) |
          static_cast<unsigned char>(word[i + 1])));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<std::uint16_t> a = bigrams(v);
  std::vector<std::uint16_t> b = bigrams(w);
  if (a.empty() && b.empty()) return v == w ? 1.0 : 0.0;
  std::size_t common = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++common;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return 2.0 * static_cast<double>(common) / static_cast<double>(a.size() + b.size());
}

// Similarity rating clamped to [0, 1]. The clamp preserves the stated range
// of the rating function and with it the sensitivity bound of 1.
inline double rate(const std::string& v, const std::string& w,
                   const EmbeddingTable& table, const RatingParams& params) {
  const double raw = cosine(v, w, table) - params.s * bigram_overlap(v, w);
  return std::clamp(raw, 0.0, 1.0);
}

// Dense K x K matrix of pairwise ratings; row i scores substitutes for term i.
struct RatingMatrix {
  std::size_t dim = 0;
  std::vector<double> values;  // row-major

  double at(std::size_t i, std::size_t j) const { return values[i * dim + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * dim + j]; }
};

// Precomputes ratings for every term pair. Rows are independent, so the work
// is split across `threads` (0 = hardware concurrency); the result does not
// depend on the thread count.
inline RatingMatrix build_rating_matrix(const Vocabulary& vocab,
                                        const EmbeddingTable& table,
                                        const RatingParams& params,
                                        unsigned threads = 1) {
  params.validate();
  std::vector<std::string> missing;
  for (const std::string& term : vocab.terms()) {
    if (!table.contains(term)) missing.push_back(term);
  }
  if (!missing.empty()) {
    std::string msg = "missing embedding for " + std::to_string(missing.size()) + " term(s):";
    for (const std::string& t : missing) msg += " " + t;
    throw std::out_of_range(msg);
  }

  const std::size_t k = vocab.size();
  RatingMatrix m;
  m.dim = k;
  m.values.assign(k * k, 0.0);

  auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        m.at(i, j) = rate(vocab.term(i), vocab.term(j), table, params);
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || k < 2 * threads) {
    fill_rows(0, k);
  } else {
    std::vector<std::thread> workers;
    const std::size_t chunk = (k + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(k, begin + chunk);
      if (begin >= end) break;
      workers.emplace_back(fill_rows, begin, end);
    }
    for (std::thread& w : workers) w.join();
  }
  return m;
}

inline std::uint64_t vocabulary_hash(const Vocabulary& vocab) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const std::string& term : vocab.terms()) {
    h = fnv1a64(term, h);
    h = fnv1a64(std::string_view("\n", 1), h);
  }
  return h;
}

// --- binary cache ---
//
// Layout: magic "SVRM", u32 version, u64 K, u64 vocab hash, u64 embedding
// file hash, f64 s, then K*K row-major f64 values. Little-endian host order;
// the cache is a per-machine artifact, not an interchange format.

namespace detail {
constexpr char kRatingCacheMagic[4] = {'S', 'V', 'R', 'M'};
constexpr std::uint32_t kRatingCacheVersion = 1;
}  // namespace detail

struct RatingCacheKey {
  std::uint64_t vocab_hash = 0;
  std::uint64_t embedding_hash = 0;
  double s = 0.0;
};

inline void save_rating_cache(const std::string& path, const RatingMatrix& m,
                              const RatingCacheKey& key) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write rating cache: " + path);
  out.write(detail::kRatingCacheMagic, 4);
  auto put = [&out](const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  };
  const std::uint32_t version = detail::kRatingCacheVersion;
  const std::uint64_t k = m.dim;
  put(&version, sizeof(version));
  put(&k, sizeof(k));
  put(&key.vocab_hash, sizeof(key.vocab_hash));
  put(&key.embedding_hash, sizeof(key.embedding_hash));
  put(&key.s, sizeof(key.s));
  put(m.values.data(), m.values.size() * sizeof(double));
  if (!out) throw std::runtime_error("short write on rating cache: " + path);
}

// Returns the cached matrix when the file exists and its key matches,
// nullopt otherwise (missing file, stale key, wrong version).
inline std::optional<RatingMatrix> load_rating_cache(const std::string& path,
                                                     const RatingCacheKey& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, detail::kRatingCacheMagic, 4) != 0) return std::nullopt;
  auto get = [&in](void* p, std::size_t n) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    return static_cast<bool>(in);
  };
  std::uint32_t version = 0;
  std::uint64_t k = 0;
  RatingCacheKey stored;
  if (!get(&version, sizeof(version)) || version != detail::kRatingCacheVersion)
    return std::nullopt;
  if (!get(&k, sizeof(k))) return std::nullopt;
  if (!get(&stored.vocab_hash, sizeof(stored.vocab_hash))) return std::nullopt;
  if (!get(&stored.embedding_hash, sizeof(stored.embedding_hash))) return std::nullopt;
  if (!get(&stored.s, sizeof(stored.s))) return std::nullopt;
  if (stored.vocab_hash != key.vocab_hash || stored.embedding_hash != key.embedding_hash ||
      stored.s != key.s) {
    return std::nullopt;
  }
  RatingMatrix m;
  m.dim = static_cast<std::size_t>(k);
  m.values.resize(m.dim * m.dim);
  if (!get(m.values.data(), m.values.size() * sizeof(double))) return std::nullopt;
  return m;
}

}  // namespace synvec

#endif  // SYNVEC_RATING_HPP
