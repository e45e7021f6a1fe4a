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

#ifndef SYNVEC_RNG_HPP
#define SYNVEC_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

#include "synvec/hash.hpp"

namespace synvec {

// mt19937_64 output is fixed by the standard, so sequences are reproducible
// across platforms as long as we do our own value extraction (the standard
// distributions are not pinned down).
using RngStream = std::mt19937_64;

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(RngStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound). Rejection-free modulo is fine here: bound is
// a vocabulary size, far below 2^63, so the bias is immaterial for sampling
// and irrelevant for the privacy analysis (which never touches the RNG).
inline std::uint64_t uniform_below(RngStream& rng, std::uint64_t bound) {
  return rng() % bound;
}

// Derives the per-document stream from the master seed and the document id,
// so corpus-order and thread count cannot affect any document's draws.
inline RngStream derive_stream(std::uint64_t master_seed, std::string_view doc_id) {
  return RngStream(hash_combine(master_seed, fnv1a64(doc_id)));
}

}  // namespace synvec

#endif  // SYNVEC_RNG_HPP
