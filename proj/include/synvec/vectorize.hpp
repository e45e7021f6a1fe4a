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

#ifndef SYNVEC_VECTORIZE_HPP
#define SYNVEC_VECTORIZE_HPP

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "synvec/vocab.hpp"

namespace synvec {

// Sparse document vector over a vocabulary of size dim. Zeros are absent;
// stored values are strictly positive.
struct SparseVector {
  std::size_t dim = 0;
  std::map<std::size_t, double> entries;

  double at(std::size_t i) const {
    auto it = entries.find(i);
    return it == entries.end() ? 0.0 : it->second;
  }
  double l1_norm() const {
    double s = 0.0;
    for (const auto& [i, v] : entries) s += v;
    return s;
  }
  double l2_norm() const {
    double s = 0.0;
    for (const auto& [i, v] : entries) s += v * v;
    return std::sqrt(s);
  }
};

// l1-normalized sparse vector; a probability distribution over the vocabulary.
struct CompositionVector {
  std::size_t dim = 0;
  std::map<std::size_t, double> entries;
};

// Term-frequency vector of a document: entry i counts normalized tokens equal
// to vocab term i. Out-of-vocabulary tokens are dropped.
inline SparseVector vectorize(std::string_view doc, const Vocabulary& vocab,
                              const VocabOptions& options) {
  SparseVector v;
  v.dim = vocab.size();
  for (const Token& t : tokenize(doc, options)) {
    std::size_t i = vocab.index_of(t.normalized);
    if (i != Vocabulary::npos) v.entries[i] += 1.0;
  }
  return v;
}

inline CompositionVector to_composition(const SparseVector& v) {
  if (v.entries.empty()) {
    throw std::domain_error("empty document: vector has no support, cannot be anonymized");
  }
  const double norm = v.l1_norm();
  CompositionVector c;
  c.dim = v.dim;
  for (const auto& [i, value] : v.entries) c.entries[i] = value / norm;
  return c;
}

// Smoothed tf-idf with l2 row normalization:
//   value(d,i) = tf(d,i) * (ln((1+N)/(1+df_i)) + 1)
// All-zero documents pass through unchanged.
inline std::vector<SparseVector> tfidf_transform(const std::vector<SparseVector>& corpus) {
  if (corpus.empty()) throw std::invalid_argument("tfidf_transform: empty corpus");
  const std::size_t dim = corpus.front().dim;
  std::vector<std::size_t> df(dim, 0);
  for (const SparseVector& v : corpus) {
    if (v.dim != dim) throw std::invalid_argument("tfidf_transform: inconsistent dims");
    for (const auto& [i, value] : v.entries) ++df[i];
  }
  const double n_docs = static_cast<double>(corpus.size());
  std::vector<double> idf(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    idf[i] = std::log((1.0 + n_docs) / (1.0 + static_cast<double>(df[i]))) + 1.0;
  }

  std::vector<SparseVector> out;
  out.reserve(corpus.size());
  for (const SparseVector& v : corpus) {
    SparseVector w;
    w.dim = dim;
    for (const auto& [i, value] : v.entries) w.entries[i] = value * idf[i];
    const double norm = w.l2_norm();
    if (norm > 0.0) {
      for (auto& [i, value] : w.entries) value /= norm;
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace synvec

#endif  // SYNVEC_VECTORIZE_HPP
