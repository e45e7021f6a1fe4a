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

#ifndef SYNVEC_EMBEDDINGS_HPP
#define SYNVEC_EMBEDDINGS_HPP

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "synvec/vocab.hpp"

namespace synvec {

// Word vectors, stored unit-normalized so cosine reduces to a dot product.
// Zero-norm vectors are rejected at load time.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool contains(const std::string& term) const { return vectors_.count(term) > 0; }

  void insert_unit(const std::string& term, std::vector<double> unit_vector) {
    vectors_.emplace(term, std::move(unit_vector));
  }

  const std::vector<double>& unit_vector(const std::string& term) const {
    auto it = vectors_.find(term);
    if (it == vectors_.end()) throw std::out_of_range("missing embedding: " + term);
    return it->second;
  }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// Drops vocabulary terms that have no embedding; the mechanism needs a
// rating for every pair, so terms without vectors cannot take part. Dropped
// terms are appended to `dropped` when given.
inline Vocabulary trim_vocabulary_to_embeddings(const Vocabulary& vocab,
                                                const EmbeddingTable& table,
                                                std::vector<std::string>* dropped = nullptr) {
  std::vector<std::string> kept;
  kept.reserve(vocab.size());
  for (const std::string& term : vocab.terms()) {
    if (table.contains(term)) {
      kept.push_back(term);
    } else if (dropped) {
      dropped->push_back(term);
    }
  }
  return Vocabulary::from_terms(std::move(kept));
}

inline double cosine(const std::string& a, const std::string& b,
                     const EmbeddingTable& table) {
  const std::vector<double>& ua = table.unit_vector(a);
  const std::vector<double>& ub = table.unit_vector(b);
  double dot = 0.0;
  for (std::size_t i = 0; i < ua.size(); ++i) dot += ua[i] * ub[i];
  return dot;
}

// Parses "word v1 v2 ... vd" lines, one per word, whitespace-separated UTF-8.
// The dimension is inferred from the first line. Duplicates keep the first
// occurrence; zero-norm vectors are dropped and reported via `warnings`.
// `limit` > 0 reads only the first `limit` lines.
inline EmbeddingTable load_embeddings(const std::string& path, std::size_t limit = 0,
                                      std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embeddings file: " + path);

  EmbeddingTable table;
  std::size_t dim = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (limit > 0 && lineno > limit) break;
    if (line.empty()) continue;

    std::istringstream ss(line);
    std::string word;
    if (!(ss >> word)) {
      throw std::runtime_error("embeddings parse error at line " + std::to_string(lineno) +
                               ": blank entry");
    }
    std::vector<double> vec;
    double value;
    while (ss >> value) vec.push_back(value);
    if (!ss.eof()) {
      throw std::runtime_error("embeddings parse error at line " + std::to_string(lineno) +
                               ": non-numeric component");
    }
    if (vec.empty()) {
      throw std::runtime_error("embeddings parse error at line " + std::to_string(lineno) +
                               ": no vector components");
    }
    if (dim == 0) {
      dim = vec.size();
      table = EmbeddingTable(dim);
    } else if (vec.size() != dim) {
      throw std::runtime_error("embeddings parse error at line " + std::to_string(lineno) +
                               ": expected " + std::to_string(dim) + " components, got " +
                               std::to_string(vec.size()));
    }
    if (table.contains(word)) continue;  // keep first occurrence

    double norm_sq = 0.0;
    for (double x : vec) norm_sq += x * x;
    if (norm_sq == 0.0) {
      if (warnings) {
        warnings->push_back("dropped zero-norm embedding for '" + word + "' at line " +
                            std::to_string(lineno));
      }
      continue;
    }
    const double norm = std::sqrt(norm_sq);
    for (double& x : vec) x /= norm;
    table.insert_unit(word, std::move(vec));
  }
  if (table.size() == 0) {
    throw std::runtime_error("embeddings file is empty: " + path);
  }
  return table;
}

}  // namespace synvec

#endif  // SYNVEC_EMBEDDINGS_HPP
