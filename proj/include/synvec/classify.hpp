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

#ifndef SYNVEC_CLASSIFY_HPP
#define SYNVEC_CLASSIFY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "synvec/vectorize.hpp"

namespace synvec {

struct ClassificationScores {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

// Multinomial naive Bayes with additive smoothing. Class order is the sorted
// label order, which also fixes prediction tie-breaking.
struct MNBModel {
  std::size_t dim = 0;
  double alpha = 0.01;
  std::vector<std::string> classes;
  std::vector<double> class_log_prior;
  // feature_log_likelihood[c][i] = ln((count(c,i) + alpha) / (total_c + alpha * dim))
  std::vector<std::vector<double>> feature_log_likelihood;
};

inline MNBModel train_mnb(const std::vector<SparseVector>& vectors,
                          const std::vector<std::string>& labels, double alpha = 0.01) {
  if (vectors.empty() || vectors.size() != labels.size()) {
    throw std::invalid_argument("train_mnb: need one label per vector");
  }
  if (!(alpha > 0.0)) throw std::invalid_argument("train_mnb: alpha must be positive");

  MNBModel model;
  model.dim = vectors.front().dim;
  model.alpha = alpha;

  std::set<std::string> class_set(labels.begin(), labels.end());
  if (class_set.size() < 2) {
    throw std::invalid_argument("train_mnb: need at least 2 classes, got " +
                                std::to_string(class_set.size()));
  }
  model.classes.assign(class_set.begin(), class_set.end());
  std::map<std::string, std::size_t> class_index;
  for (std::size_t c = 0; c < model.classes.size(); ++c) class_index[model.classes[c]] = c;

  const std::size_t n_classes = model.classes.size();
  std::vector<double> class_count(n_classes, 0.0);
  std::vector<std::vector<double>> feature_count(n_classes,
                                                 std::vector<double>(model.dim, 0.0));
  std::vector<double> total_count(n_classes, 0.0);

  for (std::size_t d = 0; d < vectors.size(); ++d) {
    if (vectors[d].dim != model.dim) {
      throw std::invalid_argument("train_mnb: inconsistent vector dims");
    }
    const std::size_t c = class_index.at(labels[d]);
    class_count[c] += 1.0;
    for (const auto& [i, value] : vectors[d].entries) {
      feature_count[c][i] += value;
      total_count[c] += value;
    }
  }

  model.class_log_prior.resize(n_classes);
  model.feature_log_likelihood.assign(n_classes, std::vector<double>(model.dim, 0.0));
  const double n_docs = static_cast<double>(vectors.size());
  for (std::size_t c = 0; c < n_classes; ++c) {
    model.class_log_prior[c] = std::log(class_count[c] / n_docs);
    const double denom = total_count[c] + alpha * static_cast<double>(model.dim);
    for (std::size_t i = 0; i < model.dim; ++i) {
      model.feature_log_likelihood[c][i] = std::log((feature_count[c][i] + alpha) / denom);
    }
  }
  return model;
}

// Argmax of the class log-posterior; ties resolve to the lowest class index.
inline std::vector<std::string> predict(const MNBModel& model,
                                        const std::vector<SparseVector>& vectors) {
  std::vector<std::string> out;
  out.reserve(vectors.size());
  for (const SparseVector& v : vectors) {
    if (v.dim != model.dim) throw std::invalid_argument("predict: inconsistent vector dim");
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
      double score = model.class_log_prior[c];
      for (const auto& [i, value] : v.entries) {
        score += value * model.feature_log_likelihood[c][i];
      }
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    out.push_back(model.classes[best]);
  }
  return out;
}

// Macro-averaged F1 / precision / recall over the union of observed classes.
// A class with an empty denominator contributes 0 to the mean.
inline ClassificationScores f1_macro(const std::vector<std::string>& predicted,
                                     const std::vector<std::string>& actual) {
  if (predicted.size() != actual.size() || actual.empty()) {
    throw std::invalid_argument("f1_macro: prediction/actual size mismatch");
  }
  std::set<std::string> class_set(actual.begin(), actual.end());
  class_set.insert(predicted.begin(), predicted.end());

  ClassificationScores macro;
  for (const std::string& cls : class_set) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
      const bool is_actual = actual[i] == cls;
      const bool is_predicted = predicted[i] == cls;
      if (is_actual && is_predicted) ++tp;
      if (!is_actual && is_predicted) ++fp;
      if (is_actual && !is_predicted) ++fn;
    }
    const double precision = (tp + fp) > 0 ? tp / (tp + fp) : 0.0;
    const double recall = (tp + fn) > 0 ? tp / (tp + fn) : 0.0;
    const double f1 = (precision + recall) > 0
                          ? 2.0 * precision * recall / (precision + recall)
                          : 0.0;
    macro.precision += precision;
    macro.recall += recall;
    macro.f1 += f1;
  }
  const double n_classes = static_cast<double>(class_set.size());
  macro.precision /= n_classes;
  macro.recall /= n_classes;
  macro.f1 /= n_classes;
  return macro;
}

}  // namespace synvec

#endif  // SYNVEC_CLASSIFY_HPP
