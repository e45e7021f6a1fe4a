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

#ifndef SYNVEC_MECHANISM_HPP
#define SYNVEC_MECHANISM_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "synvec/rating.hpp"
#include "synvec/rng.hpp"
#include "synvec/vectorize.hpp"

namespace synvec {

struct PrivacyParams {
  double epsilon = 0.0;  // per-output-word privacy parameter
  double delta = 1.0;    // rating sensitivity bound; fixed at 1
  std::int64_t n = 150;  // output length shared by all documents in a run

  void validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
      throw std::invalid_argument("epsilon must be positive and finite");
    }
    if (delta != 1.0) {
      throw std::invalid_argument("rating sensitivity delta is fixed at 1");
    }
    if (n < 1) throw std::invalid_argument("output length n must be >= 1");
  }
};

// Synthetic tf vector: integer counts summing to exactly n.
struct SyntheticTfVector {
  std::size_t dim = 0;
  std::map<std::size_t, std::int64_t> counts;
  std::int64_t n = 0;
};

namespace detail {

// Kahan-compensated sum; the row normalizers add up to K terms and the
// bound computations downstream care about 1e-9 tolerances.
class CompensatedSum {
 public:
  void add(double x) {
    const double y = x - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace detail

// Walker/Vose alias table: O(K) construction, O(1) sampling.
class AliasTable {
 public:
  AliasTable() = default;

  explicit AliasTable(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw std::invalid_argument("alias table needs at least one weight");
    detail::CompensatedSum total;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("alias table weights must be finite and >= 0");
      }
      total.add(w);
    }
    if (!(total.value() > 0.0)) {
      throw std::invalid_argument("alias table weights sum to zero");
    }
    prob_.assign(n, 1.0);
    alias_.resize(n);
    for (std::size_t i = 0; i < n; ++i) alias_[i] = static_cast<std::uint32_t>(i);

    std::vector<double> scaled(n);
    const double scale = static_cast<double>(n) / total.value();
    for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * scale;

    std::vector<std::uint32_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const std::uint32_t s = small.back();
      const std::uint32_t l = large.back();
      small.pop_back();
      large.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    // Leftovers in either list are 1 up to rounding.
    for (std::uint32_t i : small) prob_[i] = 1.0;
    for (std::uint32_t i : large) prob_[i] = 1.0;
  }

  std::size_t size() const { return prob_.size(); }

  std::size_t sample(RngStream& rng) const {
    const std::size_t i = static_cast<std::size_t>(uniform_below(rng, prob_.size()));
    return uniform01(rng) < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

// Per-input-term output distributions of the Exponential mechanism:
//   pi[v][w] = exp(eps * rho(v,w) / (2 delta)) / sum_w' exp(eps * rho(v,w') / (2 delta))
//
// Rows are kept in log space: log_pi stays finite for any epsilon, whereas
// the probabilities themselves underflow once eps/2 * (max - min rating)
// exceeds ~700. The privacy accounting reads log_pi; sampling uses per-row
// alias tables built from the (possibly underflowing) linear weights, which
// is harmless since an underflowed weight has negligible mass by definition.
class MechanismTables {
 public:
  MechanismTables() = default;

  std::size_t dim() const { return dim_; }
  double epsilon() const { return params_.epsilon; }
  const PrivacyParams& params() const { return params_; }

  double log_pi(std::size_t v, std::size_t w) const { return log_pi_[v * dim_ + w]; }
  double pi(std::size_t v, std::size_t w) const { return std::exp(log_pi(v, w)); }

  // Dense probability row for input term v.
  std::vector<double> row_distribution(std::size_t v) const {
    std::vector<double> row(dim_);
    for (std::size_t w = 0; w < dim_; ++w) row[w] = pi(v, w);
    return row;
  }

  const AliasTable& sampler(std::size_t v) const { return samplers_[v]; }

  friend MechanismTables build_tables(const RatingMatrix& ratings,
                                      const PrivacyParams& params);

 private:
  std::size_t dim_ = 0;
  PrivacyParams params_;
  std::vector<double> log_pi_;  // row-major K x K
  std::vector<AliasTable> samplers_;
};

// Normalizes each rating row with the max-shift trick: subtract the row
// maximum before exponentiating, accumulate the normalizer, and store
// log pi = (eps/2 delta) (rho - max) - ln Z.
inline MechanismTables build_tables(const RatingMatrix& ratings, const PrivacyParams& params) {
  params.validate();
  const std::size_t k = ratings.dim;
  if (k < 2) throw std::invalid_argument("mechanism needs at least 2 output terms");

  MechanismTables tables;
  tables.dim_ = k;
  tables.params_ = params;
  tables.log_pi_.resize(k * k);
  tables.samplers_.reserve(k);

  const double scale = params.epsilon / (2.0 * params.delta);
  std::vector<double> weights(k);
  for (std::size_t v = 0; v < k; ++v) {
    double row_max = -std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w < k; ++w) row_max = std::max(row_max, ratings.at(v, w));
    detail::CompensatedSum z;
    for (std::size_t w = 0; w < k; ++w) {
      const double shifted = scale * (ratings.at(v, w) - row_max);
      weights[w] = std::exp(shifted);
      z.add(weights[w]);
    }
    if (!std::isfinite(z.value()) || !(z.value() > 0.0)) {
      throw std::runtime_error("non-finite normalizer in mechanism row " + std::to_string(v));
    }
    const double log_z = std::log(z.value());
    for (std::size_t w = 0; w < k; ++w) {
      tables.log_pi_[v * k + w] = scale * (ratings.at(v, w) - row_max) - log_z;
    }
    tables.samplers_.emplace_back(weights);
  }
  return tables;
}

// One Exponential-mechanism draw for input term v.
inline std::size_t sample_term(const MechanismTables& tables, std::size_t v, RngStream& rng) {
  return tables.sampler(v).sample(rng);
}

// Algorithm: n times, draw an input term from the composition vector, then a
// substitute from the Exponential mechanism; count the substitutes.
inline SyntheticTfVector synthesize(const CompositionVector& c, const MechanismTables& tables,
                                    const PrivacyParams& params, RngStream& rng) {
  params.validate();
  if (c.dim != tables.dim()) {
    throw std::invalid_argument("composition vector dim does not match mechanism tables");
  }
  if (c.entries.empty()) {
    throw std::domain_error("empty document: composition vector has no support");
  }

  std::vector<std::size_t> support;
  std::vector<double> probs;
  support.reserve(c.entries.size());
  probs.reserve(c.entries.size());
  for (const auto& [i, p] : c.entries) {
    support.push_back(i);
    probs.push_back(p);
  }
  const AliasTable term_picker(probs);

  SyntheticTfVector s;
  s.dim = c.dim;
  s.n = params.n;
  for (std::int64_t i = 0; i < params.n; ++i) {
    const std::size_t v = support[term_picker.sample(rng)];
    const std::size_t w = sample_term(tables, v, rng);
    s.counts[w] += 1;
  }
  return s;
}

// Exact distribution of a single sample-then-substitute draw:
//   p_w = sum_v c_v * pi[v][w]
inline std::vector<double> output_distribution(const CompositionVector& c,
                                               const MechanismTables& tables) {
  if (c.dim != tables.dim()) {
    throw std::invalid_argument("composition vector dim does not match mechanism tables");
  }
  std::vector<detail::CompensatedSum> acc(tables.dim());
  for (const auto& [v, cv] : c.entries) {
    for (std::size_t w = 0; w < tables.dim(); ++w) acc[w].add(cv * tables.pi(v, w));
  }
  std::vector<double> p(tables.dim());
  for (std::size_t w = 0; w < tables.dim(); ++w) p[w] = acc[w].value();
  return p;
}

// Log pmf of a count vector under multinomial(n, p), via log-gamma:
//   ln n! - sum ln s_w! + sum s_w ln p_w
// Returns -inf when s puts mass on a zero-probability output.
inline double multinomial_log_pmf(const SyntheticTfVector& s, const std::vector<double>& p) {
  if (s.dim != p.size()) {
    throw std::invalid_argument("count vector dim does not match probability vector");
  }
  std::int64_t total = 0;
  double log_pmf = 0.0;
  for (const auto& [w, count] : s.counts) {
    if (count <= 0) throw std::invalid_argument("counts must be positive");
    total += count;
    if (p[w] <= 0.0) return -std::numeric_limits<double>::infinity();
    log_pmf += static_cast<double>(count) * std::log(p[w]) -
               std::lgamma(static_cast<double>(count) + 1.0);
  }
  if (total != s.n) throw std::invalid_argument("counts do not sum to n");
  log_pmf += std::lgamma(static_cast<double>(s.n) + 1.0);
  return log_pmf;
}

}  // namespace synvec

#endif  // SYNVEC_MECHANISM_HPP
