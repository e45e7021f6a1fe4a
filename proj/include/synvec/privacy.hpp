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

#ifndef SYNVEC_PRIVACY_HPP
#define SYNVEC_PRIVACY_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "synvec/mechanism.hpp"

namespace synvec {

// ln(e^a + e^b) without overflow.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// Sequential composition over the n output words: the loss of the whole run
// is n times the per-word loss.
inline double standard_loss(const PrivacyParams& params) {
  params.validate();
  return params.epsilon * static_cast<double>(params.n);
}

// Shrink factor of the alternative per-word bound:
//   eta(eps_bar, L) = (e^{-eps_bar/2} + L - 1) / (e^{eps_bar/2} + L - 1)
// Evaluated in log space so large eps_bar cannot overflow the exponentials.
inline double log_eta(double epsilon_bar, std::int64_t output_space_size) {
  if (epsilon_bar < 0.0 || !std::isfinite(epsilon_bar)) {
    throw std::invalid_argument("epsilon_bar must be finite and >= 0");
  }
  if (output_space_size < 2) {
    throw std::invalid_argument("output space size must be >= 2");
  }
  const double log_l_minus_1 = std::log(static_cast<double>(output_space_size - 1));
  return log_add_exp(-epsilon_bar / 2.0, log_l_minus_1) -
         log_add_exp(epsilon_bar / 2.0, log_l_minus_1);
}

// eta itself; in (0, 1], equal to 1 exactly when epsilon_bar = 0. Underflows
// to 0 only for eps_bar beyond ~1420; use log_eta for accounting.
inline double eta(double epsilon_bar, std::int64_t output_space_size) {
  return std::exp(log_eta(epsilon_bar, output_space_size));
}

// Alternative total bound (eps + ln eta(eps, K)) * n. Valid here because the
// rating function is symmetric and all inputs are adjacent, which makes the
// cross-output spread equal the sensitivity, so eps_bar = eps.
inline double improved_loss(const PrivacyParams& params, std::int64_t vocab_size) {
  params.validate();
  if (vocab_size < 2) throw std::invalid_argument("vocab size must be >= 2");
  return (params.epsilon + log_eta(params.epsilon, vocab_size)) *
         static_cast<double>(params.n);
}

// Two single-word documents realizing the tight per-word loss: input v_max
// versus input v_min, observed at output w.
struct TightLossWitness {
  std::size_t v_max = 0;
  std::size_t v_min = 0;
  std::size_t w = 0;
};

struct TightLoss {
  double per_word = 0.0;
  TightLossWitness witness;
};

// Exact per-output-word privacy loss of the Exponential mechanism:
//   l = max_w ln( max_v pi[v][w] / min_v pi[v][w] )
// Computed from log_pi, so it is exact even where pi underflows. Ties go to
// the lowest output index, then the lowest max/min input indices.
inline TightLoss tight_loss(const MechanismTables& tables) {
  const std::size_t k = tables.dim();
  TightLoss best;
  best.per_word = -std::numeric_limits<double>::infinity();
  for (std::size_t w = 0; w < k; ++w) {
    std::size_t v_max = 0, v_min = 0;
    double hi = tables.log_pi(0, w), lo = tables.log_pi(0, w);
    for (std::size_t v = 1; v < k; ++v) {
      const double x = tables.log_pi(v, w);
      if (x > hi) {
        hi = x;
        v_max = v;
      }
      if (x < lo) {
        lo = x;
        v_min = v;
      }
    }
    const double loss = hi - lo;
    if (loss > best.per_word) {
      best.per_word = loss;
      best.witness = TightLossWitness{v_max, v_min, w};
    }
  }
  return best;
}

struct UtilityBoundInput {
  std::vector<double> ratings_for_x;  // rho(x, .) over the whole output space
  double tau = 0.0;
  double epsilon = 0.0;
  double delta = 1.0;
};

struct UtilityBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::int64_t t_size = 0;
};

// Bounds on Pr[Em(x) in T] for T = {w : rho(x,w) >= tau}:
//   |T| / (|T| + |T_bar| e^{-eps c / (2 delta)})      <= Pr <=
//   |T| / (|T| + |T_bar| e^{-eps spread / (2 delta)})
// with c the gap between tau and the best rating outside T, and spread the
// max-minus-min rating for x. Both bounds are 1 when T covers everything.
inline UtilityBounds utility_bounds(const UtilityBoundInput& input) {
  if (input.ratings_for_x.empty()) {
    throw std::invalid_argument("utility_bounds: empty rating vector");
  }
  if (!(input.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(input.delta > 0.0)) throw std::invalid_argument("delta must be positive");

  double max_rating = input.ratings_for_x.front();
  double min_rating = input.ratings_for_x.front();
  for (double r : input.ratings_for_x) {
    max_rating = std::max(max_rating, r);
    min_rating = std::min(min_rating, r);
  }
  if (input.tau < min_rating || input.tau > max_rating) {
    throw std::invalid_argument("tau must lie within the rating range");
  }

  std::int64_t t_size = 0;
  double best_outside = -std::numeric_limits<double>::infinity();
  for (double r : input.ratings_for_x) {
    if (r >= input.tau) {
      ++t_size;
    } else {
      best_outside = std::max(best_outside, r);
    }
  }
  if (t_size == 0) throw std::invalid_argument("tau above max rating: T is empty");

  const auto z_size = static_cast<std::int64_t>(input.ratings_for_x.size());
  const std::int64_t t_bar = z_size - t_size;
  if (t_bar == 0) return UtilityBounds{1.0, 1.0, t_size};

  const double t = static_cast<double>(t_size);
  const double tb = static_cast<double>(t_bar);
  const double c = input.tau - best_outside;
  const double spread = max_rating - min_rating;
  const double lower = t / (t + tb * std::exp(-input.epsilon * c / (2.0 * input.delta)));
  const double upper = t / (t + tb * std::exp(-input.epsilon * spread / (2.0 * input.delta)));
  return UtilityBounds{lower, upper, t_size};
}

struct EpsilonConditions {
  double necessary = 0.0;
  double sufficient = 0.0;
};

// Smallest epsilon that can / does achieve Pr[Em(x) in T] >= p:
//   necessary:  (2 delta / spread) ln(p/(1-p) * |T_bar|/|T|)
//   sufficient: (2 delta / c)      ln(p/(1-p) * |T_bar|/|T|)
inline EpsilonConditions epsilon_conditions(double p, std::int64_t t_size,
                                            std::int64_t z_size, double delta,
                                            double delta_bar, double c) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must be in (0, 1)");
  if (t_size < 1 || t_size >= z_size) {
    throw std::invalid_argument("need 1 <= |T| < |Z|");
  }
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(delta_bar > 0.0)) throw std::invalid_argument("delta_bar must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  const double t_bar = static_cast<double>(z_size - t_size);
  const double log_term = std::log(p / (1.0 - p) * t_bar / static_cast<double>(t_size));
  return EpsilonConditions{2.0 * delta / delta_bar * log_term, 2.0 * delta / c * log_term};
}

// Everything the accountant knows about a configured mechanism. Loss figures
// are reported both per output word and for the whole n-word output; the two
// get conflated easily, and the gap is a factor of n.
struct PrivacyReport {
  double epsilon = 0.0;
  std::int64_t n = 0;
  std::int64_t vocab_size = 0;
  double standard_loss_per_word = 0.0;
  double standard_loss_total = 0.0;
  double eta = 0.0;
  double log_eta = 0.0;
  double improved_loss_per_word = 0.0;
  double improved_loss_total = 0.0;
  double tight_loss_per_word = 0.0;
  double tight_loss_total = 0.0;
  TightLossWitness witness;
};

inline PrivacyReport make_privacy_report(const MechanismTables& tables) {
  const PrivacyParams& params = tables.params();
  const auto k = static_cast<std::int64_t>(tables.dim());
  PrivacyReport report;
  report.epsilon = params.epsilon;
  report.n = params.n;
  report.vocab_size = k;
  report.standard_loss_per_word = params.epsilon;
  report.standard_loss_total = standard_loss(params);
  report.log_eta = log_eta(params.epsilon, k);
  report.eta = std::exp(report.log_eta);
  report.improved_loss_per_word = params.epsilon + report.log_eta;
  report.improved_loss_total = improved_loss(params, k);
  const TightLoss tight = tight_loss(tables);
  report.tight_loss_per_word = tight.per_word;
  report.tight_loss_total = tight.per_word * static_cast<double>(params.n);
  report.witness = tight.witness;
  return report;
}

struct BoundCurvePoint {
  double epsilon = 0.0;
  std::int64_t output_space_size = 0;
  double standard = 0.0;  // per-word standard bound: epsilon itself
  double improved = 0.0;  // per-word alternative bound: epsilon + ln eta
};

// Grid of per-word bounds over epsilon for each output space size.
inline std::vector<BoundCurvePoint> bound_curves(const std::vector<std::int64_t>& sizes,
                                                 double epsilon_max, double epsilon_step) {
  if (!(epsilon_step > 0.0) || !(epsilon_max >= 0.0)) {
    throw std::invalid_argument("bound_curves: need epsilon_max >= 0 and step > 0");
  }
  std::vector<BoundCurvePoint> points;
  for (std::int64_t l : sizes) {
    if (l < 2) throw std::invalid_argument("output space size must be >= 2");
    for (std::int64_t step = 0;; ++step) {
      const double eps = static_cast<double>(step) * epsilon_step;
      if (eps > epsilon_max + 1e-12) break;
      points.push_back(BoundCurvePoint{eps, l, eps, eps + log_eta(eps, l)});
    }
  }
  return points;
}

}  // namespace synvec

#endif  // SYNVEC_PRIVACY_HPP
