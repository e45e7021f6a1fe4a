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

#ifndef SYNVEC_EVAL_HPP
#define SYNVEC_EVAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "synvec/classify.hpp"
#include "synvec/embeddings.hpp"
#include "synvec/mechanism.hpp"
#include "synvec/rating.hpp"
#include "synvec/rng.hpp"
#include "synvec/vectorize.hpp"
#include "synvec/vocab.hpp"

namespace synvec {

enum class Split { kUnassigned, kTrain, kTest };

struct LabeledDocument {
  std::string id;
  std::string text;
  std::string topic;
  std::string author;
  Split split = Split::kUnassigned;
};

struct LabeledCorpus {
  std::vector<LabeledDocument> documents;
};

struct ScenarioConfig {
  int suspects = 2;      // top-k authors by document count
  bool multi_group = false;  // require authors active in >= 2 topics

  void validate() const {
    if (suspects < 2) throw std::invalid_argument("scenario needs at least 2 suspects");
  }
};

enum class Stage { kOriginal, kVectorized, kSynthetic };

inline const char* to_string(Stage s) {
  switch (s) {
    case Stage::kOriginal: return "original";
    case Stage::kVectorized: return "vectorized";
    case Stage::kSynthetic: return "synthetic";
  }
  return "original";
}

inline Stage stage_from_string(const std::string& s) {
  if (s == "original") return Stage::kOriginal;
  if (s == "vectorized") return Stage::kVectorized;
  if (s == "synthetic") return Stage::kSynthetic;
  throw std::invalid_argument("unknown stage: " + s);
}

struct EvalReport {
  Stage stage = Stage::kOriginal;
  int repetitions = 1;
  ClassificationScores utility;
  ClassificationScores attack;
  // Relative performance against the original-text stage.
  double beta_utility = 0.0;
  double beta_attack = 0.0;
  double gap = 0.0;  // beta_utility - beta_attack
};

struct PipelineConfig {
  VocabOptions vocab_options;
  RatingParams rating_params;
  PrivacyParams privacy_params;
  const EmbeddingTable* embeddings = nullptr;
  // Open variant: attacker trains on vectorized (non-synthetic) train data
  // instead of synthetic reference vectors.
  bool attack_train_on_original = false;
  int repetitions = 10;
  unsigned threads = 1;  // rating matrix construction workers
};

// Pseudo-text from a count vector: each term repeated count times, in
// vocabulary index order, space-separated.
inline std::string reverse_vectorize(const SyntheticTfVector& s, const Vocabulary& vocab) {
  if (s.dim != vocab.size()) {
    throw std::invalid_argument("reverse_vectorize: dim does not match vocabulary");
  }
  std::string out;
  for (const auto& [i, count] : s.counts) {
    for (std::int64_t c = 0; c < count; ++c) {
      if (!out.empty()) out += ' ';
      out += vocab.term(i);
    }
  }
  return out;
}

namespace detail {

// Stratified 60/40 split for documents that arrive unassigned: within each
// (author, topic) group, ordered by id, the first 60% (rounded up) train.
inline void assign_default_splits(LabeledCorpus& corpus) {
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    if (corpus.documents[d].split == Split::kUnassigned) {
      groups[{corpus.documents[d].author, corpus.documents[d].topic}].push_back(d);
    }
  }
  for (auto& [key, indices] : groups) {
    std::sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
      return corpus.documents[a].id < corpus.documents[b].id;
    });
    const std::size_t n_train =
        (indices.size() * 3 + 4) / 5;  // ceil(0.6 * m)
    for (std::size_t r = 0; r < indices.size(); ++r) {
      corpus.documents[indices[r]].split = r < n_train ? Split::kTrain : Split::kTest;
    }
  }
}

inline std::vector<std::size_t> filter_scenario(const LabeledCorpus& corpus,
                                                const ScenarioConfig& scenario) {
  scenario.validate();
  for (const LabeledDocument& doc : corpus.documents) {
    if (doc.topic.empty() || doc.author.empty()) {
      throw std::invalid_argument("document '" + doc.id +
                                  "' lacks a topic or author label required for scenarios");
    }
  }

  std::map<std::string, std::set<std::string>> author_topics;
  std::map<std::string, int> author_docs;
  for (const LabeledDocument& doc : corpus.documents) {
    author_topics[doc.author].insert(doc.topic);
    author_docs[doc.author] += 1;
  }

  std::vector<std::string> candidates;
  for (const auto& [author, topics] : author_topics) {
    if (!scenario.multi_group || topics.size() >= 2) candidates.push_back(author);
  }
  // Rank by document count (descending), name ascending on ties.
  std::sort(candidates.begin(), candidates.end(), [&](const std::string& a, const std::string& b) {
    if (author_docs[a] != author_docs[b]) return author_docs[a] > author_docs[b];
    return a < b;
  });
  if (static_cast<int>(candidates.size()) < 2) {
    throw std::runtime_error("scenario filtering left fewer than 2 suspect authors");
  }
  if (static_cast<int>(candidates.size()) > scenario.suspects) {
    candidates.resize(static_cast<std::size_t>(scenario.suspects));
  }
  const std::set<std::string> suspects(candidates.begin(), candidates.end());

  std::vector<std::size_t> kept;
  std::map<std::string, int> train_count, test_count;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const LabeledDocument& doc = corpus.documents[d];
    if (!suspects.count(doc.author)) continue;
    kept.push_back(d);
    (doc.split == Split::kTrain ? train_count : test_count)[doc.author] += 1;
  }
  for (const std::string& author : suspects) {
    if (train_count[author] < 2 || test_count[author] < 1) {
      throw std::runtime_error("author '" + author + "' has " +
                               std::to_string(train_count[author]) + " train / " +
                               std::to_string(test_count[author]) +
                               " test documents; need >= 2 train and >= 1 test");
    }
  }

  std::set<std::string> train_topics;
  for (std::size_t d : kept) {
    if (corpus.documents[d].split == Split::kTrain) train_topics.insert(corpus.documents[d].topic);
  }
  if (train_topics.size() < 2) {
    throw std::runtime_error("scenario filtering left fewer than 2 topics in the train set");
  }
  return kept;
}

struct TaskScoresPair {
  ClassificationScores utility;
  ClassificationScores attack;
};

// tf-idf over the whole stage corpus, then one MNB per task.
inline TaskScoresPair evaluate_tasks(const std::vector<SparseVector>& train_vectors,
                                     const std::vector<SparseVector>& test_vectors,
                                     const std::vector<std::string>& train_topics,
                                     const std::vector<std::string>& test_topics,
                                     const std::vector<std::string>& train_authors,
                                     const std::vector<std::string>& test_authors) {
  std::vector<SparseVector> all = train_vectors;
  all.insert(all.end(), test_vectors.begin(), test_vectors.end());
  const std::vector<SparseVector> tfidf = tfidf_transform(all);
  const std::vector<SparseVector> train(tfidf.begin(),
                                        tfidf.begin() + static_cast<std::ptrdiff_t>(train_vectors.size()));
  const std::vector<SparseVector> test(tfidf.begin() + static_cast<std::ptrdiff_t>(train_vectors.size()),
                                       tfidf.end());

  TaskScoresPair scores;
  const MNBModel topic_model = train_mnb(train, train_topics);
  scores.utility = f1_macro(predict(topic_model, test), test_topics);
  const MNBModel author_model = train_mnb(train, train_authors);
  scores.attack = f1_macro(predict(author_model, test), test_authors);
  return scores;
}

inline VocabOptions original_text_options() {
  VocabOptions opt;
  opt.morphology = Morphology::kOrth;
  opt.use_synonyms = false;
  opt.stopwords.clear();
  opt.min_token_length = 1;
  opt.remove_numbers = false;
  return opt;
}

}  // namespace detail

// Runs the dual utility/attack pipeline on one scenario and stage.
//
// The scenario filter (top-k suspects, optional multi-topic requirement)
// fixes the working corpus; topic classification runs over all of it, author
// classification over the same documents restricted to the suspect labels.
// The original stage vectorizes raw text with spelling kept as-is, so lexical
// author cues survive; it is also the baseline for the relative scores. The
// synthetic stage repeats synthesis `repetitions` times with master seeds
// master_seed + 0 .. + (repetitions - 1) and reports mean scores.
inline EvalReport run_scenario(const LabeledCorpus& input_corpus,
                               const ScenarioConfig& scenario, Stage stage,
                               const PipelineConfig& config, std::uint64_t master_seed,
                               std::vector<detail::TaskScoresPair>* per_rep = nullptr) {
  LabeledCorpus corpus = input_corpus;
  detail::assign_default_splits(corpus);
  const std::vector<std::size_t> kept = detail::filter_scenario(corpus, scenario);

  std::vector<const LabeledDocument*> train_docs, test_docs;
  for (std::size_t d : kept) {
    (corpus.documents[d].split == Split::kTrain ? train_docs : test_docs)
        .push_back(&corpus.documents[d]);
  }

  auto labels_of = [](const std::vector<const LabeledDocument*>& docs, bool topic) {
    std::vector<std::string> out;
    out.reserve(docs.size());
    for (const LabeledDocument* doc : docs) out.push_back(topic ? doc->topic : doc->author);
    return out;
  };
  const std::vector<std::string> train_topics = labels_of(train_docs, true);
  const std::vector<std::string> test_topics = labels_of(test_docs, true);
  const std::vector<std::string> train_authors = labels_of(train_docs, false);
  const std::vector<std::string> test_authors = labels_of(test_docs, false);

  auto tf_vectors = [](const std::vector<const LabeledDocument*>& docs,
                       const Vocabulary& vocab, const VocabOptions& options) {
    std::vector<SparseVector> out;
    out.reserve(docs.size());
    for (const LabeledDocument* doc : docs) out.push_back(vectorize(doc->text, vocab, options));
    return out;
  };
  auto corpus_texts = [&]() {
    std::vector<std::string> texts;
    texts.reserve(kept.size());
    for (std::size_t d : kept) texts.push_back(corpus.documents[d].text);
    return texts;
  };

  // Baseline: original text, spelling preserved.
  const VocabOptions original_options = detail::original_text_options();
  const Vocabulary original_vocab = build_vocabulary(corpus_texts(), original_options);
  const detail::TaskScoresPair original_scores = detail::evaluate_tasks(
      tf_vectors(train_docs, original_vocab, original_options),
      tf_vectors(test_docs, original_vocab, original_options), train_topics, test_topics,
      train_authors, test_authors);

  EvalReport report;
  report.stage = stage;
  report.repetitions = stage == Stage::kSynthetic ? config.repetitions : 1;

  detail::TaskScoresPair stage_scores;
  if (stage == Stage::kOriginal) {
    stage_scores = original_scores;
    if (per_rep) per_rep->push_back(stage_scores);
  } else {
    Vocabulary vocab = build_vocabulary(corpus_texts(), config.vocab_options);
    if (config.embeddings != nullptr) {
      vocab = trim_vocabulary_to_embeddings(vocab, *config.embeddings);
    }
    const std::vector<SparseVector> train_tf =
        tf_vectors(train_docs, vocab, config.vocab_options);
    const std::vector<SparseVector> test_tf = tf_vectors(test_docs, vocab, config.vocab_options);

    if (stage == Stage::kVectorized) {
      stage_scores = detail::evaluate_tasks(train_tf, test_tf, train_topics, test_topics,
                                            train_authors, test_authors);
      if (per_rep) per_rep->push_back(stage_scores);
    } else {
      if (config.embeddings == nullptr) {
        throw std::invalid_argument("synthetic stage requires an embedding table");
      }
      if (config.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
      const RatingMatrix ratings =
          build_rating_matrix(vocab, *config.embeddings, config.rating_params, config.threads);
      const MechanismTables tables = build_tables(ratings, config.privacy_params);

      auto synthesize_all = [&](const std::vector<const LabeledDocument*>& docs,
                                const std::vector<SparseVector>& tf, std::uint64_t seed) {
        std::vector<SparseVector> out;
        out.reserve(docs.size());
        for (std::size_t d = 0; d < docs.size(); ++d) {
          if (tf[d].entries.empty()) {
            throw std::runtime_error("document '" + docs[d]->id +
                                     "' is empty after vectorization; cannot synthesize");
          }
          RngStream rng = derive_stream(seed, docs[d]->id);
          const SyntheticTfVector s =
              synthesize(to_composition(tf[d]), tables, config.privacy_params, rng);
          SparseVector v;
          v.dim = s.dim;
          for (const auto& [i, count] : s.counts) v.entries[i] = static_cast<double>(count);
          out.push_back(std::move(v));
        }
        return out;
      };

      double f1_u = 0, p_u = 0, r_u = 0, f1_a = 0, p_a = 0, r_a = 0;
      for (int rep = 0; rep < config.repetitions; ++rep) {
        const std::uint64_t seed = master_seed + static_cast<std::uint64_t>(rep);
        const std::vector<SparseVector> syn_train = synthesize_all(train_docs, train_tf, seed);
        const std::vector<SparseVector> syn_test = synthesize_all(test_docs, test_tf, seed);

        const detail::TaskScoresPair utility_scores = detail::evaluate_tasks(
            syn_train, syn_test, train_topics, test_topics, train_authors, test_authors);
        detail::TaskScoresPair rep_scores = utility_scores;
        if (config.attack_train_on_original) {
          // Attacker fits on the vectorized (pre-noise) reference vectors.
          const detail::TaskScoresPair variant = detail::evaluate_tasks(
              train_tf, syn_test, train_topics, test_topics, train_authors, test_authors);
          rep_scores.attack = variant.attack;
        }
        f1_u += rep_scores.utility.f1;
        p_u += rep_scores.utility.precision;
        r_u += rep_scores.utility.recall;
        f1_a += rep_scores.attack.f1;
        p_a += rep_scores.attack.precision;
        r_a += rep_scores.attack.recall;
        if (per_rep) per_rep->push_back(rep_scores);
      }
      const double reps = static_cast<double>(config.repetitions);
      stage_scores.utility = ClassificationScores{f1_u / reps, p_u / reps, r_u / reps};
      stage_scores.attack = ClassificationScores{f1_a / reps, p_a / reps, r_a / reps};
    }
  }

  report.utility = stage_scores.utility;
  report.attack = stage_scores.attack;
  report.beta_utility =
      original_scores.utility.f1 > 0 ? stage_scores.utility.f1 / original_scores.utility.f1 : 0.0;
  report.beta_attack =
      original_scores.attack.f1 > 0 ? stage_scores.attack.f1 / original_scores.attack.f1 : 0.0;
  report.gap = report.beta_utility - report.beta_attack;
  return report;
}

struct GridSpec {
  std::vector<Morphology> morphologies = {Morphology::kLemma};
  std::vector<bool> synonym_flags = {false};
  std::vector<double> s_values = {0.3};
  std::vector<std::int64_t> n_values = {150};
  std::vector<double> epsilons;
};

struct GridPointResult {
  Morphology morphology = Morphology::kLemma;
  bool use_synonyms = false;
  double s = 0.0;
  std::int64_t n = 0;
  double epsilon = 0.0;
  double min_gap = 0.0;  // min over scenarios of beta_utility - beta_attack
  std::vector<EvalReport> per_scenario;
};

struct GridSearchResult {
  GridPointResult best;
  std::vector<GridPointResult> table;
};

// Exhaustive sweep maximizing the minimum utility-attack gap over all attack
// scenarios. Ties prefer larger epsilon (less noise), then the
// lexicographically first parameter tuple in iteration order.
inline GridSearchResult grid_search(const LabeledCorpus& corpus,
                                    const std::vector<ScenarioConfig>& scenarios,
                                    const GridSpec& grid, const PipelineConfig& base_config,
                                    std::uint64_t master_seed) {
  if (scenarios.empty()) throw std::invalid_argument("grid_search: no scenarios");
  if (grid.morphologies.empty() || grid.synonym_flags.empty() || grid.s_values.empty() ||
      grid.n_values.empty() || grid.epsilons.empty()) {
    throw std::invalid_argument("grid_search: empty parameter lattice");
  }

  GridSearchResult result;
  bool have_best = false;
  for (Morphology morphology : grid.morphologies) {
    for (bool use_synonyms : grid.synonym_flags) {
      for (double s : grid.s_values) {
        for (std::int64_t n : grid.n_values) {
          for (double epsilon : grid.epsilons) {
            PipelineConfig config = base_config;
            config.vocab_options.morphology = morphology;
            config.vocab_options.use_synonyms = use_synonyms;
            config.rating_params.s = s;
            config.privacy_params.n = n;
            config.privacy_params.epsilon = epsilon;

            GridPointResult point;
            point.morphology = morphology;
            point.use_synonyms = use_synonyms;
            point.s = s;
            point.n = n;
            point.epsilon = epsilon;
            point.min_gap = std::numeric_limits<double>::infinity();
            for (const ScenarioConfig& scenario : scenarios) {
              const EvalReport report =
                  run_scenario(corpus, scenario, Stage::kSynthetic, config, master_seed);
              point.min_gap = std::min(point.min_gap, report.gap);
              point.per_scenario.push_back(report);
            }
            const bool better =
                !have_best || point.min_gap > result.best.min_gap ||
                (point.min_gap == result.best.min_gap && point.epsilon > result.best.epsilon);
            if (better) {
              result.best = point;
              have_best = true;
            }
            result.table.push_back(std::move(point));
          }
        }
      }
    }
  }
  return result;
}

}  // namespace synvec

#endif  // SYNVEC_EVAL_HPP
