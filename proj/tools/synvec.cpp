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
//
// Command line front end: anonymize corpora into differentially private
// synthetic term-frequency vectors, account for the privacy loss, and run
// the utility-vs-attack evaluation harness.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "synvec/eval.hpp"
#include "synvec/io.hpp"
#include "synvec/mechanism.hpp"
#include "synvec/privacy.hpp"
#include "synvec/rating.hpp"

namespace {

using synvec::json;

constexpr std::size_t kVocabSizeWarnThreshold = 50000;

struct VocabFlags {
  std::string corpus_path;
  std::string vocab_path;
  std::string morphology = "lemma";
  bool use_synonyms = false;
  std::string synonym_table_path;
  std::string lemma_dict_path;
  std::string stopword_path;
  int min_token_length = 2;
  bool keep_numbers = false;

  void add_to(CLI::App* cmd, bool corpus_required) {
    auto* corpus = cmd->add_option("--corpus", corpus_path, "corpus JSONL file");
    if (corpus_required) corpus->required();
    cmd->add_option("--vocab", vocab_path, "vocabulary file (term per line)");
    cmd->add_option("--morphology", morphology, "lemma|lower|orth")
        ->check(CLI::IsMember({"lemma", "lower", "orth"}))
        ->capture_default_str();
    cmd->add_flag("--synonyms", use_synonyms, "extend the vocabulary with synonyms");
    cmd->add_option("--synonym-table", synonym_table_path,
                    "synonym table (term<TAB>syn,syn per line)");
    cmd->add_option("--lemma-dict", lemma_dict_path,
                    "lemma dictionary (surface<TAB>lemma per line)");
    cmd->add_option("--stopwords", stopword_path,
                    "stopword file overriding the built-in list");
    cmd->add_option("--min-token-length", min_token_length, "shortest kept token")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--keep-numbers", keep_numbers, "keep purely numeric tokens");
  }

  synvec::VocabOptions to_options() const {
    if (use_synonyms && synonym_table_path.empty()) {
      throw std::runtime_error("--synonyms requires --synonym-table");
    }
    synvec::VocabOptions opt;
    opt.morphology = synvec::morphology_from_string(morphology);
    opt.use_synonyms = use_synonyms;
    opt.min_token_length = min_token_length;
    opt.remove_numbers = !keep_numbers;
    if (!stopword_path.empty()) opt.stopwords = synvec::load_stopwords(stopword_path);
    if (!lemma_dict_path.empty()) opt.lemmas = synvec::load_lemma_dictionary(lemma_dict_path);
    if (!synonym_table_path.empty()) {
      opt.synonyms = synvec::load_synonym_table(synonym_table_path);
    }
    return opt;
  }

  json echo() const {
    return json{{"corpus", corpus_path},
                {"vocab", vocab_path},
                {"morphology", morphology},
                {"synonyms", use_synonyms},
                {"synonym_table", synonym_table_path},
                {"lemma_dict", lemma_dict_path},
                {"stopwords", stopword_path},
                {"min_token_length", min_token_length},
                {"keep_numbers", keep_numbers}};
  }
};

struct SeedFlag {
  std::uint64_t seed = 0;
  CLI::Option* option = nullptr;

  void add_to(CLI::App* cmd) {
    option = cmd->add_option("--seed", seed, "master seed (64-bit unsigned)");
  }

  // Randomized runs must be auditable: without an explicit seed, generate
  // one and print it so the run can be replayed.
  std::uint64_t resolve() {
    if (option == nullptr || option->count() == 0) {
      std::random_device rd;
      seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
      std::cerr << "generated master seed: " << seed << "\n";
    }
    return seed;
  }
};

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write output file: " + path);
  return file;
}

synvec::Vocabulary resolve_vocabulary(const VocabFlags& flags,
                                      const synvec::VocabOptions& options,
                                      const synvec::LabeledCorpus* corpus) {
  if (!flags.vocab_path.empty()) return synvec::load_vocabulary(flags.vocab_path);
  if (corpus == nullptr) {
    throw std::runtime_error("need either --vocab or --corpus to obtain a vocabulary");
  }
  std::vector<std::string> texts;
  texts.reserve(corpus->documents.size());
  for (const synvec::LabeledDocument& doc : corpus->documents) texts.push_back(doc.text);
  return synvec::build_vocabulary(texts, options);
}

synvec::RatingMatrix obtain_rating_matrix(const synvec::Vocabulary& vocab,
                                          const synvec::EmbeddingTable& table,
                                          const synvec::RatingParams& params,
                                          const std::string& cache_path,
                                          const std::string& embeddings_path,
                                          unsigned threads) {
  if (auto warning = params.validate()) std::cerr << "warning: " << *warning << "\n";
  if (vocab.size() > kVocabSizeWarnThreshold) {
    std::cerr << "warning: vocabulary has " << vocab.size() << " terms; the dense "
              << "rating matrix needs " << vocab.size() * vocab.size() * 8 / (1 << 20)
              << " MiB\n";
  }
  if (cache_path.empty()) return build_rating_matrix(vocab, table, params, threads);

  const synvec::RatingCacheKey key{synvec::vocabulary_hash(vocab),
                                   synvec::hash_file_bytes(embeddings_path), params.s};
  if (auto cached = synvec::load_rating_cache(cache_path, key)) {
    std::cerr << "rating cache hit: " << cache_path << "\n";
    return std::move(*cached);
  }
  synvec::RatingMatrix m = build_rating_matrix(vocab, table, params, threads);
  synvec::save_rating_cache(cache_path, m, key);
  return m;
}

std::vector<synvec::ScenarioConfig> parse_scenarios(const std::vector<std::string>& specs,
                                                    int suspects, bool multi_group) {
  std::vector<synvec::ScenarioConfig> scenarios;
  for (const std::string& spec : specs) {
    const auto slash = spec.find('/');
    const std::string count = slash == std::string::npos ? "" : spec.substr(0, slash);
    if (count.empty() ||
        count.find_first_not_of("0123456789") != std::string::npos) {
      throw std::runtime_error("scenario must look like '5/any' or '10/multi', got: " + spec);
    }
    synvec::ScenarioConfig scenario;
    scenario.suspects = std::stoi(count);
    const std::string group = spec.substr(slash + 1);
    if (group == "any") {
      scenario.multi_group = false;
    } else if (group == "multi") {
      scenario.multi_group = true;
    } else {
      throw std::runtime_error("scenario group must be 'any' or 'multi', got: " + group);
    }
    scenarios.push_back(scenario);
  }
  if (scenarios.empty()) scenarios.push_back(synvec::ScenarioConfig{suspects, multi_group});
  return scenarios;
}

// --- subcommand: build-vocab ---

struct BuildVocabArgs {
  VocabFlags vocab;
  std::string embeddings_path;
  std::size_t embedding_limit = 0;
  std::string output_path;
};

int run_build_vocab(const BuildVocabArgs& args) {
  const synvec::VocabOptions options = args.vocab.to_options();
  const synvec::LabeledCorpus corpus = synvec::read_corpus_jsonl(args.vocab.corpus_path);
  synvec::Vocabulary vocabulary = resolve_vocabulary(args.vocab, options, &corpus);

  std::vector<std::string> dropped;
  if (!args.embeddings_path.empty()) {
    std::vector<std::string> warnings;
    const synvec::EmbeddingTable table =
        synvec::load_embeddings(args.embeddings_path, args.embedding_limit, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    vocabulary = synvec::trim_vocabulary_to_embeddings(vocabulary, table, &dropped);
  }
  synvec::save_vocabulary(vocabulary, args.output_path);

  json stats;
  stats["config"] = args.vocab.echo();
  stats["config"]["embeddings"] = args.embeddings_path;
  stats["config"]["output"] = args.output_path;
  stats["k"] = vocabulary.size();
  stats["dropped_oov_embedding_terms"] = dropped;
  std::cout << stats.dump() << "\n";
  return 0;
}

// --- subcommand: synthesize ---

struct SynthesizeArgs {
  VocabFlags vocab;
  std::string embeddings_path;
  std::size_t embedding_limit = 0;
  double bigram_factor = 0.3;
  double epsilon = 47.5;
  std::int64_t n = 150;
  std::string compose_from = "tf";
  SeedFlag seed;
  std::string output_path;
  std::string report_path;
  std::string rating_cache_path;
  bool skip_empty = false;
  unsigned threads = 1;
};

int run_synthesize(SynthesizeArgs& args) {
  const std::uint64_t master_seed = args.seed.resolve();
  const synvec::VocabOptions options = args.vocab.to_options();
  const synvec::LabeledCorpus corpus = synvec::read_corpus_jsonl(args.vocab.corpus_path);

  std::vector<std::string> warnings;
  const synvec::EmbeddingTable table =
      synvec::load_embeddings(args.embeddings_path, args.embedding_limit, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

  synvec::Vocabulary vocabulary = resolve_vocabulary(args.vocab, options, &corpus);
  std::vector<std::string> dropped;
  vocabulary = synvec::trim_vocabulary_to_embeddings(vocabulary, table, &dropped);
  if (!dropped.empty()) {
    std::cerr << "dropped " << dropped.size() << " vocabulary term(s) without embeddings:";
    for (const std::string& term : dropped) std::cerr << " " << term;
    std::cerr << "\n";
  }

  const synvec::RatingParams rating_params{args.bigram_factor};
  const synvec::PrivacyParams privacy_params{args.epsilon, 1.0, args.n};
  privacy_params.validate();
  const synvec::RatingMatrix ratings =
      obtain_rating_matrix(vocabulary, table, rating_params, args.rating_cache_path,
                           args.embeddings_path, args.threads);
  const synvec::MechanismTables tables = build_tables(ratings, privacy_params);

  // Composition vectors come from plain tf by default; --compose-from tfidf
  // weighs them across the corpus first.
  std::vector<synvec::SparseVector> doc_vectors;
  doc_vectors.reserve(corpus.documents.size());
  for (const synvec::LabeledDocument& doc : corpus.documents) {
    doc_vectors.push_back(synvec::vectorize(doc.text, vocabulary, options));
  }
  if (args.compose_from == "tfidf") {
    doc_vectors = synvec::tfidf_transform(doc_vectors);
  }

  // Documents are synthesized in parallel into per-document slots; the draw
  // streams depend only on (master seed, document id), so the result is the
  // same for any thread count.
  const std::size_t n_docs = corpus.documents.size();
  std::vector<std::optional<synvec::SyntheticTfVector>> synthesized(n_docs);
  auto synthesize_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t d = begin; d < end; ++d) {
      if (doc_vectors[d].entries.empty()) continue;
      synvec::RngStream rng = synvec::derive_stream(master_seed, corpus.documents[d].id);
      synthesized[d] = synvec::synthesize(synvec::to_composition(doc_vectors[d]), tables,
                                          privacy_params, rng);
    }
  };
  unsigned threads = args.threads == 0
                         ? std::max(1u, std::thread::hardware_concurrency())
                         : args.threads;
  if (threads <= 1 || n_docs < 2 * threads) {
    synthesize_range(0, n_docs);
  } else {
    std::vector<std::thread> workers;
    const std::size_t chunk = (n_docs + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n_docs, begin + chunk);
      if (begin >= end) break;
      workers.emplace_back(synthesize_range, begin, end);
    }
    for (std::thread& w : workers) w.join();
  }

  std::vector<synvec::VectorRecord> records;
  std::vector<std::string> empty_docs;
  for (std::size_t d = 0; d < n_docs; ++d) {
    if (!synthesized[d]) {
      empty_docs.push_back(corpus.documents[d].id);
      continue;
    }
    const synvec::SyntheticTfVector& s = *synthesized[d];
    synvec::VectorRecord rec;
    rec.id = corpus.documents[d].id;
    rec.vector.dim = s.dim;
    for (const auto& [i, count] : s.counts) rec.vector.entries[i] = static_cast<double>(count);
    rec.n = s.n;
    rec.epsilon = args.epsilon;
    records.push_back(std::move(rec));
  }
  if (!empty_docs.empty() && !args.skip_empty) {
    json err;
    err["empty_documents"] = empty_docs;
    throw std::runtime_error(
        "refusing to anonymize: " + std::to_string(empty_docs.size()) +
        " document(s) have no in-vocabulary tokens (rerun with --skip-empty to drop them): " +
        err["empty_documents"].dump());
  }
  if (!empty_docs.empty()) {
    std::cerr << "skipped " << empty_docs.size() << " empty document(s):";
    for (const std::string& id : empty_docs) std::cerr << " " << id;
    std::cerr << "\n";
  }

  json config = args.vocab.echo();
  config["embeddings"] = args.embeddings_path;
  config["bigram_factor"] = args.bigram_factor;
  config["epsilon"] = args.epsilon;
  config["n"] = args.n;
  config["compose_from"] = args.compose_from;
  config["seed"] = master_seed;
  config["skip_empty"] = args.skip_empty;
  config["threads"] = args.threads;
  config["output"] = args.output_path;

  std::ofstream out_file;
  std::ostream& out = open_output(out_file, args.output_path);
  synvec::write_vector_records(out, records, &config);

  synvec::PrivacyReport report = synvec::make_privacy_report(tables);
  json report_json = synvec::to_json(report);
  report_json["config"] = config;
  report_json["witness"]["v_max_term"] = vocabulary.term(report.witness.v_max);
  report_json["witness"]["v_min_term"] = vocabulary.term(report.witness.v_min);
  report_json["witness"]["w_term"] = vocabulary.term(report.witness.w);
  report_json["documents_written"] = records.size();
  if (args.report_path.empty()) {
    std::cerr << report_json.dump() << "\n";
  } else {
    std::ofstream report_file(args.report_path, std::ios::binary);
    if (!report_file) throw std::runtime_error("cannot write report: " + args.report_path);
    report_file << report_json.dump(2) << "\n";
  }
  return 0;
}

// --- subcommand: privacy-report ---

struct PrivacyReportArgs {
  VocabFlags vocab;
  std::string embeddings_path;
  std::size_t embedding_limit = 0;
  double bigram_factor = 0.3;
  double epsilon = 47.5;
  std::int64_t n = 150;
  std::string rating_cache_path;
  std::string output_path;
  double utility_tau = -1.0;
  std::string utility_term;
  unsigned threads = 1;
};

int run_privacy_report(const PrivacyReportArgs& args) {
  const synvec::VocabOptions options = args.vocab.to_options();
  std::optional<synvec::LabeledCorpus> corpus;
  if (!args.vocab.corpus_path.empty()) {
    corpus = synvec::read_corpus_jsonl(args.vocab.corpus_path);
  }
  const synvec::EmbeddingTable table =
      synvec::load_embeddings(args.embeddings_path, args.embedding_limit);
  synvec::Vocabulary vocabulary =
      resolve_vocabulary(args.vocab, options, corpus ? &*corpus : nullptr);
  vocabulary = synvec::trim_vocabulary_to_embeddings(vocabulary, table);

  const synvec::RatingParams rating_params{args.bigram_factor};
  const synvec::PrivacyParams privacy_params{args.epsilon, 1.0, args.n};
  privacy_params.validate();
  const synvec::RatingMatrix ratings =
      obtain_rating_matrix(vocabulary, table, rating_params, args.rating_cache_path,
                           args.embeddings_path, args.threads);
  const synvec::MechanismTables tables = build_tables(ratings, privacy_params);

  synvec::PrivacyReport report = synvec::make_privacy_report(tables);
  json out = synvec::to_json(report);
  out["witness"]["v_max_term"] = vocabulary.term(report.witness.v_max);
  out["witness"]["v_min_term"] = vocabulary.term(report.witness.v_min);
  out["witness"]["w_term"] = vocabulary.term(report.witness.w);

  json config = args.vocab.echo();
  config["embeddings"] = args.embeddings_path;
  config["bigram_factor"] = args.bigram_factor;
  config["epsilon"] = args.epsilon;
  config["n"] = args.n;
  out["config"] = config;

  // Optional utility-bound diagnostics for one input term at threshold tau.
  if (args.utility_tau >= 0.0) {
    if (args.utility_term.empty()) {
      throw std::runtime_error("--utility-tau needs --utility-term");
    }
    const std::size_t x = vocabulary.index_of(args.utility_term);
    if (x == synvec::Vocabulary::npos) {
      throw std::runtime_error("utility term not in vocabulary: " + args.utility_term);
    }
    synvec::UtilityBoundInput input;
    input.ratings_for_x.resize(ratings.dim);
    for (std::size_t w = 0; w < ratings.dim; ++w) input.ratings_for_x[w] = ratings.at(x, w);
    input.tau = args.utility_tau;
    input.epsilon = args.epsilon;
    const synvec::UtilityBounds bounds = synvec::utility_bounds(input);
    double exact = 0.0;
    for (std::size_t w = 0; w < ratings.dim; ++w) {
      if (ratings.at(x, w) >= args.utility_tau) exact += tables.pi(x, w);
    }
    out["utility_bounds"] = {{"term", args.utility_term},
                             {"tau", args.utility_tau},
                             {"t_size", bounds.t_size},
                             {"lower", bounds.lower},
                             {"upper", bounds.upper},
                             {"exact", exact}};
  }

  std::ofstream out_file;
  std::ostream& os = open_output(out_file, args.output_path);
  os << out.dump(2) << "\n";
  return 0;
}

// --- subcommand: bound-curves ---

struct BoundCurvesArgs {
  std::vector<std::int64_t> l_values = {2, 100, 30000};
  double epsilon_max = 50.0;
  double epsilon_step = 0.5;
  std::string output_path;
};

int run_bound_curves(const BoundCurvesArgs& args) {
  const std::vector<synvec::BoundCurvePoint> points =
      synvec::bound_curves(args.l_values, args.epsilon_max, args.epsilon_step);

  json config = {{"l_values", args.l_values},
                 {"epsilon_max", args.epsilon_max},
                 {"epsilon_step", args.epsilon_step},
                 {"output", args.output_path}};

  std::ofstream out_file;
  std::ostream& os = open_output(out_file, args.output_path);
  os << "# config: " << config.dump() << "\n";
  os << "epsilon,L,standard,improved\n";
  std::ostringstream line;
  line.precision(17);
  for (const synvec::BoundCurvePoint& pt : points) {
    line.str("");
    line << pt.epsilon << ',' << pt.output_space_size << ',' << pt.standard << ','
         << pt.improved << '\n';
    os << line.str();
  }
  return 0;
}

// --- subcommand: evaluate ---

struct EvaluateArgs {
  VocabFlags vocab;
  std::string embeddings_path;
  std::size_t embedding_limit = 0;
  std::string stage = "synthetic";
  int suspects = 5;
  bool multi_group = false;
  std::vector<std::string> scenario_specs;
  double bigram_factor = 0.3;
  double epsilon = 47.5;
  std::int64_t n = 150;
  int repetitions = 10;
  bool attack_train_on_original = false;
  unsigned threads = 1;
  SeedFlag seed;
  std::string output_path;
  std::string runs_csv_path;
  // grid mode
  std::vector<double> grid_epsilons;
  std::vector<double> grid_s;
  std::vector<std::int64_t> grid_n;
  std::vector<std::string> grid_morphologies;
  bool grid_synonyms_both = false;
  std::string grid_csv_path;
};

json eval_config_echo(const EvaluateArgs& args, std::uint64_t master_seed) {
  json config = args.vocab.echo();
  config["embeddings"] = args.embeddings_path;
  config["stage"] = args.stage;
  config["bigram_factor"] = args.bigram_factor;
  config["epsilon"] = args.epsilon;
  config["n"] = args.n;
  config["repetitions"] = args.repetitions;
  config["attack_train_on_original"] = args.attack_train_on_original;
  config["seed"] = master_seed;
  return config;
}

int run_evaluate(EvaluateArgs& args) {
  const std::uint64_t master_seed = args.seed.resolve();
  const synvec::LabeledCorpus corpus = synvec::read_corpus_jsonl(args.vocab.corpus_path);
  const synvec::Stage stage = synvec::stage_from_string(args.stage);

  std::optional<synvec::EmbeddingTable> table;
  if (!args.embeddings_path.empty()) {
    table = synvec::load_embeddings(args.embeddings_path, args.embedding_limit);
  }

  synvec::PipelineConfig config;
  config.vocab_options = args.vocab.to_options();
  config.rating_params.s = args.bigram_factor;
  config.privacy_params = synvec::PrivacyParams{args.epsilon, 1.0, args.n};
  config.embeddings = table ? &*table : nullptr;
  config.attack_train_on_original = args.attack_train_on_original;
  config.repetitions = args.repetitions;
  config.threads = args.threads;

  const std::vector<synvec::ScenarioConfig> scenarios =
      parse_scenarios(args.scenario_specs, args.suspects, args.multi_group);

  const bool grid_mode = !args.grid_epsilons.empty();
  std::ofstream out_file;
  std::ostream& os = open_output(out_file, args.output_path);

  if (!grid_mode) {
    json out;
    out["config"] = eval_config_echo(args, master_seed);
    json reports = json::array();
    std::ofstream runs_csv;
    if (!args.runs_csv_path.empty()) {
      runs_csv.open(args.runs_csv_path, std::ios::binary);
      if (!runs_csv) throw std::runtime_error("cannot write CSV: " + args.runs_csv_path);
      runs_csv << "scenario,stage,rep,task,f1,precision,recall\n";
    }
    for (const synvec::ScenarioConfig& scenario : scenarios) {
      std::vector<synvec::detail::TaskScoresPair> per_rep;
      const synvec::EvalReport report = synvec::run_scenario(
          corpus, scenario, stage, config, master_seed, runs_csv.is_open() ? &per_rep : nullptr);
      json entry = synvec::to_json(report);
      entry["scenario"] = {{"suspects", scenario.suspects},
                           {"multi_group", scenario.multi_group}};
      reports.push_back(std::move(entry));
      if (runs_csv.is_open()) {
        const std::string scen = std::to_string(scenario.suspects) + "/" +
                                 (scenario.multi_group ? "multi" : "any");
        for (std::size_t rep = 0; rep < per_rep.size(); ++rep) {
          runs_csv << scen << ',' << args.stage << ',' << rep << ",utility,"
                   << per_rep[rep].utility.f1 << ',' << per_rep[rep].utility.precision << ','
                   << per_rep[rep].utility.recall << "\n";
          runs_csv << scen << ',' << args.stage << ',' << rep << ",attack,"
                   << per_rep[rep].attack.f1 << ',' << per_rep[rep].attack.precision << ','
                   << per_rep[rep].attack.recall << "\n";
        }
      }
    }
    out["reports"] = std::move(reports);
    os << out.dump(2) << "\n";
    return 0;
  }

  // grid mode
  synvec::GridSpec grid;
  grid.epsilons = args.grid_epsilons;
  if (!args.grid_s.empty()) grid.s_values = args.grid_s;
  if (!args.grid_n.empty()) grid.n_values = args.grid_n;
  if (!args.grid_morphologies.empty()) {
    grid.morphologies.clear();
    for (const std::string& m : args.grid_morphologies) {
      grid.morphologies.push_back(synvec::morphology_from_string(m));
    }
  }
  if (args.grid_synonyms_both) grid.synonym_flags = {false, true};

  const synvec::GridSearchResult result =
      synvec::grid_search(corpus, scenarios, grid, config, master_seed);

  auto point_to_json = [](const synvec::GridPointResult& point) {
    json entry = {{"morphology", synvec::to_string(point.morphology)},
                  {"synonyms", point.use_synonyms},
                  {"s", point.s},
                  {"n", point.n},
                  {"epsilon", point.epsilon},
                  {"min_gap", point.min_gap}};
    json scenario_reports = json::array();
    for (const synvec::EvalReport& report : point.per_scenario) {
      scenario_reports.push_back(synvec::to_json(report));
    }
    entry["per_scenario"] = std::move(scenario_reports);
    return entry;
  };

  json out;
  out["config"] = eval_config_echo(args, master_seed);
  out["best"] = point_to_json(result.best);
  json table_json = json::array();
  for (const synvec::GridPointResult& point : result.table) {
    table_json.push_back(point_to_json(point));
  }
  out["table"] = std::move(table_json);
  os << out.dump(2) << "\n";

  if (!args.grid_csv_path.empty()) {
    std::ofstream csv(args.grid_csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write CSV: " + args.grid_csv_path);
    csv << "morphology,synonyms,s,n,epsilon,min_gap\n";
    for (const synvec::GridPointResult& point : result.table) {
      csv << synvec::to_string(point.morphology) << ',' << (point.use_synonyms ? 1 : 0) << ','
          << point.s << ',' << point.n << ',' << point.epsilon << ',' << point.min_gap << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differentially private synthetic term-frequency vectors"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags take precedence");

  bool json_errors = false;
  app.add_flag("--json-errors", json_errors, "emit errors as JSON on stderr");

  BuildVocabArgs build_vocab_args;
  CLI::App* build_vocab = app.add_subcommand("build-vocab", "build a vocabulary file");
  build_vocab_args.vocab.add_to(build_vocab, true);
  build_vocab->add_option("--embeddings", build_vocab_args.embeddings_path,
                          "drop terms missing from this embedding file");
  build_vocab->add_option("--embedding-limit", build_vocab_args.embedding_limit,
                          "read only the first N embedding lines");
  build_vocab->add_option("--output", build_vocab_args.output_path, "vocabulary output file")
      ->required();

  SynthesizeArgs synthesize_args;
  CLI::App* synthesize =
      app.add_subcommand("synthesize", "anonymize a corpus into synthetic tf vectors");
  synthesize_args.vocab.add_to(synthesize, true);
  synthesize->add_option("--embeddings", synthesize_args.embeddings_path, "embedding file")
      ->required();
  synthesize->add_option("--embedding-limit", synthesize_args.embedding_limit,
                         "read only the first N embedding lines");
  synthesize->add_option("--bigram-factor", synthesize_args.bigram_factor,
                         "bigram overlap impact factor s")
      ->capture_default_str();
  synthesize->add_option("--epsilon", synthesize_args.epsilon, "privacy parameter per word")
      ->capture_default_str();
  synthesize->add_option("--n", synthesize_args.n, "output length per document")
      ->capture_default_str();
  synthesize->add_option("--compose-from", synthesize_args.compose_from,
                         "weighting of the composition vector")
      ->check(CLI::IsMember({"tf", "tfidf"}))
      ->capture_default_str();
  synthesize_args.seed.add_to(synthesize);
  synthesize->add_option("--output", synthesize_args.output_path,
                         "synthetic vector JSONL output ('-' for stdout)");
  synthesize->add_option("--report", synthesize_args.report_path,
                         "privacy report JSON output (stderr when omitted)");
  synthesize->add_option("--rating-cache", synthesize_args.rating_cache_path,
                         "binary rating matrix cache file");
  synthesize->add_flag("--skip-empty", synthesize_args.skip_empty,
                       "drop documents with no in-vocabulary tokens");
  synthesize->add_option("--threads", synthesize_args.threads,
                         "worker threads for the rating matrix and per-document "
                         "synthesis (0 = all cores)");

  PrivacyReportArgs privacy_args;
  CLI::App* privacy_report =
      app.add_subcommand("privacy-report", "compute all loss bounds for a configuration");
  privacy_args.vocab.add_to(privacy_report, false);
  privacy_report->add_option("--embeddings", privacy_args.embeddings_path, "embedding file")
      ->required();
  privacy_report->add_option("--embedding-limit", privacy_args.embedding_limit,
                             "read only the first N embedding lines");
  privacy_report->add_option("--bigram-factor", privacy_args.bigram_factor,
                             "bigram overlap impact factor s")
      ->capture_default_str();
  privacy_report->add_option("--epsilon", privacy_args.epsilon, "privacy parameter per word")
      ->capture_default_str();
  privacy_report->add_option("--n", privacy_args.n, "output length per document")
      ->capture_default_str();
  privacy_report->add_option("--rating-cache", privacy_args.rating_cache_path,
                             "binary rating matrix cache file");
  privacy_report->add_option("--output", privacy_args.output_path,
                             "report output file ('-' for stdout)");
  privacy_report->add_option("--utility-tau", privacy_args.utility_tau,
                             "also report utility bounds at this rating threshold");
  privacy_report->add_option("--utility-term", privacy_args.utility_term,
                             "input term for the utility bound diagnostics");
  privacy_report->add_option("--threads", privacy_args.threads,
                             "worker threads for the rating matrix (0 = all cores)");

  BoundCurvesArgs bound_args;
  CLI::App* bound_curves =
      app.add_subcommand("bound-curves", "standard vs alternative per-word bound grid");
  bound_curves->add_option("--l-values", bound_args.l_values, "output space sizes")
      ->delimiter(',')
      ->capture_default_str();
  bound_curves->add_option("--eps-max", bound_args.epsilon_max, "grid upper end")
      ->capture_default_str();
  bound_curves->add_option("--eps-step", bound_args.epsilon_step, "grid step")
      ->capture_default_str();
  bound_curves->add_option("--output", bound_args.output_path, "CSV output ('-' for stdout)");

  EvaluateArgs evaluate_args;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "utility vs attack evaluation on a labeled corpus");
  evaluate_args.vocab.add_to(evaluate, true);
  evaluate->add_option("--embeddings", evaluate_args.embeddings_path, "embedding file");
  evaluate->add_option("--embedding-limit", evaluate_args.embedding_limit,
                       "read only the first N embedding lines");
  evaluate->add_option("--stage", evaluate_args.stage, "original|vectorized|synthetic")
      ->check(CLI::IsMember({"original", "vectorized", "synthetic"}))
      ->capture_default_str();
  evaluate->add_option("--suspects", evaluate_args.suspects, "top-k suspect authors")
      ->capture_default_str();
  evaluate->add_flag("--multi-group", evaluate_args.multi_group,
                     "require suspects active in >= 2 topics");
  evaluate->add_option("--scenario", evaluate_args.scenario_specs,
                       "scenario spec like 5/any or 10/multi (repeatable)");
  evaluate->add_option("--bigram-factor", evaluate_args.bigram_factor,
                       "bigram overlap impact factor s")
      ->capture_default_str();
  evaluate->add_option("--epsilon", evaluate_args.epsilon, "privacy parameter per word")
      ->capture_default_str();
  evaluate->add_option("--n", evaluate_args.n, "output length per document")
      ->capture_default_str();
  evaluate->add_option("--repetitions", evaluate_args.repetitions,
                       "synthesis repetitions averaged per report")
      ->capture_default_str();
  evaluate->add_flag("--attack-train-on-original", evaluate_args.attack_train_on_original,
                     "attacker trains on vectorized instead of synthetic data");
  evaluate->add_option("--threads", evaluate_args.threads,
                       "worker threads for the rating matrix (0 = all cores)");
  evaluate_args.seed.add_to(evaluate);
  evaluate->add_option("--output", evaluate_args.output_path, "report output ('-' for stdout)");
  evaluate->add_option("--runs-csv", evaluate_args.runs_csv_path, "per-repetition score CSV");
  evaluate->add_option("--grid-epsilons", evaluate_args.grid_epsilons,
                       "grid search: epsilon values")
      ->delimiter(',');
  evaluate->add_option("--grid-s", evaluate_args.grid_s, "grid search: s values")
      ->delimiter(',');
  evaluate->add_option("--grid-n", evaluate_args.grid_n, "grid search: n values")
      ->delimiter(',');
  evaluate->add_option("--grid-morphologies", evaluate_args.grid_morphologies,
                       "grid search: morphology modes")
      ->delimiter(',');
  evaluate->add_flag("--grid-synonyms", evaluate_args.grid_synonyms_both,
                     "grid search: try both synonym settings");
  evaluate->add_option("--grid-csv", evaluate_args.grid_csv_path, "grid table CSV output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build_vocab->parsed()) return run_build_vocab(build_vocab_args);
    if (synthesize->parsed()) return run_synthesize(synthesize_args);
    if (privacy_report->parsed()) return run_privacy_report(privacy_args);
    if (bound_curves->parsed()) return run_bound_curves(bound_args);
    if (evaluate->parsed()) return run_evaluate(evaluate_args);
  } catch (const std::exception& e) {
    if (json_errors) {
      std::cerr << json{{"error", e.what()}}.dump() << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
  }
  return 0;
}
