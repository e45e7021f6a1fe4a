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

#ifndef SYNVEC_IO_HPP
#define SYNVEC_IO_HPP

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "synvec/eval.hpp"
#include "synvec/mechanism.hpp"
#include "synvec/privacy.hpp"
#include "synvec/vectorize.hpp"

namespace synvec {

using json = nlohmann::json;

// Corpus: JSON Lines, one object per document:
//   {"id": ..., "text": ..., "label": ...?, "author": ...?, "split": "train"|"test"?}
inline LabeledCorpus read_corpus_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  LabeledCorpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error("corpus parse error at line " + std::to_string(lineno) + ": " +
                               e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj.contains("text")) {
      throw std::runtime_error("corpus line " + std::to_string(lineno) +
                               " must be an object with 'id' and 'text'");
    }
    LabeledDocument doc;
    doc.id = obj.at("id").get<std::string>();
    doc.text = obj.at("text").get<std::string>();
    if (obj.contains("label")) doc.topic = obj.at("label").get<std::string>();
    if (obj.contains("author")) doc.author = obj.at("author").get<std::string>();
    if (obj.contains("split")) {
      const std::string split = obj.at("split").get<std::string>();
      if (split == "train") {
        doc.split = Split::kTrain;
      } else if (split == "test") {
        doc.split = Split::kTest;
      } else {
        throw std::runtime_error("corpus line " + std::to_string(lineno) +
                                 ": split must be 'train' or 'test'");
      }
    }
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.documents.empty()) throw std::runtime_error("corpus file is empty: " + path);
  return corpus;
}

// Sparse vectors: JSON Lines {"id", "dim", "entries": {"<index>": value}}.
// Synthetic vectors carry integer values plus "n" and "epsilon" per line.
// Files may start with a {"header": {...}} line echoing the resolved run
// configuration; readers skip it.

struct VectorRecord {
  std::string id;
  SparseVector vector;
  std::optional<std::int64_t> n;
  std::optional<double> epsilon;
};

inline json sparse_entries_to_json(const std::map<std::size_t, double>& entries,
                                   bool integer_values) {
  json out = json::object();
  for (const auto& [i, value] : entries) {
    if (integer_values) {
      out[std::to_string(i)] = static_cast<std::int64_t>(value);
    } else {
      out[std::to_string(i)] = value;
    }
  }
  return out;
}

inline void write_vector_records(std::ostream& out, const std::vector<VectorRecord>& records,
                                 const json* header = nullptr) {
  if (header != nullptr) out << json{{"header", *header}}.dump() << '\n';
  for (const VectorRecord& rec : records) {
    json obj;
    obj["id"] = rec.id;
    obj["dim"] = rec.vector.dim;
    obj["entries"] = sparse_entries_to_json(rec.vector.entries, rec.n.has_value());
    if (rec.n) obj["n"] = *rec.n;
    if (rec.epsilon) obj["epsilon"] = *rec.epsilon;
    out << obj.dump() << '\n';
  }
}

inline void write_vector_records(const std::string& path,
                                 const std::vector<VectorRecord>& records,
                                 const json* header = nullptr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write vector file: " + path);
  write_vector_records(out, records, header);
}

inline std::vector<VectorRecord> read_vector_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file: " + path);
  std::vector<VectorRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error("vector file parse error at line " + std::to_string(lineno) +
                               ": " + e.what());
    }
    if (obj.contains("header")) continue;
    VectorRecord rec;
    rec.id = obj.at("id").get<std::string>();
    rec.vector.dim = obj.at("dim").get<std::size_t>();
    for (const auto& [key, value] : obj.at("entries").items()) {
      if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos) {
        throw std::runtime_error("vector file line " + std::to_string(lineno) +
                                 ": bad entry index '" + key + "'");
      }
      const std::size_t index = std::stoull(key);
      if (index >= rec.vector.dim) {
        throw std::runtime_error("vector file line " + std::to_string(lineno) +
                                 ": index " + key + " out of range");
      }
      rec.vector.entries[index] = value.get<double>();
    }
    if (obj.contains("n")) rec.n = obj.at("n").get<std::int64_t>();
    if (obj.contains("epsilon")) rec.epsilon = obj.at("epsilon").get<double>();
    records.push_back(std::move(rec));
  }
  return records;
}

// --- reports ---

inline json to_json(const PrivacyReport& report) {
  return json{{"epsilon", report.epsilon},
              {"n", report.n},
              {"vocab_size", report.vocab_size},
              {"standard_loss_per_word", report.standard_loss_per_word},
              {"standard_loss_total", report.standard_loss_total},
              {"eta", report.eta},
              {"log_eta", report.log_eta},
              {"improved_loss_per_word", report.improved_loss_per_word},
              {"improved_loss_total", report.improved_loss_total},
              {"tight_loss_per_word", report.tight_loss_per_word},
              {"tight_loss_total", report.tight_loss_total},
              {"witness",
               {{"v_max", report.witness.v_max},
                {"v_min", report.witness.v_min},
                {"w", report.witness.w}}}};
}

inline PrivacyReport privacy_report_from_json(const json& obj) {
  PrivacyReport report;
  report.epsilon = obj.at("epsilon").get<double>();
  report.n = obj.at("n").get<std::int64_t>();
  report.vocab_size = obj.at("vocab_size").get<std::int64_t>();
  report.standard_loss_per_word = obj.at("standard_loss_per_word").get<double>();
  report.standard_loss_total = obj.at("standard_loss_total").get<double>();
  report.eta = obj.at("eta").get<double>();
  report.log_eta = obj.at("log_eta").get<double>();
  report.improved_loss_per_word = obj.at("improved_loss_per_word").get<double>();
  report.improved_loss_total = obj.at("improved_loss_total").get<double>();
  report.tight_loss_per_word = obj.at("tight_loss_per_word").get<double>();
  report.tight_loss_total = obj.at("tight_loss_total").get<double>();
  report.witness.v_max = obj.at("witness").at("v_max").get<std::size_t>();
  report.witness.v_min = obj.at("witness").at("v_min").get<std::size_t>();
  report.witness.w = obj.at("witness").at("w").get<std::size_t>();
  return report;
}

inline json to_json(const ClassificationScores& scores) {
  return json{{"f1", scores.f1}, {"precision", scores.precision}, {"recall", scores.recall}};
}

inline json to_json(const EvalReport& report) {
  return json{{"stage", to_string(report.stage)},
              {"repetitions", report.repetitions},
              {"utility", to_json(report.utility)},
              {"attack", to_json(report.attack)},
              {"beta_utility", report.beta_utility},
              {"beta_attack", report.beta_attack},
              {"gap", report.gap}};
}

}  // namespace synvec

#endif  // SYNVEC_IO_HPP
