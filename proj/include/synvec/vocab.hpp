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

#ifndef SYNVEC_VOCAB_HPP
#define SYNVEC_VOCAB_HPP

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace synvec {

enum class Morphology { kOrth, kLower, kLemma };

inline const char* to_string(Morphology m) {
  switch (m) {
    case Morphology::kOrth: return "orth";
    case Morphology::kLower: return "lower";
    case Morphology::kLemma: return "lemma";
  }
  return "lower";
}

inline Morphology morphology_from_string(const std::string& s) {
  if (s == "orth") return Morphology::kOrth;
  if (s == "lower") return Morphology::kLower;
  if (s == "lemma") return Morphology::kLemma;
  throw std::invalid_argument("unknown morphology mode: " + s);
}

// Small built-in English stopword list; overridable via load_stopwords().
inline const std::unordered_set<std::string>& default_stopwords() {
  static const std::unordered_set<std::string> kWords = {
      "a",       "about",   "above",  "after",   "again",  "against", "all",
      "am",      "an",      "and",    "any",     "are",    "as",      "at",
      "be",      "because", "been",   "before",  "being",  "below",   "between",
      "both",    "but",     "by",     "can",     "could",  "did",     "do",
      "does",    "doing",   "down",   "during",  "each",   "few",     "for",
      "from",    "further", "had",    "has",     "have",   "having",  "he",
      "her",     "here",    "hers",   "herself", "him",    "himself", "his",
      "how",     "i",       "if",     "in",      "into",   "is",      "it",
      "its",     "itself",  "just",   "me",      "more",   "most",    "my",
      "myself",  "no",      "nor",    "not",     "now",    "of",      "off",
      "on",      "once",    "only",   "or",      "other",  "our",     "ours",
      "ourselves", "out",   "over",   "own",     "same",   "she",     "should",
      "so",      "some",    "such",   "than",    "that",   "the",     "their",
      "theirs",  "them",    "themselves", "then", "there", "these",   "they",
      "this",    "those",   "through", "to",     "too",    "under",   "until",
      "up",      "very",    "was",    "we",      "were",   "what",    "when",
      "where",   "which",   "while",  "who",     "whom",   "why",     "will",
      "with",    "would",   "you",    "your",    "yours",  "yourself",
      "yourselves"};
  return kWords;
}

struct Token {
  std::string surface;
  std::string normalized;
};

struct VocabOptions {
  Morphology morphology = Morphology::kLower;
  bool use_synonyms = false;
  std::unordered_set<std::string> stopwords = default_stopwords();
  int min_token_length = 2;
  bool remove_numbers = true;
  // surface (case-folded) -> lemma; consulted only in lemma mode.
  std::unordered_map<std::string, std::string> lemmas;
  // term -> synonyms; consulted only when use_synonyms is set.
  std::unordered_map<std::string, std::vector<std::string>> synonyms;
};

namespace detail {

inline bool is_ascii_alpha(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool is_ascii_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Non-ASCII bytes are treated as alphabetic so UTF-8 words stay in one piece.
inline bool is_word_alpha(unsigned char c) {
  return is_ascii_alpha(c) || c >= 0x80;
}

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace detail

// Splits text into maximal runs of alphabetic characters (plus digit runs,
// which survive only with remove_numbers = false), then normalizes and
// filters. Filters apply to the normalized form; numbers are detected on the
// surface form. Case folding is ASCII-only.
inline std::vector<Token> tokenize(std::string_view text, const VocabOptions& options) {
  if (options.min_token_length < 1) {
    throw std::invalid_argument("min_token_length must be >= 1");
  }
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t size = text.size();
  while (i < size) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    bool alpha = detail::is_word_alpha(c);
    bool digit = detail::is_ascii_digit(c);
    if (!alpha && !digit) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (alpha) {
      while (i < size && detail::is_word_alpha(static_cast<unsigned char>(text[i]))) ++i;
    } else {
      while (i < size && detail::is_ascii_digit(static_cast<unsigned char>(text[i]))) ++i;
    }
    if (digit && options.remove_numbers) continue;

    std::string surface(text.substr(start, i - start));
    std::string normalized;
    switch (options.morphology) {
      case Morphology::kOrth:
        normalized = surface;
        break;
      case Morphology::kLower:
        normalized = detail::ascii_lower(surface);
        break;
      case Morphology::kLemma: {
        std::string folded = detail::ascii_lower(surface);
        auto it = options.lemmas.find(folded);
        normalized = (it != options.lemmas.end()) ? it->second : folded;
        break;
      }
    }
    if (static_cast<int>(normalized.size()) < options.min_token_length) continue;
    if (options.stopwords.count(normalized)) continue;
    tokens.push_back(Token{std::move(surface), std::move(normalized)});
  }
  return tokens;
}

// Ordered term list defining the shared coordinate system. Terms are unique
// and sorted, so indices are stable across runs.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Takes any collection of terms, deduplicates and sorts. Throws if fewer
  // than two distinct terms remain: the mechanism needs at least two outputs.
  static Vocabulary from_terms(std::vector<std::string> terms) {
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    if (terms.size() < 2) {
      throw std::invalid_argument("vocabulary too small: need at least 2 terms, got " +
                                  std::to_string(terms.size()));
    }
    Vocabulary v;
    v.terms_ = std::move(terms);
    v.index_.reserve(v.terms_.size());
    for (std::size_t i = 0; i < v.terms_.size(); ++i) v.index_[v.terms_[i]] = i;
    return v;
  }

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::string& term(std::size_t i) const { return terms_.at(i); }

  bool contains(const std::string& term) const { return index_.count(term) > 0; }

  // Index of a term, or npos if absent.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index_of(const std::string& term) const {
    auto it = index_.find(term);
    return it == index_.end() ? npos : it->second;
  }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

// Follows synonym links to a fixpoint so that extension is idempotent even
// when the table chains (a -> b, b -> c).
inline void close_over_synonyms(
    std::set<std::string>& terms,
    const std::unordered_map<std::string, std::vector<std::string>>& table) {
  std::vector<std::string> frontier(terms.begin(), terms.end());
  while (!frontier.empty()) {
    std::vector<std::string> next;
    for (const std::string& term : frontier) {
      auto it = table.find(term);
      if (it == table.end()) continue;
      for (const std::string& syn : it->second) {
        if (terms.insert(syn).second) next.push_back(syn);
      }
    }
    frontier = std::move(next);
  }
}

}  // namespace detail

// Union of all normalized tokens across the corpus, optionally extended with
// synonyms of extracted terms, sorted lexicographically.
inline Vocabulary build_vocabulary(const std::vector<std::string>& corpus,
                                   const VocabOptions& options) {
  if (corpus.empty()) throw std::invalid_argument("build_vocabulary: empty corpus");
  std::set<std::string> terms;
  for (const std::string& text : corpus) {
    for (Token& t : tokenize(text, options)) terms.insert(std::move(t.normalized));
  }
  if (options.use_synonyms) detail::close_over_synonyms(terms, options.synonyms);
  return Vocabulary::from_terms({terms.begin(), terms.end()});
}

// Superset of the input vocabulary, re-sorted; applying twice equals once.
inline Vocabulary extend_with_synonyms(
    const Vocabulary& vocab,
    const std::unordered_map<std::string, std::vector<std::string>>& table) {
  std::set<std::string> terms(vocab.terms().begin(), vocab.terms().end());
  detail::close_over_synonyms(terms, table);
  return Vocabulary::from_terms({terms.begin(), terms.end()});
}

// --- file formats ---

// Lemma dictionary: one "surface<TAB>lemma" pair per line.
inline std::unordered_map<std::string, std::string> load_lemma_dictionary(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lemma dictionary: " + path);
  std::unordered_map<std::string, std::string> dict;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw std::runtime_error("malformed lemma dictionary line " +
                               std::to_string(lineno) + " in " + path);
    }
    dict[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return dict;
}

// Synonym table: one "term<TAB>synonym,synonym,..." line per term.
inline std::unordered_map<std::string, std::vector<std::string>> load_synonym_table(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open synonym table: " + path);
  std::unordered_map<std::string, std::vector<std::string>> table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw std::runtime_error("malformed synonym table line " + std::to_string(lineno) +
                               " in " + path);
    }
    std::vector<std::string> syns;
    std::string rest = line.substr(tab + 1);
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) syns.push_back(item);
    }
    table[line.substr(0, tab)] = std::move(syns);
  }
  return table;
}

// Stopword file: one word per line.
inline std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword file: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) words.insert(line);
  }
  return words;
}

// Vocabulary file: one term per line; line number - 1 is the index.
inline void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write vocabulary file: " + path);
  for (const std::string& term : vocab.terms()) out << term << '\n';
}

inline Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) terms.push_back(line);
  }
  std::vector<std::string> sorted = terms;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted != terms) {
    throw std::runtime_error("vocabulary file is not sorted and deduplicated: " + path);
  }
  return Vocabulary::from_terms(std::move(terms));
}

}  // namespace synvec

#endif  // SYNVEC_VOCAB_HPP
