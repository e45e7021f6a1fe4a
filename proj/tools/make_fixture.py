#!/usr/bin/env python3
# Copyright 2026 The synvec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the bundled evaluation fixture under data/.

Four topics, eight concepts per topic, three idiosyncratic spelling variants
per concept (think regional spellings and habitual misspellings, so the
variants of one concept share most of their letter bigrams). Six authors,
each with a fixed preferred variant per concept and a personal pluralization
habit, write five documents per topic. Word vectors are built so that
variants of one concept are close (cos ~0.93), concepts of one topic
moderately close (cos ~0.55), and everything else unrelated.

Authorship lives in the spelling choices: with the bigram penalty active the
mechanism rates a word's own spelling and its look-alike variants equally, so
the variant rows mix and the author signal washes out, while without the
penalty the highest-rated output is the input spelling itself.

The output files are committed; rerun only when changing the fixture design.
"""

import json
import math
import random

SEED = 20260811
OUT_CORPUS = "data/fixture_corpus.jsonl"
OUT_EMBEDDINGS = "data/fixture_embeddings.txt"
OUT_LEMMAS = "data/fixture_lemmas.tsv"
OUT_SYNONYMS = "data/fixture_synonyms.tsv"

TOPICS = ["soccer", "cooking", "astronomy", "finance"]

# concept -> three spelling variants sharing most letter bigrams
CONCEPTS = {
    "soccer": [
        ("goalkeeper", "goalkeaper", "goalkeper"),
        ("penalty", "penaltie", "penelty"),
        ("midfield", "midfeild", "midfild"),
        ("striker", "stryker", "strikker"),
        ("tackle", "tackel", "takle"),
        ("stadium", "stadiom", "stadum"),
        ("trophy", "trophey", "trofy"),
        ("referee", "referie", "refferee"),
    ],
    "cooking": [
        ("saucepan", "sauspan", "saucepann"),
        ("roasting", "rosting", "roastyng"),
        ("seasoning", "sesoning", "seasonning"),
        ("pastry", "pastrie", "pastery"),
        ("marinade", "marinaid", "marrinade"),
        ("skillet", "skilet", "skillett"),
        ("recipe", "recipie", "receipe"),
        ("pudding", "puding", "puddyng"),
    ],
    "astronomy": [
        ("telescope", "telascope", "telescoap"),
        ("galaxy", "galaxie", "gallaxy"),
        ("orbit", "orbitt", "orbyt"),
        ("meteor", "metior", "meteore"),
        ("eclipse", "eclypse", "eclips"),
        ("gravity", "gravety", "gravitty"),
        ("satellite", "satelite", "sattelite"),
        ("nebula", "nebulah", "nebulla"),
    ],
    "finance": [
        ("dividend", "divident", "dividende"),
        ("ledger", "ledgar", "leddger"),
        ("equity", "equitie", "equety"),
        ("auditing", "audyting", "auditting"),
        ("budget", "budgett", "budjet"),
        ("invoice", "invoyce", "invoise"),
        ("market", "markett", "markket"),
        ("revenue", "revenu", "revennue"),
    ],
}

NEUTRAL = ["today", "report", "note", "update", "summary", "draft"]

AUTHORS = ["ada", "bruno", "chloe", "dmitri", "elif", "farid"]
DOCS_PER_CELL = 5
CONCEPT_TOKENS = 16
NEUTRAL_TOKENS = 3

# pluralizable concept slots (first variant of these concepts may appear with
# an "s" suffix in the raw text; the lemma dictionary maps it back)
PLURAL_SLOTS = [0, 4, 7]


def unit(vec):
    norm = math.sqrt(sum(x * x for x in vec))
    return [x / norm for x in vec]


def pluralize(word):
    return word[:-1] + "ies" if word.endswith("y") else word + "s"


def main():
    rng = random.Random(SEED)

    # --- embeddings ---
    # layout: 4 topic dims + 32 concept dims + 6 jitter dims + 1 neutral dim
    topic_dims, concept_dims, jitter_dims = 4, 32, 6
    dim = topic_dims + concept_dims + jitter_dims + 1
    alpha, beta, gamma = math.sqrt(0.55), math.sqrt(0.38), math.sqrt(0.07)

    def jitter():
        vec = unit([rng.gauss(0, 1) for _ in range(jitter_dims)])
        return [gamma * x for x in vec]

    embeddings = {}
    for t, topic in enumerate(TOPICS):
        for g, variants in enumerate(CONCEPTS[topic]):
            for word in variants:
                vec = [0.0] * dim
                vec[t] = alpha
                vec[topic_dims + t * 8 + g] = beta
                for j, x in enumerate(jitter()):
                    vec[topic_dims + concept_dims + j] = x
                embeddings[word] = vec
    for word in NEUTRAL:
        vec = [0.0] * dim
        vec[dim - 1] = alpha + beta
        for j, x in enumerate(jitter()):
            vec[topic_dims + concept_dims + j] = x
        embeddings[word] = vec

    with open(OUT_EMBEDDINGS, "w") as fh:
        for word in sorted(embeddings):
            fh.write(word + " " + " ".join("%.6f" % x for x in embeddings[word]) + "\n")

    # --- author styles ---
    preferred = {
        (a, topic, g): rng.randrange(3)
        for a in range(len(AUTHORS))
        for topic in TOPICS
        for g in range(8)
    }
    plural_rate = [0.35, 0.30, 0.25, 0.08, 0.05, 0.02]

    # --- corpus ---
    concept_weights = [4, 3, 3, 2, 2, 1, 1, 1]
    documents = []
    for a, author in enumerate(AUTHORS):
        for topic in TOPICS:
            for d in range(DOCS_PER_CELL):
                tokens = []
                for _ in range(CONCEPT_TOKENS):
                    g = rng.choices(range(8), weights=concept_weights)[0]
                    if rng.random() < 0.85:
                        v = preferred[(a, topic, g)]
                    else:
                        v = rng.randrange(3)
                    word = CONCEPTS[topic][g][v]
                    if g in PLURAL_SLOTS and v == 0 and rng.random() < plural_rate[a]:
                        word = pluralize(word)
                    tokens.append(word)
                for _ in range(NEUTRAL_TOKENS):
                    tokens.append(rng.choice(NEUTRAL))
                rng.shuffle(tokens)
                documents.append(
                    {
                        "id": "%s-%s-%02d" % (author, topic, d),
                        "text": " ".join(tokens),
                        "label": topic,
                        "author": author,
                        "split": "train" if d < 3 else "test",
                    }
                )

    with open(OUT_CORPUS, "w") as fh:
        for doc in documents:
            fh.write(json.dumps(doc, sort_keys=True) + "\n")

    # --- lemma dictionary: plural surface forms back to the base word ---
    with open(OUT_LEMMAS, "w") as fh:
        for topic in TOPICS:
            for g in PLURAL_SLOTS:
                base = CONCEPTS[topic][g][0]
                fh.write("%s\t%s\n" % (pluralize(base), base))

    # --- synonym table: first variant maps to its two sisters ---
    with open(OUT_SYNONYMS, "w") as fh:
        for topic in TOPICS:
            for variants in CONCEPTS[topic]:
                fh.write("%s\t%s,%s\n" % (variants[0], variants[1], variants[2]))

    print("wrote %d documents, %d embeddings (dim %d)" % (len(documents), len(embeddings), dim))


if __name__ == "__main__":
    main()
