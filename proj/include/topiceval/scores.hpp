#pragma once

#include <map>
#include <string>
#include <vector>

#include "topiceval/assignment.hpp"
#include "topiceval/corpus.hpp"
#include "topiceval/embedding.hpp"
#include "topiceval/topical.hpp"
#include "topiceval/transport.hpp"
#include "topiceval/wordnet.hpp"

namespace topiceval {

// Count of shared rooted forms (set semantics) times 1/(N+M), where N and M
// are the original word counts.
double s_overlap(const std::vector<std::string>& w, const std::vector<std::string>& k);

// Number of cross pairs whose synset sets intersect, times 1/(N+M).
double s_synset(const std::vector<std::string>& w, const std::vector<std::string>& k,
                const SynsetIndex& index);

// Minimum-cost word assignment under embedding cosine distances. Weights are
// ignored: every word in the set counts the same.
double s_oa(const WeightedWordSet& w, const KeywordSet& k, const EmbeddingTable& table);

// Exact OT cost between the topical-word distribution (weights renormalized
// after OOV drops) and the uniform distribution over surviving keywords.
double s_ot(const WeightedWordSet& w, const KeywordSet& k, const EmbeddingTable& table);

struct MetricSelection {
  bool overlap = true;
  bool synset = true;
  bool oa = true;
  bool ot = true;

  bool any() const { return overlap || synset || oa || ot; }
};

struct ScoreResources {
  const SynsetIndex* synsets = nullptr;       // required for synset
  const EmbeddingTable* embeddings = nullptr; // required for oa / ot
};

// Scores every doc id present in both maps; ids present on only one side go
// to the report's skip list. Aggregates are mean / population std / count.
ScoreReport score_all(const std::map<std::string, WeightedWordSet>& topical,
                      const std::map<std::string, KeywordSet>& keywords,
                      const ScoreResources& resources, const MetricSelection& metrics = {});

}  // namespace topiceval
