#include "topiceval/scores.hpp"

#include <set>
#include <stdexcept>

#include "topiceval/stemmer.hpp"

namespace topiceval {

double s_overlap(const std::vector<std::string>& w, const std::vector<std::string>& k) {
  if (w.empty() || k.empty()) throw std::invalid_argument("s_overlap: empty word set");
  std::set<std::string> w_roots, k_roots;
  for (const std::string& word : w) w_roots.insert(root(word));
  for (const std::string& word : k) k_roots.insert(root(word));
  size_t shared = 0;
  for (const std::string& r : w_roots) shared += k_roots.count(r);
  return static_cast<double>(shared) / static_cast<double>(w.size() + k.size());
}

double s_synset(const std::vector<std::string>& w, const std::vector<std::string>& k,
                const SynsetIndex& index) {
  if (w.empty() || k.empty()) throw std::invalid_argument("s_synset: empty word set");
  size_t overlapping = 0;
  for (const std::string& wi : w) {
    const std::set<std::string>& sw = index.lookup(wi);
    if (sw.empty()) continue;
    for (const std::string& kj : k) {
      const std::set<std::string>& sk = index.lookup(kj);
      for (const std::string& id : sw) {
        if (sk.count(id) != 0) {
          ++overlapping;
          break;
        }
      }
    }
  }
  return static_cast<double>(overlapping) / static_cast<double>(w.size() + k.size());
}

double s_oa(const WeightedWordSet& w, const KeywordSet& k, const EmbeddingTable& table) {
  CostMatrix cm = cost_matrix(w.words, k.words, table);
  return solve_assignment(cm.cost).cost;
}

double s_ot(const WeightedWordSet& w, const KeywordSet& k, const EmbeddingTable& table) {
  if (!w.normalized) throw std::invalid_argument("s_ot: topical word weights must be normalized");
  CostMatrix cm = cost_matrix(w.words, k.words, table);
  Eigen::VectorXd source(static_cast<long>(cm.source_kept_idx.size()));
  for (size_t i = 0; i < cm.source_kept_idx.size(); ++i) source[static_cast<long>(i)] = w.weights[cm.source_kept_idx[i]];
  double mass = source.sum();
  if (mass <= 0.0) throw std::runtime_error("s_ot: surviving topical words carry no mass");
  source /= mass;
  long m = cm.cost.cols();
  Eigen::VectorXd target = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  return solve_ot(cm.cost, source, target).cost;
}

ScoreReport score_all(const std::map<std::string, WeightedWordSet>& topical,
                      const std::map<std::string, KeywordSet>& keywords,
                      const ScoreResources& resources, const MetricSelection& metrics) {
  if (!metrics.any()) throw std::invalid_argument("score_all: no metric selected");
  if (metrics.synset && resources.synsets == nullptr)
    throw std::invalid_argument("score_all: synset metric selected but no synset index given");
  if ((metrics.oa || metrics.ot) && resources.embeddings == nullptr)
    throw std::invalid_argument("score_all: embedding metric selected but no embedding table given");

  ScoreReport report;
  for (const auto& [doc_id, set] : topical)
    if (keywords.count(doc_id) == 0) report.skipped.push_back(doc_id);
  for (const auto& [doc_id, set] : keywords)
    if (topical.count(doc_id) == 0) report.skipped.push_back(doc_id);

  bool any_scored = false;
  for (const auto& [doc_id, words] : topical) {
    auto kit = keywords.find(doc_id);
    if (kit == keywords.end()) continue;
    const KeywordSet& kw = kit->second;
    std::map<std::string, double>& row = report.per_doc[doc_id];
    if (metrics.overlap) row["overlap"] = s_overlap(words.words, kw.words);
    if (metrics.synset) row["synset"] = s_synset(words.words, kw.words, *resources.synsets);
    if (metrics.oa) row["oa"] = s_oa(words, kw, *resources.embeddings);
    if (metrics.ot) row["ot"] = s_ot(words, kw, *resources.embeddings);
    any_scored = true;
  }
  if (!any_scored) throw std::invalid_argument("score_all: no document appears in both inputs");
  std::sort(report.skipped.begin(), report.skipped.end());
  recompute_aggregates(report);
  return report;
}

}  // namespace topiceval
