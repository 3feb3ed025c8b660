#include "topiceval/topical.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

namespace topiceval {

using nlohmann::json;

void validate(const WeightedWordSet& set) {
  if (static_cast<long>(set.words.size()) != set.weights.size())
    throw std::invalid_argument("words/weights length mismatch");
  std::set<std::string> distinct(set.words.begin(), set.words.end());
  if (distinct.size() != set.words.size())
    throw std::invalid_argument("duplicate word in weighted word set");
  for (long i = 0; i < set.weights.size(); ++i) {
    if (set.weights[i] < 0.0) throw std::invalid_argument("negative weight");
    if (i > 0 && set.weights[i] > set.weights[i - 1])
      throw std::invalid_argument("weights not non-increasing");
  }
  if (set.normalized && set.weights.size() > 0 &&
      std::abs(set.weights.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("normalized weights do not sum to 1");
}

Eigen::VectorXd compose_word_distribution(const Eigen::Ref<const Eigen::VectorXd>& theta_row,
                                          const Eigen::Ref<const Eigen::MatrixXd>& phi) {
  if (theta_row.size() != phi.rows())
    throw std::invalid_argument("dimension mismatch: theta has " + std::to_string(theta_row.size()) +
                                " topics, phi has " + std::to_string(phi.rows()) + " rows");
  for (long k = 0; k < theta_row.size(); ++k)
    if (theta_row[k] < 0.0) throw std::invalid_argument("theta entry negative");
  if (std::abs(theta_row.sum() - 1.0) > 1e-4)
    throw std::invalid_argument("theta row not on the simplex");
  Eigen::VectorXd w = phi.transpose() * theta_row;
  double sum = w.sum();
  if (sum <= 0.0) throw std::invalid_argument("degenerate word distribution");
  return w / sum;
}

WeightedWordSet top_words(const Eigen::Ref<const Eigen::VectorXd>& w, const Vocabulary& vocab, int n) {
  long v = w.size();
  if (static_cast<size_t>(v) != vocab.size())
    throw std::invalid_argument("distribution length != vocabulary size");
  if (n <= 0) throw std::invalid_argument("n must be positive");
  if (n > v) throw std::invalid_argument("n exceeds vocabulary size");

  std::vector<long> order(static_cast<size_t>(v));
  std::iota(order.begin(), order.end(), 0L);
  std::partial_sort(order.begin(), order.begin() + n, order.end(), [&](long a, long b) {
    if (w[a] != w[b]) return w[a] > w[b];
    return a < b;  // tie: ascending vocabulary index
  });

  WeightedWordSet set;
  set.words.reserve(static_cast<size_t>(n));
  set.weights.resize(n);
  double mass = 0.0;
  for (int i = 0; i < n; ++i) {
    long idx = order[static_cast<size_t>(i)];
    set.words.push_back(vocab.word(static_cast<size_t>(idx)));
    set.weights[i] = w[idx];
    mass += w[idx];
  }
  if (mass <= 0.0) throw std::invalid_argument("top words carry no mass");
  set.weights /= mass;
  set.normalized = true;
  return set;
}

std::map<std::string, WeightedWordSet> extract_topical_words(const ModelArtifact& artifact, int n) {
  std::map<std::string, WeightedWordSet> out;
  for (long d = 0; d < artifact.theta.rows(); ++d) {
    Eigen::VectorXd w = compose_word_distribution(artifact.theta.row(d), artifact.phi);
    out[artifact.doc_ids[static_cast<size_t>(d)]] = top_words(w, artifact.vocabulary, n);
  }
  return out;
}

void write_topical_words(const std::map<std::string, WeightedWordSet>& sets, const std::string& path,
                         const Manifest* manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  if (manifest != nullptr && !manifest->empty())
    out << json{{"manifest", manifest->to_json()}}.dump() << "\n";
  for (const auto& [doc_id, set] : sets) {
    std::vector<double> weights(set.weights.data(), set.weights.data() + set.weights.size());
    json j{{"doc_id", doc_id}, {"words", set.words}, {"weights", weights}};
    out << j.dump() << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::map<std::string, WeightedWordSet> load_topical_words(const std::string& path) {
  std::map<std::string, WeightedWordSet> sets;
  read_jsonl(path, [&](const json& j, size_t lineno) {
    std::string where = path + ":" + std::to_string(lineno);
    if (!j.contains("doc_id") || !j.contains("words") || !j.contains("weights"))
      throw std::runtime_error(where + ": expected doc_id, words, weights");
    std::string doc_id = j.at("doc_id").get<std::string>();
    if (sets.count(doc_id) != 0) throw std::runtime_error(where + ": duplicate doc_id '" + doc_id + "'");
    WeightedWordSet set;
    set.words = j.at("words").get<std::vector<std::string>>();
    std::vector<double> weights = j.at("weights").get<std::vector<double>>();
    set.weights = Eigen::Map<Eigen::VectorXd>(weights.data(), static_cast<long>(weights.size()));
    set.normalized = set.weights.size() > 0 && std::abs(set.weights.sum() - 1.0) <= 1e-9;
    try {
      validate(set);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
    sets[doc_id] = std::move(set);
  });
  return sets;
}

}  // namespace topiceval
