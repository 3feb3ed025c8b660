#include "topiceval/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "topiceval/textnorm.hpp"

namespace topiceval {

double topic_diversity(const std::vector<std::vector<std::string>>& topics) {
  if (topics.empty()) throw std::invalid_argument("topic_diversity: no topics");
  std::set<std::string> all;
  for (size_t t = 0; t < topics.size(); ++t) {
    const auto& words = topics[t];
    if (words.size() != 25)
      throw std::invalid_argument("topic_diversity: topic " + std::to_string(t) + " has " +
                                  std::to_string(words.size()) + " words, expected 25");
    std::set<std::string> distinct(words.begin(), words.end());
    if (distinct.size() != words.size())
      throw std::invalid_argument("topic_diversity: topic " + std::to_string(t) + " repeats a word");
    all.insert(words.begin(), words.end());
  }
  return static_cast<double>(all.size()) / (25.0 * static_cast<double>(topics.size()));
}

long CooccurrenceIndex::count(const std::string& w) const {
  auto it = word_windows.find(w);
  return it == word_windows.end() ? 0 : it->second;
}

long CooccurrenceIndex::count(const std::string& a, const std::string& b) const {
  auto it = pair_windows.find(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
  return it == pair_windows.end() ? 0 : it->second;
}

CooccurrenceIndex build_cooccurrence(const std::vector<Document>& ref_corpus, int window) {
  if (window < 1) throw std::invalid_argument("build_cooccurrence: window must be >= 1");
  if (ref_corpus.empty()) throw std::invalid_argument("build_cooccurrence: empty corpus");
  CooccurrenceIndex index;
  index.window = window;
  for (const Document& doc : ref_corpus) {
    std::vector<std::string> tokens = tokenize(doc.text);
    long len = static_cast<long>(tokens.size());
    if (len == 0) continue;
    long positions = std::max(1L, len - window + 1);
    for (long start = 0; start < positions; ++start) {
      long stop = std::min(len, start + window);
      std::set<std::string> present(tokens.begin() + start, tokens.begin() + stop);
      for (const std::string& w : present) ++index.word_windows[w];
      for (auto a = present.begin(); a != present.end(); ++a) {
        auto b = a;
        for (++b; b != present.end(); ++b) ++index.pair_windows[{*a, *b}];
      }
      ++index.total_windows;
    }
  }
  return index;
}

NpmiResult npmi_topic(const std::vector<std::string>& top10, const CooccurrenceIndex& index,
                      double epsilon) {
  if (top10.size() != 10) throw std::invalid_argument("npmi_topic: expected exactly 10 words");
  if (index.total_windows <= 0) throw std::invalid_argument("npmi_topic: empty index");
  NpmiResult result;
  double total = static_cast<double>(index.total_windows);
  double sum = 0.0;
  size_t evaluated = 0;
  for (size_t i = 0; i < top10.size(); ++i) {
    for (size_t j = i + 1; j < top10.size(); ++j) {
      long ci = index.count(top10[i]);
      long cj = index.count(top10[j]);
      if (ci == 0 || cj == 0) {
        result.skipped_pairs.emplace_back(top10[i], top10[j]);
        continue;
      }
      long cij = index.count(top10[i], top10[j]);
      double pj = cij > 0 ? static_cast<double>(cij) / total : epsilon / total;
      double pi = static_cast<double>(ci) / total;
      double pk = static_cast<double>(cj) / total;
      double value;
      if (pj >= 1.0) {
        value = 1.0;  // co-occurs in every window: definition limit
      } else {
        value = std::log(pj / (pi * pk)) / (-std::log(pj));
      }
      sum += std::clamp(value, -1.0, 1.0);
      ++evaluated;
    }
  }
  result.value = evaluated == 0 ? 0.0 : sum / static_cast<double>(evaluated);
  return result;
}

double npmi_aggregate(const std::vector<double>& topic_scores) {
  if (topic_scores.empty()) throw std::invalid_argument("npmi_aggregate: no scores");
  std::vector<double> sorted = topic_scores;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  size_t keep = (sorted.size() + 1) / 2;  // top 50%, rounded up
  double sum = 0.0;
  for (size_t i = 0; i < keep; ++i) sum += sorted[i];
  return sum / static_cast<double>(keep);
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("pearson: need at least 2 points");
  double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double dx = xs[i] - mx;
    double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("pearson: correlation undefined for a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double eval_gap(double s_llm, double s_human) {
  if (s_human == 0.0) throw std::invalid_argument("eval_gap: zero denominator");
  if (s_human < 0.0) throw std::invalid_argument("eval_gap: denominator must be positive");
  return std::abs(s_llm - s_human) / s_human;
}

}  // namespace topiceval
