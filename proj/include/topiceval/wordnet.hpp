#pragma once

#include <map>
#include <set>
#include <string>

namespace topiceval {

// Synset identifier "offset.pos", e.g. "02084071.n".
struct SynsetId {
  long offset = 0;
  char pos = 'n';
};

// Parses "offset.pos"; throws std::invalid_argument on malformed input.
SynsetId parse_synset_id(const std::string& id);

class SynsetIndex {
 public:
  // Unknown words map to the empty set, never an error.
  const std::set<std::string>& lookup(const std::string& word) const;

  void add(const std::string& lemma, const std::string& synset_id);
  size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::set<std::string>> entries_;
  static const std::set<std::string> kEmpty;
};

// Loads WordNet 3.x index.{noun,verb,adj,adv} from `dir`, merging all parts
// of speech. Lemmas containing underscores are also keyed by their
// space-joined form.
SynsetIndex load_synset_index(const std::string& dir);

}  // namespace topiceval
