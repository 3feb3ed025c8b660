#include "topiceval/wordnet.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "topiceval/textnorm.hpp"

namespace topiceval {

const std::set<std::string> SynsetIndex::kEmpty;

SynsetId parse_synset_id(const std::string& id) {
  size_t dot = id.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 2 != id.size())
    throw std::invalid_argument("malformed synset id: " + id);
  char pos = id[dot + 1];
  if (pos != 'n' && pos != 'v' && pos != 'a' && pos != 'r' && pos != 's')
    throw std::invalid_argument("malformed synset id (pos): " + id);
  for (size_t i = 0; i < dot; ++i)
    if (!std::isdigit(static_cast<unsigned char>(id[i])))
      throw std::invalid_argument("malformed synset id (offset): " + id);
  return SynsetId{std::stol(id.substr(0, dot)), pos};
}

const std::set<std::string>& SynsetIndex::lookup(const std::string& word) const {
  auto it = entries_.find(normalize_word(word));
  return it == entries_.end() ? kEmpty : it->second;
}

void SynsetIndex::add(const std::string& lemma, const std::string& synset_id) {
  entries_[lemma].insert(synset_id);
}

namespace {

// index.* line layout:
//   lemma pos synset_cnt p_cnt [ptr_symbol ...] sense_cnt tagsense_cnt offset [offset ...]
void parse_index_file(const std::string& path, char pos, SynsetIndex& out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open WordNet index file: " + path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || std::isspace(static_cast<unsigned char>(line[0]))) continue;  // license header
    std::istringstream ss(line);
    std::vector<std::string> tok;
    std::string t;
    while (ss >> t) tok.push_back(t);
    auto fail = [&](const std::string& why) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed index line (" + why + ")");
    };
    if (tok.size() < 6) fail("too few fields");
    const std::string& lemma = tok[0];
    int synset_cnt = 0;
    int p_cnt = 0;
    try {
      synset_cnt = std::stoi(tok[2]);
      p_cnt = std::stoi(tok[3]);
    } catch (const std::exception&) {
      fail("non-numeric counts");
    }
    if (synset_cnt < 1) fail("synset_cnt < 1");
    // 4 leading fields, p_cnt pointer symbols, sense_cnt + tagsense_cnt, then offsets.
    if (tok.size() != static_cast<size_t>(4 + p_cnt + 2 + synset_cnt)) fail("field count mismatch");
    for (int i = 0; i < synset_cnt; ++i) {
      const std::string& off = tok[tok.size() - static_cast<size_t>(synset_cnt) + static_cast<size_t>(i)];
      if (off.empty() || !std::all_of(off.begin(), off.end(), [](unsigned char c) { return std::isdigit(c); }))
        fail("non-numeric synset offset");
      std::string id = off + "." + pos;
      out.add(lemma, id);
      if (lemma.find('_') != std::string::npos) {
        std::string spaced = lemma;
        std::replace(spaced.begin(), spaced.end(), '_', ' ');
        out.add(spaced, id);
      }
    }
  }
}

}  // namespace

SynsetIndex load_synset_index(const std::string& dir) {
  SynsetIndex index;
  parse_index_file(dir + "/index.noun", 'n', index);
  parse_index_file(dir + "/index.verb", 'v', index);
  parse_index_file(dir + "/index.adj", 'a', index);
  parse_index_file(dir + "/index.adv", 'r', index);
  return index;
}

}  // namespace topiceval
