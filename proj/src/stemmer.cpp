// Porter stemming algorithm, including the two revisions the reference
// implementation makes to the original rule table (step 2 "bli"->"ble",
// added "logi"->"log") and the short-word guard.

#include "topiceval/stemmer.hpp"

#include <cstring>

#include "topiceval/textnorm.hpp"

namespace topiceval {
namespace {

struct Porter {
  std::string b;  // live word is b[0..k]
  int k = -1;
  int j = 0;  // stem end set by the last successful ends()

  bool cons(int i) const {
    switch (b[static_cast<size_t>(i)]) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of consonant-vowel-consonant sequences in b[0..j].
  int m() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool doublec(int i) const {
    if (i < 1) return false;
    if (b[static_cast<size_t>(i)] != b[static_cast<size_t>(i - 1)]) return false;
    return cons(i);
  }

  // consonant-vowel-consonant ending at i, last consonant not w, x or y
  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    char ch = b[static_cast<size_t>(i)];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(const char* s) {
    int len = static_cast<int>(std::strlen(s));
    if (len > k + 1) return false;
    if (b.compare(static_cast<size_t>(k - len + 1), static_cast<size_t>(len), s) != 0)
      return false;
    j = k - len;
    return true;
  }

  void setto(const char* s) {
    b.resize(static_cast<size_t>(j + 1));
    b.append(s);
    k = static_cast<int>(b.size()) - 1;
  }

  void r(const char* s) {
    if (m() > 0) setto(s);
  }

  void truncate(int new_k) {
    k = new_k;
    b.resize(static_cast<size_t>(k + 1));
  }

  // plurals and -ed / -ing
  void step1ab() {
    if (b[static_cast<size_t>(k)] == 's') {
      if (ends("sses")) {
        truncate(k - 2);
      } else if (ends("ies")) {
        setto("i");
      } else if (b[static_cast<size_t>(k - 1)] != 's') {
        truncate(k - 1);
      }
    }
    if (ends("eed")) {
      if (m() > 0) truncate(k - 1);
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      truncate(j);
      if (ends("at")) {
        setto("ate");
      } else if (ends("bl")) {
        setto("ble");
      } else if (ends("iz")) {
        setto("ize");
      } else if (doublec(k)) {
        char ch = b[static_cast<size_t>(k)];
        if (ch != 'l' && ch != 's' && ch != 'z') truncate(k - 1);
      } else if (m() == 1 && cvc(k)) {
        setto("e");
      }
    }
  }

  // terminal y -> i when the stem has another vowel
  void step1c() {
    if (ends("y") && vowel_in_stem()) b[static_cast<size_t>(k)] = 'i';
  }

  void step2() {
    static const char* const rules[][2] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},
        {"izer", "ize"},    {"bli", "ble"},     {"alli", "al"},    {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
        {"logi", "log"},
    };
    for (const auto& rule : rules) {
      if (ends(rule[0])) {
        r(rule[1]);
        return;
      }
    }
  }

  void step3() {
    static const char* const rules[][2] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    for (const auto& rule : rules) {
      if (ends(rule[0])) {
        r(rule[1]);
        return;
      }
    }
  }

  // drop remaining standard suffixes when the stem is long enough (m > 1)
  void step4() {
    static const char* const suffixes[] = {
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
        "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize",
    };
    for (const char* s : suffixes) {
      if (!ends(s)) continue;
      if (std::strcmp(s, "ion") == 0) {
        if (j < 0) return;
        char prev = b[static_cast<size_t>(j)];
        if (prev != 's' && prev != 't') continue;
      }
      if (m() > 1) truncate(j);
      return;
    }
  }

  // final -e and -ll cleanup
  void step5() {
    j = k;
    if (b[static_cast<size_t>(k)] == 'e') {
      int a = m();
      if (a > 1 || (a == 1 && !cvc(k - 1))) truncate(k - 1);
    }
    j = k;
    if (b[static_cast<size_t>(k)] == 'l' && doublec(k) && m() > 1) truncate(k - 1);
  }
};

bool all_lower_alpha(const std::string& w) {
  for (char c : w)
    if (c < 'a' || c > 'z') return false;
  return !w.empty();
}

}  // namespace

std::string porter_stem(const std::string& word) {
  if (word.size() <= 2 || !all_lower_alpha(word)) return word;
  Porter p;
  p.b = word;
  p.k = static_cast<int>(word.size()) - 1;
  p.step1ab();
  p.step1c();
  p.step2();
  p.step3();
  p.step4();
  p.step5();
  return p.b.substr(0, static_cast<size_t>(p.k + 1));
}

std::string root(const std::string& word) {
  std::string lowered = normalize_word(word);
  std::string out;
  size_t start = 0;
  while (start <= lowered.size()) {
    size_t dash = lowered.find('-', start);
    size_t end = dash == std::string::npos ? lowered.size() : dash;
    out += porter_stem(lowered.substr(start, end - start));
    if (dash == std::string::npos) break;
    out += '-';
    start = dash + 1;
  }
  return out;
}

}  // namespace topiceval
