#pragma once

#include <string>
#include <vector>

namespace topiceval {

// Canonical word form used everywhere words are compared as strings:
// Unicode lowercase (root locale) followed by NFC.
std::string normalize_word(const std::string& utf8);

std::string trim(const std::string& s);

// Lowercase alnum runs of `text`, in order of appearance.
std::vector<std::string> tokenize(const std::string& text);

}  // namespace topiceval
