#pragma once

#include <string>

namespace topiceval {

// Porter stemmer over a lowercase a-z word. Words of length <= 2 and words
// containing characters outside a-z are returned unchanged.
std::string porter_stem(const std::string& word);

// Rooting used by the overlap score: lowercase (Unicode, then NFC), then stem
// each hyphen-separated alphabetic segment independently and rejoin.
std::string root(const std::string& word);

}  // namespace topiceval
