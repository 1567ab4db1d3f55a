#pragma once

#include <cctype>
#include <sstream>
#include <string>

#include "duplex/timeline.hpp"

namespace duplex {

struct BackchannelJudgment {
  bool is_backchannel = false;
  bool matched_lexicon = false;
  Millis duration_ms = 0;
  int word_count = 0;
};

/// Lowercases, drops bracketed markers and punctuation, and collapses spaces.
/// Hyphens and apostrophes inside words survive ("uh-huh", "i'm").
inline std::string normalize_utterance(const std::string& text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  int bracket_depth = 0;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == '[') {
      ++bracket_depth;
      cleaned += ' ';
      continue;
    }
    if (c == ']' && bracket_depth > 0) {
      --bracket_depth;
      continue;
    }
    if (bracket_depth > 0) continue;
    if (std::isalnum(c) || c == '-' || c == '\'') {
      cleaned += static_cast<char>(std::tolower(c));
    } else {
      cleaned += ' ';
    }
  }
  std::istringstream words(cleaned);
  std::string word, out;
  while (words >> word) {
    const auto first = word.find_first_not_of("-'");
    const auto last = word.find_last_not_of("-'");
    if (first == std::string::npos) continue;
    if (!out.empty()) out += ' ';
    out += word.substr(first, last - first + 1);
  }
  return out;
}

inline int count_words(const std::string& normalized) {
  std::istringstream in(normalized);
  std::string w;
  int n = 0;
  while (in >> w) ++n;
  return n;
}

/// Short and either a lexicon token or at most `backchannel_max_words` words.
/// Without a transcript only the duration cap applies.
inline BackchannelJudgment judge_backchannel(const SpeechSegment& segment, const AnalysisConfig& config) {
  BackchannelJudgment j;
  j.duration_ms = segment.interval.duration();
  const bool short_enough = j.duration_ms <= config.backchannel_max_ms;
  if (!segment.text) {
    j.is_backchannel = short_enough;
    return j;
  }
  const std::string norm = normalize_utterance(*segment.text);
  j.word_count = count_words(norm);
  j.matched_lexicon = config.backchannel_lexicon.count(norm) > 0;
  j.is_backchannel =
      short_enough && (j.matched_lexicon || j.word_count <= config.backchannel_max_words);
  return j;
}

}  // namespace duplex
