#pragma once

#include <fstream>
#include <string>

#include "duplex/json_io.hpp"
#include "duplex/reward.hpp"
#include "duplex/scenario.hpp"
#include "duplex/timeline.hpp"

namespace duplex {

struct ToolConfig {
  AnalysisConfig analysis;
  DurationModel duration;
  RewardWeights weights;
  double epsilon = 0.2;
  int k = 4;

  void validate() const {
    analysis.validate();
    duration.validate();
    weights.validate();
    if (!(epsilon > 0 && epsilon < 1)) throw ValidationError("epsilon must lie in (0, 1)");
    if (k < 2) throw ValidationError("k must be at least 2");
  }
};

namespace detail {

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("config field '") + key + "' has the wrong type");
  }
}

inline void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  if (!obj.is_object()) throw ValidationError("config section '" + where + "' must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return it.key() == k; })) {
      throw ValidationError("unknown config key '" + where + it.key() + "'");
    }
  }
}

}  // namespace detail

/// Overlays a JSON config document onto `cfg`; absent keys keep their values.
inline void apply_config(const json& doc, ToolConfig& cfg) {
  detail::reject_unknown(doc, {"analysis", "duration", "weights", "epsilon", "k"}, "");
  if (doc.contains("analysis")) {
    const json& a = doc.at("analysis");
    detail::reject_unknown(a,
                           {"delayed_gap_ms", "min_overlap_ms", "backchannel_max_ms", "backchannel_max_words",
                            "continuation_window_ms", "ceding_window_ms", "backchannel_lexicon"},
                           "analysis.");
    detail::read_field(a, "delayed_gap_ms", cfg.analysis.delayed_gap_ms);
    detail::read_field(a, "min_overlap_ms", cfg.analysis.min_overlap_ms);
    detail::read_field(a, "backchannel_max_ms", cfg.analysis.backchannel_max_ms);
    detail::read_field(a, "backchannel_max_words", cfg.analysis.backchannel_max_words);
    detail::read_field(a, "continuation_window_ms", cfg.analysis.continuation_window_ms);
    detail::read_field(a, "ceding_window_ms", cfg.analysis.ceding_window_ms);
    if (a.contains("backchannel_lexicon")) {
      std::set<std::string> lex;
      detail::read_field(a, "backchannel_lexicon", lex);
      cfg.analysis.backchannel_lexicon.clear();
      for (const auto& w : lex) cfg.analysis.backchannel_lexicon.insert(normalize_utterance(w));
    }
  }
  if (doc.contains("duration")) {
    const json& d = doc.at("duration");
    detail::reject_unknown(d,
                           {"speech_rate_wpm", "inter_turn_gap_ms", "intra_pause_ms", "barge_in_offset_ms",
                            "backchannel_dur_ms", "interrupt_reaction_ms"},
                           "duration.");
    detail::read_field(d, "speech_rate_wpm", cfg.duration.speech_rate_wpm);
    detail::read_field(d, "inter_turn_gap_ms", cfg.duration.inter_turn_gap_ms);
    detail::read_field(d, "intra_pause_ms", cfg.duration.intra_pause_ms);
    detail::read_field(d, "barge_in_offset_ms", cfg.duration.barge_in_offset_ms);
    detail::read_field(d, "backchannel_dur_ms", cfg.duration.backchannel_dur_ms);
    detail::read_field(d, "interrupt_reaction_ms", cfg.duration.interrupt_reaction_ms);
  }
  if (doc.contains("weights")) {
    const json& w = doc.at("weights");
    detail::reject_unknown(w, {"lambda_fmt", "lambda_acc"}, "weights.");
    detail::read_field(w, "lambda_fmt", cfg.weights.lambda_fmt);
    detail::read_field(w, "lambda_acc", cfg.weights.lambda_acc);
  }
  detail::read_field(doc, "epsilon", cfg.epsilon);
  detail::read_field(doc, "k", cfg.k);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline ToolConfig load_config(const std::string& path) {
  ToolConfig cfg;
  apply_config(read_json_file(path), cfg);
  cfg.validate();
  return cfg;
}

}  // namespace duplex
