#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "duplex/events.hpp"
#include "duplex/structure.hpp"
#include "duplex/timeline_json.hpp"

namespace duplex {

enum class ErrorType {
  InappropriateBargeIn,
  OverlyDeferentialCeding,
  DelayedTurnTransition,
  IgnoredInterruption,
  ContextualIncoherence,
  InterruptionAmnesia,
};

/// Fine-grained outcome classes: correct, semantic, over-reactive, under-reactive.
enum class FineLabel { CR, SE, QuickE, SlowE };
enum class Axis { Semantic, Timing };

inline std::string_view to_string(ErrorType t) {
  switch (t) {
    case ErrorType::InappropriateBargeIn: return "Inappropriate_Barge_in";
    case ErrorType::OverlyDeferentialCeding: return "Overly_Deferential_Ceding";
    case ErrorType::DelayedTurnTransition: return "Delayed_Turn_Transition";
    case ErrorType::IgnoredInterruption: return "Ignored_Interruption";
    case ErrorType::ContextualIncoherence: return "Contextual_Incoherence";
    case ErrorType::InterruptionAmnesia: return "Contextual_Incoherence_After_Interruption";
  }
  return "?";
}

inline std::string_view to_string(FineLabel l) {
  switch (l) {
    case FineLabel::CR: return "CR";
    case FineLabel::SE: return "SE";
    case FineLabel::QuickE: return "QuickE";
    case FineLabel::SlowE: return "SlowE";
  }
  return "?";
}

inline std::string_view to_string(Axis a) { return a == Axis::Semantic ? "semantic" : "timing"; }

/// Accepts the canonical spellings plus the variants used by generation prompts.
inline std::optional<ErrorType> parse_error_type(std::string_view s) {
  const std::string key = detail::lowercase(std::string(s));
  if (key == "inappropriate_barge_in") return ErrorType::InappropriateBargeIn;
  if (key == "overly_deferential_ceding") return ErrorType::OverlyDeferentialCeding;
  if (key == "delayed_turn_transition") return ErrorType::DelayedTurnTransition;
  if (key == "ignored_interruption") return ErrorType::IgnoredInterruption;
  if (key == "contextual_incoherence") return ErrorType::ContextualIncoherence;
  if (key == "contextual_incoherence_after_interruption" ||
      key == "contextual_amnesia_after_interruption" || key == "interruption_amnesia") {
    return ErrorType::InterruptionAmnesia;
  }
  return std::nullopt;
}

inline std::optional<FineLabel> parse_fine_label(std::string_view s) {
  for (auto l : {FineLabel::CR, FineLabel::SE, FineLabel::QuickE, FineLabel::SlowE}) {
    if (to_string(l) == s) return l;
  }
  return std::nullopt;
}

inline FineLabel coarse_class(ErrorType t) {
  switch (t) {
    case ErrorType::InappropriateBargeIn:
    case ErrorType::OverlyDeferentialCeding: return FineLabel::QuickE;
    case ErrorType::DelayedTurnTransition:
    case ErrorType::IgnoredInterruption: return FineLabel::SlowE;
    case ErrorType::ContextualIncoherence:
    case ErrorType::InterruptionAmnesia: return FineLabel::SE;
  }
  return FineLabel::SE;
}

inline Axis axis_of(ErrorType t) { return coarse_class(t) == FineLabel::SE ? Axis::Semantic : Axis::Timing; }

struct ErrorFinding {
  ErrorType error_type;
  Interval evidence;
  std::string description;

  FineLabel coarse() const { return coarse_class(error_type); }
  Axis axis() const { return axis_of(error_type); }

  friend bool operator==(const ErrorFinding&, const ErrorFinding&) = default;
};

struct InteractionVerdict {
  int score = 1;
  std::vector<ErrorFinding> semantic_findings;
  std::vector<ErrorFinding> timing_findings;
  std::string semantic_summary;
  std::string timing_summary;
};

namespace detail {

inline std::string seconds_label(Millis ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", ms_to_seconds(ms));
  return buf;
}

inline void sort_findings(std::vector<ErrorFinding>& f) {
  std::sort(f.begin(), f.end(), [](const ErrorFinding& a, const ErrorFinding& b) {
    return std::tie(a.evidence, a.error_type) < std::tie(b.evidence, b.error_type);
  });
}

}  // namespace detail

/// Applies the turn-management failure rules to extracted events and structure.
inline std::vector<ErrorFinding> detect_timing_errors(const std::vector<InteractionEvent>& events,
                                                      const StructuralDecomposition& d,
                                                      const DialogueTimeline& tl,
                                                      const AnalysisConfig& config) {
  const SpeakerId& user = tl.speaker_for(Role::User);
  const SpeakerId& sys = tl.speaker_for(Role::System);
  std::vector<ErrorFinding> out;

  for (const auto& e : events) {
    const bool interruption =
        e.kind == EventKind::SuccessfulInterruption || e.kind == EventKind::FailedInterruption;
    if (interruption && e.initiator == sys && !tl.labels().justified_interruption) {
      const Millis onset = detail::segment_covering(tl.track_of(sys), e.interval.start()).interval.start();
      const bool in_user_turn = std::any_of(d.turns.begin(), d.turns.end(), [&](const Turn& t) {
        return t.speaker == user && t.interval.contains(onset);
      });
      if (in_user_turn) {
        out.push_back({ErrorType::InappropriateBargeIn, Interval(onset, e.interval.end()),
                       "system started speaking at " + detail::seconds_label(onset) +
                           " s while the user still held the floor until " +
                           detail::seconds_label(e.interval.end()) + " s"});
      }
    }
    if (e.kind == EventKind::FailedInterruption && e.initiator == user && e.responder == sys) {
      out.push_back({ErrorType::IgnoredInterruption, e.interval,
                     "system kept talking over the user's interruption at " +
                         detail::seconds_label(e.interval.start()) + " s"});
    }
    if (e.kind == EventKind::Backchannel && e.initiator == user && e.responder == sys) {
      const auto& sys_seg = detail::segment_covering(tl.track_of(sys), e.interval.start());
      const auto& bc_seg = detail::segment_covering(tl.track_of(user), e.interval.start());
      if (sys_seg.interval.end() <= bc_seg.interval.end() + config.ceding_window_ms) {
        out.push_back({ErrorType::OverlyDeferentialCeding, Interval(e.interval.start(), sys_seg.interval.end()),
                       "system stopped at " + detail::seconds_label(sys_seg.interval.end()) +
                           " s after a user backchannel at " + detail::seconds_label(e.interval.start()) + " s"});
      }
    }
  }
  for (const auto& g : d.gaps) {
    if (g.interval.duration() > config.delayed_gap_ms) {
      out.push_back({ErrorType::DelayedTurnTransition, g.interval,
                     detail::seconds_label(g.interval.duration()) + " s of silence before '" + g.to_speaker +
                         "' took the turn"});
    }
  }
  detail::sort_findings(out);
  return out;
}

/// Semantic errors are carried as scenario labels, not judged from content.
inline std::vector<ErrorFinding> propagate_semantic_labels(const DialogueTimeline& tl) {
  const auto& label = tl.labels().error_type;
  if (!label) return {};
  const auto type = parse_error_type(*label);
  if (!type) throw ValidationError("unrecognized error_type '" + *label + "'");
  if (axis_of(*type) != Axis::Semantic) return {};
  return {ErrorFinding{*type, tl.span(), "labelled " + std::string(to_string(*type)) + " in scenario metadata"}};
}

namespace detail {

inline std::string summarize(const char* dimension, const std::vector<ErrorFinding>& findings) {
  std::string s = std::string(dimension) + ": ";
  if (findings.empty()) return s + "no issues found.";
  s += std::to_string(findings.size()) + (findings.size() == 1 ? " issue." : " issues.");
  for (const auto& f : findings) {
    s += " " + std::string(to_string(f.error_type)) + " [" + seconds_label(f.evidence.start()) + "-" +
         seconds_label(f.evidence.end()) + " s]: " + f.description + ".";
  }
  return s;
}

}  // namespace detail

/// Score 1 iff neither dimension has a finding.
inline InteractionVerdict render_verdict(std::vector<ErrorFinding> semantic, std::vector<ErrorFinding> timing) {
  InteractionVerdict v;
  detail::sort_findings(semantic);
  detail::sort_findings(timing);
  v.score = semantic.empty() && timing.empty() ? 1 : 0;
  v.semantic_summary = detail::summarize("Response relevance", semantic);
  v.timing_summary = detail::summarize("Interactional fluency", timing);
  v.semantic_findings = std::move(semantic);
  v.timing_findings = std::move(timing);
  return v;
}

/// CR for a clean verdict, otherwise the most severe class present (SE > QuickE > SlowE).
inline FineLabel classify_fine_grained(const InteractionVerdict& v) {
  if (v.score == 1) return FineLabel::CR;
  bool quick = false;
  for (const auto* list : {&v.semantic_findings, &v.timing_findings}) {
    for (const auto& f : *list) {
      if (f.coarse() == FineLabel::SE) return FineLabel::SE;
      quick = quick || f.coarse() == FineLabel::QuickE;
    }
  }
  return quick ? FineLabel::QuickE : FineLabel::SlowE;
}

}  // namespace duplex
