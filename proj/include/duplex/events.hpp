#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "duplex/backchannel.hpp"
#include "duplex/structure.hpp"

namespace duplex {

enum class EventKind { SmoothTurnTransition, SuccessfulInterruption, FailedInterruption, Backchannel };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::SmoothTurnTransition: return "Smooth_Turn_Transition";
    case EventKind::SuccessfulInterruption: return "Successful_Interruption";
    case EventKind::FailedInterruption: return "Failed_Interruption";
    case EventKind::Backchannel: return "Backchannel";
  }
  return "?";
}

inline std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (auto k : {EventKind::SmoothTurnTransition, EventKind::SuccessfulInterruption,
                 EventKind::FailedInterruption, EventKind::Backchannel}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

/// A functional event. `initiator` is the incomer (or the new speaker of a
/// smooth transition); `responder` is the floor holder (or previous speaker).
struct InteractionEvent {
  EventKind kind;
  Interval interval;
  SpeakerId initiator;
  SpeakerId responder;

  friend bool operator==(const InteractionEvent&, const InteractionEvent&) = default;
};

inline void sort_events(std::vector<InteractionEvent>& events) {
  std::sort(events.begin(), events.end(), [](const InteractionEvent& a, const InteractionEvent& b) {
    return std::tie(a.interval, a.kind, a.initiator) < std::tie(b.interval, b.kind, b.initiator);
  });
}

/// Smooth transition across a gap or an exact latch; nothing for overlapping turns.
/// A latch is recorded as the 1 ms interval starting at the handover instant.
inline std::optional<InteractionEvent> classify_transition(const Turn& prev, const std::optional<Gap>& gap,
                                                           const Turn& next, const AnalysisConfig&) {
  if (prev.speaker == next.speaker) return std::nullopt;
  if (gap) return InteractionEvent{EventKind::SmoothTurnTransition, gap->interval, next.speaker, prev.speaker};
  if (next.interval.start() == prev.interval.end()) {
    const Millis t = next.interval.start();
    return InteractionEvent{EventKind::SmoothTurnTransition, Interval(t, t + 1), next.speaker, prev.speaker};
  }
  return std::nullopt;
}

namespace detail {

inline const SpeechSegment& segment_covering(const ChannelTrack& track, Millis t) {
  for (const auto& s : track.segments) {
    if (s.interval.contains(t)) return s;
  }
  throw std::logic_error("no segment of '" + track.speaker + "' covers " + std::to_string(t));
}

// First segment onset at or after `t`, with its speaker. Holder wins ties.
inline std::optional<std::pair<Millis, SpeakerId>> next_onset(const DialogueTimeline& tl, Millis t,
                                                              const SpeakerId& holder) {
  std::optional<std::pair<Millis, SpeakerId>> best;
  for (const auto& track : tl.tracks()) {
    for (const auto& s : track.segments) {
      if (s.interval.start() < t) continue;
      const bool better = !best || s.interval.start() < best->first ||
                          (s.interval.start() == best->first && track.speaker == holder);
      if (better) best = std::make_pair(s.interval.start(), track.speaker);
      break;
    }
  }
  return best;
}

}  // namespace detail

/// Resolves an overlap into a successful interruption, failed interruption, or
/// backchannel according to which party keeps talking afterwards.
inline InteractionEvent classify_overlap(const OverlapUnit& unit, const StructuralDecomposition&,
                                         const DialogueTimeline& tl, const AnalysisConfig& config) {
  const auto& holder_seg = detail::segment_covering(tl.track_of(unit.floor_holder), unit.interval.start());
  const auto& incomer_seg = detail::segment_covering(tl.track_of(unit.incomer), unit.interval.start());
  const Millis end = unit.interval.end();
  const Millis holder_tail = holder_seg.interval.end() - end;
  const Millis incomer_tail = incomer_seg.interval.end() - end;

  auto make = [&](EventKind k) { return InteractionEvent{k, unit.interval, unit.incomer, unit.floor_holder}; };
  auto defended = [&] {
    return make(judge_backchannel(incomer_seg, config).is_backchannel ? EventKind::Backchannel
                                                                      : EventKind::FailedInterruption);
  };

  if (holder_tail >= config.continuation_window_ms) return defended();
  if (incomer_tail >= config.continuation_window_ms) return make(EventKind::SuccessfulInterruption);

  // Both fall quiet soon after the overlap: whoever speaks next within twice the
  // continuation window owns the floor; silence beyond that means the holder yielded.
  const Millis quiet = std::max(holder_seg.interval.end(), incomer_seg.interval.end());
  const auto next = detail::next_onset(tl, quiet, unit.floor_holder);
  if (next && next->first - quiet <= 2 * config.continuation_window_ms) {
    return next->second == unit.floor_holder ? defended() : make(EventKind::SuccessfulInterruption);
  }
  return make(EventKind::SuccessfulInterruption);
}

/// Pairs of adjacent turns by different speakers that meet exactly, with no
/// speech from anyone on either side of the handover instant.
inline std::vector<std::pair<const Turn*, const Turn*>> latched_transitions(const StructuralDecomposition& d,
                                                                            const DialogueTimeline& tl) {
  std::vector<std::pair<const Turn*, const Turn*>> out;
  for (const auto& prev : d.turns) {
    for (const auto& next : d.turns) {
      if (prev.speaker == next.speaker || next.interval.start() != prev.interval.end()) continue;
      const Millis t = next.interval.start();
      const bool next_quiet_before =
          t - 1 < tl.span().start() ||
          phonatory_state(tl.track_of(next.speaker), t - 1, tl.span()) == PhonatoryState::Silence;
      const bool prev_quiet_after =
          phonatory_state(tl.track_of(prev.speaker), t, tl.span()) == PhonatoryState::Silence;
      if (next_quiet_before && prev_quiet_after) out.emplace_back(&prev, &next);
    }
  }
  return out;
}

inline std::vector<InteractionEvent> extract_events(const DialogueTimeline& tl, const StructuralDecomposition& d,
                                                    const AnalysisConfig& config) {
  std::vector<InteractionEvent> events;
  for (const auto& gap : d.gaps) {
    const Turn* prev = nullptr;
    const Turn* next = nullptr;
    for (const auto& t : d.turns) {
      if (t.speaker == gap.from_speaker && t.interval.end() == gap.interval.start()) prev = &t;
      if (t.speaker == gap.to_speaker && t.interval.start() == gap.interval.end()) next = &t;
    }
    if (prev && next) {
      if (auto e = classify_transition(*prev, gap, *next, config)) events.push_back(*e);
    }
  }
  for (const auto& [prev, next] : latched_transitions(d, tl)) {
    if (auto e = classify_transition(*prev, std::nullopt, *next, config)) events.push_back(*e);
  }
  for (const auto& unit : d.overlaps) {
    if (unit.interval.duration() < config.min_overlap_ms) continue;
    events.push_back(classify_overlap(unit, d, tl, config));
  }
  sort_events(events);
  return events;
}

/// Chronological functional events of a timeline.
inline std::vector<InteractionEvent> extract_events(const DialogueTimeline& tl, const AnalysisConfig& config) {
  return extract_events(tl, decompose(tl, config), config);
}

}  // namespace duplex
