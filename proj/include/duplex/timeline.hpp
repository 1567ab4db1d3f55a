#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "duplex/interval.hpp"

namespace duplex {

enum class Role { User, System };

inline const char* to_string(Role r) { return r == Role::User ? "user" : "system"; }

enum class PhonatoryState { Speech, Silence };

struct SpeechSegment {
  Interval interval;
  std::optional<std::string> text;

  friend bool operator==(const SpeechSegment&, const SpeechSegment&) = default;
};

/// One speaker's channel: start-sorted, pairwise disjoint speech segments.
struct ChannelTrack {
  SpeakerId speaker;
  std::vector<SpeechSegment> segments;

  IntervalList speech() const {
    IntervalList out;
    out.reserve(segments.size());
    for (const auto& s : segments) out.push_back(s.interval);
    return out;
  }

  friend bool operator==(const ChannelTrack&, const ChannelTrack&) = default;
};

/// Scenario labels carried alongside a timeline (ground truth for compiled data).
struct ScenarioLabels {
  std::optional<std::string> event_type;
  std::optional<std::string> error_type;
  // Marks a system interruption as warranted, suppressing the barge-in finding.
  bool justified_interruption = false;

  friend bool operator==(const ScenarioLabels&, const ScenarioLabels&) = default;
};

/// Analysis thresholds, all in milliseconds except the word limit.
struct AnalysisConfig {
  Millis delayed_gap_ms = 3000;
  Millis min_overlap_ms = 200;
  Millis backchannel_max_ms = 1000;
  int backchannel_max_words = 3;
  Millis continuation_window_ms = 500;
  Millis ceding_window_ms = 1000;
  std::set<std::string> backchannel_lexicon = {"uh-huh", "mm-hmm", "right", "okay", "ok",
                                               "yeah",   "yes",    "i see", "got it", "sure"};

  void validate() const {
    if (delayed_gap_ms <= 0 || min_overlap_ms <= 0 || backchannel_max_ms <= 0 ||
        backchannel_max_words <= 0 || continuation_window_ms <= 0 || ceding_window_ms <= 0) {
      throw ValidationError("analysis thresholds must all be positive");
    }
    if (backchannel_lexicon.empty()) throw ValidationError("backchannel lexicon is empty");
  }
};

/// A validated two-party dialogue. Immutable once built.
class DialogueTimeline {
 public:
  /// Validates and builds a timeline. `span` defaults to [0, last end + 1).
  static DialogueTimeline create(ChannelTrack first, ChannelTrack second,
                                 std::array<Role, 2> roles,
                                 std::optional<Interval> span = std::nullopt,
                                 ScenarioLabels labels = {}) {
    if (first.speaker.empty() || second.speaker.empty()) {
      throw ValidationError("speaker ids must be non-empty");
    }
    if (first.speaker == second.speaker) {
      throw ValidationError("both tracks belong to speaker '" + first.speaker + "'");
    }
    if (roles[0] == roles[1]) {
      throw ValidationError("role map must assign one user and one system speaker");
    }
    Millis last_end = 0;
    for (const ChannelTrack* track : {&first, &second}) {
      const auto& segs = track->segments;
      for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].text) {
          const auto& t = *segs[i].text;
          if (t.find_first_not_of(" \t\r\n") == std::string::npos) {
            throw ValidationError("segment text for '" + track->speaker + "' is blank");
          }
        }
        if (i > 0 && segs[i].interval.start() < segs[i - 1].interval.end()) {
          throw ValidationError("segments of '" + track->speaker +
                                "' are unsorted or overlap at " +
                                std::to_string(segs[i].interval.start()) + " ms");
        }
        last_end = std::max(last_end, segs[i].interval.end());
      }
    }
    const Interval resolved = span.value_or(Interval(0, last_end + 1));
    for (const ChannelTrack* track : {&first, &second}) {
      for (const auto& s : track->segments) {
        if (!resolved.covers(s.interval)) {
          throw ValidationError("segment of '" + track->speaker + "' lies outside the span");
        }
      }
    }
    return DialogueTimeline({std::move(first), std::move(second)}, roles, resolved,
                            std::move(labels));
  }

  const std::array<ChannelTrack, 2>& tracks() const noexcept { return tracks_; }
  const ChannelTrack& track(std::size_t i) const { return tracks_.at(i); }
  const Interval& span() const noexcept { return span_; }
  const ScenarioLabels& labels() const noexcept { return labels_; }
  Role role(std::size_t i) const { return roles_.at(i); }

  std::size_t index_of(const SpeakerId& speaker) const {
    if (tracks_[0].speaker == speaker) return 0;
    if (tracks_[1].speaker == speaker) return 1;
    throw ValidationError("unknown speaker '" + speaker + "'");
  }
  const ChannelTrack& track_of(const SpeakerId& speaker) const { return tracks_[index_of(speaker)]; }
  Role role_of(const SpeakerId& speaker) const { return roles_[index_of(speaker)]; }
  const SpeakerId& speaker_for(Role r) const { return tracks_[roles_[0] == r ? 0 : 1].speaker; }
  const SpeakerId& other(const SpeakerId& speaker) const {
    return tracks_[1 - index_of(speaker)].speaker;
  }

  /// Same dialogue with every timestamp moved by `delta` ms.
  DialogueTimeline shifted(Millis delta) const {
    auto moved = tracks_;
    for (auto& t : moved) {
      for (auto& s : t.segments) s.interval = s.interval.shifted(delta);
    }
    return DialogueTimeline(std::move(moved), roles_, span_.shifted(delta), labels_);
  }

  /// Same dialogue with the two tracks stored in the opposite order.
  DialogueTimeline swapped() const {
    return DialogueTimeline({tracks_[1], tracks_[0]}, {roles_[1], roles_[0]}, span_, labels_);
  }

  friend bool operator==(const DialogueTimeline&, const DialogueTimeline&) = default;

 private:
  DialogueTimeline(std::array<ChannelTrack, 2> tracks, std::array<Role, 2> roles, Interval span,
                   ScenarioLabels labels)
      : tracks_(std::move(tracks)), roles_(roles), span_(span), labels_(std::move(labels)) {}

  std::array<ChannelTrack, 2> tracks_;
  std::array<Role, 2> roles_;
  Interval span_;
  ScenarioLabels labels_;
};

// --- interval algebra -------------------------------------------------------

/// Speech iff t falls in [start, end) of some segment.
inline PhonatoryState phonatory_state(const ChannelTrack& track, Millis t, const Interval& span) {
  if (!span.contains(t)) {
    throw ValidationError("time " + std::to_string(t) + " ms is outside the dialogue span");
  }
  auto it = std::upper_bound(track.segments.begin(), track.segments.end(), t,
                             [](Millis v, const SpeechSegment& s) { return v < s.interval.start(); });
  if (it == track.segments.begin()) return PhonatoryState::Silence;
  --it;
  return it->interval.contains(t) ? PhonatoryState::Speech : PhonatoryState::Silence;
}

inline PhonatoryState phonatory_state(const DialogueTimeline& tl, const SpeakerId& speaker, Millis t) {
  return phonatory_state(tl.track_of(speaker), t, tl.span());
}

/// Maximal silent stretches of `track` inside `span`.
inline IntervalList silence_segments(const ChannelTrack& track, const Interval& span) {
  return detail::complement_within(track.speech(), span);
}

/// Maximal stretches where both speakers talk at once.
inline IntervalList overlap_intervals(const DialogueTimeline& tl) {
  return detail::intersect_sorted(detail::merge_touching(tl.track(0).speech()),
                                  detail::merge_touching(tl.track(1).speech()));
}

/// Maximal stretches where neither speaker talks.
inline IntervalList mutual_silences(const DialogueTimeline& tl) {
  return detail::intersect_sorted(silence_segments(tl.track(0), tl.span()),
                                  silence_segments(tl.track(1), tl.span()));
}

}  // namespace duplex
