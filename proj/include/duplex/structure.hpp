#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "duplex/backchannel.hpp"
#include "duplex/timeline.hpp"

namespace duplex {

/// Intra-speaker silence that does not hand over the floor.
struct Pause {
  SpeakerId speaker;
  Interval interval;
  friend bool operator==(const Pause&, const Pause&) = default;
};

/// A maximal contribution of one speaker, possibly spanning several pauses.
struct Turn {
  SpeakerId speaker;
  Interval interval;
  std::vector<std::size_t> segment_indices;  // into the speaker's track
  std::vector<Pause> internal_pauses;
  friend bool operator==(const Turn&, const Turn&) = default;
};

/// Mutual silence between one speaker's turn end and the other's turn start.
struct Gap {
  Interval interval;
  SpeakerId from_speaker;
  SpeakerId to_speaker;
  friend bool operator==(const Gap&, const Gap&) = default;
};

struct OverlapUnit {
  Interval interval;
  SpeakerId floor_holder;
  SpeakerId incomer;
  friend bool operator==(const OverlapUnit&, const OverlapUnit&) = default;
};

struct StructuralDecomposition {
  std::vector<Turn> turns;
  std::vector<Gap> gaps;
  std::vector<OverlapUnit> overlaps;
  std::vector<Pause> pauses;
  friend bool operator==(const StructuralDecomposition&, const StructuralDecomposition&) = default;
};

/// A same-speaker silence [a, b) is a pause unless the other speaker took the floor
/// inside it: a competitive (non-backchannel) utterance of theirs finishes inside
/// (a, b], or their speech within the silence already runs longer than any
/// backchannel could. A short start that is still running when the speaker
/// resumes does not end the pause; it is talking over it.
inline std::vector<Pause> detect_pauses(const DialogueTimeline& tl, const AnalysisConfig& config) {
  std::vector<Pause> out;
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& own = tl.track(k);
    const auto& other = tl.track(1 - k);
    for (std::size_t i = 1; i < own.segments.size(); ++i) {
      const Millis a = own.segments[i - 1].interval.end();
      const Millis b = own.segments[i].interval.start();
      if (a == b) continue;
      const bool floor_changed =
          std::any_of(other.segments.begin(), other.segments.end(), [&](const SpeechSegment& s) {
            const Millis e = s.interval.end();
            if (e > a && e <= b && !judge_backchannel(s, config).is_backchannel) return true;
            const Millis inside = std::min(e, b) - std::max(s.interval.start(), a);
            return inside > config.backchannel_max_ms;
          });
      if (!floor_changed) out.push_back(Pause{own.speaker, Interval(a, b)});
    }
  }
  std::sort(out.begin(), out.end(), [](const Pause& x, const Pause& y) {
    return std::tie(x.interval, x.speaker) < std::tie(y.interval, y.speaker);
  });
  return out;
}

namespace detail {

inline std::vector<Turn> group_turns(const DialogueTimeline& tl, const std::vector<Pause>& pauses) {
  std::set<std::pair<SpeakerId, Millis>> pause_starts;
  for (const auto& p : pauses) pause_starts.emplace(p.speaker, p.interval.start());

  std::vector<Turn> turns;
  for (const auto& track : tl.tracks()) {
    const auto& segs = track.segments;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const bool joins_previous =
          i > 0 && (segs[i - 1].interval.end() == segs[i].interval.start() ||
                    pause_starts.count({track.speaker, segs[i - 1].interval.end()}) > 0);
      if (joins_previous) {
        Turn& t = turns.back();
        if (segs[i - 1].interval.end() != segs[i].interval.start()) {
          t.internal_pauses.push_back(
              Pause{track.speaker, Interval(segs[i - 1].interval.end(), segs[i].interval.start())});
        }
        t.interval = Interval(t.interval.start(), segs[i].interval.end());
        t.segment_indices.push_back(i);
      } else {
        turns.push_back(Turn{track.speaker, segs[i].interval, {i}, {}});
      }
    }
  }
  std::sort(turns.begin(), turns.end(), [](const Turn& a, const Turn& b) {
    return std::tie(a.interval, a.speaker) < std::tie(b.interval, b.speaker);
  });
  return turns;
}

inline const Turn* turn_covering(const std::vector<Turn>& turns, const SpeakerId& speaker, Millis t) {
  for (const auto& turn : turns) {
    if (turn.speaker == speaker && turn.interval.contains(t)) return &turn;
  }
  return nullptr;
}

}  // namespace detail

/// Groups each speaker's segments into turns joined by detected pauses.
inline std::vector<Turn> build_turns(const DialogueTimeline& tl, const AnalysisConfig& config) {
  return detail::group_turns(tl, detect_pauses(tl, config));
}

/// One gap per mutual silence that separates a turn end from another speaker's turn start.
inline std::vector<Gap> detect_gaps(const std::vector<Turn>& turns, const DialogueTimeline& tl) {
  std::vector<Gap> out;
  for (const auto& silence : mutual_silences(tl)) {
    std::optional<Gap> found;
    for (const auto& starter : turns) {
      if (starter.interval.start() != silence.end()) continue;
      for (const auto& ender : turns) {
        if (ender.interval.end() != silence.start() || ender.speaker == starter.speaker) continue;
        if (!found || starter.speaker < found->to_speaker) {
          found = Gap{silence, ender.speaker, starter.speaker};
        }
      }
    }
    if (found) out.push_back(*found);
  }
  return out;
}

/// Floor holder is the speaker whose turn began first; on a tie, whoever held
/// the preceding turn; failing that, the lexicographically smaller id.
inline OverlapUnit annotate_overlap(const Interval& overlap, const std::vector<Turn>& turns,
                                    const DialogueTimeline& tl) {
  const SpeakerId& a = tl.track(0).speaker;
  const SpeakerId& b = tl.track(1).speaker;
  const Turn* ta = detail::turn_covering(turns, a, overlap.start());
  const Turn* tb = detail::turn_covering(turns, b, overlap.start());
  if (ta == nullptr || tb == nullptr) {
    throw std::logic_error("overlap not covered by turns of both speakers");
  }
  auto unit = [&](const SpeakerId& holder) {
    return OverlapUnit{overlap, holder, holder == a ? b : a};
  };
  if (ta->interval.start() != tb->interval.start()) {
    return unit(ta->interval.start() < tb->interval.start() ? a : b);
  }
  const Millis onset = ta->interval.start();
  const Turn* previous = nullptr;
  for (const auto& t : turns) {
    if (t.interval.end() <= onset && (previous == nullptr || t.interval.end() >= previous->interval.end())) {
      previous = &t;
    }
  }
  if (previous != nullptr) return unit(previous->speaker);
  return unit(std::min(a, b));
}

inline StructuralDecomposition decompose(const DialogueTimeline& tl, const AnalysisConfig& config) {
  StructuralDecomposition d;
  d.pauses = detect_pauses(tl, config);
  d.turns = detail::group_turns(tl, d.pauses);
  d.gaps = detect_gaps(d.turns, tl);
  for (const auto& ov : overlap_intervals(tl)) d.overlaps.push_back(annotate_overlap(ov, d.turns, tl));
  return d;
}

}  // namespace duplex
