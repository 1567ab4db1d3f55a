#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "duplex/analysis.hpp"
#include "duplex/events.hpp"
#include "duplex/json_io.hpp"
#include "duplex/timeline.hpp"
#include "duplex/timeline_json.hpp"

namespace duplex {

// --- script model -------------------------------------------------------------

enum class MarkerKind {
  Interact,             // [INTERACT] / [interrupt]: interruption point, the rest is unsaid
  Backchannel,          // [BC]: inline anchor, or the prefix of a backchannel turn
  Pause,                // [PAUSE]: intra-turn pause
  BargeIn,              // [barge_in]: turn prefix, starts inside the other speaker's pause
  UserInterruptStarts,  // [user_interrupt_starts]: where an ignored interjection begins
  OverlapsAssistant,    // [overlaps_assistant]: turn prefix for that interjection
};

inline std::optional<MarkerKind> parse_marker_name(std::string name) {
  name = detail::lowercase(std::move(name));
  if (name == "interact" || name == "interrupt") return MarkerKind::Interact;
  if (name == "bc") return MarkerKind::Backchannel;
  if (name == "pause") return MarkerKind::Pause;
  if (name == "barge_in") return MarkerKind::BargeIn;
  if (name == "user_interrupt_starts") return MarkerKind::UserInterruptStarts;
  if (name == "overlaps_assistant") return MarkerKind::OverlapsAssistant;
  return std::nullopt;
}

struct Marker {
  MarkerKind kind;
  std::size_t char_offset;  // position of '[' in the turn text
  std::size_t word_index;   // rendered words preceding the marker
  friend bool operator==(const Marker&, const Marker&) = default;
};

struct SpokenTurn {
  SpeakerId speaker;
  std::string text;
  std::optional<MarkerKind> prefix;
  std::vector<Marker> markers;     // inline markers, in text order
  std::vector<std::string> words;  // rendered words; punctuation-only tokens dropped

  bool has(MarkerKind k) const {
    return std::any_of(markers.begin(), markers.end(), [k](const Marker& m) { return m.kind == k; });
  }
  std::size_t count(MarkerKind k) const {
    return static_cast<std::size_t>(
        std::count_if(markers.begin(), markers.end(), [k](const Marker& m) { return m.kind == k; }));
  }
  const Marker* find(MarkerKind k) const {
    for (const auto& m : markers) {
      if (m.kind == k) return &m;
    }
    return nullptr;
  }
};

struct PauseDirective {
  Millis duration_ms;
};

using ScriptItem = std::variant<SpokenTurn, PauseDirective>;

struct ScenarioScript {
  std::vector<ScriptItem> items;
  std::optional<std::string> event_type;
  std::optional<std::string> error_type;
  bool justified_interruption = false;
  std::map<SpeakerId, Role> roles;  // explicit assignments, if any
};

/// Rendering parameters standing in for speech synthesis.
struct DurationModel {
  int speech_rate_wpm = 150;
  Millis inter_turn_gap_ms = 400;
  Millis intra_pause_ms = 800;
  Millis barge_in_offset_ms = 300;
  Millis backchannel_dur_ms = 500;
  Millis interrupt_reaction_ms = 250;

  Millis word_ms() const { return static_cast<Millis>(std::llround(60000.0 / speech_rate_wpm)); }

  void validate() const {
    if (speech_rate_wpm <= 0 || inter_turn_gap_ms <= 0 || intra_pause_ms <= 0 || barge_in_offset_ms <= 0 ||
        backchannel_dur_ms <= 0 || interrupt_reaction_ms <= 0) {
      throw ValidationError("duration model parameters must all be positive");
    }
  }
};

struct CompiledScenario {
  DialogueTimeline timeline;
  std::vector<InteractionEvent> ground_truth_events;
  std::optional<std::string> ground_truth_error;
  json transcript_meta;
};

// --- parsing ------------------------------------------------------------------

inline constexpr int kMaxBackchannelWords = 3;
// Speech an anchored speaker needs before an overlap begins, so that the
// overlapping utterance cannot be read as the other party's own turn continuing.
inline constexpr Millis kMinAnchorLeadMs = 1000;

/// Splits turn text into rendered words and markers.
inline SpokenTurn tokenize_turn(SpeakerId speaker, std::string text) {
  SpokenTurn turn{std::move(speaker), std::move(text), std::nullopt, {}, {}};
  const std::string& s = turn.text;
  std::string word;
  auto flush = [&] {
    const bool has_alnum = std::any_of(word.begin(), word.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) != 0;
    });
    if (has_alnum) turn.words.push_back(word);
    word.clear();
  };
  bool seen_content = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '[') {
      flush();
      const auto close = s.find(']', i);
      if (close == std::string::npos) throw ValidationError("unterminated marker in \"" + s + "\"");
      std::string name = s.substr(i + 1, close - i - 1);
      const auto kind = parse_marker_name(name);
      if (!kind) throw ValidationError("unknown marker [" + name + "]");
      const bool is_prefix_kind = *kind == MarkerKind::BargeIn || *kind == MarkerKind::OverlapsAssistant ||
                                  *kind == MarkerKind::Backchannel;
      if (!seen_content && is_prefix_kind && !turn.prefix) {
        turn.prefix = *kind;
      } else if (*kind == MarkerKind::BargeIn || *kind == MarkerKind::OverlapsAssistant) {
        throw ValidationError("[" + name + "] is only valid at the start of a turn");
      } else {
        turn.markers.push_back(Marker{*kind, i, turn.words.size()});
      }
      i = close;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      word += c;
      seen_content = true;
    }
  }
  flush();
  return turn;
}

/// Parses a pause length such as "4.0s", "2500ms", or a number of seconds.
inline Millis parse_pause_duration(const json& value) {
  if (value.is_number()) return seconds_to_ms(value);
  if (!value.is_string()) throw ValidationError("malformed pause duration " + value.dump());
  std::string s = value.get<std::string>();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  try {
    if (s.size() > 2 && detail::lowercase(s.substr(s.size() - 2)) == "ms") {
      const std::string digits = s.substr(0, s.size() - 2);
      if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c)) != 0;
          })) {
        throw ValidationError("");
      }
      return std::stoll(digits);
    }
    if (!s.empty() && (s.back() == 's' || s.back() == 'S')) s.pop_back();
    return parse_decimal_seconds(s);
  } catch (const ValidationError&) {
    throw ValidationError("malformed pause duration '" + value.get<std::string>() + "'");
  }
}

/// Parses a marker-annotated dialogue script and checks the marker grammar.
inline ScenarioScript parse_script(const json& doc) {
  if (!doc.is_object() || !doc.contains("dialogue") || !doc.at("dialogue").is_array()) {
    throw ValidationError("script needs a 'dialogue' array");
  }
  ScenarioScript script;
  std::vector<SpeakerId> speakers;
  std::optional<SpokenTurn> previous;

  for (const auto& item : doc.at("dialogue")) {
    if (!item.is_object()) throw ValidationError("dialogue items must be objects");
    if (item.contains("pause")) {
      script.items.emplace_back(PauseDirective{parse_pause_duration(item.at("pause"))});
      previous.reset();
      continue;
    }
    if (!item.contains("speaker") || !item.at("speaker").is_string() || !item.contains("text") ||
        !item.at("text").is_string()) {
      throw ValidationError("dialogue turns need string 'speaker' and 'text'");
    }
    SpokenTurn turn = tokenize_turn(item.at("speaker").get<std::string>(), item.at("text").get<std::string>());
    if (std::find(speakers.begin(), speakers.end(), turn.speaker) == speakers.end()) {
      speakers.push_back(turn.speaker);
    }

    if (turn.count(MarkerKind::Interact) > 1) {
      throw ValidationError("[INTERACT] appears more than once in \"" + turn.text + "\"");
    }
    if (const Marker* m = turn.find(MarkerKind::Interact); m && m->word_index >= turn.words.size()) {
      throw ValidationError("[INTERACT] has no latent tail text after it in \"" + turn.text + "\"");
    }
    if (turn.count(MarkerKind::Backchannel) > 1 || turn.count(MarkerKind::UserInterruptStarts) > 1) {
      throw ValidationError("a turn may carry at most one [BC] and one [user_interrupt_starts] anchor");
    }
    if (turn.prefix == MarkerKind::Backchannel) {
      if (!previous || !previous->has(MarkerKind::Backchannel) || previous->speaker == turn.speaker) {
        throw ValidationError("\"[BC] \" turn does not follow a turn with an inline [BC] anchor");
      }
    }
    if (turn.prefix == MarkerKind::OverlapsAssistant) {
      if (!previous || !previous->has(MarkerKind::UserInterruptStarts) || previous->speaker == turn.speaker) {
        throw ValidationError("[overlaps_assistant] turn does not follow a [user_interrupt_starts] turn");
      }
    }
    if (turn.words.empty()) throw ValidationError("turn renders no words: \"" + turn.text + "\"");
    previous = turn;
    script.items.emplace_back(std::move(turn));
  }
  if (speakers.size() > 2) throw ValidationError("a script may involve at most two speakers");

  script.event_type = detail::optional_string(doc, "event_type");
  script.error_type = detail::optional_string(doc, "error_type");
  if (doc.contains("justified_interruption")) script.justified_interruption = doc.at("justified_interruption").get<bool>();
  if (doc.contains("roles")) {
    for (auto it = doc.at("roles").begin(); it != doc.at("roles").end(); ++it) {
      auto role = detail::parse_role_name(it.value().get<std::string>());
      if (!role) throw ValidationError("unknown role '" + it.value().get<std::string>() + "'");
      script.roles[it.key()] = *role;
    }
  }
  return script;
}

// --- compilation --------------------------------------------------------------

namespace detail {

struct RenderedTurn {
  std::vector<SpeechSegment> segments;
  Millis onset = 0;
  Millis end = 0;
  std::optional<Millis> interact_stop;
  std::optional<Millis> bc_anchor;
  std::optional<Millis> uis_anchor;
  std::optional<Interval> last_pause;
};

// Lays out a turn's words from `onset`. Speech stops at [INTERACT]; with
// `cede_at_bc`, it stops `reaction` ms after the [BC] anchor.
inline RenderedTurn render_turn(const SpokenTurn& turn, Millis onset, const DurationModel& model,
                                bool cede_at_bc) {
  RenderedTurn r;
  r.onset = onset;
  const Millis w = model.word_ms();
  Millis t = onset;
  Millis seg_start = t;
  std::vector<std::pair<std::string, Millis>> seg_words;
  std::optional<Millis> cut;
  std::vector<std::vector<std::pair<std::string, Millis>>> seg_word_lists;

  auto close_segment = [&] {
    if (seg_words.empty()) return;
    r.segments.push_back(SpeechSegment{Interval(seg_start, t), std::nullopt});
    seg_word_lists.push_back(std::move(seg_words));
    seg_words.clear();
  };

  std::size_t m = 0;
  bool stopped = false;
  for (std::size_t pos = 0; pos <= turn.words.size() && !stopped; ++pos) {
    for (; m < turn.markers.size() && turn.markers[m].word_index == pos; ++m) {
      const Marker& mk = turn.markers[m];
      if (mk.kind == MarkerKind::Pause) {
        const Millis before = t;
        close_segment();
        t += model.intra_pause_ms;
        seg_start = t;
        r.last_pause = Interval(before, t);
      } else if (mk.kind == MarkerKind::Interact) {
        r.interact_stop = t;
        stopped = true;
        break;
      } else if (mk.kind == MarkerKind::Backchannel) {
        r.bc_anchor = t;
        if (cede_at_bc) cut = t + model.interrupt_reaction_ms;
      } else if (mk.kind == MarkerKind::UserInterruptStarts) {
        r.uis_anchor = t;
      }
    }
    if (stopped || pos == turn.words.size()) break;
    seg_words.emplace_back(turn.words[pos], t);
    t += w;
  }
  close_segment();

  if (cut) {
    std::vector<SpeechSegment> kept;
    for (std::size_t i = 0; i < r.segments.size(); ++i) {
      const auto& iv = r.segments[i].interval;
      if (iv.start() >= *cut) break;
      kept.push_back(SpeechSegment{Interval(iv.start(), std::min(iv.end(), *cut)), std::nullopt});
      auto& words = seg_word_lists[i];
      words.erase(std::remove_if(words.begin(), words.end(), [&](const auto& p) { return p.second >= *cut; }),
                  words.end());
    }
    r.segments = std::move(kept);
  }
  for (std::size_t i = 0; i < r.segments.size(); ++i) {
    std::string text;
    for (const auto& [word, start] : seg_word_lists[i]) {
      if (!text.empty()) text += ' ';
      text += word;
    }
    r.segments[i].text = text;
  }
  if (r.segments.empty()) throw ValidationError("turn renders no speech: \"" + turn.text + "\"");
  r.end = r.segments.back().interval.end();
  return r;
}

inline std::string joined_words(const SpokenTurn& turn) {
  std::string s;
  for (const auto& w : turn.words) {
    if (!s.empty()) s += ' ';
    s += w;
  }
  return s;
}

inline const SpeechSegment* segment_at(const std::vector<SpeechSegment>& segs, Millis t) {
  for (const auto& s : segs) {
    if (s.interval.contains(t)) return &s;
  }
  return nullptr;
}

}  // namespace detail

inline json compiled_to_json(const DialogueTimeline& tl, const std::vector<InteractionEvent>& events) {
  json meta = timeline_to_json(tl);
  json ev = json::array();
  for (const auto& e : events) ev.push_back(event_to_json(e));
  meta["interaction_events"] = std::move(ev);
  return {{"dialogue_metadata", std::move(meta)}};
}

/// Renders a script into a dual-track timeline with ground-truth events.
inline CompiledScenario compile(const ScenarioScript& script, const DurationModel& model) {
  model.validate();
  std::map<SpeakerId, std::vector<SpeechSegment>> tracks;
  std::vector<SpeakerId> speakers;
  std::vector<InteractionEvent> events;

  struct PendingBackchannel {
    Millis anchor;
    Interval utterance;
    SpeakerId holder;
    SpeakerId speaker;
  };
  std::vector<PendingBackchannel> pending_bcs;

  struct Previous {
    const SpokenTurn* turn;
    detail::RenderedTurn render;
  };
  std::optional<Previous> prev;             // immediately preceding item, when it is a turn
  std::optional<Previous> bc_anchored;      // anchored turn awaiting its continuation
  Millis cursor = 0;                        // end of all speech rendered so far
  std::optional<SpeakerId> floor_owner;
  Millis pending_gap = 0;                   // summed pause directives
  bool has_pending_gap = false;
  bool first_turn = true;

  auto require_lead = [](const detail::RenderedTurn& holder, Millis at) {
    if (at - holder.onset <= kMinAnchorLeadMs) {
      throw ValidationError("an overlap anchor needs more than 1 s of speech before it");
    }
  };
  auto add_segments = [&](const SpeakerId& who, const std::vector<SpeechSegment>& segs) {
    if (std::find(speakers.begin(), speakers.end(), who) == speakers.end()) speakers.push_back(who);
    auto& dst = tracks[who];
    dst.insert(dst.end(), segs.begin(), segs.end());
  };

  for (std::size_t i = 0; i < script.items.size(); ++i) {
    if (const auto* pause = std::get_if<PauseDirective>(&script.items[i])) {
      if (prev && (prev->turn->has(MarkerKind::Interact) || prev->turn->has(MarkerKind::Backchannel) ||
                   prev->turn->has(MarkerKind::UserInterruptStarts))) {
        throw ValidationError("a pause directive cannot separate an anchored turn from its response");
      }
      pending_gap += pause->duration_ms;
      has_pending_gap = true;
      prev.reset();
      bc_anchored.reset();
      continue;
    }
    const SpokenTurn& turn = std::get<SpokenTurn>(script.items[i]);
    const SpokenTurn* next = nullptr;
    if (i + 1 < script.items.size()) next = std::get_if<SpokenTurn>(&script.items[i + 1]);

    // Anchors demand a specific follow-up turn from the other speaker.
    if (turn.has(MarkerKind::Interact) &&
        (turn.has(MarkerKind::Backchannel) || turn.has(MarkerKind::UserInterruptStarts))) {
      throw ValidationError("[INTERACT] cannot share a turn with another anchor");
    }
    if (turn.has(MarkerKind::Interact) && (!next || next->speaker == turn.speaker || next->prefix)) {
      throw ValidationError("[INTERACT] must be followed by the other speaker's interrupting turn");
    }
    if (turn.has(MarkerKind::UserInterruptStarts) &&
        (!next || next->prefix != MarkerKind::OverlapsAssistant || next->speaker == turn.speaker)) {
      throw ValidationError("[user_interrupt_starts] must be followed by an [overlaps_assistant] turn");
    }
    bool cede = false;
    if (turn.has(MarkerKind::Backchannel)) {
      if (!next || next->speaker == turn.speaker ||
          (next->prefix && next->prefix != MarkerKind::Backchannel)) {
        throw ValidationError("[BC] anchor must be followed by the other speaker's backchannel");
      }
      cede = !next->prefix;
    }
    if ((turn.prefix == MarkerKind::Backchannel || (prev && prev->turn->has(MarkerKind::Backchannel))) &&
        (!turn.markers.empty() || static_cast<int>(turn.words.size()) > kMaxBackchannelWords)) {
      throw ValidationError("backchannel turns must be 1-3 plain words: \"" + turn.text + "\"");
    }
    const bool overlapping_mode = turn.prefix || (prev && (prev->turn->has(MarkerKind::Interact) ||
                                                           prev->turn->has(MarkerKind::Backchannel)));
    if (overlapping_mode && has_pending_gap) {
      throw ValidationError("a pause directive cannot precede an overlapping turn");
    }

    detail::RenderedTurn r;
    if (turn.prefix == MarkerKind::Backchannel) {
      const Millis at = *prev->render.bc_anchor;
      require_lead(prev->render, at);
      r.onset = at;
      r.end = at + model.backchannel_dur_ms;
      r.segments = {SpeechSegment{Interval(at, r.end), detail::joined_words(turn)}};
      pending_bcs.push_back({at, Interval(at, r.end), prev->turn->speaker, turn.speaker});
      bc_anchored = prev;
    } else if (turn.prefix == MarkerKind::OverlapsAssistant) {
      const Millis at = *prev->render.uis_anchor;
      require_lead(prev->render, at);
      r = detail::render_turn(turn, at, model, false);
      const auto* holder = detail::segment_at(prev->render.segments, at);
      if (r.segments.size() != 1 || holder == nullptr || r.end >= holder->interval.end()) {
        throw ValidationError("[overlaps_assistant] turn must be one utterance that ends before the "
                              "overlapped speaker stops");
      }
      events.push_back({EventKind::FailedInterruption, Interval(at, r.end), turn.speaker, prev->turn->speaker});
    } else if (turn.prefix == MarkerKind::BargeIn) {
      if (!prev || prev->turn->speaker == turn.speaker || !prev->render.last_pause) {
        throw ValidationError("[barge_in] turn needs a preceding other-speaker turn with [PAUSE]");
      }
      const Interval pause = *prev->render.last_pause;
      const Millis at = pause.start() + model.barge_in_offset_ms;
      r = detail::render_turn(turn, at, model, false);
      const auto& holder_segs = prev->render.segments;
      const auto resumed = std::find_if(holder_segs.begin(), holder_segs.end(),
                                        [&](const SpeechSegment& s) { return s.interval.start() == pause.end(); });
      if (resumed == holder_segs.end() || std::next(resumed) != holder_segs.end()) {
        throw ValidationError("[barge_in] needs the interrupted speaker to resume once after the last [PAUSE]");
      }
      const Interval first = r.segments.front().interval;
      const Millis lo = std::max(first.start(), resumed->interval.start());
      const Millis hi = std::min(first.end(), resumed->interval.end());
      if (lo >= hi || (r.segments.size() > 1 && r.segments[1].interval.start() < resumed->interval.end())) {
        throw ValidationError("[barge_in] turn must overlap the resumed speech exactly once");
      }
      const bool takes_floor = r.end > prev->render.end;
      events.push_back({takes_floor ? EventKind::SuccessfulInterruption : EventKind::FailedInterruption,
                        Interval(lo, hi), turn.speaker, prev->turn->speaker});
      if (takes_floor) floor_owner = turn.speaker;
    } else if (prev && prev->turn->has(MarkerKind::Interact)) {
      const Millis stop = *prev->render.interact_stop;
      if (stop - model.interrupt_reaction_ms < prev->render.onset) {
        throw ValidationError("[INTERACT] needs spoken words before it");
      }
      r = detail::render_turn(turn, stop - model.interrupt_reaction_ms, model, false);
      if (r.segments.front().interval.end() <= stop) {
        throw ValidationError("interrupting turn stops before the interrupted speaker does");
      }
      events.push_back({EventKind::SuccessfulInterruption, Interval(stop - model.interrupt_reaction_ms, stop),
                        turn.speaker, prev->turn->speaker});
      floor_owner = turn.speaker;
    } else if (prev && prev->turn->has(MarkerKind::Backchannel)) {
      // Acknowledgement the anchored speaker treats as an interruption.
      const Millis at = *prev->render.bc_anchor;
      if (prev->render.end <= at) throw ValidationError("[BC] anchor followed by a plain turn needs text after it");
      require_lead(prev->render, at);
      r.onset = at;
      r.end = at + model.backchannel_dur_ms;
      r.segments = {SpeechSegment{Interval(at, r.end), detail::joined_words(turn)}};
      events.push_back({EventKind::Backchannel, Interval(at, std::min(prev->render.end, r.end)), turn.speaker,
                        prev->turn->speaker});
    } else if (bc_anchored && prev && prev->turn->prefix == MarkerKind::Backchannel &&
               turn.speaker == bc_anchored->turn->speaker) {
      // Continuation of the backchannelled utterance, resuming right at the anchor.
      const Millis at = std::max(bc_anchored->render.end, *bc_anchored->render.bc_anchor);
      r = detail::render_turn(turn, at, model, cede);
    } else {
      const Millis gap = has_pending_gap ? pending_gap : (first_turn ? 0 : model.inter_turn_gap_ms);
      const Millis onset = first_turn ? gap : cursor + gap;
      r = detail::render_turn(turn, onset, model, cede);
      if (floor_owner && *floor_owner != turn.speaker) {
        const Interval iv = onset > cursor ? Interval(cursor, onset) : Interval(onset, onset + 1);
        events.push_back({EventKind::SmoothTurnTransition, iv, turn.speaker, *floor_owner});
      }
      floor_owner = turn.speaker;
    }
    if (turn.prefix != MarkerKind::Backchannel && !(prev && prev->turn->prefix == MarkerKind::Backchannel)) {
      bc_anchored.reset();
    }

    add_segments(turn.speaker, r.segments);
    cursor = std::max(cursor, r.end);
    pending_gap = 0;
    has_pending_gap = false;
    first_turn = false;
    prev = Previous{&turn, std::move(r)};
  }

  for (const auto& bc : pending_bcs) {
    const auto* cover = detail::segment_at(tracks[bc.holder], bc.anchor);
    if (cover == nullptr || cover->interval.end() < bc.utterance.end()) {
      throw ValidationError("backchannel outlasts the speech it overlaps");
    }
    events.push_back({EventKind::Backchannel, bc.utterance, bc.speaker, bc.holder});
  }
  sort_events(events);

  for (const auto& [who, role] : script.roles) {
    if (std::find(speakers.begin(), speakers.end(), who) == speakers.end()) speakers.push_back(who);
  }
  if (speakers.size() != 2) throw ValidationError("a script must involve exactly two speakers");
  const std::array<SpeakerId, 2> pair{speakers[0], speakers[1]};
  const auto roles = detail::resolve_roles(pair, script.roles);

  for (auto& [who, segs] : tracks) {
    std::sort(segs.begin(), segs.end(),
              [](const SpeechSegment& a, const SpeechSegment& b) { return a.interval < b.interval; });
  }
  ScenarioLabels labels{script.event_type, script.error_type, script.justified_interruption};
  auto tl = DialogueTimeline::create(ChannelTrack{pair[0], tracks[pair[0]]}, ChannelTrack{pair[1], tracks[pair[1]]},
                                     roles, std::nullopt, labels);
  json meta = compiled_to_json(tl, events);
  return CompiledScenario{std::move(tl), std::move(events), script.error_type, std::move(meta)};
}

}  // namespace duplex
