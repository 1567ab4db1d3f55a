#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "duplex/json_io.hpp"
#include "duplex/timeline.hpp"

namespace duplex {

namespace detail {

inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline std::optional<Role> parse_role_name(const std::string& name) {
  const std::string n = lowercase(name);
  if (n == "user") return Role::User;
  if (n == "system" || n == "assistant" || n == "agent" || n == "bot" || n == "model") {
    return Role::System;
  }
  return std::nullopt;
}

// Assigns user/system roles to two speakers from an explicit map, else from their names.
inline std::array<Role, 2> resolve_roles(const std::array<SpeakerId, 2>& speakers,
                                         const std::map<SpeakerId, Role>& explicit_roles) {
  std::array<std::optional<Role>, 2> r;
  for (int i = 0; i < 2; ++i) {
    if (auto it = explicit_roles.find(speakers[i]); it != explicit_roles.end()) {
      r[i] = it->second;
    } else {
      r[i] = parse_role_name(speakers[i]);
    }
  }
  if (!r[0] && !r[1]) {
    throw ValidationError("missing role assignment for speakers '" + speakers[0] + "' and '" +
                          speakers[1] + "'");
  }
  if (!r[0]) r[0] = *r[1] == Role::User ? Role::System : Role::User;
  if (!r[1]) r[1] = *r[0] == Role::User ? Role::System : Role::User;
  if (*r[0] == *r[1]) {
    throw ValidationError("speakers '" + speakers[0] + "' and '" + speakers[1] +
                          "' resolve to the same role");
  }
  return {*r[0], *r[1]};
}

inline std::optional<std::string> optional_string(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  if (!obj.at(key).is_string()) throw ValidationError(std::string("'") + key + "' must be a string");
  auto s = obj.at(key).get<std::string>();
  if (s.empty()) return std::nullopt;
  return s;
}

}  // namespace detail

/// Reads the metadata object of a timeline document; accepts the bare form or
/// one wrapped in "dialogue_metadata".
inline const json& timeline_body(const json& doc) {
  if (!doc.is_object()) throw ValidationError("timeline document must be a JSON object");
  if (doc.contains("dialogue_metadata")) {
    const auto& inner = doc.at("dialogue_metadata");
    if (!inner.is_object()) throw ValidationError("'dialogue_metadata' must be an object");
    return inner;
  }
  return doc;
}

/// Parses and validates a timeline document (decimal-second timestamps).
inline DialogueTimeline validate_timeline(const json& doc) {
  const json& body = timeline_body(doc);
  if (!body.contains("transcript") || !body.at("transcript").is_array()) {
    throw ValidationError("timeline document needs a 'transcript' array");
  }

  std::vector<SpeakerId> order;
  std::map<SpeakerId, std::vector<SpeechSegment>> by_speaker;
  auto note_speaker = [&](const SpeakerId& s) {
    if (std::find(order.begin(), order.end(), s) == order.end()) order.push_back(s);
  };

  for (const auto& entry : body.at("transcript")) {
    if (!entry.is_object()) throw ValidationError("transcript entries must be objects");
    if (!entry.contains("speaker") || !entry.at("speaker").is_string()) {
      throw ValidationError("transcript entry without a 'speaker' string");
    }
    if (!entry.contains("start_time") || !entry.contains("end_time")) {
      throw ValidationError("transcript entry without start_time/end_time");
    }
    const auto speaker = entry.at("speaker").get<std::string>();
    const Millis start = seconds_to_ms(entry.at("start_time"));
    const Millis end = seconds_to_ms(entry.at("end_time"));
    std::optional<std::string> text;
    if (entry.contains("text") && !entry.at("text").is_null()) {
      if (!entry.at("text").is_string()) throw ValidationError("'text' must be a string");
      text = entry.at("text").get<std::string>();
    }
    note_speaker(speaker);
    by_speaker[speaker].push_back(SpeechSegment{Interval(start, end), std::move(text)});
  }

  std::map<SpeakerId, Role> explicit_roles;
  if (body.contains("roles")) {
    const auto& roles = body.at("roles");
    if (!roles.is_object()) throw ValidationError("'roles' must map speaker ids to roles");
    for (auto it = roles.begin(); it != roles.end(); ++it) {
      if (!it.value().is_string()) throw ValidationError("role values must be strings");
      auto role = detail::parse_role_name(it.value().get<std::string>());
      if (!role) throw ValidationError("unknown role '" + it.value().get<std::string>() + "'");
      explicit_roles[it.key()] = *role;
      note_speaker(it.key());
    }
  }

  if (order.size() != 2) {
    throw ValidationError("a timeline needs exactly two speakers, found " +
                          std::to_string(order.size()));
  }
  const std::array<SpeakerId, 2> speakers{order[0], order[1]};
  const auto roles = detail::resolve_roles(speakers, explicit_roles);

  std::optional<Interval> span;
  if (body.contains("span")) {
    const auto& s = body.at("span");
    if (s.is_array() && s.size() == 2) {
      span = Interval(seconds_to_ms(s[0]), seconds_to_ms(s[1]));
    } else if (s.is_object() && s.contains("start_time") && s.contains("end_time")) {
      span = Interval(seconds_to_ms(s.at("start_time")), seconds_to_ms(s.at("end_time")));
    } else {
      throw ValidationError("'span' must be [start, end] or {start_time, end_time}");
    }
  }

  ScenarioLabels labels;
  labels.event_type = detail::optional_string(body, "event_type");
  labels.error_type = detail::optional_string(body, "error_type");
  if (body.contains("justified_interruption")) {
    if (!body.at("justified_interruption").is_boolean()) {
      throw ValidationError("'justified_interruption' must be a boolean");
    }
    labels.justified_interruption = body.at("justified_interruption").get<bool>();
  }

  return DialogueTimeline::create(ChannelTrack{speakers[0], std::move(by_speaker[speakers[0]])},
                                  ChannelTrack{speakers[1], std::move(by_speaker[speakers[1]])},
                                  roles, span, std::move(labels));
}

/// Emits the timeline in the document schema; times are seconds.
inline json timeline_to_json(const DialogueTimeline& tl) {
  struct Row {
    const SpeakerId* speaker;
    const SpeechSegment* seg;
  };
  std::vector<Row> rows;
  for (const auto& track : tl.tracks()) {
    for (const auto& seg : track.segments) rows.push_back({&track.speaker, &seg});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.seg->interval.start() != b.seg->interval.start()) {
      return a.seg->interval.start() < b.seg->interval.start();
    }
    return *a.speaker < *b.speaker;
  });
  json transcript = json::array();
  for (const auto& r : rows) {
    json e = {{"speaker", *r.speaker},
              {"start_time", ms_to_seconds(r.seg->interval.start())},
              {"end_time", ms_to_seconds(r.seg->interval.end())}};
    if (r.seg->text) e["text"] = *r.seg->text;
    transcript.push_back(std::move(e));
  }
  json out = {{"transcript", std::move(transcript)},
              {"roles", {{tl.track(0).speaker, to_string(tl.role(0))},
                         {tl.track(1).speaker, to_string(tl.role(1))}}},
              {"span", {ms_to_seconds(tl.span().start()), ms_to_seconds(tl.span().end())}}};
  if (tl.labels().event_type) out["event_type"] = *tl.labels().event_type;
  if (tl.labels().error_type) out["error_type"] = *tl.labels().error_type;
  if (tl.labels().justified_interruption) out["justified_interruption"] = true;
  return out;
}

}  // namespace duplex
