#pragma once

#include <functional>
#include <vector>

#include "duplex/error_detector.hpp"
#include "duplex/events.hpp"
#include "duplex/json_io.hpp"
#include "duplex/structure.hpp"

namespace duplex {

/// Produces semantic findings for a timeline. The shipped judge propagates
/// scenario labels; content-based judges can be plugged in here.
using SemanticJudge = std::function<std::vector<ErrorFinding>(const DialogueTimeline&)>;

struct AnalysisReport {
  StructuralDecomposition structure;
  std::vector<InteractionEvent> events;
  InteractionVerdict verdict;
  FineLabel label = FineLabel::CR;
};

inline AnalysisReport analyze(const DialogueTimeline& tl, const AnalysisConfig& config,
                              const SemanticJudge& judge = propagate_semantic_labels) {
  config.validate();
  AnalysisReport r;
  r.structure = decompose(tl, config);
  r.events = extract_events(tl, r.structure, config);
  r.verdict = render_verdict(judge(tl), detect_timing_errors(r.events, r.structure, tl, config));
  r.label = classify_fine_grained(r.verdict);
  return r;
}

inline json interval_to_json(const Interval& iv) {
  return {{"start_time", ms_to_seconds(iv.start())}, {"end_time", ms_to_seconds(iv.end())}};
}

/// Event in the annotated-dialogue shape; participants are [responder, initiator].
inline json event_to_json(const InteractionEvent& e) {
  json j = {{"event_type", std::string(to_string(e.kind))}};
  j.update(interval_to_json(e.interval));
  j["participants"] = {e.responder, e.initiator};
  return j;
}

inline json finding_to_json(const ErrorFinding& f) {
  json j = {{"error_type", std::string(to_string(f.error_type))},
            {"coarse_class", std::string(to_string(f.coarse()))},
            {"axis", std::string(to_string(f.axis()))},
            {"description", f.description}};
  j.update(interval_to_json(f.evidence));
  return j;
}

inline json verdict_to_json(const InteractionVerdict& v, FineLabel label) {
  json sem = json::array(), tim = json::array();
  for (const auto& f : v.semantic_findings) sem.push_back(finding_to_json(f));
  for (const auto& f : v.timing_findings) tim.push_back(finding_to_json(f));
  return {{"score", v.score},
          {"semantic_findings", std::move(sem)},
          {"timing_findings", std::move(tim)},
          {"semantic_summary", v.semantic_summary},
          {"timing_summary", v.timing_summary},
          {"fine_grained_label", std::string(to_string(label))}};
}

inline json structure_to_json(const StructuralDecomposition& d) {
  json turns = json::array(), gaps = json::array(), overlaps = json::array(), pauses = json::array();
  for (const auto& t : d.turns) {
    json j = {{"speaker", t.speaker}, {"segments", t.segment_indices.size()},
              {"pauses", t.internal_pauses.size()}};
    j.update(interval_to_json(t.interval));
    turns.push_back(std::move(j));
  }
  for (const auto& g : d.gaps) {
    json j = {{"from_speaker", g.from_speaker}, {"to_speaker", g.to_speaker}};
    j.update(interval_to_json(g.interval));
    gaps.push_back(std::move(j));
  }
  for (const auto& o : d.overlaps) {
    json j = {{"floor_holder", o.floor_holder}, {"incomer", o.incomer}};
    j.update(interval_to_json(o.interval));
    overlaps.push_back(std::move(j));
  }
  for (const auto& p : d.pauses) {
    json j = {{"speaker", p.speaker}};
    j.update(interval_to_json(p.interval));
    pauses.push_back(std::move(j));
  }
  return {{"turns", std::move(turns)}, {"gaps", std::move(gaps)}, {"overlaps", std::move(overlaps)},
          {"pauses", std::move(pauses)}};
}

inline json report_to_json(const AnalysisReport& r) {
  json j = verdict_to_json(r.verdict, r.label);
  json events = json::array();
  for (const auto& e : r.events) events.push_back(event_to_json(e));
  j["interaction_events"] = std::move(events);
  j["structure"] = structure_to_json(r.structure);
  return j;
}

}  // namespace duplex
