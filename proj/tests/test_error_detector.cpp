#include <catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace duplex;

namespace {

DialogueTimeline make(std::vector<Interval> user, std::vector<Interval> sys, ScenarioLabels labels = {}) {
  auto track = [](const char* who, const std::vector<Interval>& ivs) {
    ChannelTrack t{who, {}};
    for (const auto& iv : ivs) t.segments.push_back({iv, std::nullopt});
    return t;
  };
  return DialogueTimeline::create(track("User", user), track("Assistant", sys), {Role::User, Role::System},
                                  std::nullopt, std::move(labels));
}

std::vector<ErrorType> timing_types(const DialogueTimeline& tl, const AnalysisConfig& cfg = {}) {
  std::vector<ErrorType> out;
  for (const auto& f : analyze(tl, cfg).verdict.timing_findings) out.push_back(f.error_type);
  return out;
}

}  // namespace

TEST_CASE("worked sample is an inappropriate barge-in") {
  const auto tl = validate_timeline(read_json_file(oracle::source_path("samples/flight_booking.json")));
  const auto report = analyze(tl, AnalysisConfig{});
  REQUIRE(report.verdict.timing_findings.size() == 1);
  const auto& f = report.verdict.timing_findings[0];
  CHECK(f.error_type == ErrorType::InappropriateBargeIn);
  CHECK(f.evidence == Interval(6100, 8500));
  CHECK(f.coarse() == FineLabel::QuickE);
  CHECK(f.axis() == Axis::Timing);
  CHECK(report.verdict.score == 0);
  CHECK(report.label == FineLabel::QuickE);
}

TEST_CASE("justified system interruptions are not flagged") {
  ScenarioLabels labels;
  labels.justified_interruption = true;
  const auto tl = make({{1200, 8500}}, {{6100, 9300}}, labels);
  CHECK(timing_types(tl).empty());
}

TEST_CASE("delayed gaps use a strict threshold") {
  CHECK(timing_types(make({{0, 2000}}, {{6000, 8000}})) == std::vector{ErrorType::DelayedTurnTransition});
  CHECK(timing_types(make({{0, 2000}}, {{4999, 8000}})).empty());
  CHECK(timing_types(make({{0, 2000}}, {{5000, 8000}})).empty());
  CHECK(timing_types(make({{0, 2000}}, {{5001, 8000}})) == std::vector{ErrorType::DelayedTurnTransition});
}

TEST_CASE("user interjection talked over is ignored") {
  const auto tl = make({{3000, 5000}}, {{0, 8000}});
  // no transcript: 2000 ms is too long for a backchannel
  CHECK(timing_types(tl) == std::vector{ErrorType::IgnoredInterruption});
}

TEST_CASE("user interruption the system yields to is fine") {
  const auto tl = make({{3000, 7000}}, {{0, 3300}});
  CHECK(timing_types(tl).empty());
}

TEST_CASE("system that stops right after a user backchannel cedes too early") {
  const auto tl = make({{2500, 3000}}, {{0, 2750}, {3400, 5000}});
  CHECK(timing_types(tl) == std::vector{ErrorType::OverlyDeferentialCeding});
  // the system that keeps talking through the backchannel is fine
  CHECK(timing_types(make({{2500, 3000}}, {{0, 6000}})).empty());
}

TEST_CASE("semantic labels propagate") {
  ScenarioLabels amnesia;
  amnesia.error_type = "Contextual_Incoherence_After_Interruption";
  const auto findings = propagate_semantic_labels(make({{0, 1000}}, {{1400, 2000}}, amnesia));
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].error_type == ErrorType::InterruptionAmnesia);
  CHECK(findings[0].coarse() == FineLabel::SE);
  CHECK(findings[0].axis() == Axis::Semantic);

  CHECK(propagate_semantic_labels(make({{0, 1000}}, {{1400, 2000}})).empty());

  ScenarioLabels smooth;
  smooth.event_type = "Smooth_Turn_Transition";
  CHECK(propagate_semantic_labels(make({{0, 1000}}, {{1400, 2000}}, smooth)).empty());

  ScenarioLabels timing;
  timing.error_type = "Delayed_Turn_Transition";
  CHECK(propagate_semantic_labels(make({{0, 1000}}, {{1400, 2000}}, timing)).empty());

  ScenarioLabels bogus;
  bogus.error_type = "Mystery_Error";
  CHECK_THROWS_AS(propagate_semantic_labels(make({{0, 1000}}, {{1400, 2000}}, bogus)), ValidationError);
}

TEST_CASE("verdict and fine-grained label") {
  const ErrorFinding delayed{ErrorType::DelayedTurnTransition, Interval(0, 4000), "gap"};
  const ErrorFinding ignored{ErrorType::IgnoredInterruption, Interval(0, 4000), "ignored"};
  const ErrorFinding amnesia{ErrorType::InterruptionAmnesia, Interval(0, 4000), "amnesia"};
  const ErrorFinding barge{ErrorType::InappropriateBargeIn, Interval(0, 4000), "barge"};

  const auto clean = render_verdict({}, {});
  CHECK(clean.score == 1);
  CHECK(classify_fine_grained(clean) == FineLabel::CR);
  CHECK(clean.semantic_summary == "Response relevance: no issues found.");

  const auto slow = render_verdict({}, {delayed});
  CHECK(slow.score == 0);
  CHECK(classify_fine_grained(slow) == FineLabel::SlowE);

  const auto both = render_verdict({amnesia}, {ignored});
  CHECK(both.score == 0);
  CHECK(both.semantic_summary.find("no issues") == std::string::npos);
  CHECK(both.timing_summary.find("no issues") == std::string::npos);
  CHECK(classify_fine_grained(both) == FineLabel::SE);

  CHECK(classify_fine_grained(render_verdict({}, {delayed, barge})) == FineLabel::QuickE);
}

TEST_CASE("error type spellings") {
  CHECK(parse_error_type("Inappropriate_Barge_in") == ErrorType::InappropriateBargeIn);
  CHECK(parse_error_type("inappropriate_barge_in") == ErrorType::InappropriateBargeIn);
  CHECK(parse_error_type("Contextual_Amnesia_After_Interruption") == ErrorType::InterruptionAmnesia);
  CHECK_FALSE(parse_error_type("nope").has_value());
  for (auto t : {ErrorType::InappropriateBargeIn, ErrorType::OverlyDeferentialCeding, ErrorType::DelayedTurnTransition,
                 ErrorType::IgnoredInterruption, ErrorType::ContextualIncoherence, ErrorType::InterruptionAmnesia}) {
    CHECK(parse_error_type(to_string(t)) == t);
  }
}

TEST_CASE("score is one exactly when there are no findings, on random timelines") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto tl = oracle::random_timeline(rng, 12, 30000);
    const auto r = analyze(tl, AnalysisConfig{});
    const bool none = r.verdict.semantic_findings.empty() && r.verdict.timing_findings.empty();
    CHECK((r.verdict.score == 1) == none);
    for (const auto& f : r.verdict.timing_findings) CHECK(f.evidence.intersects(tl.span()));
  }
}
