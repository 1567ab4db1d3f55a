#include <catch_amalgamated.hpp>

#include <set>

#include "oracles.hpp"

using namespace duplex;

namespace {

std::multiset<std::string> found_types(const AnalysisReport& r) {
  std::multiset<std::string> out;
  for (const auto& f : r.verdict.semantic_findings) out.insert(std::string(to_string(f.error_type)));
  for (const auto& f : r.verdict.timing_findings) out.insert(std::string(to_string(f.error_type)));
  return out;
}

std::multiset<std::string> expected_types(const CompiledScenario& cs) {
  if (!cs.ground_truth_error) return {};
  return {*cs.ground_truth_error};
}

CorpusMix mix_of(std::map<ScenarioClass, int> counts, std::uint64_t seed) { return CorpusMix{std::move(counts), seed}; }

}  // namespace

TEST_CASE("class names round trip") {
  for (auto c : kScenarioClasses) CHECK(parse_scenario_class(to_string(c)) == c);
  CHECK_FALSE(parse_scenario_class("nonsense").has_value());
}

TEST_CASE("smooth-only corpus is all correct responses") {
  const auto corpus = generate_corpus(mix_of({{ScenarioClass::Smooth, 5}}, 7), builtin_templates(), DurationModel{});
  REQUIRE(corpus.size() == 5);
  for (const auto& e : corpus) {
    const auto r = analyze(e.compiled.timeline, AnalysisConfig{});
    CHECK(r.label == FineLabel::CR);
    CHECK(r.verdict.score == 1);
    for (const auto& ev : r.events) CHECK(ev.kind == EventKind::SmoothTurnTransition);
  }
}

TEST_CASE("mix validation") {
  CHECK_THROWS_AS(generate_corpus(mix_of({}, 1), builtin_templates(), DurationModel{}), ValidationError);
  CHECK_THROWS_AS(generate_corpus(mix_of({{ScenarioClass::Smooth, 0}}, 1), builtin_templates(), DurationModel{}),
                  ValidationError);
  CHECK_THROWS_AS(generate_corpus(mix_of({{ScenarioClass::Smooth, -1}, {ScenarioClass::Ceding, 3}}, 1),
                                  builtin_templates(), DurationModel{}),
                  ValidationError);
  TemplateSet empty{{ScenarioClass::Smooth, {}}};
  CHECK_THROWS_AS(generate_corpus(mix_of({{ScenarioClass::Smooth, 1}}, 1), empty, DurationModel{}), ValidationError);
  CHECK_THROWS_AS(generate_corpus(mix_of({{ScenarioClass::Delayed, 1}}, 1), empty, DurationModel{}), ValidationError);
}

TEST_CASE("every built-in template compiles and round trips") {
  for (const auto& [cls, pool] : builtin_templates()) {
    REQUIRE_FALSE(pool.empty());
    for (const auto& tmpl : pool) {
      const auto cs = compile(parse_script(tmpl), DurationModel{});
      const auto r = analyze(cs.timeline, AnalysisConfig{});
      CHECK(r.events == cs.ground_truth_events);
      CHECK(found_types(r) == expected_types(cs));
    }
  }
}

TEST_CASE("seeded corpus recovers ground truth across all classes") {
  std::map<ScenarioClass, int> counts;
  for (auto c : kScenarioClasses) counts[c] = 12;
  const auto corpus = generate_corpus(mix_of(counts, 99), builtin_templates(), DurationModel{});
  REQUIRE(corpus.size() == 96);
  std::set<ScenarioClass> seen;
  for (const auto& e : corpus) {
    seen.insert(e.scenario_class);
    const auto tl = validate_timeline(json::parse(dump_fixed(e.compiled.transcript_meta, 3)));
    const auto r = analyze(tl, AnalysisConfig{});
    INFO(to_string(e.scenario_class) << " seed " << e.seed);
    CHECK(r.events == e.compiled.ground_truth_events);
    CHECK(found_types(r) == expected_types(e.compiled));
  }
  CHECK(seen.size() == kScenarioClasses.size());
}

TEST_CASE("class-specific outcomes") {
  std::map<ScenarioClass, int> counts;
  for (auto c : kScenarioClasses) counts[c] = 6;
  for (const auto& e : generate_corpus(mix_of(counts, 3), builtin_templates(), DurationModel{})) {
    const auto r = analyze(e.compiled.timeline, AnalysisConfig{});
    INFO(to_string(e.scenario_class));
    switch (e.scenario_class) {
      case ScenarioClass::Smooth:
      case ScenarioClass::SuccessfulInterruption:
      case ScenarioClass::Backchannel:
        CHECK(r.verdict.score == 1);
        break;
      case ScenarioClass::BargeIn:
      case ScenarioClass::Ceding:
        CHECK(r.label == FineLabel::QuickE);
        break;
      case ScenarioClass::Delayed:
      case ScenarioClass::Ignored:
        CHECK(r.label == FineLabel::SlowE);
        break;
      case ScenarioClass::Semantic:
        CHECK(r.label == FineLabel::SE);
        break;
    }
  }
}

TEST_CASE("delayed scenarios stay clear of the threshold") {
  for (const auto& e :
       generate_corpus(mix_of({{ScenarioClass::Delayed, 40}}, 11), builtin_templates(), DurationModel{})) {
    const auto d = decompose(e.compiled.timeline, AnalysisConfig{});
    Millis longest = 0;
    for (const auto& g : d.gaps) longest = std::max(longest, g.interval.duration());
    CHECK(longest >= 3500);
  }
}

TEST_CASE("corpus generation is deterministic and independent of jobs") {
  std::map<ScenarioClass, int> counts;
  for (auto c : kScenarioClasses) counts[c] = 5;
  const auto serial = dump_fixed(corpus_to_json(generate_corpus(mix_of(counts, 42), builtin_templates(), {}, 1)), 3);
  const auto again = dump_fixed(corpus_to_json(generate_corpus(mix_of(counts, 42), builtin_templates(), {}, 1)), 3);
  const auto parallel = dump_fixed(corpus_to_json(generate_corpus(mix_of(counts, 42), builtin_templates(), {}, 4)), 3);
  CHECK(serial == again);
  CHECK(serial == parallel);
  const auto other = dump_fixed(corpus_to_json(generate_corpus(mix_of(counts, 43), builtin_templates(), {}, 1)), 3);
  CHECK(serial != other);
}

TEST_CASE("child seeds differ per index") {
  std::set<std::uint64_t> seeds;
  for (std::size_t i = 0; i < 1000; ++i) seeds.insert(detail::child_seed(5, i));
  CHECK(seeds.size() == 1000);
}
