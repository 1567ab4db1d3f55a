#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "oracles.hpp"

using namespace duplex;
using Catch::Approx;

namespace {

std::string fixture(const std::string& rel) {
  std::ifstream f(oracle::source_path("samples/" + rel));
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const RewardWeights kHalf{};

}  // namespace

TEST_CASE("underscore-tagged evaluation parses") {
  const auto e = parse_evaluation(fixture("evaluations/flight_booking.txt"));
  CHECK(e.format_ok);
  REQUIRE(e.score.has_value());
  CHECK(*e.score == 0);
  CHECK(e.cot_turn.find("6.1s") != std::string::npos);
  CHECK(e.cot_sem.rfind("The reply", 0) == 0);
  CHECK(reward(fixture("evaluations/flight_booking.txt"), 0, kHalf) == 1.0);
}

TEST_CASE("canonical and short score tags") {
  const auto canonical =
      parse_evaluation("<response think>a</response think><fluency think>b</fluency think><overall score> 1 </overall score>");
  CHECK(canonical.format_ok);
  CHECK(canonical.score == 1);
  const auto shortened = parse_evaluation("<response think>a</response think><fluency think>b</fluency think><score>1</score>");
  CHECK(shortened.format_ok);
  CHECK(shortened.score == 1);
  const auto mixed_case = parse_evaluation("<Response Think>a</Response Think><FLUENCY_THINK>b</fluency_think><Overall Score>0</Overall Score>");
  CHECK(mixed_case.format_ok);
}

TEST_CASE("malformed outputs never throw") {
  for (const char* text : {"", "no tags at all", "<response think>unclosed", "<overall score>1",
                           "<response think>a</response think><fluency think>b</fluency think><overall score>2</overall score>",
                           "<response think>a</response think><fluency think>b</fluency think><overall score>01</overall score>",
                           "<response think>a</response think><fluency think>b</fluency think><overall score></overall score>"}) {
    INFO(text);
    EvaluationOutput e;
    REQUIRE_NOTHROW(e = parse_evaluation(text));
    CHECK_FALSE(e.format_ok);
  }
  CHECK_FALSE(parse_evaluation("<response think>a</response think><fluency think>b</fluency think><overall score>2</overall score>")
                  .score.has_value());
}

TEST_CASE("blocks out of order break the format") {
  const auto e = parse_evaluation("<overall score>1</overall score><fluency think>b</fluency think><response think>a</response think>");
  CHECK_FALSE(e.format_ok);
  CHECK(e.score == 1);
}

TEST_CASE("reward fixtures cover every attainable value") {
  CHECK(reward(fixture("evaluations/malformed.txt"), 0, kHalf) == 0.0);
  CHECK(reward(fixture("evaluations/half_correct.txt"), 0, kHalf) == 0.5);
  CHECK(reward(fixture("evaluations/correct.txt"), 0, kHalf) == 1.0);
  CHECK(reward(fixture("evaluations/half_correct.txt"), 1, kHalf) == 1.0);
  // a bare score with no analyses still earns the accuracy half
  CHECK(reward("<overall score>0</overall score>", 0, kHalf) == 0.5);
}

TEST_CASE("reward weights and ground truth are validated") {
  CHECK_THROWS_AS(reward("", 0, RewardWeights{0.7, 0.7}), ValidationError);
  CHECK_THROWS_AS(reward("", 0, RewardWeights{-0.5, 1.5}), ValidationError);
  CHECK_THROWS_AS(reward("", 2, kHalf), ValidationError);
  CHECK(reward(fixture("evaluations/half_correct.txt"), 0, RewardWeights{0.2, 0.8}) == Approx(0.2));
}

TEST_CASE("group advantages") {
  const auto a = group_advantages({1, 1, 0, 0});
  CHECK(a.advantages == std::vector<double>{1, 1, -1, -1});
  CHECK(a.mean == 0.5);
  CHECK(a.std == 0.5);

  const auto flat = group_advantages({0.5, 0.5, 0.5});
  CHECK(flat.std == 0);
  CHECK(flat.advantages == std::vector<double>{0, 0, 0});

  const auto mixed = group_advantages({1.0, 0.5, 0.0});
  CHECK(mixed.advantages[1] == 0);
  CHECK(mixed.advantages[0] == Approx(std::sqrt(1.5)));

  CHECK_THROWS_AS(group_advantages({1.0}), ValidationError);
  CHECK_THROWS_AS(group_advantages({}), ValidationError);
}

TEST_CASE("clipped surrogate term") {
  CHECK(clipped_term(1.5, 2.0, 0.2) == Approx(2.4));
  CHECK(clipped_term(1.1, 2.0, 0.2) == Approx(2.2));
  CHECK(clipped_term(0.5, -1.0, 0.2) == Approx(-0.8));
  CHECK(clipped_term(0.5, 1.0, 0.2) == Approx(0.5));
  CHECK(clipped_term(1.5, -1.0, 0.2) == Approx(-1.5));
  CHECK(clipped_term(1.0, 0.0, 0.2) == 0.0);
  CHECK_THROWS_AS(clipped_term(0.0, 1.0, 0.2), ValidationError);
  CHECK_THROWS_AS(clipped_term(1.0, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(clipped_term(1.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("group objective") {
  CHECK(grpo_objective({1, 1, 0, 0}, {1.5, 1.0, 1.0, 0.5}, 0.2) == Approx(0.1));
  CHECK(grpo_objective({1, 1, 0, 0}, {1, 1, 1, 1}, 0.2) == Approx(0.0).margin(1e-15));
  CHECK(grpo_objective({1, 1, 1}, {1.7, 0.3, 1.0}, 0.2) == 0.0);
  CHECK_THROWS_AS(grpo_objective({1, 0}, {1.0}, 0.2), ValidationError);

  CandidateGroup g;
  g.ground_truth = 0;
  g.candidates = {fixture("evaluations/correct.txt"), fixture("evaluations/malformed.txt")};
  CHECK_THROWS_AS(grpo_objective(g, kHalf, 0.2), ValidationError);
  g.ratios = std::vector<double>{1.0, 1.0};
  CHECK(grpo_objective(g, kHalf, 0.2) == Approx(0.0).margin(1e-15));
  g.ratios = std::vector<double>{1.1, 1.0};
  // advantages are +1 and -1
  CHECK(grpo_objective(g, kHalf, 0.2) == Approx(0.05));
}

TEST_CASE("canonical formatting re-parses to the same evaluation") {
  const auto e = parse_evaluation(fixture("evaluations/flight_booking.txt"));
  const auto again = parse_evaluation(format_evaluation(e));
  CHECK(again.cot_sem == e.cot_sem);
  CHECK(again.cot_turn == e.cot_turn);
  CHECK(again.score == e.score);
  CHECK(again.format_ok == e.format_ok);
}
