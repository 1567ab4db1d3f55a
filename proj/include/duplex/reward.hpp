#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "duplex/interval.hpp"
#include "duplex/timeline_json.hpp"

namespace duplex {

struct EvaluationOutput {
  std::string cot_sem;
  std::string cot_turn;
  std::optional<int> score;
  bool format_ok = false;
};

struct RewardWeights {
  double lambda_fmt = 0.5;
  double lambda_acc = 0.5;

  void validate() const {
    if (lambda_fmt < 0 || lambda_acc < 0 || std::abs(lambda_fmt + lambda_acc - 1.0) > 1e-9) {
      throw ValidationError("reward weights must be non-negative and sum to 1");
    }
  }
};

struct CandidateGroup {
  std::vector<std::string> candidates;
  int ground_truth = 0;
  std::optional<std::vector<double>> ratios;
};

struct AdvantageSet {
  std::vector<double> rewards;
  double mean = 0;
  double std = 0;
  std::vector<double> advantages;
};

namespace detail {

struct Block {
  std::size_t begin;  // start of the opening tag
  std::size_t end;    // one past the closing tag
  std::string body;
};

// Earliest <tag>...</tag> at or after `from`, for any spelling in `names`.
inline std::optional<Block> find_block(const std::string& text, const std::vector<std::string>& names,
                                       std::size_t from) {
  const std::string lower = lowercase(text);
  std::optional<Block> best;
  for (const auto& open_name : names) {
    const std::string open = "<" + open_name + ">";
    const auto b = lower.find(open, from);
    if (b == std::string::npos || (best && b >= best->begin)) continue;
    const auto body = b + open.size();
    std::size_t close = std::string::npos, close_len = 0;
    for (const auto& close_name : names) {
      const std::string tag = "</" + close_name + ">";
      const auto c = lower.find(tag, body);
      if (c < close) {
        close = c;
        close_len = tag.size();
      }
    }
    if (close == std::string::npos) continue;
    best = Block{b, close + close_len, text.substr(body, close - body)};
  }
  return best;
}

inline std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

inline const std::vector<std::string> kResponseTags{"response think", "response_think"};
inline const std::vector<std::string> kFluencyTags{"fluency think", "fluency_think"};
inline const std::vector<std::string> kScoreTags{"overall score", "overall_score", "score"};

}  // namespace detail

/// Extracts the two analyses and the score. Never throws.
inline EvaluationOutput parse_evaluation(const std::string& text) {
  EvaluationOutput out;
  const auto sem = detail::find_block(text, detail::kResponseTags, 0);
  auto turn = detail::find_block(text, detail::kFluencyTags, sem ? sem->end : 0);
  if (!turn) turn = detail::find_block(text, detail::kFluencyTags, 0);
  auto score = detail::find_block(text, detail::kScoreTags, turn ? turn->end : 0);
  if (!score) score = detail::find_block(text, detail::kScoreTags, 0);
  if (sem) out.cot_sem = detail::trimmed(sem->body);
  if (turn) out.cot_turn = detail::trimmed(turn->body);
  if (score) {
    const std::string s = detail::trimmed(score->body);
    if (s == "0" || s == "1") out.score = s[0] - '0';
  }
  out.format_ok = sem && turn && score && out.score && sem->end <= turn->begin && turn->end <= score->begin;
  return out;
}

/// Canonical re-emission of a parsed evaluation.
inline std::string format_evaluation(const EvaluationOutput& e) {
  std::string s = "<response think>" + e.cot_sem + "</response think>\n<fluency think>" + e.cot_turn +
                  "</fluency think>\n<overall score>";
  if (e.score) s += std::to_string(*e.score);
  return s + "</overall score>";
}

inline double reward(const std::string& text, int s_gt, const RewardWeights& w) {
  w.validate();
  if (s_gt != 0 && s_gt != 1) throw ValidationError("ground truth score must be 0 or 1");
  const auto e = parse_evaluation(text);
  const double fmt = e.format_ok ? 1.0 : 0.0;
  const double acc = e.score && *e.score == s_gt ? 1.0 : 0.0;
  return w.lambda_fmt * fmt + w.lambda_acc * acc;
}

/// Group-normalized advantages with population standard deviation.
inline AdvantageSet group_advantages(const std::vector<double>& rewards) {
  if (rewards.size() < 2) throw ValidationError("a group needs at least two rewards");
  AdvantageSet a;
  a.rewards = rewards;
  const double n = static_cast<double>(rewards.size());
  for (double r : rewards) a.mean += r;
  a.mean /= n;
  double var = 0;
  for (double r : rewards) var += (r - a.mean) * (r - a.mean);
  a.std = std::sqrt(var / n);
  a.advantages.reserve(rewards.size());
  for (double r : rewards) a.advantages.push_back(a.std > 0 ? (r - a.mean) / a.std : 0.0);
  return a;
}

inline double clipped_term(double ratio, double advantage, double epsilon) {
  if (!(ratio > 0)) throw ValidationError("importance ratio must be positive");
  if (!(epsilon > 0 && epsilon < 1)) throw ValidationError("epsilon must lie in (0, 1)");
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

/// Mean clipped surrogate over precomputed rewards.
inline double grpo_objective(const std::vector<double>& rewards, const std::vector<double>& ratios,
                             double epsilon) {
  if (ratios.size() != rewards.size()) throw ValidationError("need one ratio per candidate");
  const auto adv = group_advantages(rewards);
  double sum = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) sum += clipped_term(ratios[i], adv.advantages[i], epsilon);
  return sum / static_cast<double>(ratios.size());
}

inline double grpo_objective(const CandidateGroup& group, const RewardWeights& weights, double epsilon) {
  if (!group.ratios) throw ValidationError("candidate group has no importance ratios");
  std::vector<double> rewards;
  for (const auto& c : group.candidates) rewards.push_back(reward(c, group.ground_truth, weights));
  return grpo_objective(rewards, *group.ratios, epsilon);
}

}  // namespace duplex
