#pragma once

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "duplex/analysis.hpp"
#include "duplex/config.hpp"
#include "duplex/corpus.hpp"
#include "duplex/metrics.hpp"
#include "duplex/reward.hpp"
#include "duplex/scenario.hpp"
#include "duplex/timeline_json.hpp"

namespace duplex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;

inline constexpr int kTimeDecimals = 3;
inline constexpr int kValueDecimals = 6;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string read_all(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::string read_text(const std::string& path, std::istream& stdin_) {
  if (path.empty() || path == "-") return read_all(stdin_);
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open '" + path + "'");
  return read_all(f);
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(what + " is not valid JSON: " + e.what());
  }
}

inline json read_json(const std::string& path, std::istream& stdin_) {
  return parse_json_text(read_text(path, stdin_), path.empty() || path == "-" ? "stdin" : "'" + path + "'");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double parse_number(const std::string& s, const std::string& flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(flag + ": '" + s + "' is not a number");
  }
}

inline RewardWeights parse_weights(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw UsageError("--weights expects fmt,acc");
  return RewardWeights{parse_number(parts[0], "--weights"), parse_number(parts[1], "--weights")};
}

inline std::map<ScenarioClass, int> parse_mix(const std::vector<std::string>& args) {
  std::map<ScenarioClass, int> counts;
  for (const auto& arg : args) {
    for (const auto& pair : split(arg, ',')) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos) throw UsageError("--mix expects class=count, got '" + pair + "'");
      const auto cls = parse_scenario_class(pair.substr(0, eq));
      if (!cls) throw UsageError("--mix: unknown scenario class '" + pair.substr(0, eq) + "'");
      const double n = parse_number(pair.substr(eq + 1), "--mix");
      if (n < 0 || n != static_cast<int>(n)) throw UsageError("--mix counts must be non-negative integers");
      counts[*cls] += static_cast<int>(n);
    }
  }
  return counts;
}

inline std::string label_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_boolean()) return v.dump();
  throw ValidationError("labels must be strings or integers, got " + v.dump());
}

inline std::vector<std::string> label_list(const json& v, const char* what) {
  if (!v.is_array()) throw ValidationError(std::string(what) + " must be a JSON array");
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(label_string(x));
  return out;
}

inline std::vector<double> number_list(const json& v, const char* what) {
  if (!v.is_array()) throw ValidationError(std::string(what) + " must be a JSON array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ValidationError(std::string(what) + " must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

inline json advantages_json(const AdvantageSet& a) {
  return {{"rewards", a.rewards}, {"mean", a.mean}, {"std", a.std}, {"advantages", a.advantages}};
}

inline json evaluation_json(const EvaluationOutput& e) {
  json j = {{"cot_sem", e.cot_sem}, {"cot_turn", e.cot_turn}, {"format_ok", e.format_ok}};
  j["score"] = e.score ? json(*e.score) : json(nullptr);
  return j;
}

}  // namespace detail

/// Runs one CLI invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Full-duplex dialogue timeline toolkit", "duplex"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  bool compact = false;
  std::string output_path;
  app.add_option("--config", config_path, "JSON config file (falls back to $DUPLEX_CONFIG)");
  app.add_flag("--compact", compact, "Single-line JSON output");
  app.add_option("--output,-o", output_path, "Write output here instead of stdout");

  auto* compile_cmd = app.add_subcommand("compile", "Compile a marker-annotated script into a timeline");
  std::string compile_input;
  compile_cmd->add_option("input", compile_input, "Script JSON (default: stdin)");

  auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate a seeded round-trip corpus");
  std::vector<std::string> mix_args;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  gen_cmd->add_option("--mix", mix_args, "class=count[,class=count...]")->required();
  gen_cmd->add_option("--seed", seed, "Corpus seed");
  gen_cmd->add_option("--jobs", jobs, "Compile in parallel with this many threads")->check(CLI::Range(1u, 256u));

  auto* analyze_cmd = app.add_subcommand("analyze", "Decompose a timeline and render the verdict");
  std::string analyze_input;
  analyze_cmd->add_option("input", analyze_input, "Timeline JSON (default: stdin)");

  auto* score_cmd = app.add_subcommand("score", "Parse an evaluation output and compute its reward");
  std::string score_input;
  int ground_truth = -1;
  std::string weights_arg;
  bool group_mode = false;
  std::string k_arg;
  score_cmd->add_option("input", score_input, "Evaluation text, or a JSON array of texts with --group");
  score_cmd->add_option("--ground-truth", ground_truth, "Ground-truth score")->check(CLI::IsMember({0, 1}));
  score_cmd->add_option("--weights", weights_arg, "lambda_fmt,lambda_acc");
  score_cmd->add_flag("--group", group_mode, "Score a group of K candidates and normalize advantages");
  score_cmd->add_option("--k", k_arg, "Expected group size");

  auto* adv_cmd = app.add_subcommand("advantage", "Group-relative advantages (and objective with ratios)");
  std::string adv_input;
  std::string epsilon_arg;
  adv_cmd->add_option("input", adv_input, "JSON array of rewards, or {rewards, ratios}");
  adv_cmd->add_option("--epsilon", epsilon_arg, "Clip range");

  auto* eval_cmd = app.add_subcommand("evaluate", "Accuracy, macro-F1 and confusion matrix");
  std::vector<std::string> eval_inputs;
  std::string classes_arg;
  eval_cmd->add_option("inputs", eval_inputs, "predictions.json labels.json (default: stdin object)")
      ->expected(0, 2);
  eval_cmd->add_option("--classes", classes_arg, "Ordered class set, comma separated")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    ToolConfig cfg;
    if (config_path.empty()) {
      if (const char* env = std::getenv("DUPLEX_CONFIG"); env && *env) config_path = env;
    }
    if (!config_path.empty()) apply_config(read_json_file(config_path), cfg);
    if (!weights_arg.empty()) cfg.weights = detail::parse_weights(weights_arg);
    if (!epsilon_arg.empty()) cfg.epsilon = detail::parse_number(epsilon_arg, "--epsilon");
    if (!k_arg.empty()) cfg.k = static_cast<int>(detail::parse_number(k_arg, "--k"));
    cfg.validate();

    json result;
    int decimals = kTimeDecimals;
    if (*compile_cmd) {
      const auto compiled = compile(parse_script(detail::read_json(compile_input, in)), cfg.duration);
      result = compiled.transcript_meta;
    } else if (*gen_cmd) {
      CorpusMix mix{detail::parse_mix(mix_args), seed};
      result = corpus_to_json(generate_corpus(mix, builtin_templates(), cfg.duration, jobs));
    } else if (*analyze_cmd) {
      const auto tl = validate_timeline(detail::read_json(analyze_input, in));
      result = report_to_json(analyze(tl, cfg.analysis));
    } else if (*score_cmd) {
      decimals = kValueDecimals;
      if (ground_truth < 0) throw UsageError("score requires --ground-truth");
      const std::string text = detail::read_text(score_input, in);
      if (group_mode) {
        const json doc = detail::parse_json_text(text, "score input");
        if (!doc.is_array() || !std::all_of(doc.begin(), doc.end(), [](const json& x) { return x.is_string(); })) {
          throw ValidationError("--group input must be a JSON array of strings");
        }
        if (static_cast<int>(doc.size()) != cfg.k) {
          throw ValidationError("group has " + std::to_string(doc.size()) + " candidates, expected k = " +
                                std::to_string(cfg.k));
        }
        std::vector<double> rewards;
        json evaluations = json::array();
        for (const auto& t : doc) {
          rewards.push_back(reward(t.get<std::string>(), ground_truth, cfg.weights));
          evaluations.push_back(detail::evaluation_json(parse_evaluation(t.get<std::string>())));
        }
        result = detail::advantages_json(group_advantages(rewards));
        result["evaluations"] = std::move(evaluations);
      } else {
        result = detail::evaluation_json(parse_evaluation(text));
        result["reward"] = reward(text, ground_truth, cfg.weights);
      }
    } else if (*adv_cmd) {
      decimals = kValueDecimals;
      const json doc = detail::read_json(adv_input, in);
      if (doc.is_array()) {
        result = group_advantages(detail::number_list(doc, "rewards")).advantages;
      } else if (doc.is_object() && doc.contains("rewards")) {
        const auto rewards = detail::number_list(doc.at("rewards"), "rewards");
        result = detail::advantages_json(group_advantages(rewards));
        if (doc.contains("ratios")) {
          result["objective"] = grpo_objective(rewards, detail::number_list(doc.at("ratios"), "ratios"), cfg.epsilon);
          result["epsilon"] = cfg.epsilon;
        }
      } else {
        throw ValidationError("advantage input must be an array of rewards or an object with 'rewards'");
      }
    } else if (*eval_cmd) {
      decimals = kValueDecimals;
      json preds, labels;
      if (eval_inputs.size() == 2) {
        preds = detail::read_json(eval_inputs[0], in);
        labels = detail::read_json(eval_inputs[1], in);
      } else if (eval_inputs.size() == 1) {
        throw UsageError("evaluate takes two files, or a {predictions, labels} object on stdin");
      } else {
        const json doc = detail::read_json("", in);
        if (!doc.is_object() || !doc.contains("predictions") || !doc.contains("labels")) {
          throw ValidationError("stdin must hold an object with 'predictions' and 'labels'");
        }
        preds = doc.at("predictions");
        labels = doc.at("labels");
      }
      const auto classes = detail::split(classes_arg, ',');
      const auto m = compute_metrics(detail::label_list(preds, "predictions"), detail::label_list(labels, "labels"),
                                     classes);
      json per_class = json::object();
      for (const auto& [c, f] : m.per_class_f1) per_class[c] = f;
      result = {{"accuracy", m.accuracy}, {"macro_f1", m.macro_f1}, {"per_class_f1", per_class},
                {"classes", m.classes},   {"confusion", m.confusion}};
    }

    const std::string text = dump_fixed(result, decimals, compact ? -1 : 2) + "\n";
    if (output_path.empty()) {
      out << text;
    } else {
      std::ofstream f(output_path, std::ios::binary);
      if (!f || !(f << text)) throw ValidationError("cannot write '" + output_path + "'");
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace duplex::cli
