#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "duplex/cli.hpp"
#include "oracles.hpp"

using namespace duplex;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name, const std::string& content) {
  const auto p = fs::temp_directory_path() / ("duplex_cli_" + name);
  std::ofstream(p) << content;
  return p;
}

struct EnvGuard {
  EnvGuard() { unsetenv("DUPLEX_CONFIG"); }
  ~EnvGuard() { unsetenv("DUPLEX_CONFIG"); }
};

const std::string kEval =
    "<response think>a</response think><fluency think>b</fluency think><overall score>0</overall score>";

}  // namespace

TEST_CASE("analyze the worked sample") {
  EnvGuard env;
  const auto r = run({"analyze", oracle::source_path("samples/flight_booking.json")});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("score") == 0);
  CHECK(j.at("fine_grained_label") == "QuickE");
  REQUIRE(j.at("timing_findings").size() == 1);
  CHECK(j.at("timing_findings")[0].at("error_type") == "Inappropriate_Barge_in");
  REQUIRE(j.at("structure").at("overlaps").size() == 1);
  CHECK(j.at("structure").at("overlaps")[0].at("start_time") == 6.1);
  CHECK(j.at("structure").at("overlaps")[0].at("end_time") == 8.5);
  CHECK(r.out.find("6.100") != std::string::npos);
}

TEST_CASE("stdin input and compact output") {
  EnvGuard env;
  std::ifstream f(oracle::source_path("samples/flight_booking.json"));
  std::stringstream ss;
  ss << f.rdbuf();
  const auto r = run({"--compact", "analyze"}, ss.str());
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
}

TEST_CASE("exit codes") {
  EnvGuard env;
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"gen-corpus"}).code == 2);
  CHECK(run({"gen-corpus", "--mix", "smooth=x"}).code == 2);
  CHECK(run({"gen-corpus", "--mix", "weird=2"}).code == 2);
  CHECK(run({"evaluate"}, "{}").code == 2);
  CHECK(run({"score"}, kEval).code == 2);
  CHECK(run({"score", "--ground-truth", "3"}, kEval).code == 2);
  CHECK(run({"analyze"}, "not json").code == 1);
  CHECK(run({"analyze", "/nonexistent/file.json"}).code == 1);
  CHECK(run({"advantage"}, "[1]").code == 1);
  CHECK(run({"gen-corpus", "--mix", "smooth=0"}).code == 1);
  CHECK(run({"compile"}, R"({"dialogue":[{"speaker":"User","text":"hi [WAT]"}]})").code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("compile emits annotated-dialogue metadata") {
  EnvGuard env;
  const auto r = run({"compile", oracle::source_path("samples/scripts/delayed.json")});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("dialogue_metadata").at("error_type") == "Delayed_Turn_Transition");
  CHECK(validate_timeline(j).track(0).segments.size() > 0);
}

TEST_CASE("score and advantage") {
  EnvGuard env;
  auto r = run({"score", "--ground-truth", "0"}, kEval);
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("reward") == 1.0);
  CHECK(r.out.find("1.000000") != std::string::npos);

  r = run({"score", "--ground-truth", "1", "--weights", "0.3,0.7"}, kEval);
  CHECK(json::parse(r.out).at("reward").get<double>() == Catch::Approx(0.3));
  CHECK(run({"score", "--ground-truth", "1", "--weights", "0.3,0.3"}, kEval).code == 1);

  const json group = {kEval, kEval, "junk", "junk"};
  r = run({"score", "--ground-truth", "0", "--group"}, group.dump());
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("advantages") == json({1.0, 1.0, -1.0, -1.0}));
  CHECK(run({"score", "--ground-truth", "0", "--group", "--k", "3"}, group.dump()).code == 1);

  r = run({"advantage"}, "[1,1,0,0]");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out) == json({1.0, 1.0, -1.0, -1.0}));

  r = run({"advantage"}, R"({"rewards":[1,1,0,0],"ratios":[1.5,1.0,1.0,0.5]})");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("objective").get<double>() == Catch::Approx(0.1));
}

TEST_CASE("evaluate from files and stdin") {
  EnvGuard env;
  const auto preds = temp_file("preds.json", "[1,0,1,1]");
  const auto labels = temp_file("labels.json", "[1,1,0,0]");
  auto r = run({"evaluate", preds.string(), labels.string(), "--classes", "0,1"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j.at("accuracy") == 0.25);
  CHECK(j.at("macro_f1").get<double>() == Catch::Approx(0.2));
  CHECK(j.at("confusion") == json({{0, 2}, {1, 1}}));

  r = run({"evaluate", "--classes", "CR,SE"}, R"({"predictions":["CR","SE"],"labels":["CR","CR"]})");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("accuracy") == 0.5);
  CHECK(run({"evaluate", "--classes", "CR"}, R"({"predictions":["CR","SE"],"labels":["CR","CR"]})").code == 1);
}

TEST_CASE("config precedence: defaults, file, environment, flags") {
  EnvGuard env;
  const std::string rewards = R"({"rewards":[1,0],"ratios":[1.5,1.0]})";
  auto objective = [&](std::vector<std::string> args) {
    const auto r = run(std::move(args), rewards);
    REQUIRE(r.code == 0);
    return json::parse(r.out).at("epsilon").get<double>();
  };
  CHECK(objective({"advantage"}) == 0.2);

  const auto cfg = temp_file("cfg.json", R"({"epsilon":0.3})");
  CHECK(objective({"--config", cfg.string(), "advantage"}) == 0.3);
  CHECK(objective({"--config", cfg.string(), "advantage", "--epsilon", "0.1"}) == 0.1);

  setenv("DUPLEX_CONFIG", cfg.string().c_str(), 1);
  CHECK(objective({"advantage"}) == 0.3);
  const auto other = temp_file("cfg2.json", R"({"epsilon":0.4})");
  CHECK(objective({"--config", other.string(), "advantage"}) == 0.4);
  unsetenv("DUPLEX_CONFIG");

  const auto bad = temp_file("bad.json", R"({"epsilon":0.3,"mystery":1})");
  CHECK(run({"--config", bad.string(), "advantage"}, rewards).code == 1);
  const auto bad_range = temp_file("bad_range.json", R"({"epsilon":1.5})");
  CHECK(run({"--config", bad_range.string(), "advantage"}, rewards).code == 1);

  // analysis thresholds reach the analyzer
  const auto strict = temp_file("strict.json", R"({"analysis":{"min_overlap_ms":5000}})");
  const auto r = run({"--config", strict.string(), "analyze", oracle::source_path("samples/flight_booking.json")});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("timing_findings").empty());
}

TEST_CASE("output file and gen-corpus determinism") {
  EnvGuard env;
  const auto path = fs::temp_directory_path() / "duplex_cli_corpus.json";
  fs::remove(path);
  REQUIRE(run({"gen-corpus", "--mix", "smooth=3,delayed=2", "--seed", "9", "-o", path.string()}).code == 0);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  const auto written = ss.str();
  CHECK(json::parse(written).size() == 5);

  const auto a = run({"gen-corpus", "--mix", "smooth=3,delayed=2", "--seed", "9"});
  const auto b = run({"gen-corpus", "--mix", "smooth=3", "--mix", "delayed=2", "--seed", "9", "--jobs", "3"});
  CHECK(a.out == written);
  CHECK(a.out == b.out);
}
