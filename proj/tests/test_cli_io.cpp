#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "ttm/cli.hpp"
#include "ttm/io.hpp"
#include "ttm/model.hpp"

using namespace ttm;
namespace fs = std::filesystem;

namespace {

// Fresh directory removed on scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("ttm_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "ttm");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write(const std::string& path, const io::Json& j) { io::write_json(path, j); }

std::vector<Demonstration> before_demos(int n) {
  const Action a{"open", "lid"}, b{"pour", "milk"};
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 0.02);
  std::vector<Demonstration> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({"d" + std::to_string(i), {{a, {0.0 + noise(rng), 1.0 + noise(rng)}}},
                   {{b, {2.0 + noise(rng), 3.0 + noise(rng)}}}});
  }
  return out;
}

// Generates the pouring data set and learns a model from it.
std::string learned_pouring_model(const TempDir& dir, double jitter) {
  write(dir / "config.json", io::to_json(fixtures::pouring_config(jitter)));
  REQUIRE(run({"generate", "--config", dir / "config.json", "--out", dir / "demos.json", "--truth",
               dir / "truth.json"}).code == cli::kOk);
  REQUIRE(run({"learn", "--demos", dir / "demos.json", "--out", dir / "model.json"}).code == cli::kOk);
  return dir / "model.json";
}

}  // namespace

TEST_CASE("generate") {
  TempDir dir;
  auto config = fixtures::two_mode_config(10, 3);
  write(dir / "config.json", io::to_json(config));
  const auto ok = run({"generate", "--config", dir / "config.json", "--out", dir / "demos.json", "--truth",
                       dir / "truth.json"});
  CHECK(ok.code == cli::kOk);
  const auto demos = io::demonstrations_from_json(io::read_json(dir / "demos.json"));
  CHECK(demos.task == "two_mode");
  CHECK(demos.demos == generate(config).demos);
  CHECK(io::sttcs_from_json(io::read_json(dir / "truth.json")) == generate(config).truth);

  CHECK(run({"generate", "--config", dir / "config.json", "--out", dir / "other.json", "--truth",
             dir / "t2.json", "--seed", "4"}).code == cli::kOk);
  CHECK(slurp(dir / "other.json") != slurp(dir / "demos.json"));

  config.mode_weights = {0.9, 0.9};
  write(dir / "bad.json", io::to_json(config));
  const auto bad = run({"generate", "--config", dir / "bad.json", "--out", dir / "x.json", "--truth", dir / "y.json"});
  CHECK(bad.code == cli::kInputError);
  CHECK(bad.err.find("mode_weights") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "x.json"));

  config = fixtures::two_mode_config(10, 3);
  config.jitter_sigma = 10.0;
  write(dir / "wild.json", io::to_json(config));
  CHECK(run({"generate", "--config", dir / "wild.json", "--out", dir / "x.json", "--truth", dir / "y.json"}).code ==
        cli::kGenerationError);

  CHECK(run({"generate", "--config", dir / "missing.json", "--out", dir / "x.json", "--truth", dir / "y.json"})
            .code == cli::kInputError);
}

TEST_CASE("argument errors and help") {
  CHECK(run({"--help"}).code == cli::kOk);
  CHECK(run({"frobnicate"}).code == cli::kInputError);
  CHECK(run({"learn", "--demos"}).code == cli::kInputError);
}

TEST_CASE("learn rejects invalid demonstrations") {
  TempDir dir;
  const Action a{"cut", "bread"}, b{"hold", "bread"};
  io::DemonstrationFile file{"bad", {{"d1", {{a, {0, 2}}, {b, {1, 3}}}, {}}}};
  write(dir / "demos.json", io::to_json(file));
  const auto r = run({"learn", "--demos", dir / "demos.json", "--out", dir / "model.json"});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("d1") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "model.json"));

  write(dir / "garbage.json", io::Json{{"task", "x"}});
  CHECK(run({"learn", "--demos", dir / "garbage.json", "--out", dir / "model.json"}).code == cli::kInputError);
}

TEST_CASE("learn finds a before relation") {
  TempDir dir;
  write(dir / "demos.json", io::to_json(io::DemonstrationFile{"before", before_demos(10)}));
  const auto r = run({"learn", "--demos", dir / "demos.json", "--out", dir / "model.json"});
  CHECK(r.code == cli::kOk);
  const auto model = io::model_from_json(io::read_json(dir / "model.json"));
  CHECK(model.task == "before");
  CHECK(model.sttcs.relation({"open", "lid"}, {"pour", "milk"}) == AllenRelation::Before);
  REQUIRE(model.ssttcs.size() == 1);
  CHECK(model.ssttcs[0].constraints.size() == 1);
  CHECK(model.ssttcs[0].constraints[0].channel == Channel::ES);
  CHECK(model.ssttcs[0].constraints[0].mean == doctest::Approx(-1.0).epsilon(0.05));

  // A before relation cannot be synchronized by containment.
  const auto plan = run({"plan", "--model", dir / "model.json", "--pair", "open:lid,pour:milk"});
  CHECK(plan.code == cli::kQueryError);
}

TEST_CASE("eval") {
  TempDir dir;
  write(dir / "config.json", io::to_json(fixtures::two_mode_config(6, 2)));
  REQUIRE(run({"generate", "--config", dir / "config.json", "--out", dir / "demos.json", "--truth",
               dir / "truth.json"}).code == cli::kOk);
  const auto ok = run({"eval", "--demos", dir / "demos.json", "--truth", dir / "truth.json", "--out",
                       dir / "curve.csv", "--scenarios", "2", "--per-scenario", "3"});
  CHECK(ok.code == cli::kOk);
  CHECK(ok.out.rfind("k=3 precision ", 0) == 0);
  const auto csv = slurp(dir / "curve.csv");
  CHECK(csv.rfind("n_demos,mean_precision,std_precision,mean_recall,std_recall\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  const auto too_many = run({"eval", "--demos", dir / "demos.json", "--truth", dir / "truth.json", "--out",
                             dir / "c2.csv", "--scenarios", "2", "--per-scenario", "7"});
  CHECK(too_many.code == cli::kInputError);

  SttcSet foreign;
  foreign.constraints[{{"fly", "kite"}, {"grasp", "cup"}}] = {AllenRelation::Before, 1.0};
  write(dir / "foreign.json", io::to_json(foreign));
  const auto unknown = run({"eval", "--demos", dir / "demos.json", "--truth", dir / "foreign.json", "--out",
                            dir / "c3.csv", "--scenarios", "1", "--per-scenario", "2"});
  CHECK(unknown.code == cli::kInputError);
  CHECK(unknown.err.find("fly:kite") != std::string::npos);
}

TEST_CASE("plan") {
  TempDir dir;
  const auto model = learned_pouring_model(dir, 0.0);
  const auto r = run({"plan", "--model", model, "--pair", "pour:milk,hold:cup"});
  CHECK(r.code == cli::kOk);
  const auto plan = io::Json::parse(r.out);
  REQUIRE(plan["entries"].size() == 2);
  CHECK(plan["objective"].get<double>() == doctest::Approx(0.0).epsilon(1e-9));

  CHECK(run({"plan", "--model", model, "--pair", "pour:milk,hold:cup", "--out", dir / "plan.json"}).code ==
        cli::kOk);
  CHECK(io::read_json(dir / "plan.json") == plan);

  CHECK(run({"plan", "--model", model, "--pair", "pour:milk,fly:kite"}).code == cli::kQueryError);
  CHECK(run({"plan", "--model", model, "--pair", "pour:milk"}).code == cli::kInputError);
  CHECK(run({"plan", "--model", model, "--pair", "pour:milk,hold:cup", "--durations", "6"}).code ==
        cli::kInputError);
  CHECK(run({"plan", "--model", dir / "nope.json", "--pair", "pour:milk,hold:cup"}).code == cli::kInputError);
}

TEST_CASE("equal actions are planned with equal durations") {
  TempDir dir;
  GeneratorConfig c;
  c.task = "lift";
  c.modes = {{"lift", {fixtures::entry("lift:box", Hand::Left, 0.0, 3.0), fixtures::entry("steady:box", Hand::Right, 0.0, 3.0)}}};
  c.mode_weights = {1.0};
  c.jitter_sigma = 0.0;
  c.n_demos = 5;
  write(dir / "config.json", io::to_json(c));
  REQUIRE(run({"generate", "--config", dir / "config.json", "--out", dir / "demos.json", "--truth",
               dir / "truth.json"}).code == cli::kOk);
  REQUIRE(run({"learn", "--demos", dir / "demos.json", "--out", dir / "model.json"}).code == cli::kOk);
  const auto r = run({"plan", "--model", dir / "model.json", "--pair", "lift:box,steady:box"});
  REQUIRE(r.code == cli::kOk);
  const auto plan = io::Json::parse(r.out);
  CHECK(plan["entries"][0]["duration"].get<double>() == doctest::Approx(3.0));
  CHECK(plan["entries"][1]["duration"].get<double>() == doctest::Approx(3.0));
  CHECK(plan["entries"][0]["hand"] != plan["entries"][1]["hand"]);
}

TEST_CASE("inspect") {
  TempDir dir;
  const auto model = learned_pouring_model(dir, 0.02);
  const auto r = run({"inspect", "--model", model, "--pair", "hold:cup,pour:milk"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find("assigned during") != std::string::npos);
  int rows = 0;
  for (AllenRelation rel : kAllAllenRelations) {
    rows += r.out.find("\n" + std::string(to_string(rel)) + " ") != std::string::npos;
  }
  CHECK(rows == 13);
  std::size_t sums = 0;
  for (const char* c : {"\nss ", "\nse ", "\nes ", "\nee "}) {
    const auto at = r.out.find(c);
    REQUIRE(at != std::string::npos);
    const auto line = r.out.substr(at + 1, r.out.find('\n', at + 1) - at - 1);
    sums += line.find("1.000000") != std::string::npos;
  }
  CHECK(sums == 4);
  CHECK(r.out.find("-0.000000") == std::string::npos);

  CHECK(run({"inspect", "--model", model, "--pair", "hold:cup,fly:kite"}).code == cli::kQueryError);
}

TEST_CASE("JSON round trips") {
  const auto data = generate(fixtures::two_mode_config(4, 9));
  const io::DemonstrationFile file{data.task, data.demos};
  CHECK(io::demonstrations_from_json(io::to_json(file)).demos == data.demos);
  CHECK(io::sttcs_from_json(io::to_json(data.truth)) == data.truth);

  const GaussianMixture m{{{0.25, -1.5, 0.125}, {0.75, 2.0, 0.5}}, 12};
  CHECK(io::mixture_from_json(io::to_json(m)) == m);

  const auto config = fixtures::two_mode_config(33, 8);
  const auto again = io::generator_config_from_json(io::to_json(config));
  CHECK(io::to_json(again) == io::to_json(config));

  const auto model = learn_model(data.demos, "rt", LearningConfig{});
  REQUIRE_FALSE(model.ssttcs.empty());
  CHECK(io::ssttc_group_from_json(io::to_json(model.ssttcs[0])) == model.ssttcs[0]);
  const auto text = io::dump(io::to_json(model));
  CHECK(io::dump(io::to_json(io::model_from_json(io::Json::parse(text)))) == text);

  // Constraints given in reversed order are stored canonically.
  io::Json reversed = io::to_json(data.truth);
  auto& first = reversed["constraints"][0];
  std::swap(first["a"], first["b"]);
  first["relation"] = std::string(to_string(invert(*allen_from_string(first["relation"].get<std::string>()))));
  CHECK(io::sttcs_from_json(reversed) == data.truth);
}

TEST_CASE("malformed JSON is reported as input error") {
  CHECK_THROWS_WITH_AS(io::mixture_from_json(io::Json{{"components", 3}}), doctest::Contains("InvalidInput"), Error);
  CHECK_THROWS_AS(io::sttcs_from_json(io::Json::parse(R"({"constraints":[{"a":{"verb":"x","object":"y"}}]})")),
                  Error);
  CHECK_THROWS_AS(io::model_from_json(io::Json{{"format", 99}}), Error);
  TempDir dir;
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK_THROWS_AS(io::read_json(dir / "broken.json"), Error);
}

TEST_CASE("a loaded model saves to identical bytes") {
  TempDir dir;
  const auto model = learned_pouring_model(dir, 0.02);
  const auto loaded = io::model_from_json(io::read_json(model));
  io::write_json(dir / "again.json", io::to_json(loaded));
  CHECK(slurp(dir / "again.json") == slurp(model));
}
