#include "ttm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ttm/io.hpp"

namespace ttm::cli {

namespace {

std::string fixed6(double v) {
  if (std::abs(v) < 5e-7) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int exit_code_for(const Error& e) {
  const auto& k = e.kind();
  if (k == "RejectionLimitExceeded") return kGenerationError;
  if (k == "QueryError" || k == "UnsupportedRelation" || k == "InfeasibleDurations" || k == "MissingChannel") {
    return kQueryError;
  }
  return kInputError;
}

ActionPair parse_pair_arg(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw make_error("InvalidInput", "--pair expects \"verb:object,verb:object\", got \"" + text + "\"");
  }
  return {Action::parse(text.substr(0, comma)), Action::parse(text.substr(comma + 1))};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw make_error("IoError", "cannot write " + path);
  f << text;
}

struct GenerateArgs {
  std::string config, out, truth;
  std::optional<std::uint64_t> seed;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  auto config = io::generator_config_from_json(io::read_json(a.config));
  if (a.seed) config.seed = *a.seed;
  const auto dataset = generate(config);
  io::write_json(a.out, io::to_json(io::DemonstrationFile{dataset.task, dataset.demos}));
  io::write_json(a.truth, io::to_json(dataset.truth));
  out << "wrote " << dataset.demos.size() << " demonstrations to " << a.out << " and "
      << dataset.truth.constraints.size() << " ground-truth constraints to " << a.truth << "\n";
  return kOk;
}

struct LearnArgs {
  std::string demos, out;
  double epsilon = 0.1;
  double theta = 0.5;
  std::uint64_t seed = 0;
  bool allow_fallback = false;
};

int cmd_learn(const LearnArgs& a, std::ostream& out, std::ostream& err) {
  const auto file = io::demonstrations_from_json(io::read_json(a.demos));
  const auto violations = validate_dataset(file.demos);
  if (!violations.empty()) {
    err << "invalid demonstrations (" << violations.size() << " violation(s)):\n";
    for (const auto& v : violations) err << "  " << v.describe() << "\n";
    return kInputError;
  }
  LearningConfig config;
  config.fuzzy.epsilon = a.epsilon;
  config.solver.theta = a.theta;
  config.solver.allow_fallback = a.allow_fallback;
  config.seed = a.seed;
  const auto model = learn_model(file.demos, file.task, config);
  io::write_json(a.out, io::to_json(model));
  out << "learned " << model.sttcs.constraints.size() << " symbolic and " << model.ssttcs.size()
      << " quantified constraint group(s) from " << file.demos.size() << " demonstrations\n";
  for (const auto& u : model.unquantified) err << "warning: " << u.pair.key() << ": " << u.reason << "\n";
  return kOk;
}

struct EvalArgs {
  std::string demos, truth, out;
  int scenarios = 100;
  int per_scenario = 100;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  double theta = 0.5;
  int jobs = 1;
  int selection_patience = 2;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto file = io::demonstrations_from_json(io::read_json(a.demos));
  const auto truth = io::sttcs_from_json(io::read_json(a.truth));
  const auto violations = validate_dataset(file.demos);
  if (!violations.empty()) {
    err << "invalid demonstrations (" << violations.size() << " violation(s)):\n";
    for (const auto& v : violations) err << "  " << v.describe() << "\n";
    return kInputError;
  }
  const auto vocabulary = action_vocabulary(file.demos);
  auto known = [&](const Action& x) { return std::binary_search(vocabulary.begin(), vocabulary.end(), x); };
  for (const auto& [pair, sttc] : truth.constraints) {
    for (const auto* x : {&pair.first, &pair.second}) {
      if (!known(*x)) {
        err << "error: ground truth mentions " << x->key() << ", which never occurs in the demonstrations\n";
        return kInputError;
      }
    }
  }
  for (const auto& [action, membership] : truth.symmetric) {
    if (!known(action)) {
      err << "error: ground truth mentions " << action.key() << ", which never occurs in the demonstrations\n";
      return kInputError;
    }
  }

  ScenarioConfig config;
  config.n_scenarios = a.scenarios;
  config.demos_per_scenario = a.per_scenario;
  config.seed = a.seed;
  config.jobs = a.jobs;
  config.learning.fuzzy.epsilon = a.epsilon;
  config.learning.solver.theta = a.theta;
  config.learning.seed = a.seed;
  config.learning.em.selection_patience = a.selection_patience;
  const auto results = run_scenarios(file.demos, truth, config);

  std::ostringstream csv;
  write_curve_csv(csv, results.curve);
  write_text(a.out, csv.str());
  const auto& last = results.curve.back();
  out << "k=" << last.n_demos << " precision " << fixed6(last.mean_precision) << " recall "
      << fixed6(last.mean_recall) << "\n";
  return kOk;
}

struct PlanArgs {
  std::string model, pair, out, durations;
};

int cmd_plan(const PlanArgs& a, std::ostream& out) {
  const auto model = io::model_from_json(io::read_json(a.model));
  auto problem = make_bimanual_problem(model, parse_pair_arg(a.pair));
  if (!a.durations.empty()) {
    const auto comma = a.durations.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("comma");
      problem.mean_duration_first = std::stod(a.durations.substr(0, comma));
      problem.mean_duration_second = std::stod(a.durations.substr(comma + 1));
    } catch (const std::logic_error&) {
      throw make_error("InvalidInput", "--durations expects two numbers \"first,second\"");
    }
  }
  const auto text = io::dump(io::to_json(plan_bimanual(problem)));
  if (a.out.empty()) {
    out << text;
  } else {
    write_text(a.out, text);
  }
  return kOk;
}

struct InspectArgs {
  std::string model, pair;
};

int cmd_inspect(const InspectArgs& a, std::ostream& out) {
  const auto model = io::model_from_json(io::read_json(a.model));
  const auto pair = parse_pair_arg(a.pair);
  const auto profile = model.profiles.find(pair);
  const auto apkm = model.apkms.find(pair);
  if (profile == model.profiles.end() || apkm == model.apkms.end()) {
    throw make_error("QueryError", pair.key() + " never co-occurs in the learning data");
  }
  const double eps = model.config.fuzzy.epsilon;
  out << "pair " << pair.key() << "  (" << apkm->second.pair_count << " observation pairs, epsilon "
      << fixed6(eps) << ")\n";
  if (const auto r = model.sttcs.relation(pair.first, pair.second)) {
    out << "assigned " << to_string(*r) << "\n";
  } else {
    out << "assigned none\n";
  }
  out << "\nrelation        membership\n";
  char line[96];
  for (AllenRelation r : kAllAllenRelations) {
    std::snprintf(line, sizeof line, "%-15s %s\n", std::string(to_string(r)).c_str(),
                  fixed6(profile->second[r]).c_str());
    out << line;
  }
  out << "\nchannel  before    equals    after     sum       components\n";
  for (Channel c : kAllChannels) {
    const auto& m = apkm->second.mixture(c);
    const auto p = fuzzy_point(m, eps);
    std::snprintf(line, sizeof line, "%-8s %s  %s  %s  %s  %zu\n", std::string(to_string(c)).c_str(),
                  fixed6(p.before).c_str(), fixed6(p.equals).c_str(), fixed6(p.after).c_str(),
                  fixed6(p.before + p.equals + p.after).c_str(), m.size());
    out << line;
    for (const auto& g : m.components) {
      out << "           w " << fixed6(g.weight) << "  mean " << fixed6(g.mean) << "  var " << fixed6(g.variance)
          << "\n";
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn temporal task constraints from bimanual demonstrations"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Sample synthetic demonstrations and their ground truth");
  generate_cmd->add_option("--config", gen.config, "generator config JSON")->required();
  generate_cmd->add_option("--out", gen.out, "demonstrations JSON to write")->required();
  generate_cmd->add_option("--truth", gen.truth, "ground-truth constraints JSON to write")->required();
  generate_cmd->add_option("--seed", gen.seed, "overrides the seed of the config");

  LearnArgs learn;
  auto* learn_cmd = app.add_subcommand("learn", "Learn a task model from demonstrations");
  learn_cmd->add_option("--demos", learn.demos, "demonstrations JSON")->required();
  learn_cmd->add_option("--out", learn.out, "model JSON to write")->required();
  learn_cmd->add_option("--epsilon", learn.epsilon, "equality margin in seconds")->capture_default_str();
  learn_cmd->add_option("--theta", learn.theta, "minimum membership of an assignment")->capture_default_str();
  learn_cmd->add_option("--seed", learn.seed, "seed of the mixture fits")->capture_default_str();
  learn_cmd->add_flag("--allow-fallback", learn.allow_fallback, "try lower-ranked relations on conflict");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Learning curves over random scenarios");
  eval_cmd->add_option("--demos", ev.demos, "demonstrations JSON")->required();
  eval_cmd->add_option("--truth", ev.truth, "ground-truth constraints JSON")->required();
  eval_cmd->add_option("--out", ev.out, "CSV to write")->required();
  eval_cmd->add_option("--scenarios", ev.scenarios, "number of scenarios")->capture_default_str();
  eval_cmd->add_option("--per-scenario", ev.per_scenario, "demonstrations per scenario")->capture_default_str();
  eval_cmd->add_option("--seed", ev.seed, "base seed")->capture_default_str();
  eval_cmd->add_option("--epsilon", ev.epsilon, "equality margin in seconds")->capture_default_str();
  eval_cmd->add_option("--theta", ev.theta, "minimum membership of an assignment")->capture_default_str();
  eval_cmd->add_option("--jobs", ev.jobs, "scenarios run in parallel")->capture_default_str();
  eval_cmd->add_option("--selection-patience", ev.selection_patience,
                       "stop the component search after this many non-improving counts (0: try all)")
      ->capture_default_str();

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Synchronize two actions of a learned model");
  plan_cmd->add_option("--model", plan.model, "model JSON")->required();
  plan_cmd->add_option("--pair", plan.pair, "\"verb:object,verb:object\"")->required();
  plan_cmd->add_option("--out", plan.out, "plan JSON to write (default: stdout)");
  plan_cmd->add_option("--durations", plan.durations, "desired durations \"first,second\" (default: learned means)");

  InspectArgs inspect;
  auto* inspect_cmd = app.add_subcommand("inspect", "Show the memberships and mixtures of a pair");
  inspect_cmd->add_option("--model", inspect.model, "model JSON")->required();
  inspect_cmd->add_option("--pair", inspect.pair, "\"verb:object,verb:object\"")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*generate_cmd) return cmd_generate(gen, out);
    if (*learn_cmd) return cmd_learn(learn, out, err);
    if (*eval_cmd) return cmd_eval(ev, out, err);
    if (*plan_cmd) return cmd_plan(plan, out);
    if (*inspect_cmd) return cmd_inspect(inspect, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kInputError;
}

}  // namespace ttm::cli
