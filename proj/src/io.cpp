#include "ttm/io.hpp"

#include <fstream>
#include <sstream>

namespace ttm::io {

namespace {

[[noreturn]] void input_error(const std::string& what) { throw make_error("InvalidInput", what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) input_error(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) input_error(where + ": missing field '" + key + "'");
  return *it;
}

double number(const Json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_number()) input_error(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

std::string text(const Json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_string()) input_error(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

const Json& array(const Json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_array()) input_error(where + ": field '" + key + "' must be an array");
  return v;
}

Json action_json(const Action& a) { return Json{{"verb", a.verb}, {"object", a.object}}; }

Action action_from(const Json& j, const std::string& where) {
  return {text(j, "verb", where), text(j, "object", where)};
}

Hand hand_from(const Json& j, const std::string& where) {
  const auto name = text(j, "hand", where);
  const auto hand = hand_from_string(name);
  if (!hand) input_error(where + ": hand must be \"left\" or \"right\", got \"" + name + "\"");
  return *hand;
}

AllenRelation relation_from(const Json& j, const std::string& where) {
  const auto name = text(j, "relation", where);
  const auto r = allen_from_string(name);
  if (!r) input_error(where + ": unknown relation \"" + name + "\"");
  return *r;
}

ActionPair pair_from(const Json& j, const std::string& where) {
  try {
    return ActionPair::parse(text(j, "pair", where));
  } catch (const Error& e) {
    input_error(where + ": " + e.what());
  }
}

}  // namespace

Json to_json(const DemonstrationFile& file) {
  Json demos = Json::array();
  for (const auto& d : file.demos) {
    Json jd{{"id", d.id}, {"left", Json::array()}, {"right", Json::array()}};
    for (Hand hand : {Hand::Left, Hand::Right}) {
      auto& seq = jd[std::string(to_string(hand))];
      for (const auto& o : d.hand(hand)) {
        seq.push_back({{"verb", o.action.verb}, {"object", o.action.object}, {"start", o.start()}, {"end", o.end()}});
      }
    }
    demos.push_back(std::move(jd));
  }
  return Json{{"task", file.task}, {"demonstrations", std::move(demos)}};
}

DemonstrationFile demonstrations_from_json(const Json& j) {
  DemonstrationFile file;
  file.task = text(j, "task", "demonstration file");
  std::size_t index = 0;
  for (const auto& jd : array(j, "demonstrations", "demonstration file")) {
    const std::string where = "demonstration " + std::to_string(index++);
    Demonstration d;
    d.id = text(jd, "id", where);
    for (Hand hand : {Hand::Left, Hand::Right}) {
      const std::string key(to_string(hand));
      for (const auto& jo : array(jd, key.c_str(), where)) {
        const std::string w = where + " (" + key + ")";
        auto& seq = hand == Hand::Left ? d.left : d.right;
        seq.push_back({action_from(jo, w), {number(jo, "start", w), number(jo, "end", w)}});
      }
    }
    file.demos.push_back(std::move(d));
  }
  return file;
}

Json to_json(const GaussianMixture& m) {
  Json comps = Json::array();
  for (const auto& c : m.components) comps.push_back({{"w", c.weight}, {"mu", c.mean}, {"var", c.variance}});
  return Json{{"components", std::move(comps)}, {"n", m.sample_count}};
}

GaussianMixture mixture_from_json(const Json& j) {
  GaussianMixture m;
  for (const auto& jc : array(j, "components", "mixture")) {
    m.components.push_back({number(jc, "w", "mixture component"), number(jc, "mu", "mixture component"),
                            number(jc, "var", "mixture component")});
  }
  const auto& n = field(j, "n", "mixture");
  if (!n.is_number_unsigned()) input_error("mixture: field 'n' must be a non-negative integer");
  m.sample_count = n.get<std::size_t>();
  return m;
}

Json to_json(const SttcSet& set) {
  Json constraints = Json::array();
  for (const auto& [pair, sttc] : set.constraints) {
    constraints.push_back({{"a", action_json(pair.first)},
                           {"b", action_json(pair.second)},
                           {"relation", std::string(to_string(sttc.relation))},
                           {"membership", sttc.membership}});
  }
  Json symmetric = Json::array();
  for (const auto& [action, membership] : set.symmetric) {
    symmetric.push_back({{"action", action_json(action)}, {"membership", membership}});
  }
  return Json{{"constraints", std::move(constraints)}, {"symmetric", std::move(symmetric)}};
}

SttcSet sttcs_from_json(const Json& j) {
  SttcSet set;
  for (const auto& jc : array(j, "constraints", "constraint set")) {
    ActionPair pair{action_from(field(jc, "a", "constraint"), "constraint a"),
                    action_from(field(jc, "b", "constraint"), "constraint b")};
    auto relation = relation_from(jc, "constraint");
    bool flipped = false;
    pair = canonical(pair, &flipped);
    if (flipped) relation = invert(relation);
    set.constraints[pair] = {relation, number(jc, "membership", "constraint")};
  }
  if (j.contains("symmetric")) {
    for (const auto& js : array(j, "symmetric", "constraint set")) {
      set.symmetric[action_from(field(js, "action", "symmetric"), "symmetric action")] =
          number(js, "membership", "symmetric");
    }
  }
  return set;
}

Json to_json(const SsttcGroup& group) {
  Json constraints = Json::array();
  for (const auto& s : group.constraints) {
    constraints.push_back({{"channel", std::string(to_string(s.channel))},
                           {"mean", s.mean},
                           {"var", s.variance},
                           {"weight", s.weight}});
  }
  return Json{{"pair", group.pair.key()},
              {"relation", std::string(to_string(group.relation))},
              {"constraints", std::move(constraints)}};
}

SsttcGroup ssttc_group_from_json(const Json& j) {
  SsttcGroup g;
  g.pair = pair_from(j, "ssttc");
  g.relation = relation_from(j, "ssttc");
  for (const auto& jc : array(j, "constraints", "ssttc")) {
    const auto name = text(jc, "channel", "ssttc constraint");
    const auto channel = channel_from_string(name);
    if (!channel) input_error("ssttc constraint: unknown channel \"" + name + "\"");
    g.constraints.push_back({g.pair, *channel, number(jc, "mean", "ssttc constraint"),
                             number(jc, "var", "ssttc constraint"), number(jc, "weight", "ssttc constraint")});
  }
  return g;
}

Json to_json(const TimelinePlan& plan) {
  Json entries = Json::array();
  for (const auto& e : plan.entries) {
    entries.push_back({{"verb", e.action.verb},
                       {"object", e.action.object},
                       {"hand", std::string(to_string(e.hand))},
                       {"start", e.start},
                       {"duration", e.duration}});
  }
  return Json{{"entries", std::move(entries)}, {"objective", plan.objective_value}};
}

Json to_json(const GeneratorConfig& c) {
  Json modes = Json::array();
  for (const auto& m : c.modes) {
    Json entries = Json::array();
    for (const auto& e : m.entries) {
      entries.push_back({{"verb", e.action.verb},
                         {"object", e.action.object},
                         {"hand", std::string(to_string(e.hand))},
                         {"start", e.start},
                         {"duration", e.duration}});
    }
    modes.push_back({{"name", m.name}, {"entries", std::move(entries)}});
  }
  return Json{{"task", c.task},
              {"modes", std::move(modes)},
              {"mode_weights", c.mode_weights},
              {"jitter_sigma", c.jitter_sigma},
              {"n_demos", c.n_demos},
              {"seed", c.seed},
              {"epsilon", c.epsilon},
              {"balanced_modes", c.balanced_modes}};
}

GeneratorConfig generator_config_from_json(const Json& j) {
  GeneratorConfig c;
  const std::string where = "generator config";
  if (j.contains("task")) c.task = text(j, "task", where);
  for (const auto& jm : array(j, "modes", where)) {
    ModeTemplate m;
    m.name = text(jm, "name", "mode");
    for (const auto& je : array(jm, "entries", "mode '" + m.name + "'")) {
      const std::string w = "mode '" + m.name + "' entry";
      m.entries.push_back({action_from(je, w), hand_from(je, w), number(je, "start", w), number(je, "duration", w)});
    }
    c.modes.push_back(std::move(m));
  }
  for (const auto& w : array(j, "mode_weights", where)) {
    if (!w.is_number()) input_error("mode_weights: entries must be numbers");
    c.mode_weights.push_back(w.get<double>());
  }
  c.jitter_sigma = number(j, "jitter_sigma", where);
  const auto& n = field(j, "n_demos", where);
  if (!n.is_number_integer()) input_error("n_demos: must be an integer");
  c.n_demos = n.get<int>();
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) input_error("seed: must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  c.epsilon = number(j, "epsilon", where);
  if (j.contains("balanced_modes")) {
    if (!j["balanced_modes"].is_boolean()) input_error("balanced_modes: must be a boolean");
    c.balanced_modes = j["balanced_modes"].get<bool>();
  }
  return c;
}

Json to_json(const TaskModel& model) {
  const auto& cfg = model.config;
  Json config{{"epsilon", cfg.fuzzy.epsilon},
              {"theta", cfg.solver.theta},
              {"allow_fallback", cfg.solver.allow_fallback},
              {"seed", cfg.seed},
              {"variance_floor", cfg.em.variance_floor},
              {"em_tol", cfg.em.tol},
              {"em_max_iter", cfg.em.max_iter},
              {"selection_patience", cfg.em.selection_patience}};

  Json actions = Json::array();
  for (const auto& s : model.actions) {
    actions.push_back({{"verb", s.action.verb},
                       {"object", s.action.object},
                       {"hand", std::string(to_string(s.hand))},
                       {"mean_duration", s.mean_duration},
                       {"count", s.count}});
  }

  Json apkms = Json::array();
  for (const auto& [pair, apkm] : model.apkms) {
    Json ja{{"pair", pair.key()}, {"pair_count", apkm.pair_count}};
    for (Channel c : kAllChannels) ja[std::string(to_string(c))] = to_json(apkm.mixture(c));
    apkms.push_back(std::move(ja));
  }

  Json profiles = Json::array();
  for (const auto& [pair, profile] : model.profiles) {
    Json membership = Json::object();
    for (AllenRelation r : kAllAllenRelations) membership[std::string(to_string(r))] = profile[r];
    profiles.push_back({{"pair", pair.key()}, {"membership", std::move(membership)}});
  }

  Json ssttcs = Json::array();
  for (const auto& g : model.ssttcs) ssttcs.push_back(to_json(g));

  Json unquantified = Json::array();
  for (const auto& u : model.unquantified) {
    unquantified.push_back(
        {{"pair", u.pair.key()}, {"relation", std::string(to_string(u.relation))}, {"reason", u.reason}});
  }

  return Json{{"format", TaskModel::kFormat},
              {"task", model.task},
              {"config", std::move(config)},
              {"actions", std::move(actions)},
              {"apkms", std::move(apkms)},
              {"profiles", std::move(profiles)},
              {"sttcs", to_json(model.sttcs)},
              {"ssttcs", std::move(ssttcs)},
              {"unquantified", std::move(unquantified)}};
}

TaskModel model_from_json(const Json& j) {
  const std::string where = "model";
  const auto& format = field(j, "format", where);
  if (!format.is_number_integer() || format.get<int>() != TaskModel::kFormat) {
    input_error("model: unsupported format (expected " + std::to_string(TaskModel::kFormat) + ")");
  }
  TaskModel m;
  m.task = text(j, "task", where);

  const auto& jc = field(j, "config", where);
  m.config.fuzzy.epsilon = number(jc, "epsilon", "model config");
  m.config.solver.theta = number(jc, "theta", "model config");
  m.config.solver.allow_fallback = field(jc, "allow_fallback", "model config").get<bool>();
  m.config.seed = field(jc, "seed", "model config").get<std::uint64_t>();
  m.config.em.variance_floor = number(jc, "variance_floor", "model config");
  m.config.em.tol = number(jc, "em_tol", "model config");
  m.config.em.max_iter = field(jc, "em_max_iter", "model config").get<int>();
  if (jc.contains("selection_patience")) m.config.em.selection_patience = jc["selection_patience"].get<int>();

  for (const auto& ja : array(j, "actions", where)) {
    m.actions.push_back({action_from(ja, "action"), number(ja, "mean_duration", "action"), hand_from(ja, "action"),
                         field(ja, "count", "action").get<int>()});
  }
  for (const auto& ja : array(j, "apkms", where)) {
    ActionPairKeypointModel apkm;
    apkm.pair = pair_from(ja, "apkm");
    apkm.pair_count = field(ja, "pair_count", "apkm").get<std::size_t>();
    for (Channel c : kAllChannels) {
      apkm.mixture(c) = mixture_from_json(field(ja, std::string(to_string(c)).c_str(), "apkm"));
    }
    m.apkms.emplace(apkm.pair, std::move(apkm));
  }
  for (const auto& jp : array(j, "profiles", where)) {
    FuzzyAllenProfile profile;
    const auto& membership = field(jp, "membership", "profile");
    for (AllenRelation r : kAllAllenRelations) {
      profile[r] = number(membership, std::string(to_string(r)).c_str(), "profile");
    }
    m.profiles.emplace(pair_from(jp, "profile"), profile);
  }
  m.sttcs = sttcs_from_json(field(j, "sttcs", where));
  for (const auto& jg : array(j, "ssttcs", where)) m.ssttcs.push_back(ssttc_group_from_json(jg));
  if (j.contains("unquantified")) {
    for (const auto& ju : array(j, "unquantified", where)) {
      m.unquantified.push_back({pair_from(ju, "unquantified"), relation_from(ju, "unquantified"),
                                text(ju, "reason", "unquantified")});
    }
  }
  return m;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) input_error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    input_error(path.string() + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw make_error("IoError", "cannot write " + path.string());
  out << dump(j);
  if (!out) throw make_error("IoError", "failed writing " + path.string());
}

}  // namespace ttm::io
