#include "mosmc/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mosmc/errors.hpp"

namespace mosmc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ModelError(path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

std::uint64_t as_index(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) fail(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

const std::string& as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get_ref<const std::string&>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  return v;
}

class StateResolver {
 public:
  StateResolver(std::size_t count, const std::vector<std::string>& labels) : count_(count), labels_(labels) {}

  StateIndex operator()(const json& v, const std::string& path) const {
    if (v.is_string()) {
      for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == v.get_ref<const std::string&>()) return static_cast<StateIndex>(i);
      }
      fail(path, "unknown state label '" + v.get<std::string>() + "'");
    }
    const std::uint64_t s = as_index(v, path);
    if (s >= count_) fail(path, "state " + std::to_string(s) + " out of range (" + std::to_string(count_) + " states)");
    return static_cast<StateIndex>(s);
  }

 private:
  std::size_t count_;
  std::vector<std::string> labels_;
};

Objective parse_objective(const json& j, const std::string& path, const StateResolver& state) {
  Objective o;
  const std::string& kind = as_string(field(j, "kind", path), path + ".kind");
  if (kind == "reach") {
    o.kind = ObjectiveKind::ProbReach;
  } else if (kind == "reward") {
    o.kind = ObjectiveKind::ExpReward;
  } else {
    fail(path + ".kind", "expected 'reach' or 'reward', got '" + kind + "'");
  }
  const std::string& dir = as_string(field(j, "direction", path), path + ".direction");
  if (dir == "max") {
    o.direction = Direction::Max;
  } else if (dir == "min") {
    o.direction = Direction::Min;
  } else {
    fail(path + ".direction", "expected 'max' or 'min', got '" + dir + "'");
  }
  const json& goal = as_array(field(j, "goal", path), path + ".goal");
  for (std::size_t g = 0; g < goal.size(); ++g) {
    o.goal.push_back(state(goal[g], path + ".goal[" + std::to_string(g) + "]"));
  }
  if (o.kind == ObjectiveKind::ExpReward) {
    o.reward = as_string(field(j, "reward", path), path + ".reward");
  }
  if (j.contains("bounds")) {
    const json& b = as_array(j["bounds"], path + ".bounds");
    if (b.size() != 2) fail(path + ".bounds", "expected [lo, hi]");
    o.bounds = ValueBounds{as_number(b[0], path + ".bounds[0]"), as_number(b[1], path + ".bounds[1]")};
    if (!(o.bounds->lo <= o.bounds->hi)) fail(path + ".bounds", "lo must not exceed hi");
  }
  if (j.contains("label")) o.label = as_string(j["label"], path + ".label");
  return o;
}

json objective_json(const Objective& o) {
  json j;
  j["kind"] = o.kind == ObjectiveKind::ProbReach ? "reach" : "reward";
  j["direction"] = o.direction == Direction::Max ? "max" : "min";
  j["goal"] = o.goal;
  if (o.kind == ObjectiveKind::ExpReward) j["reward"] = o.reward;
  if (o.bounds) j["bounds"] = {o.bounds->lo, o.bounds->hi};
  if (!o.label.empty()) j["label"] = o.label;
  return j;
}

}  // namespace

const MultiQuery& ModelFile::query(std::string_view name) const {
  if (queries.empty()) throw ConfigError("model defines no queries");
  if (name.empty()) return queries.front();
  for (const auto& q : queries) {
    if (q.name == name) return q;
  }
  throw ConfigError("model has no query named '" + std::string(name) + "'");
}

ModelFile parse_model(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) fail("$", "expected an object");
  if (root.contains("format") && as_string(root["format"], "format") != "mosmc-model") {
    fail("format", "expected 'mosmc-model'");
  }
  const std::uint64_t version = as_index(field(root, "version", "$"), "version");
  if (version != kModelFormatVersion) {
    fail("version", "unsupported version " + std::to_string(version) + " (expected " +
                        std::to_string(kModelFormatVersion) + ")");
  }

  const json& states = field(root, "states", "$");
  const std::uint64_t count = as_index(field(states, "count", "states"), "states.count");
  if (count == 0) fail("states.count", "model needs at least one state");
  std::vector<std::string> labels;
  if (states.contains("labels")) {
    const json& l = as_array(states["labels"], "states.labels");
    if (l.size() != count) fail("states.labels", "expected " + std::to_string(count) + " labels");
    for (std::size_t i = 0; i < l.size(); ++i) labels.push_back(as_string(l[i], "states.labels[" + std::to_string(i) + "]"));
  }
  const StateResolver state(count, labels);
  const StateIndex initial = state(field(root, "initial", "$"), "initial");

  const json& actions = as_array(field(root, "actions", "$"), "actions");
  if (actions.size() != count) fail("actions", "expected one action list per state (" + std::to_string(count) + ")");
  std::vector<std::vector<ActionSpec>> specs(count);
  for (std::size_t s = 0; s < count; ++s) {
    const std::string sp = "actions[" + std::to_string(s) + "]";
    const json& list = as_array(actions[s], sp);
    if (list.empty()) fail(sp, "state " + std::to_string(s) + " has no actions (deadlock)");
    for (std::size_t a = 0; a < list.size(); ++a) {
      const std::string ap = sp + "[" + std::to_string(a) + "]";
      ActionSpec spec;
      if (list[a].contains("name")) spec.name = as_string(list[a]["name"], ap + ".name");
      const json& branches = as_array(field(list[a], "branches", ap), ap + ".branches");
      if (branches.empty()) fail(ap + ".branches", "action has no branches");
      double sum = 0.0;
      for (std::size_t b = 0; b < branches.size(); ++b) {
        const std::string bp = ap + ".branches[" + std::to_string(b) + "]";
        const json& br = as_array(branches[b], bp);
        if (br.size() != 2) fail(bp, "expected [target, probability]");
        const StateIndex t = state(br[0], bp + "[0]");
        const double p = as_number(br[1], bp + "[1]");
        if (!(p > 0.0 && p <= 1.0)) fail(bp + "[1]", "probability " + std::to_string(p) + " must lie in (0, 1]");
        sum += p;
        spec.branches.push_back({t, p});
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        fail(ap + ".branches", "probabilities sum to " + std::to_string(sum) + ", expected 1");
      }
      specs[s].push_back(std::move(spec));
    }
  }

  std::vector<RewardStructure> rewards;
  if (root.contains("rewards")) {
    const json& rs = as_array(root["rewards"], "rewards");
    for (std::size_t r = 0; r < rs.size(); ++r) {
      const std::string rp = "rewards[" + std::to_string(r) + "]";
      RewardStructure structure;
      structure.name = as_string(field(rs[r], "name", rp), rp + ".name");
      for (const auto& existing : rewards) {
        if (existing.name == structure.name) fail(rp + ".name", "duplicate reward structure '" + structure.name + "'");
      }
      const json& entries = as_array(field(rs[r], "entries", rp), rp + ".entries");
      for (std::size_t e = 0; e < entries.size(); ++e) {
        const std::string ep = rp + ".entries[" + std::to_string(e) + "]";
        const json& en = as_array(entries[e], ep);
        if (en.size() != 4) fail(ep, "expected [state, action, target, value]");
        RewardEntry entry;
        entry.state = state(en[0], ep + "[0]");
        const std::uint64_t a = as_index(en[1], ep + "[1]");
        if (a >= specs[entry.state].size()) fail(ep + "[1]", "action index out of range");
        entry.action = static_cast<ActionIndex>(a);
        entry.target = state(en[2], ep + "[2]");
        const auto& bs = specs[entry.state][a].branches;
        if (std::none_of(bs.begin(), bs.end(), [&](const Branch& b) { return b.target == entry.target; })) {
          fail(ep + "[2]", "action has no branch to this target");
        }
        entry.value = as_number(en[3], ep + "[3]");
        structure.entries.push_back(entry);
      }
      rewards.push_back(std::move(structure));
    }
  }

  ModelFile file;
  file.model = Mdp(count, initial, std::move(specs), std::move(rewards), std::move(labels));

  if (root.contains("queries")) {
    const json& qs = as_array(root["queries"], "queries");
    for (std::size_t q = 0; q < qs.size(); ++q) {
      const std::string qp = "queries[" + std::to_string(q) + "]";
      MultiQuery query;
      query.name = as_string(field(qs[q], "name", qp), qp + ".name");
      const json& objs = as_array(field(qs[q], "objectives", qp), qp + ".objectives");
      if (objs.empty()) fail(qp + ".objectives", "query needs at least one objective");
      for (std::size_t o = 0; o < objs.size(); ++o) {
        query.objectives.push_back(
            parse_objective(objs[o], qp + ".objectives[" + std::to_string(o) + "]", state));
      }
      file.queries.push_back(std::move(query));
    }
  }

  const ValidationReport base = validate_mdp(file.model);
  if (!base.ok()) throw ModelError("invalid model: " + base.summary());
  for (const auto& q : file.queries) {
    const ValidationReport r = validate_mdp(file.model, q);
    if (!r.ok()) throw ModelError("query '" + q.name + "': " + r.summary());
  }
  return file;
}

std::string serialize_model(const ModelFile& file) {
  const Mdp& m = file.model;
  json root;
  root["format"] = "mosmc-model";
  root["version"] = kModelFormatVersion;
  root["states"]["count"] = m.num_states();
  if (!m.state_labels().empty()) root["states"]["labels"] = m.state_labels();
  root["initial"] = m.initial_state();
  json actions = json::array();
  for (StateIndex s = 0; s < m.num_states(); ++s) {
    json list = json::array();
    for (ActionIndex a = 0; a < m.num_actions(s); ++a) {
      json act;
      act["name"] = m.action_name(s, a);
      json branches = json::array();
      for (const Branch& b : m.branches(s, a)) branches.push_back({b.target, b.probability});
      act["branches"] = std::move(branches);
      list.push_back(std::move(act));
    }
    actions.push_back(std::move(list));
  }
  root["actions"] = std::move(actions);
  json rewards = json::array();
  for (const auto& r : m.reward_structures()) {
    json entries = json::array();
    for (const auto& e : r.entries) entries.push_back({e.state, e.action, e.target, e.value});
    rewards.push_back({{"name", r.name}, {"entries", std::move(entries)}});
  }
  root["rewards"] = std::move(rewards);
  json queries = json::array();
  for (const auto& q : file.queries) {
    json objs = json::array();
    for (const auto& o : q.objectives) objs.push_back(objective_json(o));
    queries.push_back({{"name", q.name}, {"objectives", std::move(objs)}});
  }
  root["queries"] = std::move(queries);
  return root.dump(1) + "\n";
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_model(text.str());
  } catch (const ModelError& e) {
    throw ModelError(path.string() + ": " + e.what());
  }
}

void save_model(const ModelFile& file, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write model file " + path.string());
  out << serialize_model(file);
  if (!out) throw ConfigError("failed writing model file " + path.string());
}

}  // namespace mosmc
