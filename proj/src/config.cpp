#include "syncnet/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "syncnet/dac.hpp"
#include "syncnet/errors.hpp"

namespace syncnet {

ExoSpec DisturbanceConfig::spec() const {
  ExoSpec s{constant != 0.0, {}};
  for (const auto& sin : sinusoids)
    if (std::find(s.frequencies.begin(), s.frequencies.end(), sin.omega) == s.frequencies.end())
      s.frequencies.push_back(sin.omega);
  return s;
}

namespace {

// ---------------------------------------------------------------------------
// Reading

class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  void check_keys(const toml::table& t, const std::string& path, std::initializer_list<std::string_view> known) {
    for (auto&& [key, value] : t) {
      (void)value;
      if (std::find(known.begin(), known.end(), key.str()) == known.end())
        fail(join(path, key.str()), "unknown key");
    }
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }

  const toml::table* table(const toml::table& t, std::string_view key, const std::string& path, bool required) {
    const auto* n = t.get(key);
    if (!n) {
      if (required) fail(join(path, key), "missing table");
      return nullptr;
    }
    if (!n->is_table()) {
      fail(join(path, key), "expected a table");
      return nullptr;
    }
    return n->as_table();
  }

  std::optional<double> number(const toml::node* n, const std::string& path) {
    if (!n->is_number()) {
      fail(path, "expected a number");
      return std::nullopt;
    }
    const double v = *n->value<double>();
    if (!std::isfinite(v)) {
      fail(path, "must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> number(const toml::table& t, std::string_view key, const std::string& path, bool required) {
    const auto* n = t.get(key);
    if (!n) {
      if (required) fail(join(path, key), "missing");
      return std::nullopt;
    }
    return number(n, join(path, key));
  }

  std::optional<std::int64_t> integer(const toml::table& t, std::string_view key, const std::string& path,
                                      bool required) {
    const auto* n = t.get(key);
    if (!n) {
      if (required) fail(join(path, key), "missing");
      return std::nullopt;
    }
    if (!n->is_integer()) {
      fail(join(path, key), "expected an integer");
      return std::nullopt;
    }
    return *n->value<std::int64_t>();
  }

  std::optional<bool> boolean(const toml::table& t, std::string_view key, const std::string& path) {
    const auto* n = t.get(key);
    if (!n) return std::nullopt;
    if (!n->is_boolean()) {
      fail(join(path, key), "expected true or false");
      return std::nullopt;
    }
    return *n->value<bool>();
  }

  std::optional<std::string> string(const toml::table& t, std::string_view key, const std::string& path,
                                    bool required) {
    const auto* n = t.get(key);
    if (!n) {
      if (required) fail(join(path, key), "missing");
      return std::nullopt;
    }
    if (!n->is_string()) {
      fail(join(path, key), "expected a string");
      return std::nullopt;
    }
    return *n->value<std::string>();
  }

  std::optional<std::vector<double>> numbers(const toml::node* n, const std::string& path) {
    const auto* arr = n->as_array();
    if (!arr) {
      fail(path, "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    bool ok = true;
    for (std::size_t k = 0; k < arr->size(); ++k) {
      auto v = number(arr->get(k), path + "[" + std::to_string(k) + "]");
      if (v) out.push_back(*v);
      else ok = false;
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<std::vector<double>> numbers(const toml::table& t, std::string_view key, const std::string& path,
                                             bool required) {
    const auto* n = t.get(key);
    if (!n) {
      if (required) fail(join(path, key), "missing");
      return std::nullopt;
    }
    return numbers(n, join(path, key));
  }

  std::optional<std::vector<std::vector<double>>> number_rows(const toml::table& t, std::string_view key,
                                                              const std::string& path) {
    const auto* n = t.get(key);
    if (!n) return std::nullopt;
    const auto* arr = n->as_array();
    if (!arr) {
      fail(join(path, key), "expected an array of arrays");
      return std::nullopt;
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < arr->size(); ++k) {
      auto row = numbers(arr->get(k), join(path, key) + "[" + std::to_string(k) + "]");
      rows.push_back(row.value_or(std::vector<double>{}));
    }
    return rows;
  }
};

std::optional<ControlMode> parse_mode(const std::string& s) {
  if (s == "none") return ControlMode::none;
  if (s == "proportional") return ControlMode::proportional;
  if (s == "internal_model") return ControlMode::internal_model;
  if (s == "leader") return ControlMode::leader;
  return std::nullopt;
}

std::vector<EdgeGain> parse_edge_gains(Reader& r, const toml::table& t, std::string_view key,
                                       const std::string& path) {
  std::vector<EdgeGain> out;
  const auto rows = r.number_rows(t, key, path);
  if (!rows) return out;
  for (std::size_t k = 0; k < rows->size(); ++k) {
    const auto& row = (*rows)[k];
    const std::string p = Reader::join(path, key) + "[" + std::to_string(k) + "]";
    if (row.size() != 3) {
      r.fail(p, "expected [i, j, gain]");
      continue;
    }
    if (row[0] < 1 || row[1] < 1 || row[0] != std::floor(row[0]) || row[1] != std::floor(row[1])) {
      r.fail(p, "node indices must be positive integers");
      continue;
    }
    out.push_back({static_cast<std::size_t>(row[0]) - 1, static_cast<std::size_t>(row[1]) - 1, row[2]});
  }
  return out;
}

std::optional<ExoSpec> parse_exo_spec(Reader& r, const toml::table& t, const std::string& path) {
  r.check_keys(t, path, {"constant", "omegas"});
  ExoSpec s;
  s.has_constant = r.boolean(t, "constant", path).value_or(false);
  s.frequencies = r.numbers(t, "omegas", path, false).value_or(std::vector<double>{});
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(path, e.what());
    return std::nullopt;
  }
  return s;
}

DisturbanceConfig parse_disturbance(Reader& r, const toml::table& t, const std::string& path) {
  r.check_keys(t, path, {"constant", "sinusoids"});
  DisturbanceConfig d;
  d.constant = r.number(t, "constant", path, false).value_or(0.0);
  if (const auto* n = t.get("sinusoids")) {
    const auto* arr = n->as_array();
    if (!arr) {
      r.fail(path + ".sinusoids", "expected an array of tables");
      return d;
    }
    for (std::size_t k = 0; k < arr->size(); ++k) {
      const std::string p = path + ".sinusoids[" + std::to_string(k) + "]";
      const auto* st = arr->get(k)->as_table();
      if (!st) {
        r.fail(p, "expected { omega, amplitude, phase }");
        continue;
      }
      r.check_keys(*st, p, {"omega", "amplitude", "phase"});
      Sinusoid s;
      s.omega = r.number(*st, "omega", p, true).value_or(1.0);
      s.amplitude = r.number(*st, "amplitude", p, true).value_or(0.0);
      s.phase = r.number(*st, "phase", p, false).value_or(0.0);
      if (!(s.omega > 0.0)) r.fail(p + ".omega", "must be positive");
      d.sinusoids.push_back(s);
    }
  }
  return d;
}

std::size_t agent_state_dim(const AgentConfig& a) {
  if (a.type == "goodwin") return 3;
  const Polynomial den(a.den);
  return den.degree() < 0 ? 0 : static_cast<std::size_t>(den.degree());
}

void semantic_checks(Reader& r, const ScenarioConfig& c) {
  if (!(c.t_end > 0.0)) r.fail("t_end", "must be positive");
  if (!(c.dt > 0.0)) r.fail("dt", "must be positive");
  if (c.sample_every == 0) r.fail("sample_every", "must be at least 1");
  if (!(c.window_fraction > 0.0 && c.window_fraction <= 1.0)) r.fail("window_fraction", "must be in (0, 1]");
  if (c.nodes == 0) r.fail("graph.nodes", "must be at least 1");

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t k = 0; k < c.edges.size(); ++k) {
    const auto& e = c.edges[k];
    const std::string p = "graph.edges[" + std::to_string(k) + "]";
    if (e.i >= c.nodes || e.j >= c.nodes) r.fail(p, "node index out of range 1.." + std::to_string(c.nodes));
    if (e.i == e.j) r.fail(p, "self-loop");
    if (e.p < 0.0 || e.n < 0.0) r.fail(p, "weights must be nonnegative");
    if (!seen.emplace(std::min(e.i, e.j), std::max(e.i, e.j)).second) r.fail(p, "duplicate edge");
  }

  if (!c.dac && !c.agent) r.fail("agent", "missing table");
  if (c.agent) {
    const auto& a = *c.agent;
    if (a.type == "goodwin") {
      try {
        a.goodwin.validate();
      } catch (const std::invalid_argument& e) {
        r.fail("agent", e.what());
      }
      if (a.gamma4 && !(*a.gamma4 > 0.0)) r.fail("agent.gamma4", "must be positive");
    } else if (a.type == "linear") {
      if (Polynomial(a.den).degree() < 1) r.fail("agent.den", "must have degree >= 1");
      else if (Polynomial(a.num).degree() >= Polynomial(a.den).degree())
        r.fail("agent.num", "transfer function must be strictly proper");
    } else {
      r.fail("agent.type", "expected \"goodwin\" or \"linear\"");
    }
  }

  if (c.node_list.size() != c.nodes)
    r.fail("nodes", "expected " + std::to_string(c.nodes) + " [[nodes]] entries, got " +
                        std::to_string(c.node_list.size()));
  if (c.agent && !c.dac) {
    const auto dim = agent_state_dim(*c.agent);
    for (std::size_t i = 0; i < c.node_list.size(); ++i)
      if (c.node_list[i].x0.size() != dim)
        r.fail("nodes[" + std::to_string(i) + "].x0", "expected " + std::to_string(dim) + " values");
  }

  const auto& ctrl = c.controller;
  if (ctrl.mode == ControlMode::leader) {
    if (ctrl.leader >= c.nodes) {
      r.fail("controller.leader", "out of range 1.." + std::to_string(c.nodes));
    } else if (ctrl.leader < c.node_list.size()) {
      const auto& d = c.node_list[ctrl.leader].disturbance;
      if (d.constant != 0.0 || !d.sinusoids.empty())
        r.fail("nodes[" + std::to_string(ctrl.leader) + "].disturbance", "the leader must be disturbance-free");
    }
  }
  if (!ctrl.b.empty() && ctrl.b.size() != c.nodes) r.fail("controller.b", "need one row per node");
  if (!ctrl.zeta0.empty() && ctrl.zeta0.size() != c.nodes) r.fail("controller.zeta0", "need one row per node");
  if (ctrl.adaptation) {
    const auto& ad = *ctrl.adaptation;
    if (!(ad.alpha > 0.0)) r.fail("controller.adaptation.alpha", "must be positive");
    if (!(ad.beta > 0.0)) r.fail("controller.adaptation.beta", "must be positive");
    for (const auto* list : {&ad.alpha_edges, &ad.beta_edges}) {
      const std::string p = list == &ad.alpha_edges ? "controller.adaptation.alpha_edges"
                                                    : "controller.adaptation.beta_edges";
      for (std::size_t k = 0; k < list->size(); ++k) {
        const auto& g = (*list)[k];
        if (!(g.value > 0.0)) r.fail(p + "[" + std::to_string(k) + "]", "gain must be positive");
        if (!seen.count({std::min(g.i, g.j), std::max(g.i, g.j)}))
          r.fail(p + "[" + std::to_string(k) + "]", "not an edge of the graph");
        for (std::size_t l = 0; l < k; ++l) {
          const auto& h = (*list)[l];
          if (std::min(h.i, h.j) == std::min(g.i, g.j) && std::max(h.i, h.j) == std::max(g.i, g.j) &&
              h.value != g.value)
            r.fail(p + "[" + std::to_string(k) + "]", "asymmetric gains for the same undirected edge");
        }
      }
    }
  }
  if (c.check) {
    const auto& ch = *c.check;
    if (ch.metric != "sync_error" && ch.metric != "tracking_error" && ch.metric != "input_exactness")
      r.fail("check.metric", "expected sync_error, tracking_error or input_exactness");
    if (ch.compare != "<=" && ch.compare != ">") r.fail("check.compare", "expected \"<=\" or \">\"");
  }
}

}  // namespace

ScenarioConfig parse_config(std::string_view toml_text) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "line " << e.source().begin.line << ": " << e.description();
    throw ConfigError({os.str()});
  }

  Reader r;
  ScenarioConfig c;
  r.check_keys(root, "",
               {"name", "description", "t_end", "dt", "sample_every", "window_fraction", "record_states", "agent",
                "graph", "controller", "nodes", "dac", "check"});
  c.name = r.string(root, "name", "", false).value_or("scenario");
  c.description = r.string(root, "description", "", false).value_or("");
  c.t_end = r.number(root, "t_end", "", false).value_or(c.t_end);
  c.dt = r.number(root, "dt", "", false).value_or(c.dt);
  if (auto v = r.integer(root, "sample_every", "", false)) c.sample_every = *v < 1 ? 0 : static_cast<std::size_t>(*v);
  c.window_fraction = r.number(root, "window_fraction", "", false).value_or(c.window_fraction);
  c.record_states = r.boolean(root, "record_states", "").value_or(false);

  if (const auto* dac = r.table(root, "dac", "", false)) {
    r.check_keys(*dac, "dac", {"constant", "omegas", "epsilon", "nh_root"});
    DacConfig d;
    d.constant = r.boolean(*dac, "constant", "dac").value_or(true);
    d.omegas = r.numbers(*dac, "omegas", "dac", false).value_or(std::vector<double>{});
    d.epsilon = r.number(*dac, "epsilon", "dac", false);
    d.nh_root = r.number(*dac, "nh_root", "dac", false).value_or(0.4);
    try {
      d.spec().validate();
    } catch (const std::invalid_argument& e) {
      r.fail("dac", e.what());
    }
    c.dac = d;
  }

  if (const auto* agent = r.table(root, "agent", "", !root.get("dac"))) {
    r.check_keys(*agent, "agent", {"type", "b", "p", "gamma4", "num", "den"});
    AgentConfig a;
    a.type = r.string(*agent, "type", "agent", true).value_or("goodwin");
    if (a.type == "goodwin") {
      if (auto b = r.numbers(*agent, "b", "agent", false)) {
        if (b->size() != 3) r.fail("agent.b", "expected 3 values [b1, b2, b3]");
        else a.goodwin = {(*b)[0], (*b)[1], (*b)[2], a.goodwin.hill_p};
      }
      a.goodwin.hill_p = r.number(*agent, "p", "agent", false).value_or(a.goodwin.hill_p);
      a.gamma4 = r.number(*agent, "gamma4", "agent", false);
    } else {
      a.num = r.numbers(*agent, "num", "agent", a.type == "linear").value_or(std::vector<double>{});
      a.den = r.numbers(*agent, "den", "agent", a.type == "linear").value_or(std::vector<double>{});
    }
    c.agent = a;
  }

  if (const auto* graph = r.table(root, "graph", "", true)) {
    r.check_keys(*graph, "graph", {"nodes", "edges"});
    const auto n = r.integer(*graph, "nodes", "graph", true);
    if (n && *n >= 1) c.nodes = static_cast<std::size_t>(*n);
    else if (n) r.fail("graph.nodes", "must be at least 1");
    if (const auto rows = r.number_rows(*graph, "edges", "graph")) {
      for (std::size_t k = 0; k < rows->size(); ++k) {
        const auto& row = (*rows)[k];
        const std::string p = "graph.edges[" + std::to_string(k) + "]";
        if (row.size() != 3 && row.size() != 4) {
          r.fail(p, "expected [i, j, p_weight] or [i, j, p_weight, n_weight]");
          continue;
        }
        if (row[0] < 1 || row[1] < 1 || row[0] != std::floor(row[0]) || row[1] != std::floor(row[1])) {
          r.fail(p, "node indices must be positive integers");
          continue;
        }
        c.edges.push_back({static_cast<std::size_t>(row[0]) - 1, static_cast<std::size_t>(row[1]) - 1, row[2],
                           row.size() == 4 ? row[3] : row[2]});
      }
    }
  }

  if (const auto* ctrl = r.table(root, "controller", "", false)) {
    r.check_keys(*ctrl, "controller", {"mode", "leader", "internal_model", "b", "zeta0", "adaptation"});
    const auto mode = r.string(*ctrl, "mode", "controller", true).value_or("none");
    if (const auto m = parse_mode(mode)) c.controller.mode = *m;
    else r.fail("controller.mode", "expected none, proportional, internal_model or leader");
    if (const auto leader = r.integer(*ctrl, "leader", "controller", c.controller.mode == ControlMode::leader)) {
      if (*leader < 1) r.fail("controller.leader", "must be a 1-based node index");
      else c.controller.leader = static_cast<std::size_t>(*leader) - 1;
    }
    if (const auto* im = r.table(*ctrl, "internal_model", "controller", false))
      c.controller.internal_model = parse_exo_spec(r, *im, "controller.internal_model");
    c.controller.b = r.number_rows(*ctrl, "b", "controller").value_or(std::vector<std::vector<double>>{});
    c.controller.zeta0 = r.number_rows(*ctrl, "zeta0", "controller").value_or(std::vector<std::vector<double>>{});
    if (const auto* ad = r.table(*ctrl, "adaptation", "controller", false)) {
      const std::string p = "controller.adaptation";
      r.check_keys(*ad, p, {"alpha", "beta", "alpha_edges", "beta_edges"});
      AdaptationConfig a;
      a.alpha = r.number(*ad, "alpha", p, false).value_or(1.0);
      a.beta = r.number(*ad, "beta", p, false).value_or(a.alpha);
      a.alpha_edges = parse_edge_gains(r, *ad, "alpha_edges", p);
      a.beta_edges = parse_edge_gains(r, *ad, "beta_edges", p);
      c.controller.adaptation = a;
    }
  }

  if (const auto* nodes = root.get("nodes")) {
    const auto* arr = nodes->as_array();
    if (!arr) {
      r.fail("nodes", "expected an array of tables ([[nodes]])");
    } else {
      for (std::size_t k = 0; k < arr->size(); ++k) {
        const std::string p = "nodes[" + std::to_string(k) + "]";
        const auto* t = arr->get(k)->as_table();
        if (!t) {
          r.fail(p, "expected a table");
          continue;
        }
        r.check_keys(*t, p, {"x0", "disturbance"});
        NodeConfig nc;
        nc.x0 = r.numbers(*t, "x0", p, !root.get("dac")).value_or(std::vector<double>{});
        if (const auto* d = r.table(*t, "disturbance", p, false)) nc.disturbance = parse_disturbance(r, *d, p + ".disturbance");
        c.node_list.push_back(std::move(nc));
      }
    }
  } else {
    r.fail("nodes", "missing [[nodes]] entries");
  }

  if (const auto* check = r.table(root, "check", "", false)) {
    r.check_keys(*check, "check",
                 {"metric", "compare", "threshold", "relative_to_input_p2p", "oscillation_reference",
                  "oscillation_ratio"});
    CheckConfig ch;
    ch.metric = r.string(*check, "metric", "check", true).value_or(ch.metric);
    ch.compare = r.string(*check, "compare", "check", false).value_or(ch.compare);
    ch.threshold = r.number(*check, "threshold", "check", ch.metric != "input_exactness").value_or(0.0);
    ch.relative_to_input_p2p = r.boolean(*check, "relative_to_input_p2p", "check").value_or(false);
    ch.oscillation_reference = r.string(*check, "oscillation_reference", "check", false).value_or("");
    ch.oscillation_ratio = r.number(*check, "oscillation_ratio", "check", false).value_or(0.0);
    c.check = ch;
  }

  if (r.errors.empty()) semantic_checks(r, c);
  if (r.errors.empty()) {
    try {
      (void)build_scenario(c);
    } catch (const std::exception& e) {
      r.fail("scenario", e.what());
    }
  }
  if (!r.errors.empty()) throw ConfigError(std::move(r.errors));
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path + ": cannot open file"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Writing

namespace {

toml::array to_array(const std::vector<double>& v) {
  toml::array a;
  for (double x : v) a.push_back(x);
  return a;
}

toml::array to_rows(const std::vector<std::vector<double>>& rows) {
  toml::array a;
  for (const auto& r : rows) a.push_back(to_array(r));
  return a;
}

toml::array gains_to_rows(const std::vector<EdgeGain>& gains) {
  toml::array a;
  for (const auto& g : gains)
    a.push_back(toml::array{static_cast<std::int64_t>(g.i + 1), static_cast<std::int64_t>(g.j + 1), g.value});
  return a;
}

}  // namespace

std::string to_toml(const ScenarioConfig& c) {
  toml::table root;
  root.insert("name", c.name);
  if (!c.description.empty()) root.insert("description", c.description);
  root.insert("t_end", c.t_end);
  root.insert("dt", c.dt);
  root.insert("sample_every", static_cast<std::int64_t>(c.sample_every));
  root.insert("window_fraction", c.window_fraction);
  root.insert("record_states", c.record_states);

  if (c.agent) {
    const auto& a = *c.agent;
    toml::table t;
    t.insert("type", a.type);
    if (a.type == "goodwin") {
      t.insert("b", toml::array{a.goodwin.b1, a.goodwin.b2, a.goodwin.b3});
      t.insert("p", a.goodwin.hill_p);
      if (a.gamma4) t.insert("gamma4", *a.gamma4);
    } else {
      t.insert("num", to_array(a.num));
      t.insert("den", to_array(a.den));
    }
    root.insert("agent", std::move(t));
  }

  {
    toml::table g;
    g.insert("nodes", static_cast<std::int64_t>(c.nodes));
    toml::array edges;
    for (const auto& e : c.edges)
      edges.push_back(toml::array{static_cast<std::int64_t>(e.i + 1), static_cast<std::int64_t>(e.j + 1), e.p, e.n});
    g.insert("edges", std::move(edges));
    root.insert("graph", std::move(g));
  }

  {
    const auto& ctrl = c.controller;
    toml::table t;
    t.insert("mode", to_string(ctrl.mode));
    if (ctrl.mode == ControlMode::leader) t.insert("leader", static_cast<std::int64_t>(ctrl.leader + 1));
    if (ctrl.internal_model) {
      toml::table im;
      im.insert("constant", ctrl.internal_model->has_constant);
      im.insert("omegas", to_array(ctrl.internal_model->frequencies));
      t.insert("internal_model", std::move(im));
    }
    if (!ctrl.b.empty()) t.insert("b", to_rows(ctrl.b));
    if (!ctrl.zeta0.empty()) t.insert("zeta0", to_rows(ctrl.zeta0));
    if (ctrl.adaptation) {
      toml::table ad;
      ad.insert("alpha", ctrl.adaptation->alpha);
      ad.insert("beta", ctrl.adaptation->beta);
      if (!ctrl.adaptation->alpha_edges.empty()) ad.insert("alpha_edges", gains_to_rows(ctrl.adaptation->alpha_edges));
      if (!ctrl.adaptation->beta_edges.empty()) ad.insert("beta_edges", gains_to_rows(ctrl.adaptation->beta_edges));
      t.insert("adaptation", std::move(ad));
    }
    root.insert("controller", std::move(t));
  }

  {
    toml::array nodes;
    for (const auto& n : c.node_list) {
      toml::table t;
      if (!n.x0.empty()) t.insert("x0", to_array(n.x0));
      toml::table d;
      d.insert("constant", n.disturbance.constant);
      toml::array sins;
      for (const auto& s : n.disturbance.sinusoids)
        sins.push_back(toml::table{{"omega", s.omega}, {"amplitude", s.amplitude}, {"phase", s.phase}});
      d.insert("sinusoids", std::move(sins));
      t.insert("disturbance", std::move(d));
      nodes.push_back(std::move(t));
    }
    root.insert("nodes", std::move(nodes));
  }

  if (c.dac) {
    toml::table t;
    t.insert("constant", c.dac->constant);
    t.insert("omegas", to_array(c.dac->omegas));
    if (c.dac->epsilon) t.insert("epsilon", *c.dac->epsilon);
    t.insert("nh_root", c.dac->nh_root);
    root.insert("dac", std::move(t));
  }

  if (c.check) {
    const auto& ch = *c.check;
    toml::table t;
    t.insert("metric", ch.metric);
    t.insert("compare", ch.compare);
    t.insert("threshold", ch.threshold);
    t.insert("relative_to_input_p2p", ch.relative_to_input_p2p);
    if (!ch.oscillation_reference.empty()) {
      t.insert("oscillation_reference", ch.oscillation_reference);
      t.insert("oscillation_ratio", ch.oscillation_ratio);
    }
    root.insert("check", std::move(t));
  }

  std::ostringstream os;
  os << root << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Scenario assembly

WeightedGraph p_graph_of(const ScenarioConfig& c) {
  std::vector<Edge> edges;
  for (const auto& e : c.edges) edges.push_back({e.i, e.j, e.p});
  return WeightedGraph(c.nodes, std::move(edges));
}

WeightedGraph n_graph_of(const ScenarioConfig& c) {
  std::vector<Edge> edges;
  for (const auto& e : c.edges) edges.push_back({e.i, e.j, e.n});
  return WeightedGraph(c.nodes, std::move(edges));
}

namespace {

std::vector<double> expand_gains(const WeightedGraph& g, double uniform, const std::vector<EdgeGain>& overrides) {
  std::vector<double> out(g.edges().size(), uniform);
  for (const auto& o : overrides)
    for (std::size_t k = 0; k < g.edges().size(); ++k) {
      const auto& e = g.edges()[k];
      if (e.i == std::min(o.i, o.j) && e.j == std::max(o.i, o.j)) out[k] = o.value;
    }
  return out;
}

std::vector<Vector> to_vectors(const std::vector<std::vector<double>>& rows) {
  std::vector<Vector> out;
  for (const auto& r : rows) out.push_back(Eigen::Map<const Vector>(r.data(), static_cast<Eigen::Index>(r.size())));
  return out;
}

}  // namespace

Scenario build_scenario(const ScenarioConfig& c) {
  const auto p_graph = p_graph_of(c);
  const auto n_graph = n_graph_of(c);

  if (c.dac) {
    const ExoSpec spec = c.dac->spec();
    const auto d = exo_polynomial(spec);
    const auto n_h = default_nh(static_cast<std::size_t>(d.degree()), c.dac->nh_root);
    const double eps = c.dac->epsilon.value_or(std::min(0.01, 0.5 * spr_epsilon_bound(n_h, d)));
    const auto design = design_h(spec, n_h, eps, p_graph);
    std::vector<Exosystem> inputs;
    for (const auto& node : c.node_list)
      inputs.push_back(Exosystem::from_signal(spec, node.disturbance.constant, node.disturbance.sinusoids));
    Scenario sc = build_dac_network(design, inputs, c.t_end, c.dt);
    sc.name = c.name;
    sc.sample_every = c.sample_every;
    sc.record_states = c.record_states;
    for (std::size_t i = 0; i < sc.nodes.size() && i < c.node_list.size(); ++i)
      if (!c.node_list[i].x0.empty()) sc.nodes[i].x0 = c.node_list[i].x0;
    if (!c.controller.zeta0.empty()) sc.controller.zeta0 = to_vectors(c.controller.zeta0);
    sc.validate();
    return sc;
  }

  if (!c.agent) throw std::invalid_argument("agent: missing table");
  const auto& a = *c.agent;
  const AgentModel agent = a.type == "goodwin" ? AgentModel::goodwin(a.goodwin)
                                               : linear_agent(TransferFunction(Polynomial(a.num), Polynomial(a.den)));

  ExoSpec shared{false, {}};
  for (const auto& node : c.node_list) shared = ExoSpec::merge(shared, node.disturbance.spec());
  const auto& ctrl = c.controller;
  ExoSpec im = ctrl.internal_model.value_or(shared);
  if (!im.has_constant && im.frequencies.empty()) im.has_constant = true;
  shared = ExoSpec::merge(shared, im);

  Scenario sc;
  sc.name = c.name;
  sc.t_end = c.t_end;
  sc.dt = c.dt;
  sc.sample_every = c.sample_every;
  sc.record_states = c.record_states;
  sc.gamma4_override = a.type == "goodwin" ? a.gamma4 : std::nullopt;
  for (const auto& node : c.node_list)
    sc.nodes.push_back(
        {agent, node.x0, Exosystem::from_signal(shared, node.disturbance.constant, node.disturbance.sinusoids)});

  sc.controller.mode = ctrl.mode;
  sc.controller.leader = ctrl.leader;
  sc.controller.p_graph = p_graph;
  sc.controller.n_graph = n_graph;
  sc.controller.internal_model = im;
  sc.controller.b = to_vectors(ctrl.b);
  sc.controller.zeta0 = to_vectors(ctrl.zeta0);
  if (ctrl.adaptation) {
    sc.controller.adaptation = AdaptationGains{
        expand_gains(p_graph, ctrl.adaptation->alpha, ctrl.adaptation->alpha_edges),
        expand_gains(n_graph, ctrl.adaptation->beta, ctrl.adaptation->beta_edges)};
  }
  sc.validate();
  return sc;
}

}  // namespace syncnet
