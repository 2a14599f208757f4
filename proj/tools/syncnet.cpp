// syncnet command-line front end.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 divergence,
// 3 infeasible estimator design, 4 a reproduced preset missed its metric.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "syncnet/config.hpp"
#include "syncnet/dac.hpp"
#include "syncnet/errors.hpp"
#include "syncnet/lti.hpp"
#include "syncnet/presets.hpp"
#include "syncnet/report.hpp"
#include "syncnet/svg.hpp"

namespace fs = std::filesystem;
using namespace syncnet;

namespace {

enum Exit { kOk = 0, kConfig = 1, kDivergence = 2, kInfeasible = 3, kReproduceFail = 4 };

fs::path output_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SYNCNET_OUT"); env && *env) return env;
  return "out";
}

void write_artifacts(const fs::path& dir, const ScenarioConfig& cfg, const Scenario& sc, const Trace& trace,
                     bool svg, const std::string& extra_summary = {}) {
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "trace.csv");
    write_csv(trace, csv);
    if (!csv) throw std::runtime_error("cannot write " + (dir / "trace.csv").string());
  }
  {
    std::ofstream s(dir / "summary.txt");
    s << run_summary(cfg, sc, trace) << extra_summary;
  }
  if (svg) {
    std::ofstream s(dir / "trace.svg");
    write_svg(trace, s);
  }
}

void print_config_error(const ConfigError& e) {
  std::cerr << "configuration error:\n";
  for (const auto& v : e.violations()) std::cerr << "  " << v << '\n';
}

// Polynomial from highest-power-first coefficients.
Polynomial from_descending(std::vector<double> c) {
  std::reverse(c.begin(), c.end());
  return Polynomial(std::move(c));
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string out;
  double dt = 0.0;
  double t_end = 0.0;
  bool states = false;
  bool svg = false;
};

int cmd_simulate(const SimulateArgs& a, bool dt_set, bool t_end_set) {
  try {
    auto cfg = load_config(a.config);
    std::vector<std::string> bad;
    if (dt_set) {
      if (!(a.dt > 0.0)) bad.push_back("--dt: must be positive");
      cfg.dt = a.dt;
    }
    if (t_end_set) {
      if (!(a.t_end > 0.0)) bad.push_back("--t-end: must be positive");
      cfg.t_end = a.t_end;
    }
    if (!bad.empty()) throw ConfigError(bad);
    cfg.record_states = cfg.record_states || a.states;

    Scenario sc;
    try {
      sc = build_scenario(cfg);
    } catch (const DesignError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError({e.what()});
    }
    const Trace trace = simulate(sc);
    const fs::path dir = output_root(a.out) / cfg.name;
    write_artifacts(dir, cfg, sc, trace, a.svg);
    std::cout << run_summary(cfg, sc, trace);
    std::cout << "artifacts: " << dir.string() << '\n';
    return kOk;
  } catch (const ConfigError& e) {
    print_config_error(e);
    return kConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "diverged at t = " << e.time() << ": " << e.what() << '\n';
    return kDivergence;
  } catch (const DesignError& e) {
    std::cerr << "infeasible design: " << e.what() << '\n';
    return kInfeasible;
  }
}

// ---------------------------------------------------------------------------

struct ReproduceArgs {
  std::vector<std::string> ids;
  std::string out;
  unsigned jobs = 1;
  bool svg = false;
};

int cmd_reproduce(const ReproduceArgs& a) {
  std::vector<std::string> ids;
  const auto known = preset_ids();
  for (const auto& id : a.ids) {
    if (id == "all") {
      ids.insert(ids.end(), known.begin(), known.end());
    } else if (std::find(known.begin(), known.end(), id) != known.end()) {
      ids.push_back(id);
    } else {
      std::cerr << "unknown figure id '" << id << "'; known:";
      for (const auto& k : known) std::cerr << ' ' << k;
      std::cerr << " all\n";
      return kConfig;
    }
  }

  struct Slot {
    std::optional<ReproduceResult> result;
    std::string error;
    int code = kOk;
  };
  std::vector<Slot> slots(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < ids.size();) {
      try {
        slots[k].result = reproduce(ids[k]);
      } catch (const DivergenceError& e) {
        slots[k].error = std::string("diverged: ") + e.what();
        slots[k].code = kDivergence;
      } catch (const std::exception& e) {
        slots[k].error = e.what();
        slots[k].code = kConfig;
      }
    }
  };
  const unsigned n_threads = std::clamp<unsigned>(a.jobs, 1, static_cast<unsigned>(std::max<std::size_t>(1, ids.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kOk;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const auto& slot = slots[k];
    if (!slot.result) {
      std::cout << ids[k] << ": ERROR " << slot.error << '\n';
      code = std::max(code, slot.code);
      continue;
    }
    const auto& r = *slot.result;
    const auto& c = r.check;
    std::ostringstream line;
    char value[64];
    std::snprintf(value, sizeof value, "%.6g %s %.6g", c.value, c.compare.c_str(), c.threshold);
    line << ids[k] << ": " << (c.pass ? "PASS" : "FAIL") << "  " << c.metric << " = " << value;
    if (c.oscillation)
      line << ", mean-output p2p " << format_number(*c.oscillation) << " >= " << format_number(*c.oscillation_threshold);
    char secs[32];
    std::snprintf(secs, sizeof secs, "  (%.1f s)", r.seconds);
    line << secs;
    std::cout << line.str() << '\n';
    if (!c.pass && code == kOk) code = kReproduceFail;

    try {
      const auto sc = build_scenario(r.config);
      std::string extra = "check: " + line.str() + '\n';
      if (!c.detail.empty()) extra += "check detail: " + c.detail + '\n';
      write_artifacts(output_root(a.out) / ids[k], r.config, sc, r.trace, a.svg, extra);
    } catch (const std::exception& e) {
      std::cerr << ids[k] << ": cannot write artifacts: " << e.what() << '\n';
      code = std::max(code, static_cast<int>(kConfig));
    }
  }
  return code;
}

// ---------------------------------------------------------------------------

struct DesignArgs {
  bool constant = false;
  std::vector<double> omegas;
  double epsilon = 0.0;
  double nh_root = 0.4;
};

int cmd_design_dac(const DesignArgs& a, bool epsilon_set) {
  const ExoSpec spec{a.constant, a.omegas};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid signal class: " << e.what() << '\n';
    return kConfig;
  }
  const auto d = exo_polynomial(spec);
  const auto n_h = default_nh(static_cast<std::size_t>(d.degree()), a.nh_root);
  try {
    const double bound = spr_epsilon_bound(n_h, d);
    const double eps = epsilon_set ? a.epsilon : std::min(0.01, 0.5 * bound);
    const auto design = design_h(spec, n_h, eps);
    std::cout << design_report(design, bound);
    const bool ok = check_condition_a(design).pass && check_condition_b(design).pass &&
                    check_condition_c(design).pass;
    if (!ok) std::cerr << "design does not satisfy all conditions\n";
    return ok ? kOk : kInfeasible;
  } catch (const DesignError& e) {
    std::cerr << "infeasible design: " << e.what() << '\n';
    if (e.epsilon_bound() > 0.0) std::cerr << "hint: ε bound ≈ " << format_number(e.epsilon_bound(), 3) << '\n';
    return kInfeasible;
  }
}

// ---------------------------------------------------------------------------

struct GraphArgs {
  std::string file;
  std::vector<double> b;
  double p = 20.0;
  double gamma4 = 0.0;
  bool goodwin = false;
};

int cmd_analyze_graph(const GraphArgs& a, bool agent_given, bool gamma4_set) {
  std::ifstream in(a.file);
  if (!in) {
    std::cerr << a.file << ": cannot open file\n";
    return kConfig;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    const auto graphs = parse_edge_list(ss.str());
    std::optional<GoodwinParams> agent;
    if (agent_given) {
      GoodwinParams gp;
      if (!a.b.empty()) {
        if (a.b.size() != 3) throw ConfigError({"--b: expected three values b1,b2,b3"});
        gp.b1 = a.b[0], gp.b2 = a.b[1], gp.b3 = a.b[2];
      }
      gp.hill_p = a.p;
      try {
        gp.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError({e.what()});
      }
      agent = gp;
    }
    std::cout << graph_report(graphs, agent, gamma4_set ? std::optional<double>(a.gamma4) : std::nullopt);
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << a.file << ": ";
    print_config_error(e);
    return kConfig;
  }
}

// ---------------------------------------------------------------------------

int cmd_check_spr(const std::vector<double>& num, const std::vector<double>& den) {
  try {
    const TransferFunction tf(from_descending(num), from_descending(den));
    const auto r = is_spr(tf);
    std::cout << "h(s) = (" << tf.num().to_string() << ") / (" << tf.den().to_string() << ")\n";
    std::cout << "SPR: " << (r.spr ? "yes" : "no") << '\n';
    std::cout << "reason: " << (r.reason.empty() ? "all conditions hold" : r.reason) << '\n';
    std::cout << "min Re h(jw) = " << format_number(r.min_real_part) << " at w = " << format_number(r.omega_at_min)
              << '\n';
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "check-spr: " << e.what() << '\n';
    return kConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Output synchronization of networked agents and average-consensus estimator design"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a scenario file and write trace.csv and summary.txt");
  simulate_cmd->add_option("config", sim.config, "Scenario file (TOML)")->required();
  simulate_cmd->add_option("-o,--out", sim.out, "Output root (default $SYNCNET_OUT or ./out)");
  auto* dt_opt = simulate_cmd->add_option("--dt", sim.dt, "Override the step size");
  auto* t_end_opt = simulate_cmd->add_option("--t-end", sim.t_end, "Override the horizon");
  simulate_cmd->add_flag("--states", sim.states, "Record full closed-loop states");
  simulate_cmd->add_flag("--svg", sim.svg, "Also write trace.svg");

  ReproduceArgs rep;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Run shipped presets and check their metrics");
  reproduce_cmd->add_option("ids", rep.ids, "fig1 fig2 fig3 fig4 fig6 fig7 fig8 fig9, or all")->required();
  reproduce_cmd->add_option("-o,--out", rep.out, "Output root (default $SYNCNET_OUT or ./out)");
  reproduce_cmd->add_option("-j,--jobs", rep.jobs, "Presets to run concurrently")->check(CLI::PositiveNumber);
  reproduce_cmd->add_flag("--svg", rep.svg, "Also write trace.svg");

  DesignArgs des;
  auto* design_cmd = app.add_subcommand("design-dac", "Design and verify an average-consensus estimator");
  auto* const_opt = design_cmd->add_flag("--constant", des.constant, "Input class contains constants");
  auto* omega_opt = design_cmd->add_option("--omega", des.omegas, "Sinusoid frequencies (rad/s)")->delimiter(',');
  auto* eps_opt = design_cmd->add_option("--epsilon", des.epsilon, "Design parameter (default: automatic)");
  design_cmd->add_option("--nh-root", des.nh_root, "Root of the default numerator (s + r)^(m-1)")
      ->check(CLI::PositiveNumber);

  GraphArgs gr;
  auto* graph_cmd = app.add_subcommand("analyze-graph", "Laplacian spectrum and the synchronization condition");
  graph_cmd->add_option("edges", gr.file, "Edge-list file")->required();
  auto* goodwin_opt = graph_cmd->add_flag("--goodwin", gr.goodwin, "Evaluate the condition for Goodwin agents");
  auto* b_opt = graph_cmd->add_option("--b", gr.b, "Goodwin decay rates b1,b2,b3")->delimiter(',');
  auto* p_opt = graph_cmd->add_option("--p", gr.p, "Hill exponent");
  auto* g4_opt = graph_cmd->add_option("--gamma4", gr.gamma4, "Hill-slope bound (default: computed maximum)");

  std::vector<double> spr_num, spr_den;
  auto* spr_cmd = app.add_subcommand("check-spr", "Strict positive realness of a transfer function");
  spr_cmd->add_option("--num", spr_num, "Numerator, highest power first")->delimiter(',')->required();
  spr_cmd->add_option("--den", spr_den, "Denominator, highest power first")->delimiter(',')->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(sim, dt_opt->count() > 0, t_end_opt->count() > 0);
    if (*reproduce_cmd) return cmd_reproduce(rep);
    if (*design_cmd) {
      if (const_opt->count() == 0 && omega_opt->count() == 0) {
        std::cerr << "design-dac: give --constant and/or --omega\n" << design_cmd->help();
        return kConfig;
      }
      return cmd_design_dac(des, eps_opt->count() > 0);
    }
    if (*graph_cmd) {
      const bool agent = goodwin_opt->count() + b_opt->count() + p_opt->count() + g4_opt->count() > 0;
      return cmd_analyze_graph(gr, agent, g4_opt->count() > 0);
    }
    if (*spr_cmd) return cmd_check_spr(spr_num, spr_den);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kConfig;
}
