#include "syncnet/dac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "syncnet/errors.hpp"

namespace syncnet {

Polynomial exo_polynomial(const ExoSpec& spec) {
  spec.validate();
  Polynomial d = spec.has_constant ? Polynomial({0.0, 1.0}) : Polynomial({1.0});
  for (double w : spec.frequencies) d = d * Polynomial({w * w, 0.0, 1.0});
  return d;
}

Polynomial default_nh(std::size_t m, double root) {
  if (m == 0) throw std::invalid_argument("default_nh: order must be positive");
  return Polynomial({root, 1.0}).pow(static_cast<unsigned>(m - 1));
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

DacDesign design_h(const ExoSpec& spec, const Polynomial& n_h, double epsilon, const WeightedGraph& graph) {
  const Polynomial d = exo_polynomial(spec);
  const int m = d.degree();
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DesignError("epsilon must be positive");
  if (n_h.degree() != m - 1)
    throw DesignError("n_h must have degree " + std::to_string(m - 1) + ", got " + std::to_string(n_h.degree()));
  if (m == 1) {
    if (!(n_h[0] > 0.0)) throw DesignError("n_h must be a positive constant when d(s) = s");
  } else {
    if (!n_h.is_monic()) throw DesignError("n_h must be monic");
    if (!routh_stable(n_h)) throw DesignError("n_h must be Hurwitz");
  }

  DacDesign design;
  design.spec = spec;
  design.d = d;
  design.n_h = n_h;
  design.epsilon = epsilon;
  design.h = TransferFunction(n_h, epsilon * d + n_h);
  const auto pair = canonical_exosystem(spec);
  design.a = pair.a;
  design.b = pair.c.transpose();
  design.graph = graph;
  design.spr = is_spr(design.h);
  if (!design.spr.spr) {
    double bound = 0.0;
    try {
      bound = spr_epsilon_bound(n_h, d);
    } catch (const DesignError&) {
    }
    throw DesignError("h(s) is not SPR at epsilon = " + fmt(epsilon) + " (" + design.spr.reason +
                          "); epsilon bound ~ " + fmt(bound),
                      bound);
  }
  return design;
}

DacDesign auto_design(const ExoSpec& spec, double nh_root, const WeightedGraph& graph) {
  const Polynomial d = exo_polynomial(spec);
  const Polynomial n_h = default_nh(static_cast<std::size_t>(d.degree()), nh_root);
  const double bound = spr_epsilon_bound(n_h, d);
  return design_h(spec, n_h, std::min(0.01, 0.5 * bound), graph);
}

ConditionA check_condition_a(const DacDesign& design) {
  const auto dm = poly_divmod(design.n_h - design.h.den(), design.d);
  const double scale = std::max(design.n_h.max_abs(), design.h.den().max_abs());
  return {dm.remainder.max_abs() <= 1e-9 * scale, dm.quotient, dm.remainder};
}

ConditionB check_condition_b(const DacDesign& design) {
  ConditionB out;
  out.char_poly = characteristic_polynomial(design.a);
  const auto diff = out.char_poly - design.d;
  out.pass = out.char_poly.degree() == design.d.degree() && diff.max_abs() <= 1e-9;
  return out;
}

ConditionC check_condition_c(const DacDesign& design) {
  ConditionC out;
  out.g = siso_transfer(design.a, design.b, design.b.transpose());
  const auto l = build_laplacian(design.graph);
  if (!is_connected(l)) throw GraphError("condition c requires a connected graph");
  const Vector eig = symmetric_eigenvalues(l.matrix());

  std::vector<double> distinct;
  for (Eigen::Index k = 1; k < eig.size(); ++k)
    if (distinct.empty() || eig(k) - distinct.back() > 1e-9 * std::max(1.0, eig(k))) distinct.push_back(eig(k));

  const auto& n_h = design.h.num();
  const auto& d_h = design.h.den();
  const auto& n_g = out.g.num();
  const auto& d_g = out.g.den();
  out.pass = true;
  for (double lambda : distinct) {
    ConditionCBranch br;
    br.lambda = lambda;
    br.closed_loop = d_h * d_g + n_h * ((lambda * lambda) * n_g + lambda * d_g);
    br.stability = routh_classify(br.closed_loop);
    out.pass = out.pass && br.stability == Stability::stable;
    out.branches.push_back(std::move(br));
  }
  return out;
}

Scenario build_dac_network(const DacDesign& design, std::span<const Exosystem> inputs, double t_end, double dt) {
  const std::size_t n = design.graph.size();
  if (inputs.size() != n) throw std::invalid_argument("build_dac_network: one input per node required");
  for (const auto& in : inputs)
    if (!(in.spec() == design.spec)) throw std::invalid_argument("build_dac_network: input class differs from design");
  if (!check_condition_a(design).pass) throw DesignError("condition a fails");
  if (!check_condition_b(design).pass) throw DesignError("condition b fails");
  if (!check_condition_c(design).pass) throw DesignError("condition c fails");

  Scenario sc;
  sc.name = "dac";
  const auto agent = linear_agent(design.h);
  for (const auto& in : inputs) sc.nodes.push_back({agent, std::vector<double>(agent.state_dim(), 0.0), in});
  sc.controller.mode = ControlMode::internal_model;
  sc.controller.p_graph = design.graph;
  sc.controller.n_graph = design.graph;
  sc.controller.internal_model = design.spec;
  sc.controller.b.assign(n, design.b);
  sc.t_end = t_end;
  sc.dt = dt;
  sc.track_average = true;
  return sc;
}

std::string design_report(const DacDesign& design, double epsilon_bound) {
  const auto a = check_condition_a(design);
  const auto b = check_condition_b(design);
  const auto c = check_condition_c(design);
  const Vector eig = symmetric_eigenvalues(build_laplacian(design.graph).matrix());

  std::ostringstream os;
  os.precision(10);
  os << "DAC estimator design\n";
  os << "  d(s)      = " << design.d.to_string() << "  (order m = " << design.d.degree() << ")\n";
  os << "  n_h(s)    = " << design.n_h.to_string() << "\n";
  os << "  epsilon   = " << design.epsilon << "\n";
  os << "  d_h(s)    = " << design.h.den().to_string() << "\n";
  os << "  SPR       = " << (design.spr.spr ? "yes" : "no") << " (min Re h(jw) = " << design.spr.min_real_part
     << " at w = " << design.spr.omega_at_min << ")\n";
  os << "  eps bound ~ " << epsilon_bound << "\n";
  os << "  condition a (d | n_h - d_h): " << (a.pass ? "PASS" : "FAIL") << ", quotient " << a.quotient.to_string()
     << "\n";
  os << "  condition b (d_g = d):       " << (b.pass ? "PASS" : "FAIL") << ", det(sI - A) = " << b.char_poly.to_string()
     << "\n";
  os << "  condition c (closed loops):  " << (c.pass ? "PASS" : "FAIL") << "\n";
  for (const auto& br : c.branches)
    os << "    lambda = " << br.lambda << ": " << to_string(br.stability) << "\n";
  os << "  L_I spectrum:";
  for (Eigen::Index k = 0; k < eig.size(); ++k) os << ' ' << (std::abs(eig(k)) < 1e-12 ? 0.0 : eig(k));
  os << "\n";

  nlohmann::json j;
  j["d"] = design.d.coefficients();
  j["n_h"] = design.n_h.coefficients();
  j["epsilon"] = design.epsilon;
  j["spr"] = design.spr.spr;
  j["epsilon_bound"] = std::isfinite(epsilon_bound) ? nlohmann::json(epsilon_bound) : nlohmann::json("inf");
  j["condition_a"] = a.pass;
  j["condition_b"] = b.pass;
  j["condition_c"] = c.pass;
  std::vector<double> spectrum(eig.data(), eig.data() + eig.size());
  j["spectrum"] = spectrum;
  os << "--- machine-readable ---\n" << j.dump() << "\n";
  return os.str();
}

}  // namespace syncnet
