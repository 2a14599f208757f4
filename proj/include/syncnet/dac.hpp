#pragma once

#include <span>
#include <string>
#include <vector>

#include "syncnet/exosystem.hpp"
#include "syncnet/lti.hpp"
#include "syncnet/netgraph.hpp"
#include "syncnet/sim.hpp"

namespace syncnet {

/// Dynamic average consensus estimator: identical agents
/// h(s) = n_h(s) / (eps d(s) + n_h(s)) and internal models (A, B) built from
/// the input class, on one graph used for both L_p and L_I.
struct DacDesign {
  ExoSpec spec;
  Polynomial d;
  Polynomial n_h;
  double epsilon = 0.0;
  TransferFunction h{Polynomial({1.0}), Polynomial({1.0})};
  Matrix a;
  Vector b;
  WeightedGraph graph;
  SprReport spr;
};

/// d(s) = s^{[constant]} * prod_k (s^2 + w_k^2).
Polynomial exo_polynomial(const ExoSpec& spec);

/// (s + root)^{m-1}; the constant 1 when m = 1.
Polynomial default_nh(std::size_t m, double root = 0.4);

/// Assembles and certifies h(s). Throws DesignError when n_h has the wrong
/// degree, is not monic, or is not Hurwitz, or when h is not SPR at epsilon
/// (the error then carries the epsilon bound as a hint).
DacDesign design_h(const ExoSpec& spec, const Polynomial& n_h, double epsilon,
                   const WeightedGraph& graph = WeightedGraph::cycle(4));

/// design_h with default n_h and epsilon = min(0.01, 0.5 * bound).
DacDesign auto_design(const ExoSpec& spec, double nh_root = 0.4,
                      const WeightedGraph& graph = WeightedGraph::cycle(4));

struct ConditionA {
  bool pass = false;
  Polynomial quotient;
  Polynomial remainder;
};

/// d(s) divides n_h(s) - d_h(s).
ConditionA check_condition_a(const DacDesign& design);

struct ConditionB {
  bool pass = false;
  Polynomial char_poly;  // det(sI - A)
};

/// det(sI - A) equals d(s) coefficientwise to 1e-9.
ConditionB check_condition_b(const DacDesign& design);

struct ConditionCBranch {
  double lambda = 0.0;
  Polynomial closed_loop;
  Stability stability = Stability::unstable;
};

struct ConditionC {
  bool pass = false;
  TransferFunction g{Polynomial({1.0}), Polynomial({1.0})};
  std::vector<ConditionCBranch> branches;
};

/// h / (1 + h (g lambda^2 + lambda)) stable for each distinct nonzero
/// eigenvalue lambda of L_I; tested on d_h d_g + n_h (n_g lambda^2 + d_g lambda).
ConditionC check_condition_c(const DacDesign& design);

/// Estimator network tracking (1/N) 1^T phi(t). Requires all three conditions.
Scenario build_dac_network(const DacDesign& design, std::span<const Exosystem> inputs, double t_end = 200.0,
                           double dt = 1e-3);

/// Plain-text design report with a trailing machine-readable JSON section.
std::string design_report(const DacDesign& design, double epsilon_bound);

}  // namespace syncnet
