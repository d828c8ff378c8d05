#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ctx/polytope.hpp"

namespace ctx {

struct CswEvent {
  Context context;
  std::uint32_t outcome;
};

// original = scale * Σ - offset, where Σ sums the event probabilities.
struct CswForm {
  MarginalScenario scenario;
  std::vector<CswEvent> events;
  Rational scale;
  Rational offset;
  Rational nc_bound;  // bound on Σ
  Rational original_bound;

  std::string event_label(std::size_t i) const;  // "+-|X0,X1"
};

CswForm to_csw_form(const BooleInequality& ineq);

struct ExclusivityGraph {
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> edges;  // u < v, sorted

  int size() const { return static_cast<int>(labels.size()); }
  bool has_edge(int u, int v) const;
};

ExclusivityGraph make_graph(std::vector<std::string> labels, std::vector<std::pair<int, int>> edges);
ExclusivityGraph exclusivity_graph(const CswForm& form);
ExclusivityGraph prism_graph(int n);    // Y_n: 2n vertices
ExclusivityGraph mobius_ladder(int n);  // M_{2n}: 2n vertices

struct ThetaResult {
  double value = 0;       // primal objective <J, B>
  double upper = 0;       // certified dual bound
  double gap = 0;
  int newton_steps = 0;
};

ThetaResult lovasz_theta(const ExclusivityGraph& g);

enum class GraphFamily { Prism, Mobius };
double theta_closed_form(GraphFamily family, int n);

struct QuantumMaxResult {
  double value = 0;
  ThetaResult theta;
  bool upper_bound_only = false;  // Bell scenario: ϑ need not be attained with local structure
};

QuantumMaxResult quantum_max(const BooleInequality& ineq);

// Observables split into two parties with every context holding at most one of each.
bool is_bell_scenario(const MarginalScenario& s);

}  // namespace ctx
