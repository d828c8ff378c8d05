#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctx/datasets.hpp"
#include "ctx/polytope.hpp"

namespace ctx {

struct OrthogonalityStructure {
  std::vector<std::string> vertices;
  std::vector<std::pair<int, int>> edges;  // u < v, sorted
  std::vector<std::vector<int>> bases;     // declared complete bases

  int index(const std::string& label) const;  // throws on unknown labels
};

// Validates names, edges and that every basis is a clique; at most 64 vertices.
OrthogonalityStructure make_structure(const std::vector<std::string>& vertices,
                                      const std::vector<std::pair<std::string, std::string>>& edges,
                                      const std::vector<std::vector<std::string>>& bases);

// Orthogonal relations become edges, complete-basis relations become bases.
OrthogonalityStructure structure_from_dataset(const ProjectorDataset& d);

using KsColoring = std::vector<std::uint8_t>;  // indexed like vertices

// Rule 1: no edge with both ends 1. Rule 2: each basis has exactly one 1.
bool satisfies_ks_rules(const OrthogonalityStructure& s, const KsColoring& c);

struct ColoringResult {
  std::vector<KsColoring> colorings;
  bool exact = true;  // false when the cap cut the search short
};

ColoringResult enumerate_colorings(const OrthogonalityStructure& s, std::size_t cap = 1u << 20);

struct ParityCertificate {
  int bases = 0;                        // odd
  std::vector<int> multiplicity;        // bases containing each vertex, all even
  std::string statement;
};

std::optional<ParityCertificate> parity_certificate(const OrthogonalityStructure& s);

struct PropagationTrace {
  std::vector<std::string> steps;
  bool conflict = false;
  std::string conflict_reason;
  std::vector<int> values;  // -1 unassigned
};

// Unit propagation of the two rules from a partial assignment.
PropagationTrace propagate(const OrthogonalityStructure& s, const std::map<std::string, int>& fixed);

struct YuOhReport {
  std::size_t colorings = 0;
  bool colorings_exact = true;
  int max_h_sum = 0;                 // over all colorings
  bool all_within_one = false;       // Σ v(h_i) <= 1 for every coloring
  double quantum_h_sum = 0;          // c in Σ h_i = c·1
  bool quantum_verified = false;
  bool contradiction = false;        // max_h_sum < quantum_h_sum
  PropagationTrace h0_h1_trace;
};

YuOhReport yu_oh_check();

struct PeresMerminReport {
  int assignments = 0;
  int satisfying = 0;
  int relaxed_satisfying = 0;  // last product constraint flipped to +1
  Rational nc_maximum;         // of I_PM
  bool quantum_verified = false;
};

PeresMerminReport peres_mermin_check();

struct NcMaximum {
  Rational value;
  GlobalAssignment argmax = 0;
  std::uint64_t assignments = 0;
};

// max of a·E over all 2^k deterministic assignments.
NcMaximum nc_maximum(const BooleInequality& ineq);

}  // namespace ctx
