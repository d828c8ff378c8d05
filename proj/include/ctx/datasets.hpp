#pragma once
#include <string>
#include <vector>

#include "ctx/polytope.hpp"
#include "ctx/quantum.hpp"

namespace ctx {

enum class RelationType {
  Orthogonal,          // P_a P_b = 0
  CompleteBasis,       // Σ P = 1
  WeightedSum,         // Σ w_i P_i = scalar · 1
  BasisMultiplicity,   // every label lies in exactly `scalar` complete bases
  Annihilates,         // <ket| P |ket> = 0
  ProductEquals,       // ordered product = scalar · 1
  Commuting,           // pairwise commuting
  ExactOrthogonality,  // orthogonal pairs are exactly the declared ones
};

struct Relation {
  RelationType type;
  std::vector<std::string> labels;
  std::vector<double> weights;
  double scalar = 0;
  CVector ket;
  std::string description;
};

enum class EntryKind { Projector, Dichotomic };

struct ProjectorDataset {
  std::string name;
  EntryKind kind = EntryKind::Projector;
  std::vector<std::string> labels;
  std::vector<CMatrix> ops;
  std::vector<Relation> relations;

  const CMatrix& op(const std::string& label) const;
};

struct RelationCheck {
  std::string description;
  bool pass = false;
  double residual = 0;
};

struct DatasetReport {
  std::string name;
  bool pass = true;
  std::vector<RelationCheck> checks;
};

DatasetReport verify_projector_dataset(const ProjectorDataset& set, double tol = 1e-10);

ProjectorDataset spekkens6();
ProjectorDataset yuoh13();
ProjectorDataset peres_mermin9();
ProjectorDataset ceg18();
ProjectorDataset pbr4();

std::vector<std::string> dataset_names();  // spekkens6, yuoh13, peresmermin, ceg18, pbr
ProjectorDataset dataset_by_name(const std::string& name);

// A state-independent inequality with the realization built from a dataset.
struct StateIndependentCase {
  std::string name;
  BooleInequality inequality;
  Realization realization;
  double expected_operator_multiple;  // Î = c · 1
};

StateIndependentCase peres_mermin_case();
StateIndependentCase ceg18_case();
StateIndependentCase yuoh_case();

}  // namespace ctx
