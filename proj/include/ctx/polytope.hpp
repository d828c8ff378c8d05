#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctx/lp.hpp"
#include "ctx/rational.hpp"
#include "ctx/scenario.hpp"

namespace ctx {

using RVector = std::vector<Rational>;

// Global ±1 assignment as a bit mask; observable i is bit (k-1-i), 1 means -1.
using GlobalAssignment = std::uint32_t;

struct PolytopeV {
  int dimension = 0;
  std::vector<RVector> vertices;
};

// a·x <= b.
struct Halfspace {
  RVector a;
  Rational b;
  bool operator==(const Halfspace& o) const { return a == o.a && b == o.b; }
  bool operator<(const Halfspace& o) const;
};

// Positive rescaling so that the coefficients are coprime integers.
Halfspace normalize(const Halfspace& h);

struct BooleInequality {
  MarginalScenario scenario;
  Halfspace h;  // coordinates follow scenario.contexts()
  Rational evaluate(const RVector& expectations) const;
};

BooleInequality make_inequality(const MarginalScenario& s, const Halfspace& h);

enum class FacetClass { Positivity, Boole };

struct ClassifiedFacet {
  Halfspace h;
  FacetClass cls;
};

std::string to_string(FacetClass c);

// Expectation vector of a deterministic assignment.
RVector assignment_point(const MarginalScenario& s, GlobalAssignment a);
int assignment_value(const MarginalScenario& s, GlobalAssignment a, int observable);  // ±1

PolytopeV nc_vertices(const MarginalScenario& s);

// 2^m p(o) >= 0 for every context (or only maximal ones) and outcome o.
std::vector<Halfspace> positivity_inequalities(const MarginalScenario& s, bool maximal_only);

struct MixtureTerm {
  GlobalAssignment assignment;
  Rational weight;
};

struct ContextualityVerdict {
  bool contextual = false;
  std::vector<MixtureTerm> witness;       // noncontextual case
  std::optional<BooleInequality> certificate;  // contextual case
  Rational violation;                     // a·E - b
  bool certificate_is_facet = false;
};

ContextualityVerdict decide_contextuality(const ExactExpectations& e);
ContextualityVerdict decide_contextuality(const ExactModel& m);
// Floating entries are read as exact binary fractions.
ContextualityVerdict decide_contextuality(const FloatModel& m);

// Complete irredundant H-representation of a full-dimensional polytope.
std::vector<Halfspace> facet_enumeration(const PolytopeV& p);
std::vector<ClassifiedFacet> classify_facets(const MarginalScenario& s, const std::vector<Halfspace>& facets);

// Vertices of a bounded polyhedron {x : a_i·x <= b_i}.
PolytopeV vertex_enumeration(const std::vector<Halfspace>& h, int dimension);

// Affine dimension of the points of p lying on a·x = b.
int tight_affine_rank(const PolytopeV& p, const Halfspace& h);

// Extreme rays of the pointed cone {x : R x >= 0}, as coprime integer vectors.
std::vector<std::vector<Integer>> cone_extreme_rays(const std::vector<std::vector<Integer>>& rows);

}  // namespace ctx
