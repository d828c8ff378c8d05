#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ctx/error.hpp"
#include "ctx/rational.hpp"

namespace ctx {

constexpr int kMaxObservables = 20;
constexpr int kMaxContextSize = 8;
constexpr int kMaxHadamardOrder = 20;

// Sorted observable indices. Outcome tuples over a context are integers whose
// most significant bit belongs to the first observable; bit 0 is +1, bit 1 is -1.
using Context = std::vector<int>;

class MarginalScenario {
 public:
  MarginalScenario() = default;

  const std::vector<std::string>& observables() const { return names_; }
  const std::vector<Context>& contexts() const { return contexts_; }
  int num_observables() const { return static_cast<int>(names_.size()); }
  int num_contexts() const { return static_cast<int>(contexts_.size()); }

  int observable_index(const std::string& name) const;  // -1 if absent
  int context_index(const Context& c) const;            // -1 if absent
  bool is_maximal(int context_index) const { return maximal_[context_index]; }
  // Index of some maximal context containing context i.
  int covering_maximal(int context_index) const { return cover_[context_index]; }

  std::string key(const Context& c) const;  // "X0,X1"
  std::string key(int context_index) const { return key(contexts_[context_index]); }
  // Accepts names in any order; throws on unknown names or non-contexts.
  Context parse_key(const std::string& key) const;
  std::vector<std::vector<std::string>> context_names() const;

  bool operator==(const MarginalScenario& o) const {
    return names_ == o.names_ && contexts_ == o.contexts_;
  }

 private:
  friend MarginalScenario validate_scenario(const std::vector<std::vector<std::string>>&,
                                            const std::vector<std::string>&);
  std::vector<std::string> names_;
  std::vector<Context> contexts_;
  std::map<Context, int> index_;
  std::vector<bool> maximal_;
  std::vector<int> cover_;
};

// Downward closure with singletons, canonical ordering. `declared`, when
// nonempty, fixes the observable list and every context must draw from it.
MarginalScenario validate_scenario(const std::vector<std::vector<std::string>>& contexts,
                                   const std::vector<std::string>& declared = {});

bool context_less(const Context& a, const Context& b);

// Positions of `sub` inside `sup` (both sorted); throws if not a subset.
std::vector<int> positions_in(const Context& sub, const Context& sup);
// Maps an outcome of `sup` to the outcome of `sub` given positions_in(sub, sup).
std::uint32_t restrict_outcome(std::uint32_t outcome, int sup_size, const std::vector<int>& pos);
std::string outcome_string(std::uint32_t outcome, int size);  // "+-"
std::uint32_t parse_outcome(const std::string& s);

class HadamardMatrix {
 public:
  explicit HadamardMatrix(int m);
  int order() const { return m_; }
  std::size_t dimension() const { return std::size_t{1} << m_; }
  int entry(std::size_t i, std::size_t j) const { return __builtin_popcountll(i & j) % 2 ? -1 : 1; }
  std::vector<std::vector<int>> materialize() const;  // m <= 12

  // In-place v <- H v via the fast Walsh-Hadamard transform.
  template <class T>
  void apply(std::vector<T>& v) const {
    if (v.size() != dimension()) throw DataError("Hadamard: vector size mismatch");
    for (std::size_t h = 1; h < v.size(); h <<= 1)
      for (std::size_t i = 0; i < v.size(); i += 2 * h)
        for (std::size_t j = i; j < i + h; ++j) {
          T a = v[j];
          T b = v[j + h];
          v[j] = a + b;
          v[j + h] = a - b;
        }
  }

 private:
  int m_;
};

HadamardMatrix hadamard_matrix(int m);

template <class T>
using Table = std::vector<T>;

template <class T>
struct TableEntry {
  Context context;
  Table<T> table;
};

struct DisturbanceViolation {
  Context first;
  Context second;
  Context shared;
  std::uint32_t outcome;  // on `shared`
  double first_value;
  double second_value;
};

struct DisturbanceReport {
  bool pass = true;
  std::vector<DisturbanceViolation> violations;
};

template <class T>
Table<T> marginalize(const Table<T>& t, const Context& from, const Context& to) {
  auto pos = positions_in(to, from);
  Table<T> out(std::size_t{1} << to.size(), T(0));
  const int m = static_cast<int>(from.size());
  for (std::uint32_t o = 0; o < t.size(); ++o) out[restrict_outcome(o, m, pos)] += t[o];
  return out;
}

template <class T>
DisturbanceReport check_no_disturbance(const std::vector<TableEntry<T>>& tables) {
  DisturbanceReport rep;
  for (std::size_t i = 0; i < tables.size(); ++i)
    for (std::size_t j = i + 1; j < tables.size(); ++j) {
      Context shared;
      for (int x : tables[i].context)
        for (int y : tables[j].context)
          if (x == y) shared.push_back(x);
      if (shared.empty()) continue;
      auto a = marginalize(tables[i].table, tables[i].context, shared);
      auto b = marginalize(tables[j].table, tables[j].context, shared);
      for (std::uint32_t o = 0; o < a.size(); ++o)
        if (!NumTraits<T>::equal(a[o], b[o])) {
          rep.pass = false;
          rep.violations.push_back({tables[i].context, tables[j].context, shared, o,
                                    NumTraits<T>::to_double(a[o]), NumTraits<T>::to_double(b[o])});
        }
    }
  return rep;
}

template <class T>
class BasicMarginalModel {
 public:
  BasicMarginalModel() = default;
  // Every maximal context needs a table; missing sub-context tables are derived.
  BasicMarginalModel(MarginalScenario s, const std::map<Context, Table<T>>& given);

  const MarginalScenario& scenario() const { return s_; }
  const Table<T>& table(int context_index) const { return tables_[context_index]; }
  const std::vector<Table<T>>& tables() const { return tables_; }

 private:
  MarginalScenario s_;
  std::vector<Table<T>> tables_;
};

using ExactModel = BasicMarginalModel<Rational>;
using FloatModel = BasicMarginalModel<double>;
using AnyModel = std::variant<ExactModel, FloatModel>;

template <class T>
struct BasicExpectationVector {
  MarginalScenario scenario;
  std::vector<T> entries;  // one per context, scenario order
};

using ExactExpectations = BasicExpectationVector<Rational>;
using FloatExpectations = BasicExpectationVector<double>;

template <class T>
BasicExpectationVector<T> probs_to_expectations(const BasicMarginalModel<T>& model);

template <class T>
BasicMarginalModel<T> expectations_to_probs(const BasicExpectationVector<T>& vec);

ExactExpectations rationalize(const FloatExpectations& v);
FloatExpectations to_float(const ExactExpectations& v);
FloatModel to_float(const ExactModel& m);

}  // namespace ctx
