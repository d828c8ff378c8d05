#include "ctx/scenario.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ctx {

bool context_less(const Context& a, const Context& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

int MarginalScenario::observable_index(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return -1;
  return static_cast<int>(it - names_.begin());
}

int MarginalScenario::context_index(const Context& c) const {
  auto it = index_.find(c);
  return it == index_.end() ? -1 : it->second;
}

std::string MarginalScenario::key(const Context& c) const {
  std::string k;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) k += ',';
    k += names_.at(c[i]);
  }
  return k;
}

Context MarginalScenario::parse_key(const std::string& key) const {
  Context c;
  std::stringstream ss(key);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    int i = observable_index(item);
    if (i < 0) throw DataError("unknown observable '" + item + "' in context key '" + key + "'");
    c.push_back(i);
  }
  std::sort(c.begin(), c.end());
  if (std::adjacent_find(c.begin(), c.end()) != c.end())
    throw DataError("repeated observable in context key '" + key + "'");
  if (context_index(c) < 0) throw DataError("'" + key + "' is not a context of the scenario");
  return c;
}

std::vector<std::vector<std::string>> MarginalScenario::context_names() const {
  std::vector<std::vector<std::string>> out;
  for (const auto& c : contexts_) {
    std::vector<std::string> v;
    for (int i : c) v.push_back(names_[i]);
    out.push_back(v);
  }
  return out;
}

namespace {

void check_name(const std::string& n) {
  if (n.empty()) throw DataError("empty observable name");
  for (char ch : n)
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch)) || ch == '"')
      throw DataError("malformed observable name '" + n + "'");
}

}  // namespace

MarginalScenario validate_scenario(const std::vector<std::vector<std::string>>& contexts,
                                   const std::vector<std::string>& declared) {
  if (contexts.empty()) throw DataError("empty context list");
  std::set<std::string> names;
  if (!declared.empty()) {
    for (const auto& n : declared) {
      check_name(n);
      if (!names.insert(n).second) throw DataError("duplicate observable name '" + n + "'");
    }
  }
  for (const auto& c : contexts) {
    if (c.empty()) throw DataError("empty context");
    std::set<std::string> seen;
    for (const auto& n : c) {
      check_name(n);
      if (!seen.insert(n).second) throw DataError("duplicate observable name '" + n + "' in a context");
      if (!declared.empty() && !names.count(n))
        throw DataError("context references undeclared observable '" + n + "'");
      names.insert(n);
    }
    if (c.size() > static_cast<std::size_t>(kMaxContextSize))
      throw DataError("context size exceeds cap of " + std::to_string(kMaxContextSize));
  }
  if (names.size() > static_cast<std::size_t>(kMaxObservables))
    throw DataError("scenario exceeds cap of " + std::to_string(kMaxObservables) + " observables");

  MarginalScenario s;
  s.names_.assign(names.begin(), names.end());
  std::set<Context> closure;
  for (std::size_t i = 0; i < s.names_.size(); ++i) closure.insert(Context{static_cast<int>(i)});
  for (const auto& c : contexts) {
    Context idx;
    for (const auto& n : c) idx.push_back(s.observable_index(n));
    std::sort(idx.begin(), idx.end());
    const unsigned m = static_cast<unsigned>(idx.size());
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      Context sub;
      for (unsigned b = 0; b < m; ++b)
        if (mask & (1u << b)) sub.push_back(idx[b]);
      closure.insert(sub);
    }
  }
  s.contexts_.assign(closure.begin(), closure.end());
  std::sort(s.contexts_.begin(), s.contexts_.end(), context_less);
  for (std::size_t i = 0; i < s.contexts_.size(); ++i) s.index_[s.contexts_[i]] = static_cast<int>(i);

  const int nc = s.num_contexts();
  s.maximal_.assign(nc, true);
  s.cover_.assign(nc, -1);
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j) {
      if (i == j || s.contexts_[j].size() <= s.contexts_[i].size()) continue;
      if (std::includes(s.contexts_[j].begin(), s.contexts_[j].end(), s.contexts_[i].begin(),
                        s.contexts_[i].end())) {
        s.maximal_[i] = false;
        break;
      }
    }
  for (int i = 0; i < nc; ++i) {
    for (int j = nc - 1; j >= 0; --j) {
      if (!s.maximal_[j]) continue;
      if (std::includes(s.contexts_[j].begin(), s.contexts_[j].end(), s.contexts_[i].begin(),
                        s.contexts_[i].end())) {
        s.cover_[i] = j;
        break;
      }
    }
  }
  return s;
}

std::vector<int> positions_in(const Context& sub, const Context& sup) {
  std::vector<int> pos;
  for (int x : sub) {
    auto it = std::lower_bound(sup.begin(), sup.end(), x);
    if (it == sup.end() || *it != x) throw DataError("context is not a subset");
    pos.push_back(static_cast<int>(it - sup.begin()));
  }
  return pos;
}

std::uint32_t restrict_outcome(std::uint32_t outcome, int sup_size, const std::vector<int>& pos) {
  std::uint32_t r = 0;
  for (int p : pos) r = (r << 1) | ((outcome >> (sup_size - 1 - p)) & 1u);
  return r;
}

std::string outcome_string(std::uint32_t outcome, int size) {
  std::string s;
  for (int i = size - 1; i >= 0; --i) s += (outcome >> i) & 1u ? '-' : '+';
  return s;
}

std::uint32_t parse_outcome(const std::string& s) {
  std::uint32_t o = 0;
  for (char c : s) {
    if (c != '+' && c != '-') throw DataError("malformed outcome string '" + s + "'");
    o = (o << 1) | (c == '-' ? 1u : 0u);
  }
  return o;
}

HadamardMatrix::HadamardMatrix(int m) : m_(m) {
  if (m < 1) throw DataError("Hadamard order must be at least 1");
  if (m > kMaxHadamardOrder) throw DataError("Hadamard order exceeds cap of 20");
}

std::vector<std::vector<int>> HadamardMatrix::materialize() const {
  if (m_ > 12) throw DataError("refusing to materialize a Hadamard matrix beyond order 12");
  const std::size_t d = dimension();
  std::vector<std::vector<int>> h(d, std::vector<int>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) h[i][j] = entry(i, j);
  return h;
}

HadamardMatrix hadamard_matrix(int m) { return HadamardMatrix(m); }

template <class T>
BasicMarginalModel<T>::BasicMarginalModel(MarginalScenario s, const std::map<Context, Table<T>>& given)
    : s_(std::move(s)) {
  using N = NumTraits<T>;
  const int nc = s_.num_contexts();
  std::vector<TableEntry<T>> provided;
  for (const auto& [c, t] : given) {
    if (s_.context_index(c) < 0) throw DataError("table given for a non-context");
    if (t.size() != (std::size_t{1} << c.size()))
      throw DataError("table for " + s_.key(c) + " has wrong length");
    T sum(0);
    for (std::uint32_t o = 0; o < t.size(); ++o) {
      if (N::is_negative(t[o]))
        throw DataError("negative probability in " + s_.key(c) + " at " +
                        outcome_string(o, static_cast<int>(c.size())));
      sum += t[o];
    }
    if (!N::equal(sum, T(1))) throw DataError("table for " + s_.key(c) + " does not sum to 1");
    Table<T> clamped = t;
    for (auto& x : clamped) x = N::clamp(x);
    provided.push_back({c, clamped});
  }
  auto rep = check_no_disturbance(provided);
  if (!rep.pass) {
    const auto& v = rep.violations.front();
    throw DataError("no-disturbance violated: marginal on " + s_.key(v.shared) + " differs between " +
                    s_.key(v.first) + " and " + s_.key(v.second));
  }
  tables_.resize(nc);
  std::vector<bool> have(nc, false);
  for (const auto& e : provided) {
    int i = s_.context_index(e.context);
    tables_[i] = e.table;
    have[i] = true;
  }
  for (int i = 0; i < nc; ++i) {
    if (s_.is_maximal(i) && !have[i]) throw DataError("missing table for maximal context " + s_.key(i));
  }
  for (int i = 0; i < nc; ++i) {
    if (have[i]) continue;
    int m = s_.covering_maximal(i);
    tables_[i] = marginalize(tables_[m], s_.contexts()[m], s_.contexts()[i]);
  }
}

template <class T>
BasicExpectationVector<T> probs_to_expectations(const BasicMarginalModel<T>& model) {
  const auto& s = model.scenario();
  BasicExpectationVector<T> ev{s, std::vector<T>(s.num_contexts(), T(0))};
  std::vector<std::vector<T>> transformed(s.num_contexts());
  for (int i = 0; i < s.num_contexts(); ++i) {
    int m = s.covering_maximal(i);
    if (transformed[m].empty()) {
      transformed[m] = model.table(m);
      hadamard_matrix(static_cast<int>(s.contexts()[m].size())).apply(transformed[m]);
    }
    // Index into H p is the subset mask of context i inside context m.
    const Context& sup = s.contexts()[m];
    auto pos = positions_in(s.contexts()[i], sup);
    std::uint32_t k = 0;
    for (int p : pos) k |= 1u << (sup.size() - 1 - p);
    ev.entries[i] = transformed[m][k];
  }
  return ev;
}

template <class T>
BasicMarginalModel<T> expectations_to_probs(const BasicExpectationVector<T>& vec) {
  using N = NumTraits<T>;
  const auto& s = vec.scenario;
  if (static_cast<int>(vec.entries.size()) != s.num_contexts())
    throw DataError("expectation vector length does not match the scenario");
  for (int i = 0; i < s.num_contexts(); ++i)
    if (N::is_negative(T(1) - vec.entries[i]) || N::is_negative(vec.entries[i] + T(1)))
      throw DataError("expectation of " + s.key(i) + " outside [-1,1]");
  std::map<Context, Table<T>> given;
  for (int i = 0; i < s.num_contexts(); ++i) {
    if (!s.is_maximal(i)) continue;
    const Context& c = s.contexts()[i];
    const int m = static_cast<int>(c.size());
    const std::uint32_t dim = 1u << m;
    std::vector<T> e(dim);
    for (std::uint32_t k = 0; k < dim; ++k) {
      if (k == 0) {
        e[k] = T(1);
        continue;
      }
      Context sub;
      for (int b = 0; b < m; ++b)
        if (k & (1u << (m - 1 - b))) sub.push_back(c[b]);
      e[k] = vec.entries[s.context_index(sub)];
    }
    std::vector<T> p = e;
    hadamard_matrix(m).apply(p);
    for (std::uint32_t o = 0; o < dim; ++o) {
      if (N::is_negative(p[o])) {
        std::ostringstream msg;
        msg << "positivity violated on context {" << s.key(c) << "} outcome (" << outcome_string(o, m)
            << "): " << dim << " p = ";
        for (std::uint32_t k = 0; k < dim; ++k) {
          int sign = __builtin_popcount(k & o) % 2 ? -1 : 1;
          msg << (k == 0 ? (sign < 0 ? "-" : "") : (sign < 0 ? " - " : " + "));
          if (k == 0)
            msg << "1";
          else {
            msg << "<";
            for (int b = 0; b < m; ++b)
              if (k & (1u << (m - 1 - b))) msg << s.observables()[c[b]];
            msg << ">";
          }
        }
        msg << " = " << N::to_double(p[o]) << " < 0";
        throw DataError(msg.str());
      }
      p[o] /= T(dim);
      p[o] = N::clamp(p[o]);
    }
    given[c] = p;
  }
  return BasicMarginalModel<T>(s, given);
}

ExactExpectations rationalize(const FloatExpectations& v) {
  ExactExpectations out{v.scenario, {}};
  for (double x : v.entries) out.entries.push_back(rational_from_double(x));
  return out;
}

FloatExpectations to_float(const ExactExpectations& v) {
  FloatExpectations out{v.scenario, {}};
  for (const auto& x : v.entries) out.entries.push_back(x.get_d());
  return out;
}

FloatModel to_float(const ExactModel& m) {
  std::map<Context, Table<double>> given;
  const auto& s = m.scenario();
  for (int i = 0; i < s.num_contexts(); ++i) {
    if (!s.is_maximal(i)) continue;
    Table<double> t;
    for (const auto& x : m.table(i)) t.push_back(x.get_d());
    given[s.contexts()[i]] = t;
  }
  return FloatModel(s, given);
}

template class BasicMarginalModel<Rational>;
template class BasicMarginalModel<double>;
template BasicExpectationVector<Rational> probs_to_expectations(const BasicMarginalModel<Rational>&);
template BasicExpectationVector<double> probs_to_expectations(const BasicMarginalModel<double>&);
template BasicMarginalModel<Rational> expectations_to_probs(const BasicExpectationVector<Rational>&);
template BasicMarginalModel<double> expectations_to_probs(const BasicExpectationVector<double>&);

}  // namespace ctx
