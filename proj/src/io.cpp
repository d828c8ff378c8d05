#include "ctx/io.hpp"

#include <fstream>
#include <set>

#include "ctx/error.hpp"

namespace ctx {

namespace fs = std::filesystem;

Json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw DataError(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw DataError(where + " must be a string");
  return j.get<std::string>();
}

MarginalScenario scenario_field(const Json& j, const fs::path& base_dir) {
  const Json& s = field(j, "scenario");
  if (s.is_string()) return scenario_from_json(load_json(base_dir / s.get<std::string>()));
  return scenario_from_json(s);
}

Context canonical_key(const MarginalScenario& s, const std::string& key) {
  Context c = s.parse_key(key);
  if (s.key(c) != key) throw DataError("context key \"" + key + "\" is not in canonical order (" + s.key(c) + ")");
  return c;
}

}  // namespace

ParsedNumber parse_number(const Json& j, const std::string& where) {
  ParsedNumber n;
  if (j.is_number_integer() || j.is_number_unsigned()) {
    n.exact = j.is_number_unsigned() ? Rational(std::to_string(j.get<std::uint64_t>()))
                                     : Rational(std::to_string(j.get<std::int64_t>()));
    n.value = n.exact.get_d();
  } else if (j.is_number_float()) {
    n.value = j.get<double>();
    if (!std::isfinite(n.value)) throw DataError(where + " is not finite");
    n.exact = rational_from_double(n.value);
    n.is_float = true;
  } else if (j.is_string()) {
    try {
      n.exact = parse_rational(j.get<std::string>());
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    n.value = n.exact.get_d();
  } else {
    throw DataError(where + " must be a number or a \"p/q\" string");
  }
  return n;
}

MarginalScenario scenario_from_json(const Json& j) {
  std::vector<std::string> declared;
  if (j.contains("observables")) {
    if (!j["observables"].is_array()) throw DataError("\"observables\" must be a list");
    for (const auto& o : j["observables"]) declared.push_back(as_string(o, "observable name"));
  }
  const Json& cs = field(j, "contexts");
  if (!cs.is_array()) throw DataError("\"contexts\" must be a list of lists");
  std::vector<std::vector<std::string>> ctxs;
  for (const auto& c : cs) {
    if (!c.is_array()) throw DataError("each context must be a list of names");
    std::vector<std::string> names;
    for (const auto& o : c) names.push_back(as_string(o, "observable name"));
    ctxs.push_back(names);
  }
  return validate_scenario(ctxs, declared);
}

Json to_json(const MarginalScenario& s) {
  Json j;
  j["observables"] = s.observables();
  Json cs = Json::array();
  for (int i = 0; i < s.num_contexts(); ++i)
    if (s.is_maximal(i)) {
      Json c = Json::array();
      for (int o : s.contexts()[i]) c.push_back(s.observables()[o]);
      cs.push_back(c);
    }
  j["contexts"] = cs;
  return j;
}

AnyModel model_from_json(const Json& j, const fs::path& base_dir) {
  auto s = scenario_field(j, base_dir);
  const Json& tables = field(j, "tables");
  if (!tables.is_object()) throw DataError("\"tables\" must map context keys to tables");
  std::map<Context, Table<Rational>> exact;
  std::map<Context, Table<double>> approx;
  bool any_float = false;
  for (const auto& [key, tab] : tables.items()) {
    Context c = canonical_key(s, key);
    const int m = static_cast<int>(c.size());
    if (!tab.is_object()) throw DataError("table for " + key + " must map outcomes to numbers");
    Table<Rational> te(std::size_t{1} << m);
    Table<double> td(std::size_t{1} << m);
    std::vector<bool> seen(te.size(), false);
    for (const auto& [out, val] : tab.items()) {
      if (static_cast<int>(out.size()) != m) throw DataError("outcome \"" + out + "\" has the wrong length for " + key);
      std::uint32_t o = parse_outcome(out);
      if (seen[o]) throw DataError("outcome \"" + out + "\" repeated in " + key);
      seen[o] = true;
      auto n = parse_number(val, "probability " + key + " " + out);
      te[o] = n.exact;
      td[o] = n.value;
      any_float |= n.is_float;
    }
    for (std::uint32_t o = 0; o < seen.size(); ++o)
      if (!seen[o]) throw DataError("table for " + key + " lacks outcome " + outcome_string(o, m));
    exact[c] = te;
    approx[c] = td;
  }
  if (any_float) return FloatModel(s, approx);
  return ExactModel(s, exact);
}

namespace {

template <class T, class F>
Json model_json(const BasicMarginalModel<T>& m, F num) {
  const auto& s = m.scenario();
  Json j;
  j["scenario"] = to_json(s);
  Json tabs = Json::object();
  for (int i = 0; i < s.num_contexts(); ++i) {
    if (!s.is_maximal(i)) continue;
    Json t = Json::object();
    const int sz = static_cast<int>(s.contexts()[i].size());
    for (std::uint32_t o = 0; o < m.table(i).size(); ++o) t[outcome_string(o, sz)] = num(m.table(i)[o]);
    tabs[s.key(i)] = t;
  }
  j["tables"] = tabs;
  return j;
}

}  // namespace

Json to_json(const ExactModel& m) {
  return model_json(m, [](const Rational& q) { return to_string(q); });
}

Json to_json(const FloatModel& m) {
  return model_json(m, [](double x) { return x; });
}

ExactExpectations expectations_from_json(const Json& j, const fs::path& base_dir) {
  auto s = scenario_field(j, base_dir);
  const Json& ex = field(j, "expectations");
  if (!ex.is_object()) throw DataError("\"expectations\" must map context keys to numbers");
  ExactExpectations e{s, RVector(s.num_contexts())};
  std::vector<bool> seen(s.num_contexts(), false);
  for (const auto& [key, val] : ex.items()) {
    int i = s.context_index(canonical_key(s, key));
    e.entries[i] = parse_number(val, "expectation " + key).exact;
    seen[i] = true;
  }
  for (int i = 0; i < s.num_contexts(); ++i)
    if (!seen[i]) throw DataError("missing expectation for " + s.key(i));
  return e;
}

Json to_json(const ExactExpectations& e) {
  Json j;
  j["scenario"] = to_json(e.scenario);
  Json ex = Json::object();
  for (int i = 0; i < e.scenario.num_contexts(); ++i) ex[e.scenario.key(i)] = to_string(e.entries[i]);
  j["expectations"] = ex;
  return j;
}

BooleInequality inequality_from_json(const Json& j, const fs::path& base_dir) {
  const Json& co = field(j, "coefficients");
  if (!co.is_object()) throw DataError("\"coefficients\" must map context keys to numbers");
  MarginalScenario s;
  if (j.contains("scenario")) {
    s = scenario_field(j, base_dir);
  } else {
    std::vector<std::vector<std::string>> ctxs;
    for (const auto& [key, val] : co.items()) {
      std::vector<std::string> names;
      std::size_t start = 0;
      for (;;) {
        auto comma = key.find(',', start);
        names.push_back(key.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      ctxs.push_back(names);
    }
    s = validate_scenario(ctxs);
  }
  Halfspace h{RVector(s.num_contexts()), parse_number(field(j, "bound"), "bound").exact};
  for (const auto& [key, val] : co.items()) {
    Context c = s.parse_key(key);
    h.a[s.context_index(c)] += parse_number(val, "coefficient " + key).exact;
  }
  std::string sense = j.contains("sense") ? as_string(j["sense"], "\"sense\"") : "<=";
  if (sense == ">=") {
    for (auto& x : h.a) x = -x;
    h.b = -h.b;
  } else if (sense != "<=") {
    throw DataError("\"sense\" must be \"<=\" or \">=\"");
  }
  return make_inequality(s, h);
}

Json halfspace_json(const MarginalScenario& s, const Halfspace& h) {
  Json j;
  Json co = Json::object();
  for (int i = 0; i < s.num_contexts(); ++i)
    if (sgn(h.a[i]) != 0) co[s.key(i)] = to_string(h.a[i]);
  j["coefficients"] = co;
  j["bound"] = to_string(h.b);
  j["sense"] = "<=";
  return j;
}

Json to_json(const BooleInequality& ineq) {
  Json j = halfspace_json(ineq.scenario, ineq.h);
  j["scenario"] = to_json(ineq.scenario);
  return j;
}

CMatrix matrix_from_json(const Json& j) {
  const Json& d = field(j, "dimension");
  if (!d.is_number_integer() || d.get<int>() < 1 || d.get<int>() > 64)
    throw DataError("\"dimension\" must be an integer in 1..64");
  const int n = d.get<int>();
  const Json& e = field(j, "entries");
  if (!e.is_array() || e.size() != static_cast<std::size_t>(n) * n)
    throw DataError("\"entries\" must hold dimension² [re, im] pairs");
  CMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const Json& p = e[static_cast<std::size_t>(r) * n + c];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw DataError("matrix entry must be an [re, im] pair of numbers");
      m(r, c) = Complex(p[0].get<double>(), p[1].get<double>());
    }
  return m;
}

Json to_json(const CMatrix& m) {
  Json j;
  j["dimension"] = m.rows();
  Json e = Json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) e.push_back({m(r, c).real(), m(r, c).imag()});
  j["entries"] = e;
  return j;
}

Realization realization_from_json(const Json& j) {
  Realization r;
  r.state = matrix_from_json(field(j, "state"));
  const Json& obs = field(j, "observables");
  if (!obs.is_object()) throw DataError("\"observables\" must map names to matrices");
  std::map<std::string, CMatrix> ops;
  for (const auto& [name, m] : obs.items()) {
    ops[name] = matrix_from_json(m);
    if (ops[name].rows() != r.state.rows()) throw DataError("observable " + name + " has the wrong dimension");
  }
  if (j.contains("assignment")) {
    const Json& a = j["assignment"];
    if (!a.is_object()) throw DataError("\"assignment\" must map scenario names to observable names");
    for (const auto& [scen, op] : a.items()) {
      auto it = ops.find(as_string(op, "assignment target"));
      if (it == ops.end()) throw DataError("assignment refers to unknown observable " + op.get<std::string>());
      r.observables[scen] = it->second;
    }
  } else {
    r.observables = ops;
  }
  return r;
}

Json to_json(const Realization& r) {
  Json j;
  j["state"] = to_json(r.state);
  Json obs = Json::object();
  for (const auto& [name, m] : r.observables) obs[name] = to_json(m);
  j["observables"] = obs;
  return j;
}

ExclusivityGraph graph_from_json(const Json& j) {
  const Json& vs = field(j, "vertices");
  if (!vs.is_array()) throw DataError("\"vertices\" must be a list of labels");
  std::vector<std::string> labels;
  std::map<std::string, int> index;
  for (const auto& v : vs) {
    auto l = as_string(v, "vertex label");
    if (!index.emplace(l, static_cast<int>(labels.size())).second) throw DataError("duplicate vertex " + l);
    labels.push_back(l);
  }
  std::vector<std::pair<int, int>> edges;
  const Json& es = field(j, "edges");
  if (!es.is_array()) throw DataError("\"edges\" must be a list of label pairs");
  for (const auto& e : es) {
    if (!e.is_array() || e.size() != 2) throw DataError("each edge must be a pair of labels");
    auto a = index.find(as_string(e[0], "edge endpoint"));
    auto b = index.find(as_string(e[1], "edge endpoint"));
    if (a == index.end() || b == index.end()) throw DataError("edge references an unknown vertex");
    edges.emplace_back(a->second, b->second);
  }
  return make_graph(labels, edges);
}

Json to_json(const ExclusivityGraph& g) {
  Json j;
  j["vertices"] = g.labels;
  Json es = Json::array();
  for (auto [u, v] : g.edges) es.push_back({g.labels[u], g.labels[v]});
  j["edges"] = es;
  return j;
}

OrthogonalityStructure structure_from_json(const Json& j) {
  std::vector<std::string> vertices;
  for (const auto& v : field(j, "vertices")) vertices.push_back(as_string(v, "vertex label"));
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : field(j, "edges")) {
    if (!e.is_array() || e.size() != 2) throw DataError("each edge must be a pair of labels");
    edges.emplace_back(as_string(e[0], "edge endpoint"), as_string(e[1], "edge endpoint"));
  }
  std::vector<std::vector<std::string>> bases;
  if (j.contains("bases"))
    for (const auto& b : j["bases"]) {
      std::vector<std::string> names;
      for (const auto& l : b) names.push_back(as_string(l, "basis label"));
      bases.push_back(names);
    }
  return make_structure(vertices, edges, bases);
}

Json to_json(const ContextualityVerdict& v, const MarginalScenario& s) {
  Json j;
  j["verdict"] = v.contextual ? "contextual" : "noncontextual";
  if (v.certificate) {
    Json c = halfspace_json(v.certificate->scenario, v.certificate->h);
    c["violation"] = to_string(v.violation);
    c["is_facet"] = v.certificate_is_facet;
    j["certificate"] = c;
  }
  if (!v.contextual) {
    Json w = Json::array();
    for (const auto& t : v.witness) {
      Json term;
      term["assignment"] = outcome_string(t.assignment, s.num_observables());
      term["weight"] = to_string(t.weight);
      w.push_back(term);
    }
    j["witness"] = w;
  }
  return j;
}

Json to_json(const SimulationReport& r) {
  Json j;
  j["model"] = r.model;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["rng"] = r.rng;
  Json qs = Json::array();
  for (const auto& q : r.queries) {
    Json o;
    o["query"] = q.name;
    o["estimate"] = q.estimate;
    o["target"] = q.target;
    o["std_error"] = q.std_error;
    o["z"] = q.z;
    qs.push_back(o);
  }
  j["queries"] = qs;
  return j;
}

}  // namespace ctx
