// Command-line front end: one sub-command per run, JSON report on stdout,
// human summary on stderr. Exit 1 on usage/data errors, 2 on solver failures.
#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ctx/csw.hpp"
#include "ctx/datasets.hpp"
#include "ctx/error.hpp"
#include "ctx/io.hpp"
#include "ctx/kscolor.hpp"
#include "ctx/ncycle.hpp"
#include "ctx/onto.hpp"
#include "ctx/polytope.hpp"
#include "ctx/quantum.hpp"

namespace fs = std::filesystem;
using namespace ctx;

namespace {

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

Json rvector_json(const RVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

Json eigen_values_json(const CMatrix& op) {
  auto ev = hermitian_eigen(op).values;
  return {{"min_eigenvalue", ev.front()}, {"max_eigenvalue", ev.back()}};
}

// --- scenario ---------------------------------------------------------------

int run_scenario_validate(const std::string& path) {
  auto s = scenario_from_json(load_json(path));
  Json j = to_json(s);
  Json all = Json::array();
  for (int i = 0; i < s.num_contexts(); ++i) all.push_back(s.key(i));
  j["closure"] = all;
  emit(j);
  std::cerr << "scenario ok: " << s.num_observables() << " observables, " << s.num_contexts()
            << " contexts in the closure\n";
  return 0;
}

// --- ncycle -----------------------------------------------------------------

int run_ncycle(int n, const std::string& what) {
  Json j;
  j["n"] = n;
  if (what == "inequalities") {
    auto ineqs = boole_inequalities(n);
    const auto s = ncycle_scenario(n);
    Json list = Json::array();
    for (const auto& b : ineqs) list.push_back(halfspace_json(s, b.inequality.h));
    j["scenario"] = to_json(s);
    j["count"] = ineqs.size();
    j["inequalities"] = list;
    std::cerr << ineqs.size() << " Boole inequalities, bound " << n - 2 << "\n";
  } else if (what == "vertices") {
    if (n > 12) throw DataError("vertex emission is limited to n <= 12");
    const auto s = ncycle_scenario(n);
    auto nc = nc_vertices(s);
    auto nd = nd_vertices(n);
    Json coords = Json::array();
    for (int i = 0; i < s.num_contexts(); ++i) coords.push_back(s.key(i));
    j["coordinates"] = coords;
    Json a = Json::array(), b = Json::array();
    for (const auto& v : nc.vertices) a.push_back(rvector_json(v));
    for (const auto& v : nd.vertices) b.push_back(rvector_json(v));
    j["nc_vertices"] = a;
    j["nd_vertices"] = b;
    std::cerr << nc.vertices.size() << " noncontextual and " << nd.vertices.size() << " no-disturbance vertices\n";
  } else if (what == "realization") {
    auto r = quantum_realization(n);
    j["realization"] = to_json(r.as_realization());
    j["target"] = r.target;
    std::cerr << "realization in dimension " << r.state.rows() << "\n";
  } else if (what == "bounds") {
    auto r = quantum_realization(n);
    auto ineq = ncycle_inequality(n, r.target);
    auto model = realize_model(ineq.scenario, r.as_realization());
    auto e = probs_to_expectations(model);
    double value = 0;
    for (int i = 0; i < ineq.scenario.num_contexts(); ++i) value += ineq.h.a[i].get_d() * e.entries[i];
    j["nc_bound"] = n - 2;
    j["quantum_closed_form"] = quantum_bound_closed_form(n);
    j["realized_value"] = value;
    j["target"] = r.target;
    if (n >= 3) {
      auto q = quantum_max(ineq);
      j["theta"] = q.theta.value;
      j["theta_gap"] = q.theta.gap;
      j["theta_bound"] = q.value;
      j["theta_upper_bound_only"] = q.upper_bound_only;
    }
    std::cerr << "n = " << n << ": NC bound " << n - 2 << ", quantum " << quantum_bound_closed_form(n) << "\n";
  } else {
    throw DataError("--emit must be inequalities, vertices, realization or bounds");
  }
  emit(j);
  return 0;
}

// --- decide / facets / vertices ----------------------------------------------

int run_decide(const std::string& path, const std::string& certificate_path) {
  Json in = load_json(path);
  const fs::path base = fs::path(path).parent_path();
  ContextualityVerdict v;
  MarginalScenario s;
  if (in.contains("expectations")) {
    auto e = expectations_from_json(in, base);
    s = e.scenario;
    v = decide_contextuality(e);
  } else {
    auto m = model_from_json(in, base);
    std::visit(
        [&](const auto& model) {
          s = model.scenario();
          v = decide_contextuality(model);
        },
        m);
  }
  emit(to_json(v, s));
  if (v.contextual && !certificate_path.empty()) {
    std::ofstream out(certificate_path);
    if (!out) throw DataError("cannot write " + certificate_path);
    out << to_json(*v.certificate).dump(2) << "\n";
  }
  std::cerr << (v.contextual ? "contextual" : "noncontextual") << "\n";
  return 0;
}

int run_facets(const std::string& path) {
  auto s = scenario_from_json(load_json(path));
  auto facets = facet_enumeration(nc_vertices(s));
  auto classes = classify_facets(s, facets);
  Json list = Json::array();
  int boole = 0;
  for (const auto& f : classes) {
    Json h = halfspace_json(s, f.h);
    h["class"] = to_string(f.cls);
    boole += f.cls == FacetClass::Boole;
    list.push_back(h);
  }
  Json j;
  j["scenario"] = to_json(s);
  j["count"] = classes.size();
  j["facets"] = list;
  emit(j);
  std::cerr << classes.size() << " facets, " << boole << " Boole\n";
  return 0;
}

int run_vertices(const std::string& path) {
  Json in = load_json(path);
  std::vector<Halfspace> hs;
  int d = 0;
  Json coords = Json::array();
  if (in.contains("scenario")) {
    auto s = scenario_from_json(in["scenario"]);
    d = s.num_contexts();
    for (int i = 0; i < d; ++i) coords.push_back(s.key(i));
    if (!in.contains("inequalities") || !in["inequalities"].is_array())
      throw DataError("\"inequalities\" must be a list of inequality objects");
    for (const auto& q : in["inequalities"]) {
      Json qi = q;
      qi["scenario"] = in["scenario"];
      hs.push_back(inequality_from_json(qi).h);
    }
  } else {
    if (!in.contains("dimension") || !in["dimension"].is_number_integer())
      throw DataError("H-representation needs \"dimension\" or \"scenario\"");
    d = in["dimension"].get<int>();
    if (d < 1 || d > 12) throw DataError("dimension must lie in 1..12");
    if (!in.contains("halfspaces") || !in["halfspaces"].is_array())
      throw DataError("\"halfspaces\" must be a list of {a, b} objects");
    for (const auto& q : in["halfspaces"]) {
      Halfspace h;
      if (!q.contains("a") || !q["a"].is_array() || static_cast<int>(q["a"].size()) != d)
        throw DataError("halfspace \"a\" must have dimension entries");
      for (const auto& x : q["a"]) h.a.push_back(parse_number(x, "coefficient").exact);
      if (!q.contains("b")) throw DataError("halfspace lacks \"b\"");
      h.b = parse_number(q["b"], "bound").exact;
      hs.push_back(h);
    }
  }
  auto p = vertex_enumeration(hs, d);
  Json j;
  if (!coords.empty()) j["coordinates"] = coords;
  j["dimension"] = d;
  j["count"] = p.vertices.size();
  Json vs = Json::array();
  for (const auto& v : p.vertices) vs.push_back(rvector_json(v));
  j["vertices"] = vs;
  emit(j);
  std::cerr << p.vertices.size() << " vertices\n";
  return 0;
}

// --- theta / quantum-max -----------------------------------------------------

Json theta_json(const ThetaResult& t) {
  return {{"theta", t.value}, {"upper_bound", t.upper}, {"gap", t.gap}, {"newton_steps", t.newton_steps}};
}

int run_theta(const std::string& graph, const std::string& inequality, const std::string& family, int n) {
  const int given = !graph.empty() + !inequality.empty() + !family.empty();
  if (given != 1) throw DataError("theta needs exactly one of --graph, --inequality, --family");
  Json j;
  if (!graph.empty()) {
    auto g = graph_from_json(load_json(graph));
    j = theta_json(lovasz_theta(g));
    j["vertices"] = g.size();
  } else if (!inequality.empty()) {
    auto ineq = inequality_from_json(load_json(inequality), fs::path(inequality).parent_path());
    auto form = to_csw_form(ineq);
    auto q = quantum_max(ineq);
    j = theta_json(q.theta);
    j["graph"] = to_json(exclusivity_graph(form));
    j["csw_scale"] = to_string(form.scale);
    j["csw_offset"] = to_string(form.offset);
    j["csw_nc_bound"] = to_string(form.nc_bound);
    j["quantum_bound"] = q.value;
    j["upper_bound_only"] = q.upper_bound_only;
  } else {
    GraphFamily fam;
    ExclusivityGraph g;
    if (family == "prism") {
      fam = GraphFamily::Prism;
      g = prism_graph(n);
    } else if (family == "mobius") {
      fam = GraphFamily::Mobius;
      g = mobius_ladder(n);
    } else {
      throw DataError("--family must be prism or mobius");
    }
    j = theta_json(lovasz_theta(g));
    j["family"] = family;
    j["n"] = n;
    // The closed forms hold for odd prisms and even Möbius ladders only.
    try {
      j["closed_form"] = theta_closed_form(fam, n);
    } catch (const DataError&) {
      j["closed_form"] = nullptr;
    }
  }
  emit(j);
  std::cerr << "theta = " << j["theta"].get<double>() << "\n";
  return 0;
}

int run_quantum_max(const std::string& inequality, const std::string& realization) {
  auto ineq = inequality_from_json(load_json(inequality), fs::path(inequality).parent_path());
  Json j;
  j["nc_bound"] = to_string(ineq.h.b);
  try {
    auto q = quantum_max(ineq);
    j["theta"] = theta_json(q.theta);
    j["quantum_bound"] = q.value;
    j["upper_bound_only"] = q.upper_bound_only;
  } catch (const DataError& e) {
    if (realization.empty()) throw;
    j["theta"] = nullptr;
    j["theta_unavailable"] = e.what();
  }
  if (!realization.empty()) {
    auto r = realization_from_json(load_json(realization));
    CMatrix op = inequality_operator(ineq, r);
    Json rv = eigen_values_json(op);
    rv["state_value"] = expectation(r.state, op);
    rv["operator_norm"] = operator_norm(op);
    auto rep = state_independence_report(ineq, r);
    rv["proportional_to_identity"] = rep.proportional_to_identity;
    rv["identity_coefficient"] = rep.identity_coefficient;
    rv["state_independent"] = rep.state_independent;
    j["realization"] = rv;
  }
  emit(j);
  std::cerr << "quantum-max done\n";
  return 0;
}

// --- simulate ----------------------------------------------------------------

struct SimOptions {
  std::string model;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  double psi_theta = 0, psi_phi = 0, phi_theta = M_PI / 2, phi_phi = 0;
  std::string state_file, pvm_file, observable_file;
};

CVector pure_ket(const CMatrix& rho) {
  DensityState st(rho);
  auto es = hermitian_eigen(rho);
  if (std::abs(es.values.back() - 1) > 1e-10) throw DataError("state file must hold a pure state");
  return es.vectors.col(es.vectors.cols() - 1);
}

std::vector<CMatrix> load_pvm(const std::string& path) {
  Json in = load_json(path);
  if (!in.contains("elements") || !in["elements"].is_array()) throw DataError("PVM file needs \"elements\"");
  std::vector<CMatrix> out;
  for (const auto& m : in["elements"]) out.push_back(matrix_from_json(m));
  return out;
}

int run_simulate(const SimOptions& o) {
  const Vec3 psi = bloch_from_angles(o.psi_theta, o.psi_phi);
  const Vec3 phi = bloch_from_angles(o.phi_theta, o.phi_phi);
  SimulationReport rep;
  if (o.model == "ks") {
    rep = ks_model(psi, phi, o.samples, o.seed);
  } else if (o.model == "bell" || o.model == "bell-general") {
    CVector ket;
    if (!o.state_file.empty()) {
      ket = pure_ket(matrix_from_json(load_json(o.state_file)));
    } else {
      ket = CVector(2);
      ket << std::cos(o.psi_theta / 2), std::exp(Complex(0, o.psi_phi)) * std::sin(o.psi_theta / 2);
    }
    std::vector<CMatrix> pvm;
    if (!o.pvm_file.empty()) {
      pvm = load_pvm(o.pvm_file);
    } else {
      if (ket.size() != 2) throw DataError("a non-qubit state needs --pvm");
      pvm = {bloch_projector(phi), bloch_projector({-phi[0], -phi[1], -phi[2]})};
    }
    if (o.model == "bell") {
      if (pvm.size() != 2) throw DataError("the qubit Bell model takes a two-element PVM");
      rep = bell_qubit_model(ket, pvm[0], pvm[1], o.samples, o.seed);
    } else {
      rep = bell_general_model(ket, pvm, o.samples, o.seed);
    }
  } else if (o.model == "bell-mermin") {
    QubitObservable a{0, phi};
    if (!o.observable_file.empty()) a = qubit_observable(matrix_from_json(load_json(o.observable_file)));
    rep = bell_mermin_model(psi, a, o.samples, o.seed);
  } else if (o.model == "ljbr") {
    rep = ljbr_qubit_model(psi, phi, o.samples, o.seed);
  } else {
    throw DataError("--model must be ks, bell, bell-general, bell-mermin or ljbr");
  }
  emit(to_json(rep));
  std::cerr << rep.model << ": max |z| = " << rep.max_abs_z() << "\n";
  return 0;
}

// --- ks-check / verify-datasets ------------------------------------------------

Json trace_json(const PropagationTrace& t) {
  return {{"steps", t.steps}, {"conflict", t.conflict}, {"conflict_reason", t.conflict_reason}};
}

int run_ks_check(const std::string& name) {
  Json j;
  j["dataset"] = name;
  if (name == "ceg18") {
    auto ds = ceg18();
    auto vr = verify_projector_dataset(ds);
    if (!vr.pass) throw SolverError("ceg18 vectors fail their declared relations");
    auto s = structure_from_dataset(ds);
    auto col = enumerate_colorings(s);
    auto cert = parity_certificate(s);
    j["vertices"] = s.vertices.size();
    j["bases"] = s.bases.size();
    j["colorings"] = col.colorings.size();
    j["exact"] = col.exact;
    j["ks_set"] = col.colorings.empty() && col.exact;
    if (cert)
      j["parity_certificate"] = {{"bases", cert->bases}, {"multiplicity", cert->multiplicity},
                                 {"statement", cert->statement}};
    else
      j["parity_certificate"] = nullptr;
    std::cerr << "ceg18: " << col.colorings.size() << " colorings\n";
  } else if (name == "yuoh13") {
    auto r = yu_oh_check();
    j["colorings"] = r.colorings;
    j["exact"] = r.colorings_exact;
    j["max_h_sum"] = r.max_h_sum;
    j["all_within_one"] = r.all_within_one;
    j["quantum_h_sum"] = r.quantum_h_sum;
    j["quantum_verified"] = r.quantum_verified;
    j["contradiction"] = r.contradiction;
    j["h0_h1_trace"] = trace_json(r.h0_h1_trace);
    std::cerr << "yuoh13: " << r.colorings << " colorings, max Σh = " << r.max_h_sum << " < "
              << r.quantum_h_sum << "\n";
  } else if (name == "peresmermin") {
    auto r = peres_mermin_check();
    j["assignments"] = r.assignments;
    j["satisfying"] = r.satisfying;
    j["relaxed_satisfying"] = r.relaxed_satisfying;
    j["nc_maximum"] = to_string(r.nc_maximum);
    j["quantum_verified"] = r.quantum_verified;
    std::cerr << "peresmermin: " << r.satisfying << " of " << r.assignments << " assignments satisfy\n";
  } else {
    throw DataError("--dataset must be ceg18, yuoh13 or peresmermin");
  }
  emit(j);
  return 0;
}

int run_verify_datasets() {
  Json list = Json::array();
  bool all = true;
  for (const auto& name : dataset_names()) {
    auto rep = verify_projector_dataset(dataset_by_name(name));
    Json checks = Json::array();
    for (const auto& c : rep.checks)
      checks.push_back({{"relation", c.description}, {"pass", c.pass}, {"residual", c.residual}});
    list.push_back({{"name", name}, {"pass", rep.pass}, {"checks", checks}});
    all &= rep.pass;
    std::cerr << name << ": " << (rep.pass ? "pass" : "FAIL") << "\n";
  }
  emit({{"pass", all}, {"datasets", list}});
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contextuality toolkit"};
  app.require_subcommand(1);

  auto* scen = app.add_subcommand("scenario", "scenario utilities");
  scen->require_subcommand(1);
  std::string scen_file;
  auto* scen_val = scen->add_subcommand("validate", "validate a scenario file");
  scen_val->add_option("file", scen_file, "scenario file")->required();

  int n = 0;
  std::string emit_what = "inequalities";
  auto* nc = app.add_subcommand("ncycle", "n-cycle inequalities, vertices, realizations and bounds");
  nc->add_option("--n", n, "cycle length")->required();
  nc->add_option("--emit", emit_what, "inequalities|vertices|realization|bounds");

  std::string model_file, certificate_file;
  auto* dec = app.add_subcommand("decide", "decide whether a model is contextual");
  dec->add_option("--model", model_file, "model or expectation file")->required();
  dec->add_option("--certificate", certificate_file, "write the separating inequality here");

  std::string facets_file;
  auto* fac = app.add_subcommand("facets", "facets of the noncontextual polytope");
  fac->add_option("--scenario", facets_file, "scenario file")->required();

  std::string hrep_file;
  auto* ver = app.add_subcommand("vertices", "vertices of an H-representation");
  ver->add_option("--hrep", hrep_file, "H-representation file")->required();

  std::string graph_file, ineq_file, family;
  int family_n = 0;
  auto* th = app.add_subcommand("theta", "Lovász theta");
  th->add_option("--graph", graph_file, "graph file");
  th->add_option("--inequality", ineq_file, "inequality file (CSW form)");
  th->add_option("--family", family, "prism|mobius");
  th->add_option("--n", family_n, "family size");

  std::string qm_ineq, qm_real;
  auto* qm = app.add_subcommand("quantum-max", "quantum value of an inequality");
  qm->add_option("--inequality", qm_ineq, "inequality file")->required();
  qm->add_option("--realization", qm_real, "realization file");

  SimOptions so;
  auto* sim = app.add_subcommand("simulate", "sample an ontological model");
  sim->add_option("--model", so.model, "ks|bell|bell-general|bell-mermin|ljbr")->required();
  sim->add_option("--samples", so.samples, "sample count")->check(CLI::PositiveNumber);
  sim->add_option("--seed", so.seed, "64-bit seed");
  sim->add_option("--psi-theta", so.psi_theta, "state polar angle");
  sim->add_option("--psi-phi", so.psi_phi, "state azimuth");
  sim->add_option("--phi-theta", so.phi_theta, "measurement polar angle");
  sim->add_option("--phi-phi", so.phi_phi, "measurement azimuth");
  sim->add_option("--state", so.state_file, "pure state as a matrix file");
  sim->add_option("--pvm", so.pvm_file, "PVM file with \"elements\"");
  sim->add_option("--observable", so.observable_file, "qubit observable matrix file");

  std::string dataset;
  auto* ks = app.add_subcommand("ks-check", "Kochen–Specker colorability checks");
  ks->add_option("--dataset", dataset, "ceg18|yuoh13|peresmermin")->required();

  auto* vd = app.add_subcommand("verify-datasets", "check every bundled dataset relation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (scen_val->parsed()) return run_scenario_validate(scen_file);
    if (nc->parsed()) return run_ncycle(n, emit_what);
    if (dec->parsed()) return run_decide(model_file, certificate_file);
    if (fac->parsed()) return run_facets(facets_file);
    if (ver->parsed()) return run_vertices(hrep_file);
    if (th->parsed()) return run_theta(graph_file, ineq_file, family, family_n);
    if (qm->parsed()) return run_quantum_max(qm_ineq, qm_real);
    if (sim->parsed()) return run_simulate(so);
    if (ks->parsed()) return run_ks_check(dataset);
    if (vd->parsed()) return run_verify_datasets();
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
