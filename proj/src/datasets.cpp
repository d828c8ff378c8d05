#include "ctx/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "ctx/error.hpp"

namespace ctx {

const CMatrix& ProjectorDataset::op(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw DataError("dataset " + name + " has no entry '" + label + "'");
  return ops[it - labels.begin()];
}

namespace {

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

Relation orthogonal(const std::string& a, const std::string& b) {
  return {RelationType::Orthogonal, {a, b}, {}, 0, {}, a + " " + b + " = 0"};
}

Relation complete(const std::vector<std::string>& labels) {
  return {RelationType::CompleteBasis, labels, {}, 1, {}, join(labels, " + ") + " = 1"};
}

// Declares a complete basis plus all of its pairwise orthogonalities.
void add_basis(ProjectorDataset& d, const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j) d.relations.push_back(orthogonal(labels[i], labels[j]));
  d.relations.push_back(complete(labels));
}

void add(ProjectorDataset& d, const std::string& label, const CMatrix& op) {
  d.labels.push_back(label);
  d.ops.push_back(op);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

DatasetReport verify_projector_dataset(const ProjectorDataset& set, double tol) {
  DatasetReport rep;
  rep.name = set.name;
  auto record = [&](const std::string& what, double residual, bool pass) {
    rep.checks.push_back({what, pass, residual});
    rep.pass = rep.pass && pass;
  };
  if (set.ops.empty()) throw DataError("dataset " + set.name + " is empty");
  const int d = static_cast<int>(set.ops.front().rows());
  for (std::size_t i = 0; i < set.ops.size(); ++i) {
    const CMatrix& p = set.ops[i];
    if (p.rows() != d) throw DataError("dataset " + set.name + " mixes dimensions");
    if (set.kind == EntryKind::Projector) {
      double r = std::max(max_abs(p - p.adjoint()), max_abs(p * p - p));
      record(set.labels[i] + " is a projector", r, r <= tol);
    } else {
      double r = std::max(max_abs(p - p.adjoint()), max_abs(p * p - identity(d)));
      record(set.labels[i] + " squares to 1", r, r <= tol);
    }
  }
  std::set<std::pair<std::string, std::string>> declared;
  for (const auto& rel : set.relations)
    if (rel.type == RelationType::Orthogonal) declared.insert(std::minmax(rel.labels[0], rel.labels[1]));

  for (const auto& rel : set.relations) {
    switch (rel.type) {
      case RelationType::Orthogonal: {
        double r = (set.op(rel.labels[0]) * set.op(rel.labels[1])).norm();
        record(rel.description, r, r <= tol);
        break;
      }
      case RelationType::CompleteBasis:
      case RelationType::WeightedSum: {
        CMatrix sum = CMatrix::Zero(d, d);
        for (std::size_t i = 0; i < rel.labels.size(); ++i)
          sum += (rel.weights.empty() ? 1.0 : rel.weights[i]) * set.op(rel.labels[i]);
        double r = max_abs(sum - rel.scalar * identity(d));
        record(rel.description, r, r <= tol);
        break;
      }
      case RelationType::BasisMultiplicity: {
        std::map<std::string, int> count;
        for (const auto& l : set.labels) count[l] = 0;
        for (const auto& b : set.relations)
          if (b.type == RelationType::CompleteBasis)
            for (const auto& l : b.labels) ++count[l];
        double worst = 0;
        for (const auto& [l, c] : count) worst = std::max(worst, std::abs(c - rel.scalar));
        record(rel.description, worst, worst == 0);
        break;
      }
      case RelationType::Annihilates: {
        CVector k = rel.ket.normalized();
        double r = std::abs(k.dot(set.op(rel.labels[0]) * k));
        record(rel.description, r, r <= tol);
        break;
      }
      case RelationType::ProductEquals: {
        CMatrix prod = identity(d);
        for (const auto& l : rel.labels) prod = prod * set.op(l);
        double r = max_abs(prod - rel.scalar * identity(d));
        record(rel.description, r, r <= tol);
        break;
      }
      case RelationType::Commuting: {
        double worst = 0;
        for (std::size_t i = 0; i < rel.labels.size(); ++i)
          for (std::size_t j = i + 1; j < rel.labels.size(); ++j) {
            const CMatrix& a = set.op(rel.labels[i]);
            const CMatrix& b = set.op(rel.labels[j]);
            worst = std::max(worst, (a * b - b * a).norm());
          }
        record(rel.description, worst, worst <= tol);
        break;
      }
      case RelationType::ExactOrthogonality: {
        int mismatches = 0;
        for (std::size_t i = 0; i < set.labels.size(); ++i)
          for (std::size_t j = i + 1; j < set.labels.size(); ++j) {
            bool orth = (set.ops[i] * set.ops[j]).norm() <= tol;
            bool decl = declared.count(std::minmax(set.labels[i], set.labels[j])) > 0;
            if (orth != decl) ++mismatches;
          }
        record(rel.description, mismatches, mismatches == 0);
        break;
      }
    }
  }
  return rep;
}

ProjectorDataset spekkens6() {
  ProjectorDataset d;
  d.name = "spekkens6";
  const double h = 0.5, r = std::sqrt(3.0) / 2;
  add(d, "phi", projector(ket({1, 0})));
  add(d, "Phi", projector(ket({0, 1})));
  add(d, "chi", projector(ket({h, r})));
  add(d, "Chi", projector(ket({r, -h})));
  add(d, "psi", projector(ket({h, -r})));
  add(d, "Psi", projector(ket({r, h})));
  d.relations.push_back(orthogonal("phi", "Phi"));
  d.relations.push_back(orthogonal("chi", "Chi"));
  d.relations.push_back(orthogonal("psi", "Psi"));
  d.relations.push_back(complete({"phi", "Phi"}));
  d.relations.push_back(complete({"chi", "Chi"}));
  d.relations.push_back(complete({"psi", "Psi"}));
  d.relations.push_back({RelationType::WeightedSum, {"phi", "chi", "psi"}, {}, 1.5, {}, "phi + chi + psi = 3/2 1"});
  d.relations.push_back({RelationType::WeightedSum, {"Phi", "Chi", "Psi"}, {}, 1.5, {}, "Phi + Chi + Psi = 3/2 1"});
  return d;
}

ProjectorDataset yuoh13() {
  ProjectorDataset d;
  d.name = "yuoh13";
  add(d, "z1", projector(ket({1, 0, 0})));
  add(d, "z2", projector(ket({0, 1, 0})));
  add(d, "z3", projector(ket({0, 0, 1})));
  add(d, "y1p", projector(ket({0, 1, 1})));
  add(d, "y1m", projector(ket({0, 1, -1})));
  add(d, "y2p", projector(ket({1, 0, 1})));
  add(d, "y2m", projector(ket({-1, 0, 1})));
  add(d, "y3p", projector(ket({1, 1, 0})));
  add(d, "y3m", projector(ket({1, -1, 0})));
  add(d, "h0", projector(ket({1, 1, 1})));
  add(d, "h1", projector(ket({-1, 1, 1})));
  add(d, "h2", projector(ket({1, -1, 1})));
  add(d, "h3", projector(ket({1, 1, -1})));
  add_basis(d, {"z1", "z2", "z3"});
  add_basis(d, {"z1", "y1p", "y1m"});
  add_basis(d, {"z2", "y2p", "y2m"});
  add_basis(d, {"z3", "y3p", "y3m"});
  const std::vector<std::vector<std::string>> hy = {
      {"y1m", "y2m", "y3m"}, {"y1m", "y2p", "y3p"}, {"y1p", "y2m", "y3p"}, {"y1p", "y2p", "y3m"}};
  for (int k = 0; k < 4; ++k)
    for (const auto& y : hy[k]) d.relations.push_back(orthogonal("h" + std::to_string(k), y));
  d.relations.push_back({RelationType::WeightedSum, {"h0", "h1", "h2", "h3"}, {}, 4.0 / 3, {}, "h0 + h1 + h2 + h3 = 4/3 1"});
  d.relations.push_back({RelationType::ExactOrthogonality, {}, {}, 0, {}, "orthogonal pairs are exactly the 24 graph edges"});
  return d;
}

ProjectorDataset peres_mermin9() {
  ProjectorDataset d;
  d.name = "peresmermin";
  d.kind = EntryKind::Dichotomic;
  const CMatrix i2 = identity(2), x = pauli_x(), y = pauli_y(), z = pauli_z();
  add(d, "A11", kron(z, i2));
  add(d, "A12", kron(i2, z));
  add(d, "A13", kron(z, z));
  add(d, "A21", kron(i2, x));
  add(d, "A22", kron(x, i2));
  add(d, "A23", kron(x, x));
  add(d, "A31", kron(z, x));
  add(d, "A32", kron(x, z));
  add(d, "A33", kron(y, y));
  const double sign[6] = {1, 1, 1, 1, 1, -1};
  for (int k = 0; k < 6; ++k) {
    std::vector<std::string> line;
    for (int t = 1; t <= 3; ++t)
      line.push_back(k < 3 ? "A" + std::to_string(k + 1) + std::to_string(t)
                           : "A" + std::to_string(t) + std::to_string(k - 2));
    d.relations.push_back({RelationType::Commuting, line, {}, 0, {}, join(line, ", ") + " commute"});
    d.relations.push_back(
        {RelationType::ProductEquals, line, {}, sign[k], {}, join(line, " ") + " = " + fmt(sign[k]) + " 1"});
  }
  return d;
}

namespace {

// Nine orthonormal bases of C^4 (unnormalized); basis x and basis y share
// exactly one ray, which is the vector labelled A_xy.
const std::vector<std::vector<std::vector<double>>>& ceg_bases() {
  static const std::vector<std::vector<std::vector<double>>> b = {
      {{0, 0, 0, 1}, {0, 0, 1, 0}, {1, 1, 0, 0}, {1, -1, 0, 0}},
      {{0, 0, 0, 1}, {0, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, -1, 0}},
      {{1, -1, 1, -1}, {1, 1, 1, 1}, {1, 0, -1, 0}, {0, 1, 0, -1}},
      {{1, -1, -1, 1}, {1, 1, 1, 1}, {1, 0, 0, -1}, {0, 1, -1, 0}},
      {{1, 1, 1, -1}, {-1, 1, 1, 1}, {1, 0, 0, 1}, {0, 1, -1, 0}},
      {{1, 1, -1, 1}, {1, 1, 1, -1}, {1, -1, 0, 0}, {0, 0, 1, 1}},
      {{1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, 0, 0}, {0, 0, 1, 1}},
      {{0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 1}, {1, 0, 0, -1}},
      {{1, 1, -1, 1}, {-1, 1, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, -1}},
  };
  return b;
}

bool same_ray(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::abs(std::abs(dot) - std::sqrt(na * nb)) < 1e-12;
}

CVector to_ket(const std::vector<double>& v) {
  CVector k(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) k(i) = v[i];
  return k;
}

}  // namespace

ProjectorDataset ceg18() {
  ProjectorDataset d;
  d.name = "ceg18";
  const auto& bases = ceg_bases();
  std::vector<std::vector<std::string>> basis_labels(9);
  for (int x = 0; x < 9; ++x)
    for (int y = x + 1; y < 9; ++y) {
      int found = 0;
      for (const auto& u : bases[x])
        for (const auto& v : bases[y])
          if (same_ray(u, v)) {
            ++found;
            if (found == 1) {
              std::string label = "v" + std::to_string(x + 1) + std::to_string(y + 1);
              add(d, label, projector(to_ket(u)));
              basis_labels[x].push_back(label);
              basis_labels[y].push_back(label);
            }
          }
      if (found > 1) throw SolverError("ceg18: bases share more than one ray");
    }
  for (const auto& b : basis_labels) add_basis(d, b);
  // Beyond the 54 in-basis pairs the set has 9 orthogonal pairs that share no basis.
  int cross = 0;
  for (std::size_t i = 0; i < d.labels.size(); ++i)
    for (std::size_t j = i + 1; j < d.labels.size(); ++j) {
      bool together = false;
      for (const auto& b : basis_labels)
        together |= std::count(b.begin(), b.end(), d.labels[i]) && std::count(b.begin(), b.end(), d.labels[j]);
      if (!together && (d.ops[i] * d.ops[j]).norm() < 1e-12) {
        d.relations.push_back(orthogonal(d.labels[i], d.labels[j]));
        ++cross;
      }
    }
  if (cross != 9) throw SolverError("ceg18: expected 9 cross-basis orthogonal pairs, found " + std::to_string(cross));
  d.relations.push_back({RelationType::BasisMultiplicity, {}, {}, 2, {}, "each projector lies in exactly two bases"});
  d.relations.push_back({RelationType::ExactOrthogonality, {}, {}, 0, {},
                         "orthogonal pairs are exactly the 54 in-basis and 9 cross-basis pairs"});
  return d;
}

ProjectorDataset pbr4() {
  ProjectorDataset d;
  d.name = "pbr";
  const double s = 1 / std::sqrt(2.0);
  const CVector zero = ket({1, 0}), one = ket({0, 1}), plus = ket({s, s}), minus = ket({s, -s});
  const CVector phi[2] = {zero, plus}, perp[2] = {one, minus};
  auto tensor = [](const CVector& a, const CVector& b) {
    CVector out(4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out(2 * i + j) = a(i) * b(j);
    return out;
  };
  std::vector<std::string> all;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CVector e = (tensor(phi[i], perp[j]) + tensor(perp[i], phi[j])) * s;
      if (std::abs(e.norm() - 1) > 1e-12) throw SolverError("pbr: measurement vector is not unit");
      std::string label = "E" + std::to_string(i) + std::to_string(j);
      d.labels.push_back(label);
      d.ops.push_back(e * e.adjoint());
      all.push_back(label);
      d.relations.push_back({RelationType::Annihilates, {label}, {}, 0, tensor(phi[i], phi[j]),
                             "<phi" + std::to_string(i) + " phi" + std::to_string(j) + "| " + label + " |phi" +
                                 std::to_string(i) + " phi" + std::to_string(j) + "> = 0"});
    }
  add_basis(d, all);
  return d;
}

std::vector<std::string> dataset_names() { return {"spekkens6", "yuoh13", "peresmermin", "ceg18", "pbr"}; }

ProjectorDataset dataset_by_name(const std::string& name) {
  if (name == "spekkens6") return spekkens6();
  if (name == "yuoh13") return yuoh13();
  if (name == "peresmermin") return peres_mermin9();
  if (name == "ceg18") return ceg18();
  if (name == "pbr") return pbr4();
  throw DataError("unknown dataset '" + name + "'");
}

namespace {

// Builds a scenario whose maximal contexts are `contexts` and an inequality
// from per-context coefficients keyed by context.
BooleInequality build_inequality(const std::vector<std::vector<std::string>>& contexts,
                                 const std::map<std::set<std::string>, int>& coeff, int bound) {
  auto s = validate_scenario(contexts);
  Halfspace h{RVector(s.num_contexts()), Rational(bound)};
  for (const auto& [names, c] : coeff) {
    Context ctx;
    for (const auto& n : names) ctx.push_back(s.observable_index(n));
    std::sort(ctx.begin(), ctx.end());
    int idx = s.context_index(ctx);
    if (idx < 0) throw SolverError("coefficient on a non-context");
    h.a[idx] += c;
  }
  return {s, h};
}

CMatrix maximally_mixed(int d) { return identity(d) / static_cast<double>(d); }

}  // namespace

StateIndependentCase peres_mermin_case() {
  auto pm = peres_mermin9();
  std::vector<std::vector<std::string>> lines;
  std::map<std::set<std::string>, int> coeff;
  for (int k = 0; k < 6; ++k) {
    std::vector<std::string> line;
    for (int t = 1; t <= 3; ++t)
      line.push_back(k < 3 ? "A" + std::to_string(k + 1) + std::to_string(t)
                           : "A" + std::to_string(t) + std::to_string(k - 2));
    lines.push_back(line);
    coeff[{line.begin(), line.end()}] = k == 5 ? -1 : 1;
  }
  StateIndependentCase c{"peresmermin", build_inequality(lines, coeff, 4), {}, 6.0};
  c.realization.state = maximally_mixed(4);
  for (std::size_t i = 0; i < pm.labels.size(); ++i) c.realization.observables[pm.labels[i]] = pm.ops[i];
  return c;
}

StateIndependentCase ceg18_case() {
  auto ds = ceg18();
  std::vector<std::vector<std::string>> ctxs;
  std::map<std::set<std::string>, int> coeff;
  for (const auto& rel : ds.relations) {
    if (rel.type != RelationType::CompleteBasis) continue;
    std::vector<std::string> names;
    for (const auto& l : rel.labels) names.push_back("A" + l.substr(1));
    ctxs.push_back(names);
    coeff[{names.begin(), names.end()}] = -1;
  }
  StateIndependentCase c{"ceg18", build_inequality(ctxs, coeff, 7), {}, 9.0};
  c.realization.state = maximally_mixed(4);
  for (std::size_t i = 0; i < ds.labels.size(); ++i)
    c.realization.observables["A" + ds.labels[i].substr(1)] = 2.0 * ds.ops[i] - identity(4);
  return c;
}

StateIndependentCase yuoh_case() {
  auto ds = yuoh13();
  auto upper = [](const std::string& l) {
    std::string u = l;
    u[0] = static_cast<char>(std::toupper(u[0]));
    return u;
  };
  std::vector<std::vector<std::string>> ctxs;
  std::map<std::set<std::string>, int> coeff;
  std::set<std::set<std::string>> pairs;
  for (const auto& rel : ds.relations) {
    std::vector<std::string> names;
    for (const auto& l : rel.labels) names.push_back(upper(l));
    if (rel.type == RelationType::CompleteBasis) ctxs.push_back(names);
    if (rel.type == RelationType::Orthogonal) {
      pairs.insert({names.begin(), names.end()});
      if (names[0][0] == 'H' || names[1][0] == 'H') ctxs.push_back(names);
    }
  }
  // Single terms.
  coeff[{"H0"}] = 2;
  for (int i = 1; i <= 3; ++i) {
    const std::string k = std::to_string(i);
    coeff[{"Z" + k}] = 1;
    coeff[{"Y" + k + "p"}] = 1;
    coeff[{"Y" + k + "m"}] = 1;
    coeff[{"H" + k}] = 2;
    coeff[{"Z" + k, "Y" + k + "p"}] += 1;
    coeff[{"Y" + k + "p", "Y" + k + "m"}] += 1;
    coeff[{"Y" + k + "m", "Z" + k}] += 1;
    coeff[{"Z" + k, "Y" + k + "p", "Y" + k + "m"}] = -3;
  }
  // Every two-observable context carries -2 (each unordered pair counted twice).
  if (pairs.size() != 24) throw SolverError("yuoh13: expected 24 two-observable contexts");
  for (const auto& p : pairs) coeff[p] -= 2;
  StateIndependentCase c{"yuoh13", build_inequality(ctxs, coeff, 25), {}, 25.0 + 8.0 / 3.0};
  c.realization.state = maximally_mixed(3);
  for (std::size_t i = 0; i < ds.labels.size(); ++i)
    c.realization.observables[upper(ds.labels[i])] = identity(3) - 2.0 * ds.ops[i];
  return c;
}

}  // namespace ctx
