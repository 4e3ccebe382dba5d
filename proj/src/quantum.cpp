#include "ct/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ct {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

SubstrateId QuantumModel::add_system(std::string name, int dim) {
  if (dim < 1) throw DimensionError("system dimension must be positive");
  SubstrateId s = u_.add_substrate(std::move(name));
  dim_[s] = dim;
  return s;
}

SubstrateId QuantumModel::add_composite(std::string name, SubstrateId left, SubstrateId right) {
  SubstrateId s = u_.add_composite(std::move(name), left, right);
  long long d = static_cast<long long>(dim(left)) * dim(right);
  if (d > (1ll << 30)) throw DimensionError("composite dimension overflow");
  dim_[s] = static_cast<int>(d);
  return s;
}

void QuantumModel::set_hamiltonian(SubstrateId s, std::vector<Rational> eigenvalues) {
  if (!u_.substrate(s).components.empty())
    throw DimensionError("Hamiltonians attach to atomic systems; compose energies add up");
  if (static_cast<int>(eigenvalues.size()) != dim(s))
    throw DimensionError("need one eigenvalue per basis state of " + u_.substrate(s).name);
  hamiltonian_[s] = std::move(eigenvalues);
}

bool QuantumModel::has_hamiltonian(SubstrateId s) const { return hamiltonian_.count(s) != 0; }

AttributeId QuantumModel::add_state(SubstrateId s, std::string name, Vec psi) {
  if (psi.size() != dim(s))
    throw DimensionError("state for " + name + " has dimension " + std::to_string(psi.size()) +
                         ", substrate needs " + std::to_string(dim(s)));
  double norm = psi.norm();
  if (norm < 1e-12) throw DimensionError("state for " + name + " is (numerically) zero");
  psi /= norm;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (std::abs(psi[i]) > 1e-12) {
      psi *= std::conj(psi[i]) / std::abs(psi[i]);
      break;
    }
  }
  for (AttributeId other : u_.attributes_of(s)) {
    auto it = state_.find(other);
    if (it != state_.end() && std::abs(it->second.dot(psi)) > 1.0 - 1e-12)
      throw Error("attribute " + name + " coincides with " + u_.attribute(other).name +
                  "; attributes of one substrate must be distinct states");
  }
  AttributeId a = u_.add_attribute(std::move(name), s);
  state_[a] = std::move(psi);
  return a;
}

AttributeId QuantumModel::add_basis_state(SubstrateId s, std::string name, int index) {
  if (index < 0 || index >= dim(s)) throw DimensionError("basis index out of range for " + name);
  Vec psi = Vec::Zero(dim(s));
  psi[index] = 1.0;
  return add_state(s, std::move(name), std::move(psi));
}

const Vec& QuantumModel::state(AttributeId a) const {
  auto it = state_.find(a);
  if (it == state_.end())
    throw MissingStateError("no state vector for attribute " + u_.attribute(a).name);
  return it->second;
}

int QuantumModel::dim(SubstrateId s) const {
  auto it = dim_.find(s);
  if (it == dim_.end())
    throw DimensionError("substrate " + u_.substrate(s).name + " has no declared dimension");
  return it->second;
}

std::complex<double> QuantumModel::overlap(const AttrTuple& x, const AttrTuple& y) const {
  if (u_.slots_of_tuple(x) != u_.slots_of_tuple(y))
    throw TupleMismatchError("overlap needs tuples on one substrate");
  std::complex<double> prod = 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) prod *= state(x[k]).dot(state(y[k]));
  return prod;
}

Vec QuantumModel::tuple_state(const AttrTuple& t) const {
  std::size_t total = 1;
  for (AttributeId a : t) {
    total *= static_cast<std::size_t>(state(a).size());
    if (total > kMaxStateDim)
      throw DimensionError("tuple state exceeds the dense materialisation limit");
  }
  Vec acc = Vec::Ones(1);
  for (AttributeId a : t) {
    const Vec& part = state(a);
    Vec next(acc.size() * part.size());
    for (Eigen::Index i = 0; i < acc.size(); ++i)
      next.segment(i * part.size(), part.size()) = acc[i] * part;
    acc = std::move(next);
  }
  return acc;
}

Mat QuantumModel::gram(const std::vector<AttrTuple>& tuples) const {
  const Eigen::Index m = static_cast<Eigen::Index>(tuples.size());
  Mat g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    g(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      g(i, j) = overlap(tuples[i], tuples[j]);
      g(j, i) = std::conj(g(i, j));
    }
  }
  return g;
}

GramVerdict QuantumModel::gram_verdict(const Task& task) const {
  GramVerdict v;
  if (task.empty()) {
    v.status = Possibility::Possible;
    v.note = "empty task";
    return v;
  }

  // Sharp energy labels must balance pair by pair (checked only where both
  // sides actually have sharp labels under declared Hamiltonians).
  for (const TaskPair& p : task.pairs()) {
    auto ein = tuple_energy(p.in);
    auto eout = tuple_energy(p.out);
    if (ein && eout && *ein != *eout) {
      v.status = Possibility::Impossible;
      v.margin = std::abs(static_cast<double>(*eout - *ein));
      v.note = "energy label changes from " + format_rational(*ein) + " to " +
               format_rational(*eout) + " on " + u_.tuple_name(p.in) + " -> " +
               u_.tuple_name(p.out);
      return v;
    }
  }

  std::vector<AttrTuple> ins, outs;
  ins.reserve(task.size());
  outs.reserve(task.size());
  for (const TaskPair& p : task.pairs()) {
    ins.push_back(p.in);
    outs.push_back(p.out);
  }
  Mat gin = gram(ins);
  Mat gout = gram(outs);
  const Eigen::Index m = gin.rows();

  // Entrywise quotient D with G_in = G_out .* D. Where the output overlap
  // vanishes the input one must as well; where both vanish the entry is free
  // and zero is as good a choice as any.
  Mat d = Mat::Identity(m, m);
  double worst_zero = 0.0;
  Eigen::Index zi = 0, zj = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (std::abs(gout(i, j)) <= kGramZero) {
        if (std::abs(gin(i, j)) > kGramDecision && std::abs(gin(i, j)) > worst_zero) {
          worst_zero = std::abs(gin(i, j));
          zi = i;
          zj = j;
        }
        d(i, j) = d(j, i) = 0.0;
      } else {
        d(i, j) = gin(i, j) / gout(i, j);
        d(j, i) = std::conj(d(i, j));
      }
    }
  }
  if (worst_zero > 0.0) {
    v.status = Possibility::Impossible;
    v.margin = worst_zero;
    v.note = "inputs " + u_.tuple_name(ins[zi]) + ", " + u_.tuple_name(ins[zj]) +
             " overlap by " + fmt(worst_zero) + " but their outputs are orthogonal";
    return v;
  }

  Eigen::SelfAdjointEigenSolver<Mat> eig(d, Eigen::EigenvaluesOnly);
  double lambda_min = eig.eigenvalues().minCoeff();
  if (lambda_min >= -kGramDecision) {
    v.status = Possibility::Possible;
    v.note = "relation matrix admissible (min eigenvalue " + fmt(lambda_min) + ")";
  } else {
    v.status = Possibility::Impossible;
    v.margin = -lambda_min;
    v.note = "relation matrix indefinite (min eigenvalue " + fmt(lambda_min) + ")";
  }
  return v;
}

Decision QuantumModel::decide_task(const Task& task) const {
  GramVerdict v = gram_verdict(task);
  return Decision{v.status, v.note};
}

std::optional<Rational> QuantumModel::basis_energy(SubstrateId s, Eigen::Index index) const {
  const SubstrateInfo& info = u_.substrate(s);
  if (info.components.empty()) {
    auto it = hamiltonian_.find(s);
    if (it == hamiltonian_.end()) return std::nullopt;
    return it->second[static_cast<std::size_t>(index)];
  }
  // Flattened row-major index: last atomic slot varies fastest.
  Rational sum = 0;
  for (auto slot = info.slots.rbegin(); slot != info.slots.rend(); ++slot) {
    int d = dim(*slot);
    auto part = basis_energy(*slot, index % d);
    if (!part) return std::nullopt;
    sum += *part;
    index /= d;
  }
  return sum;
}

std::optional<Rational> QuantumModel::sharp_energy(AttributeId a) const {
  auto it = state_.find(a);
  if (it == state_.end()) return std::nullopt;
  const Vec& psi = it->second;
  SubstrateId s = u_.attribute(a).substrate;
  std::optional<Rational> value;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (std::abs(psi[i]) <= 1e-12) continue;
    auto e = basis_energy(s, i);
    if (!e) return std::nullopt;
    if (!value)
      value = *e;
    else if (*value != *e)
      return std::nullopt;  // spread over distinct eigenspaces: not sharp
  }
  return value;
}

std::optional<Rational> QuantumModel::tuple_energy(const AttrTuple& tuple) const {
  Rational sum = 0;
  for (AttributeId a : tuple) {
    auto e = sharp_energy(a);
    if (!e) return std::nullopt;
    sum += *e;
  }
  return sum;
}

std::optional<Decision> QuantumModel::distinguishable_shortcut(const Variable& v) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < v.members.size(); ++i)
    for (std::size_t j = i + 1; j < v.members.size(); ++j)
      worst = std::max(worst, std::abs(overlap(v.members[i], v.members[j])));
  if (worst <= kGramDecision)
    return Decision{Possibility::Possible, "members pairwise orthogonal (max overlap " +
                                               fmt(worst) + ")"};
  return Decision{Possibility::Impossible,
                  "members overlap by " + fmt(worst) + "; no measurement separates them"};
}

std::optional<double> QuantumModel::max_cross_overlap(const AttrTuple& x, const AttrTuple& y) const {
  return std::abs(overlap(x, y));
}

EnergyLabeling QuantumModel::induce_energy_labeling(const std::vector<AttributeId>& attrs) const {
  EnergyLabeling lab;
  for (AttributeId a : attrs) {
    auto e = sharp_energy(a);
    if (!e)
      throw MissingLabelError("attribute " + u_.attribute(a).name +
                              " has no sharp energy; declare a Hamiltonian it is sharp under");
    lab.values[a] = *e;
  }
  return lab;
}

}  // namespace ct
