#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ct/backend.hpp"
#include "ct/conservation.hpp"
#include "ct/core.hpp"
#include "ct/rational.hpp"

namespace ct {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

struct MissingStateError : Error {
  using Error::Error;
};
struct DimensionError : Error {
  using Error::Error;
};

// Pinned numeric policy for the unitary-extension criterion. An entry is
// treated as zero below kGramZero; the relation matrix counts as positive
// semidefinite down to -kGramDecision on its smallest eigenvalue.
inline constexpr double kGramZero = 1e-10;
inline constexpr double kGramDecision = 1e-8;

// Largest state dimension we ever materialise as a dense vector.
inline constexpr std::size_t kMaxStateDim = 1u << 20;

// Task verdict with a quantitative margin: 0 when possible, otherwise how far
// the relation matrix is from admissible (eigenvalue deficit or the magnitude
// of an overlap that a task would have to destroy).
struct GramVerdict {
  Possibility status = Possibility::Unknown;
  double margin = 0.0;
  std::string note;
};

// A model whose attributes are pure states of finite-dimensional systems with
// optional diagonal Hamiltonians. Decides tasks by the standard criterion: a
// unitary (with arbitrary ancillas) maps x_i -> y_i for all i exactly when
// some positive semidefinite matrix with unit diagonal multiplies the output
// Gram matrix entrywise into the input one, and sharp energy labels balance.
class QuantumModel : public ModelBackend {
 public:
  const Universe& universe() const override { return u_; }
  Universe& universe_mut() { return u_; }

  SubstrateId add_system(std::string name, int dim);
  SubstrateId add_composite(std::string name, SubstrateId left, SubstrateId right);

  // Diagonal Hamiltonian for an atomic system: one rational eigenvalue per
  // basis state.
  void set_hamiltonian(SubstrateId s, std::vector<Rational> eigenvalues);
  bool has_hamiltonian(SubstrateId s) const;

  // Attribute carried by a normalised state vector (normalised and phase-fixed
  // on the way in). Two attributes of one substrate must be distinct states.
  AttributeId add_state(SubstrateId s, std::string name, Vec psi);
  AttributeId add_basis_state(SubstrateId s, std::string name, int index);

  const Vec& state(AttributeId a) const;
  int dim(SubstrateId s) const;

  // <x|y> for equal-signature tuples, taken slotwise so nothing large is ever
  // materialised.
  std::complex<double> overlap(const AttrTuple& x, const AttrTuple& y) const;

  // Dense product state of a tuple (guarded by kMaxStateDim).
  Vec tuple_state(const AttrTuple& t) const;

  Mat gram(const std::vector<AttrTuple>& tuples) const;

  GramVerdict gram_verdict(const Task& task) const;

  Decision decide_task(const Task& task) const override;
  std::optional<Rational> tuple_energy(const AttrTuple& tuple) const override;
  std::optional<Decision> distinguishable_shortcut(const Variable& v) const override;
  std::optional<double> max_cross_overlap(const AttrTuple& x, const AttrTuple& y) const override;

  // Sharp eigenvalue of an attribute state, when it lies in one eigenspace of
  // the (declared) Hamiltonian.
  std::optional<Rational> sharp_energy(AttributeId a) const;

  // Labeling read off the model for the given attributes; throws
  // MissingLabelError when some state has no sharp energy.
  EnergyLabeling induce_energy_labeling(const std::vector<AttributeId>& attrs) const;

 private:
  std::optional<Rational> basis_energy(SubstrateId s, Eigen::Index index) const;

  Universe u_;
  std::unordered_map<SubstrateId, int> dim_;
  std::unordered_map<SubstrateId, std::vector<Rational>> hamiltonian_;
  std::unordered_map<AttributeId, Vec> state_;
};

}  // namespace ct
