#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tangleroof/states.hpp"

// Polynomial entanglement measures for pure states. Each measure is the
// modulus of a degree-h polynomial in the raw amplitudes, homogeneous of
// degree h and invariant under SL(2,C) acting on each qubit.

namespace tangleroof {

struct TangleDescriptor {
  std::string name;
  int n_qubits = 0;
  int degree_h = 0;
  // Polynomial in the (not necessarily normalized) amplitude vector.
  std::function<cd(const Eigen::VectorXcd&)> pre_modulus;
};

// Concurrence polynomial, 2 qubits, degree 2: 2(a00 a11 - a01 a10).
cd concurrence_pre(const Eigen::VectorXcd& a);

// Three-tangle polynomial, 3 qubits, degree 4.
cd three_tangle_pre(const Eigen::VectorXcd& a);

const TangleDescriptor& concurrence_descriptor();
const TangleDescriptor& three_tangle_descriptor();

// Registry for CLI selection; returns nullptr for unknown names.
const TangleDescriptor* find_tangle(std::string_view name);
std::vector<std::string> tangle_names();

// |pre_modulus(psi)| for a normalized state. Throws std::invalid_argument if
// the descriptor's qubit count disagrees with the state or if the norm has
// drifted from 1 by more than 1e-9.
double tangle(const TangleDescriptor& desc, const PureState& psi);

}  // namespace tangleroof
