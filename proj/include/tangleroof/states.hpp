#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string_view>
#include <vector>

// Pure states, rank-limited density matrices, and the Bloch-ball picture of a
// two-dimensional subspace. Qubit A is the most significant bit of the basis
// index, so a 3-qubit amplitude vector is ordered |000>, |001>, ..., |111>.

namespace tangleroof {

using cd = std::complex<double>;

struct PureState {
  int n_qubits = 0;
  Eigen::VectorXcd amplitudes;  // length 2^n_qubits, unit norm
};

struct DensityMatrix {
  int n_qubits = 0;
  Eigen::MatrixXcd matrix;  // 2^n x 2^n, Hermitian, trace 1, positive
};

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;        // descending
  std::vector<PureState> eigenstates; // same order, phase-fixed
  int rank = 0;                       // eigenvalues above rank_tolerance * max
};

// Coordinates of a state inside the Bloch ball of span{psi0, psi1};
// psi0 maps to (0,0,1), psi1 to (0,0,-1).
struct BlochPoint {
  double x = 0, y = 0, z = 0;
};

// Validating constructors. Throw std::invalid_argument naming the violated
// invariant; qubit counts outside [1,5] are rejected.
PureState make_pure_state(int n_qubits, Eigen::VectorXcd amplitudes);
DensityMatrix make_density_matrix(int n_qubits, Eigen::MatrixXcd matrix);

DensityMatrix projector(const PureState& psi);

// Hermitian eigendecomposition, eigenvalues sorted descending. Each
// eigenvector is rescaled so its largest-modulus amplitude is real positive
// (first such index on ties), which makes the output deterministic.
EigenDecomposition eigendecompose(const DensityMatrix& rho,
                                  double rank_tolerance = 1e-10);

// Bloch coordinates of a state or operator supported on span{psi0, psi1}.
// Throws std::out_of_range if the argument leaks outside the span by more
// than 1e-10, std::invalid_argument if (psi0, psi1) are not orthonormal.
BlochPoint bloch_coordinates(const PureState& chi, const PureState& psi0,
                             const PureState& psi1);
BlochPoint bloch_coordinates(const DensityMatrix& rho, const PureState& psi0,
                             const PureState& psi1);

// Inverse map: the operator (I + x sx + y sy + z sz)/2 on span{psi0, psi1}.
// Requires x^2 + y^2 + z^2 <= 1 (+1e-12 slack).
DensityMatrix density_from_bloch(const BlochPoint& point, const PureState& psi0,
                                 const PureState& psi1);

// Built-in states.
PureState ghz_state();    // (|000> + |111>)/sqrt(2)
PureState w_state();      // (|100> + |010> + |001>)/sqrt(3)
PureState bell_state();   // (|00> + |11>)/sqrt(2)
PureState example_state_I();   // (2|00> + |11>)/sqrt(5)
PureState example_state_II();  // (|00> + |01> - 2|11>)/sqrt(6)

// Lookup by CLI name: ghz, w, bell, paper-I, paper-II.
std::optional<PureState> builtin_state(std::string_view name);

}  // namespace tangleroof
