#include "tangleroof/states.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tangleroof {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kEigenvalueFloor = -1e-10;
constexpr double kOrthoTol = 1e-10;
constexpr double kSupportTol = 1e-10;

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 5)
    throw std::invalid_argument("qubit count must be between 1 and 5, got " +
                                std::to_string(n_qubits));
}

void check_orthonormal_pair(const PureState& psi0, const PureState& psi1) {
  if (psi0.n_qubits != psi1.n_qubits)
    throw std::invalid_argument("basis states act on different qubit counts");
  const cd overlap = psi0.amplitudes.dot(psi1.amplitudes);
  if (std::abs(overlap) > kOrthoTol)
    throw std::invalid_argument("basis states are not orthogonal: |<psi0|psi1>| = " +
                                std::to_string(std::abs(overlap)));
}

// 2x2 restriction of rho to span{psi0, psi1} plus the weight left outside.
struct Restriction {
  Eigen::Matrix2cd m;
  double leak = 0;
};

Restriction restrict_to_span(const Eigen::MatrixXcd& rho, const PureState& psi0,
                             const PureState& psi1) {
  Restriction r;
  const Eigen::VectorXcd& a = psi0.amplitudes;
  const Eigen::VectorXcd& b = psi1.amplitudes;
  r.m(0, 0) = a.dot(rho * a);
  r.m(0, 1) = a.dot(rho * b);
  r.m(1, 0) = b.dot(rho * a);
  r.m(1, 1) = b.dot(rho * b);
  // Leak: how much of rho the projector onto the span fails to reproduce.
  Eigen::MatrixXcd proj = a * a.adjoint() + b * b.adjoint();
  r.leak = (rho - proj * rho * proj).cwiseAbs().maxCoeff();
  return r;
}

BlochPoint bloch_from_restriction(const Eigen::Matrix2cd& m) {
  BlochPoint pt;
  pt.x = 2.0 * m(0, 1).real();
  pt.y = -2.0 * m(0, 1).imag();
  pt.z = (m(0, 0) - m(1, 1)).real();
  return pt;
}

PureState basis_vector_state(int n_qubits, std::initializer_list<std::pair<int, cd>> entries) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(1 << n_qubits);
  for (const auto& [idx, val] : entries) amps[idx] = val;
  amps.normalize();
  return PureState{n_qubits, std::move(amps)};
}

}  // namespace

PureState make_pure_state(int n_qubits, Eigen::VectorXcd amplitudes) {
  check_qubit_count(n_qubits);
  const auto dim = Eigen::Index(1) << n_qubits;
  if (amplitudes.size() != dim)
    throw std::invalid_argument("amplitude vector has length " +
                                std::to_string(amplitudes.size()) + ", expected " +
                                std::to_string(dim));
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > kNormTol)
    throw std::invalid_argument("state is not normalized: |norm - 1| = " +
                                std::to_string(std::abs(norm - 1.0)));
  return PureState{n_qubits, std::move(amplitudes)};
}

DensityMatrix make_density_matrix(int n_qubits, Eigen::MatrixXcd matrix) {
  check_qubit_count(n_qubits);
  const auto dim = Eigen::Index(1) << n_qubits;
  if (matrix.rows() != dim || matrix.cols() != dim)
    throw std::invalid_argument("density matrix must be " + std::to_string(dim) +
                                "x" + std::to_string(dim));
  const double herm_err = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > kHermitianTol)
    throw std::invalid_argument("density matrix is not Hermitian: max deviation " +
                                std::to_string(herm_err));
  const double trace_err = std::abs(matrix.trace() - cd(1.0, 0.0));
  if (trace_err > kTraceTol)
    throw std::invalid_argument("density matrix trace differs from 1 by " +
                                std::to_string(trace_err));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < kEigenvalueFloor)
    throw std::invalid_argument("density matrix has negative eigenvalue " +
                                std::to_string(solver.eigenvalues().minCoeff()));
  return DensityMatrix{n_qubits, std::move(matrix)};
}

DensityMatrix projector(const PureState& psi) {
  DensityMatrix rho;
  rho.n_qubits = psi.n_qubits;
  rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
  return rho;
}

EigenDecomposition eigendecompose(const DensityMatrix& rho, double rank_tolerance) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");

  const auto dim = rho.matrix.rows();
  EigenDecomposition out;
  out.eigenvalues.resize(dim);
  out.eigenstates.reserve(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Eigen::Index src = dim - 1 - i;  // Eigen sorts ascending
    out.eigenvalues[i] = solver.eigenvalues()[src];
    Eigen::VectorXcd v = solver.eigenvectors().col(src);
    // Fix the global phase: largest-modulus amplitude real positive.
    Eigen::Index k = 0;
    for (Eigen::Index j = 1; j < dim; ++j)
      if (std::abs(v[j]) > std::abs(v[k])) k = j;
    if (std::abs(v[k]) > 0) v *= std::conj(v[k]) / std::abs(v[k]);
    v.normalize();
    out.eigenstates.push_back(PureState{rho.n_qubits, std::move(v)});
  }
  const double cutoff = rank_tolerance * std::max(out.eigenvalues[0], 0.0);
  out.rank = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (out.eigenvalues[i] > cutoff) ++out.rank;
  return out;
}

BlochPoint bloch_coordinates(const PureState& chi, const PureState& psi0,
                             const PureState& psi1) {
  check_orthonormal_pair(psi0, psi1);
  if (chi.n_qubits != psi0.n_qubits)
    throw std::invalid_argument("state acts on a different qubit count than the basis");
  const cd c0 = psi0.amplitudes.dot(chi.amplitudes);
  const cd c1 = psi1.amplitudes.dot(chi.amplitudes);
  const double leak = std::abs(1.0 - std::norm(c0) - std::norm(c1));
  if (leak > kSupportTol)
    throw std::out_of_range("state leaks outside span{psi0, psi1} by " +
                            std::to_string(leak));
  Eigen::Matrix2cd m;
  m(0, 0) = std::norm(c0);
  m(0, 1) = c0 * std::conj(c1);
  m(1, 0) = std::conj(m(0, 1));
  m(1, 1) = std::norm(c1);
  return bloch_from_restriction(m);
}

BlochPoint bloch_coordinates(const DensityMatrix& rho, const PureState& psi0,
                             const PureState& psi1) {
  check_orthonormal_pair(psi0, psi1);
  if (rho.n_qubits != psi0.n_qubits)
    throw std::invalid_argument("operator acts on a different qubit count than the basis");
  Restriction r = restrict_to_span(rho.matrix, psi0, psi1);
  if (r.leak > kSupportTol)
    throw std::out_of_range("operator leaks outside span{psi0, psi1} by " +
                            std::to_string(r.leak));
  return bloch_from_restriction(r.m);
}

DensityMatrix density_from_bloch(const BlochPoint& point, const PureState& psi0,
                                 const PureState& psi1) {
  check_orthonormal_pair(psi0, psi1);
  const double r2 = point.x * point.x + point.y * point.y + point.z * point.z;
  if (r2 > 1.0 + 1e-12)
    throw std::invalid_argument("Bloch point lies outside the unit ball: |r|^2 = " +
                                std::to_string(r2));
  const Eigen::VectorXcd& a = psi0.amplitudes;
  const Eigen::VectorXcd& b = psi1.amplitudes;
  const cd off(point.x / 2.0, -point.y / 2.0);  // <psi0| rho |psi1>
  Eigen::MatrixXcd m = (1.0 + point.z) / 2.0 * (a * a.adjoint()) +
                       (1.0 - point.z) / 2.0 * (b * b.adjoint()) +
                       off * (a * b.adjoint()) + std::conj(off) * (b * a.adjoint());
  return make_density_matrix(psi0.n_qubits, std::move(m));
}

PureState ghz_state() { return basis_vector_state(3, {{0, 1.0}, {7, 1.0}}); }

PureState w_state() { return basis_vector_state(3, {{4, 1.0}, {2, 1.0}, {1, 1.0}}); }

PureState bell_state() { return basis_vector_state(2, {{0, 1.0}, {3, 1.0}}); }

PureState example_state_I() { return basis_vector_state(2, {{0, 2.0}, {3, 1.0}}); }

PureState example_state_II() {
  return basis_vector_state(2, {{0, 1.0}, {1, 1.0}, {3, -2.0}});
}

std::optional<PureState> builtin_state(std::string_view name) {
  if (name == "ghz") return ghz_state();
  if (name == "w") return w_state();
  if (name == "bell") return bell_state();
  if (name == "paper-I") return example_state_I();
  if (name == "paper-II") return example_state_II();
  return std::nullopt;
}

}  // namespace tangleroof
