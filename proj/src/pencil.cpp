#include "tangleroof/pencil.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tangleroof {

namespace {

constexpr double kOrthoTol = 1e-10;
constexpr double kInfinityCoeffTol = 1e-10;  // relative to max |c_k|
constexpr double kIdenticallyZeroTol = 1e-12;

double wrap_phase(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, two_pi);
  if (w < 0) w += two_pi;
  return w;
}

}  // namespace

RankTwoPencil make_pencil(PureState psi0, PureState psi1, double p) {
  if (psi0.n_qubits != psi1.n_qubits)
    throw std::invalid_argument("pencil states act on different qubit counts");
  if (p < 0.0 || p > 1.0)
    throw std::domain_error("mixing weight p must lie in [0,1], got " + std::to_string(p));
  const double overlap = std::abs(psi0.amplitudes.dot(psi1.amplitudes));
  if (overlap > kOrthoTol)
    throw std::invalid_argument("pencil states are not orthogonal: |<psi0|psi1>| = " +
                                std::to_string(overlap));
  return RankTwoPencil{std::move(psi0), std::move(psi1), p};
}

RankTwoPencil pencil_from_density(const DensityMatrix& rho) {
  EigenDecomposition eig = eigendecompose(rho);
  if (eig.rank != 2)
    throw std::invalid_argument("unsupported rank: pencil needs rank 2, got " +
                                std::to_string(eig.rank));
  return make_pencil(eig.eigenstates[0], eig.eigenstates[1], eig.eigenvalues[0]);
}

PureState state_at(const RankTwoPencil& pencil, double q, double phi) {
  if (q < 0.0 || q > 1.0)
    throw std::domain_error("mixing weight q must lie in [0,1], got " + std::to_string(q));
  const cd phase = std::polar(1.0, phi);
  PureState out;
  out.n_qubits = pencil.psi0.n_qubits;
  out.amplitudes =
      std::sqrt(q) * pencil.psi0.amplitudes + std::sqrt(1.0 - q) * phase * pencil.psi1.amplitudes;
  return out;
}

std::optional<cd> z_of(double q, double phi) {
  if (q < 0.0 || q > 1.0)
    throw std::domain_error("mixing weight q must lie in [0,1], got " + std::to_string(q));
  if (q == 0.0) return std::nullopt;
  return std::polar(std::sqrt((1.0 - q) / q), phi);
}

QPhi q_phi_of(const std::optional<cd>& z) {
  if (!z) return QPhi{0.0, 0.0};
  const double mod2 = std::norm(*z);
  QPhi out;
  out.q = 1.0 / (1.0 + mod2);
  out.phi = mod2 == 0.0 ? 0.0 : wrap_phase(std::arg(*z));
  return out;
}

PencilPolynomial extract_polynomial(const RankTwoPencil& pencil,
                                    const TangleDescriptor& desc) {
  if (desc.n_qubits != pencil.psi0.n_qubits)
    throw std::invalid_argument("descriptor '" + desc.name + "' expects " +
                                std::to_string(desc.n_qubits) + " qubits, pencil has " +
                                std::to_string(pencil.psi0.n_qubits));
  const int h = desc.degree_h;
  const int n = h + 1;

  // Sample pre(psi0 + w^j psi1) at the n-th roots of unity, then invert the DFT.
  Eigen::VectorXcd values(n);
  for (int j = 0; j < n; ++j) {
    const cd wj = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
    values[j] = desc.pre_modulus(pencil.psi0.amplitudes + wj * pencil.psi1.amplitudes);
  }
  PencilPolynomial poly;
  poly.degree_h = h;
  poly.coefficients.resize(n);
  for (int k = 0; k < n; ++k) {
    cd sum = 0.0;
    for (int j = 0; j < n; ++j)
      sum += values[j] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / n);
    poly.coefficients[k] = sum / double(n);
  }

  const double max_coeff = poly.coefficients.cwiseAbs().maxCoeff();
  if (max_coeff < kIdenticallyZeroTol) {
    poly.identically_zero = true;
    poly.infinity_multiplicity = n;
    return poly;
  }
  const double floor = kInfinityCoeffTol * max_coeff;
  int inf_mult = 0;
  for (int k = h; k >= 0 && std::abs(poly.coefficients[k]) < floor; --k) ++inf_mult;
  poly.infinity_multiplicity = inf_mult;
  return poly;
}

cd evaluate(const PencilPolynomial& poly, cd z) {
  cd acc = 0.0;
  for (int k = poly.degree_h; k >= 0; --k) acc = acc * z + poly.coefficients[k];
  return acc;
}

std::vector<cd> polynomial_roots(const PencilPolynomial& poly) {
  if (poly.identically_zero)
    throw std::invalid_argument("polynomial vanishes identically; it has no isolated roots");
  const int deg = poly.degree_h - poly.infinity_multiplicity;
  if (deg <= 0) return {};

  // Trailing zeros would make the companion matrix singular for no reason;
  // deflate them as explicit roots at z = 0.
  const double floor =
      kInfinityCoeffTol * poly.coefficients.cwiseAbs().maxCoeff();
  int zero_mult = 0;
  while (zero_mult < deg && std::abs(poly.coefficients[zero_mult]) < floor) ++zero_mult;

  std::vector<cd> roots(zero_mult, cd(0.0, 0.0));
  const int d = deg - zero_mult;
  if (d > 0) {
    const cd lead = poly.coefficients[deg];
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i)
      companion(i, d - 1) = -poly.coefficients[zero_mult + i] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("companion-matrix eigensolver failed to converge");

    for (int i = 0; i < d; ++i) {
      cd z = solver.eigenvalues()[i];
      // One Newton step against the full polynomial.
      cd f = 0.0, df = 0.0;
      for (int k = poly.degree_h; k >= 0; --k) {
        df = df * z + f;
        f = f * z + poly.coefficients[k];
      }
      if (std::abs(df) > 0) z -= f / df;
      roots.push_back(z);
    }
  }
  return roots;
}

}  // namespace tangleroof
