#pragma once

#include <optional>

#include "tangleroof/states.hpp"
#include "tangleroof/tangles.hpp"

// The family of pure states psi0 + z*psi1 spanned by the two eigenstates of a
// rank-2 density matrix, and the tangle restricted to it, which is a degree-h
// polynomial in z. The normalized member at mixing weight q and relative
// phase phi is sqrt(q)*psi0 + sqrt(1-q)*e^{i phi}*psi1, which corresponds to
// z = sqrt((1-q)/q) e^{i phi}; q = 0 is the point z = infinity.

namespace tangleroof {

struct RankTwoPencil {
  PureState psi0, psi1;  // orthonormal
  double p = 1.0;        // weight of psi0 in rho = p|psi0><psi0| + (1-p)|psi1><psi1|
};

RankTwoPencil make_pencil(PureState psi0, PureState psi1, double p);

// Builds the pencil from the two leading eigenstates. Throws
// std::invalid_argument ("unsupported rank") unless the rank is exactly 2.
RankTwoPencil pencil_from_density(const DensityMatrix& rho);

// Normalized pencil member; q must lie in [0,1] (std::domain_error otherwise).
PureState state_at(const RankTwoPencil& pencil, double q, double phi);

// Coordinate changes; nullopt encodes z = infinity.
std::optional<cd> z_of(double q, double phi);
struct QPhi {
  double q = 0, phi = 0;  // phi normalized to [0, 2*pi)
};
QPhi q_phi_of(const std::optional<cd>& z);

struct PencilPolynomial {
  Eigen::VectorXcd coefficients;  // c_0 ... c_h of pre(psi0 + z*psi1)
  int degree_h = 0;
  // Leading coefficients below 1e-10 * max|c_k|; each counts as a zero at
  // z = infinity of the projective polynomial.
  int infinity_multiplicity = 0;
  // All coefficients negligible: the tangle vanishes on the whole pencil.
  bool identically_zero = false;
};

// Coefficients via evaluation at the (h+1)-th roots of unity and an inverse
// discrete Fourier transform, which is exact for polynomials of degree <= h.
PencilPolynomial extract_polynomial(const RankTwoPencil& pencil,
                                    const TangleDescriptor& desc);

cd evaluate(const PencilPolynomial& poly, cd z);

// Finite roots of the deflated polynomial: companion-matrix eigenvalues
// followed by one Newton polish step each.
std::vector<cd> polynomial_roots(const PencilPolynomial& poly);

}  // namespace tangleroof
