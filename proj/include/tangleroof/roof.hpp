#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tangleroof/charcurve.hpp"
#include "tangleroof/zeropoly.hpp"

// Convex-roof machinery: ensemble decompositions of a density matrix, the
// averaged tangle they carry, certified roofs for the GHZ/W family, the
// closed-form two-qubit concurrence, and a variational upper-bound search
// over mixing isometries.

namespace tangleroof {

struct Decomposition {
  std::vector<double> weights;     // positive, sum 1
  std::vector<PureState> states;   // normalized, same length
};

// m x r matrix with orthonormal columns (validated within 1e-10).
struct MixingIsometry {
  Eigen::MatrixXcd u;
};

MixingIsometry make_mixing_isometry(Eigen::MatrixXcd u);

// Ensemble |chi_l> = sum_j U_lj sqrt(p_j) |psi_j> over the first r eigenpairs;
// members with weight below 1e-14 are dropped.
Decomposition mix(const EigenDecomposition& eig, const MixingIsometry& isometry);

DensityMatrix reconstruct(const Decomposition& dec);

double average_tangle(const Decomposition& dec, const TangleDescriptor& desc);

enum class CertificateStatus { certified, bounded };

struct RoofCertificate {
  double p = 0;
  double lower = 0, upper = 0, gap = 0;
  CertificateStatus status = CertificateStatus::bounded;
  Decomposition decomposition;  // achieves the upper bound
};

// Roof of the three-tangle on rho(p) = p|GHZ><GHZ| + (1-p)|W><W|, computed
// regime by regime: corner mixtures below the zero-polytope boundary, the
// symmetric three-state ensemble in the middle, and a blend with the pure
// GHZ projector above the tangency weight. Lower bound and decomposition
// average coincide, so the certificate is tight.
RoofCertificate ghz_w_roof(double p);

// Closed-form two-qubit concurrence max(0, l1 - l2 - l3 - l4).
double wootters_concurrence(const DensityMatrix& rho);

struct UpperBoundResult {
  double value = 0;
  Decomposition decomposition;
};

// Coordinate descent over mixing isometries: seeded random restarts, each
// refined by sweeps of two-row Givens rotations until the averaged tangle
// stops improving. m = 0 picks the descriptor degree as the ensemble length.
UpperBoundResult upper_bound_search(const EigenDecomposition& eig,
                                    const TangleDescriptor& desc, int m = 0,
                                    int restarts = 20, std::uint64_t seed = 42);

// Convex weights on polytope corners reproducing rho(p), if p lies inside the
// zero polytope; the resulting ensemble certifies a vanishing roof.
std::optional<Decomposition> corner_decomposition(const ZeroPolytope& polytope,
                                                  const RankTwoPencil& pencil,
                                                  double p);

}  // namespace tangleroof
