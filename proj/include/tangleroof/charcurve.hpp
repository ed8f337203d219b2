#pragma once

#include <optional>
#include <vector>

#include "tangleroof/pencil.hpp"

// Characteristic curve of a pencil: for each mixing weight q, the tangle
// minimized over the relative phase. Its lower convex envelope evaluated at
// the eigenvalue weight is a certified lower bound on the roof extension.

namespace tangleroof {

struct CurveSample {
  double q = 0, tau_tilde = 0, phi_star = 0;
};

struct CharacteristicCurve {
  std::vector<CurveSample> samples;  // ascending q, endpoints included
  RankTwoPencil pencil;
  TangleDescriptor descriptor;
  int phase_grid = 720;
};

struct PhaseMin {
  double value = 0, phi = 0;
};

// min over phi of tangle(state_at(q, phi)): coarse scan over phase_grid
// equally spaced phases, then golden-section refinement to a 1e-12 window.
PhaseMin tau_tilde_at(const RankTwoPencil& pencil, const TangleDescriptor& desc,
                      double q, int phase_grid = 720);

CharacteristicCurve characteristic_curve(const RankTwoPencil& pencil,
                                         const TangleDescriptor& desc,
                                         int grid_n = 2001, int phase_grid = 720);

struct HullVertex {
  int sample_index = 0;
  double q = 0, value = 0;
};

struct ContactRange {
  double q_lo = 0, q_hi = 0;
};

struct ConvexCurve {
  std::vector<HullVertex> vertices;   // lower convex hull of the samples
  std::vector<double> slopes;         // one per segment, nondecreasing
  std::vector<ContactRange> contacts; // where the envelope touches the curve
};

ConvexCurve convex_hull_curve(const CharacteristicCurve& curve);

// Envelope value at p (linear interpolation between hull vertices).
double lower_bound(const ConvexCurve& hull, double p);

enum class GapSide { left, right };

// Refines the tangency abscissa of the affine gap adjoining q=0 (left) or
// q=1 (right) beyond grid resolution: golden-section search on the slope of
// the supporting line through the gap's endpoint vertex, evaluating the curve
// pointwise. Returns nullopt when that side has no affine gap.
std::optional<double> refine_tangency(const CharacteristicCurve& curve, GapSide side,
                                      double window = 1e-9);

// Rightmost abscissa where the curve switches from convex to concave, located
// by bisection on the sign of a central second difference. Returns nullopt
// for curves without such a switch.
std::optional<double> nonconvexity_onset(const CharacteristicCurve& curve);

}  // namespace tangleroof
