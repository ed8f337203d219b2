#pragma once

#include <optional>
#include <vector>

#include "tangleroof/pencil.hpp"

// Zero polytope of a rank-2 density matrix: the convex hull, inside the Bloch
// ball of span{psi0, psi1}, of the pencil states where the tangle vanishes.
// It contains exactly the zero-tangle mixed states supported on the range, so
// intersecting it with the segment rho(p) = p|psi0><psi0| + (1-p)|psi1><psi1|
// (the z-axis of the ball) yields the p-range where the roof extension is 0.

namespace tangleroof {

struct ZeroCorner {
  std::optional<cd> z;  // root of the pencil polynomial; nullopt = infinity
  double q = 0, phi = 0;
  int multiplicity = 1;  // merged roots within 1e-8
  PureState state;
  BlochPoint bloch;
};

struct ZeroPolytope {
  std::vector<ZeroCorner> corners;  // sorted by phase, infinity corner last
  // The polynomial vanished identically: every pencil state has zero tangle.
  bool whole_pencil_zero = false;
};

ZeroPolytope zero_polytope(const RankTwoPencil& pencil, const TangleDescriptor& desc);

struct ZeroInterval {
  double p_lo = 0, p_hi = 0;  // p_lo == p_hi for a point intersection
};

// All p in [0,1] with rho(p) inside the polytope. Convexity makes the result
// at most one interval; an empty vector means the family never touches it.
std::vector<ZeroInterval> intersect_family(const ZeroPolytope& polytope);

}  // namespace tangleroof
