#include "tangleroof/zeropoly.hpp"

#include <algorithm>
#include <cmath>

namespace tangleroof {

namespace {

constexpr double kMergeTol = 1e-8;    // duplicate roots
constexpr double kClipTol = 1e-10;    // half-space membership along the axis
constexpr double kGeomTol = 1e-9;     // affine-dimension and parallelism decisions
constexpr double kAxisDistTol = 1e-8; // point/line intersections in the Bloch ball

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

Vec3 to_vec(const BlochPoint& b) { return Vec3(b.x, b.y, b.z); }

// Axis point at family weight p.
Vec3 axis_at(double p) { return Vec3(0, 0, 2.0 * p - 1.0); }

struct PInterval {
  double lo = 0, hi = 1;
  bool empty = false;
};

void clip_halfspace(PInterval& iv, double f_lo, double f_hi) {
  // Keep {p : f(p) <= kClipTol} where f is affine with f(lo)=f_lo, f(hi)=f_hi.
  if (iv.empty) return;
  const bool in_lo = f_lo <= kClipTol;
  const bool in_hi = f_hi <= kClipTol;
  if (in_lo && in_hi) return;
  if (!in_lo && !in_hi) {
    iv.empty = true;
    return;
  }
  const double t = (kClipTol - f_lo) / (f_hi - f_lo);
  const double p_cross = iv.lo + t * (iv.hi - iv.lo);
  if (in_lo)
    iv.hi = std::min(iv.hi, p_cross);
  else
    iv.lo = std::max(iv.lo, p_cross);
}

std::vector<ZeroInterval> pack(const PInterval& iv) {
  if (iv.empty || iv.lo > iv.hi + 1e-15) return {};
  return {ZeroInterval{std::clamp(iv.lo, 0.0, 1.0), std::clamp(iv.hi, 0.0, 1.0)}};
}

std::vector<ZeroInterval> point_hit(double p) {
  if (p < -1e-12 || p > 1.0 + 1e-12) return {};
  const double c = std::clamp(p, 0.0, 1.0);
  return {ZeroInterval{c, c}};
}

// 2D convex hull, counterclockwise (monotone chain).
std::vector<Vec2> hull_2d(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) { return (a - b).norm() < 1e-14; }),
            pts.end());
  if (pts.size() <= 2) return pts;
  auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Vec2> h;
  for (const auto& p : pts) {  // lower chain
    while (h.size() >= 2 && cross(h[h.size() - 2], h.back(), p) <= 0) h.pop_back();
    h.push_back(p);
  }
  const size_t lower = h.size() + 1;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {  // upper chain
    while (h.size() >= lower && cross(h[h.size() - 2], h.back(), *it) <= 0) h.pop_back();
    h.push_back(*it);
  }
  h.pop_back();
  return h;
}

// Clip the 2D segment a + p*(b - a), p in [0,1], against a convex CCW polygon
// (or its degenerate point/segment forms).
std::vector<ZeroInterval> clip_segment_polygon(const Vec2& a, const Vec2& b,
                                               const std::vector<Vec2>& poly) {
  if (poly.empty()) return {};
  if (poly.size() == 1) {
    const Vec2 d = b - a;
    const double len2 = d.squaredNorm();
    const double p = len2 > 0 ? std::clamp((poly[0] - a).dot(d) / len2, 0.0, 1.0) : 0.0;
    if ((a + p * d - poly[0]).norm() <= kAxisDistTol) return point_hit(p);
    return {};
  }
  if (poly.size() == 2) {
    // Collinear corners: a slab around the supporting line plus the endpoint slab.
    const Vec2 dir = (poly[1] - poly[0]).normalized();
    const Vec2 n(-dir.y(), dir.x());
    PInterval iv;
    const double fa = n.dot(a - poly[0]), fb = n.dot(b - poly[0]);
    clip_halfspace(iv, fa - kAxisDistTol, fb - kAxisDistTol);
    clip_halfspace(iv, -fa - kAxisDistTol, -fb - kAxisDistTol);
    const double ta = dir.dot(a - poly[0]), tb = dir.dot(b - poly[0]);
    const double tlen = dir.dot(poly[1] - poly[0]);
    clip_halfspace(iv, -ta, -tb);
    clip_halfspace(iv, ta - tlen, tb - tlen);
    return pack(iv);
  }
  PInterval iv;
  for (size_t i = 0; i < poly.size() && !iv.empty; ++i) {
    const Vec2& p0 = poly[i];
    const Vec2 e = poly[(i + 1) % poly.size()] - p0;
    const Vec2 n(e.y(), -e.x());  // outward for CCW
    clip_halfspace(iv, n.dot(a - p0) / n.norm(), n.dot(b - p0) / n.norm());
  }
  return pack(iv);
}

}  // namespace

ZeroPolytope zero_polytope(const RankTwoPencil& pencil, const TangleDescriptor& desc) {
  PencilPolynomial poly = extract_polynomial(pencil, desc);
  ZeroPolytope out;
  if (poly.identically_zero) {
    out.whole_pencil_zero = true;
    return out;
  }

  std::vector<cd> roots = polynomial_roots(poly);
  std::vector<std::pair<cd, int>> merged;  // root, multiplicity
  for (const cd& r : roots) {
    bool absorbed = false;
    for (auto& [root, mult] : merged) {
      if (std::abs(root - r) < kMergeTol) {
        root = (root * double(mult) + r) / double(mult + 1);
        ++mult;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.emplace_back(r, 1);
  }
  std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) {
    const QPhi qa = q_phi_of(a.first), qb = q_phi_of(b.first);
    return qa.phi != qb.phi ? qa.phi < qb.phi : qa.q > qb.q;
  });

  for (const auto& [root, mult] : merged) {
    ZeroCorner corner;
    corner.z = root;
    const QPhi coords = q_phi_of(root);
    corner.q = coords.q;
    corner.phi = coords.phi;
    corner.multiplicity = mult;
    corner.state = state_at(pencil, corner.q, corner.phi);
    corner.bloch = bloch_coordinates(corner.state, pencil.psi0, pencil.psi1);
    out.corners.push_back(std::move(corner));
  }

  if (poly.infinity_multiplicity > 0) {
    // All infinity zeros collapse to the single corner |psi1><psi1|.
    ZeroCorner corner;
    corner.z = std::nullopt;
    corner.q = 0.0;
    corner.phi = 0.0;
    corner.multiplicity = poly.infinity_multiplicity;
    corner.state = pencil.psi1;
    corner.bloch = BlochPoint{0, 0, -1};
    out.corners.push_back(std::move(corner));
  }
  return out;
}

std::vector<ZeroInterval> intersect_family(const ZeroPolytope& polytope) {
  if (polytope.whole_pencil_zero) return {ZeroInterval{0.0, 1.0}};
  if (polytope.corners.empty()) return {};

  std::vector<Vec3> pts;
  pts.reserve(polytope.corners.size());
  for (const auto& c : polytope.corners) pts.push_back(to_vec(c.bloch));

  Vec3 centroid = Vec3::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= double(pts.size());
  Eigen::MatrixXd centered(pts.size(), 3);
  for (size_t i = 0; i < pts.size(); ++i) centered.row(i) = (pts[i] - centroid).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullV);
  int dim = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > kGeomTol) ++dim;

  const Vec3 a0 = axis_at(0.0), a1 = axis_at(1.0);

  if (dim == 0) {
    if (std::hypot(centroid.x(), centroid.y()) > kAxisDistTol) return {};
    return point_hit((centroid.z() + 1.0) / 2.0);
  }

  if (dim == 1) {
    const Vec3 u = svd.matrixV().col(0);
    double t_min = 0, t_max = 0;
    for (const auto& p : pts) {
      const double t = (p - centroid).dot(u);
      t_min = std::min(t_min, t);
      t_max = std::max(t_max, t);
    }
    const double uz = u.z();
    if (std::hypot(u.x(), u.y()) <= kGeomTol) {
      // Corner segment parallel to the axis: overlap or nothing.
      if (std::hypot(centroid.x(), centroid.y()) > kAxisDistTol) return {};
      double w_lo = centroid.z() + t_min * uz, w_hi = centroid.z() + t_max * uz;
      if (w_lo > w_hi) std::swap(w_lo, w_hi);
      PInterval iv;
      iv.lo = std::max(0.0, (w_lo + 1.0) / 2.0);
      iv.hi = std::min(1.0, (w_hi + 1.0) / 2.0);
      iv.empty = iv.lo > iv.hi;
      return pack(iv);
    }
    // Closest approach between the axis {(0,0,w)} and the line {c + t u}.
    const double cu = centroid.dot(u);
    const double w = (centroid.z() - cu * uz) / (1.0 - uz * uz);
    const double t = w * uz - cu;
    const Vec3 gap = Vec3(0, 0, w) - (centroid + t * u);
    if (gap.norm() > kAxisDistTol) return {};
    if (t < t_min - kAxisDistTol || t > t_max + kAxisDistTol) return {};
    return point_hit((w + 1.0) / 2.0);
  }

  if (dim == 2) {
    const Vec3 u1 = svd.matrixV().col(0);
    const Vec3 u2 = svd.matrixV().col(1);
    const Vec3 n = svd.matrixV().col(2);
    std::vector<Vec2> proj;
    proj.reserve(pts.size());
    for (const auto& p : pts)
      proj.emplace_back((p - centroid).dot(u1), (p - centroid).dot(u2));
    const std::vector<Vec2> poly = hull_2d(proj);

    if (std::abs(n.z()) <= kGeomTol) {
      // Axis parallel to the corner plane: in-plane clipping or nothing.
      if (std::abs(n.dot(centroid)) > kAxisDistTol) return {};
      const Vec2 a2((a0 - centroid).dot(u1), (a0 - centroid).dot(u2));
      const Vec2 b2((a1 - centroid).dot(u1), (a1 - centroid).dot(u2));
      return clip_segment_polygon(a2, b2, poly);
    }
    // Transversal crossing at a single height.
    const double w = n.dot(centroid) / n.z();
    if (std::abs(w) > 1.0 + 1e-12) return {};
    const Vec3 hit(0, 0, w);
    const Vec2 h2((hit - centroid).dot(u1), (hit - centroid).dot(u2));
    auto single = clip_segment_polygon(h2, h2, poly);
    if (single.empty()) return {};
    return point_hit((w + 1.0) / 2.0);
  }

  // Full-dimensional hull: clip the axis against every supporting facet plane.
  PInterval iv;
  const size_t k = pts.size();
  for (size_t i = 0; i < k && !iv.empty; ++i)
    for (size_t j = i + 1; j < k && !iv.empty; ++j)
      for (size_t l = j + 1; l < k && !iv.empty; ++l) {
        Vec3 n = (pts[j] - pts[i]).cross(pts[l] - pts[i]);
        if (n.norm() < 1e-12) continue;
        n.normalize();
        double lo = 0, hi = 0;
        for (size_t m = 0; m < k; ++m) {
          const double d = n.dot(pts[m] - pts[i]);
          lo = std::min(lo, d);
          hi = std::max(hi, d);
        }
        const bool lower_support = lo >= -kGeomTol;
        const bool upper_support = hi <= kGeomTol;
        if (!lower_support && !upper_support) continue;
        const Vec3 inward = lower_support ? n : Vec3(-n);
        clip_halfspace(iv, -inward.dot(a0 - pts[i]), -inward.dot(a1 - pts[i]));
      }
  return pack(iv);
}

}  // namespace tangleroof
