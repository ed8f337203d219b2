#include "tangleroof/charcurve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "minimize.hpp"
#include "parallel.hpp"

namespace tangleroof {

using detail::golden_min;

namespace {

constexpr double kPhaseWindow = 1e-12;
constexpr double kGapExcessTol = 1e-9;  // interior excess that makes a segment a gap

double wrap_phase(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, two_pi);
  if (w < 0) w += two_pi;
  return w;
}

}  // namespace

PhaseMin tau_tilde_at(const RankTwoPencil& pencil, const TangleDescriptor& desc,
                      double q, int phase_grid) {
  if (phase_grid < 3)
    throw std::invalid_argument("phase grid must have at least 3 points");
  auto tau = [&](double phi) { return tangle(desc, state_at(pencil, q, phi)); };

  const double step = 2.0 * std::numbers::pi / phase_grid;
  int best = 0;
  double best_val = tau(0.0);
  for (int j = 1; j < phase_grid; ++j) {
    const double v = tau(j * step);
    if (v < best_val) {
      best_val = v;
      best = j;
    }
  }
  auto [phi, value] = golden_min(tau, (best - 1) * step, (best + 1) * step, kPhaseWindow);
  if (best_val < value) {  // coarse point was already the better minimum
    phi = best * step;
    value = best_val;
  }
  return PhaseMin{value, wrap_phase(phi)};
}

CharacteristicCurve characteristic_curve(const RankTwoPencil& pencil,
                                         const TangleDescriptor& desc, int grid_n,
                                         int phase_grid) {
  if (grid_n < 2) throw std::invalid_argument("curve grid must have at least 2 points");
  CharacteristicCurve curve;
  curve.pencil = pencil;
  curve.descriptor = desc;
  curve.phase_grid = phase_grid;
  curve.samples.resize(grid_n);
  detail::parallel_for(grid_n, [&](int i) {
    const double q = double(i) / double(grid_n - 1);
    const PhaseMin m = tau_tilde_at(pencil, desc, q, phase_grid);
    curve.samples[i] = CurveSample{q, m.value, m.phi};
  });
  return curve;
}

ConvexCurve convex_hull_curve(const CharacteristicCurve& curve) {
  const auto& s = curve.samples;
  const int n = int(s.size());
  std::vector<int> hull;  // monotone chain, lower hull only
  for (int i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2], b = hull.back();
      const double cross = (s[b].q - s[a].q) * (s[i].tau_tilde - s[a].tau_tilde) -
                           (s[b].tau_tilde - s[a].tau_tilde) * (s[i].q - s[a].q);
      if (cross <= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }

  ConvexCurve out;
  out.vertices.reserve(hull.size());
  for (int idx : hull) out.vertices.push_back(HullVertex{idx, s[idx].q, s[idx].tau_tilde});
  for (size_t k = 0; k + 1 < out.vertices.size(); ++k) {
    const auto& a = out.vertices[k];
    const auto& b = out.vertices[k + 1];
    out.slopes.push_back((b.value - a.value) / (b.q - a.q));
  }
  // Contact ranges: maximal runs of hull vertices at consecutive sample indices.
  size_t k = 0;
  while (k < out.vertices.size()) {
    size_t e = k;
    while (e + 1 < out.vertices.size() &&
           out.vertices[e + 1].sample_index == out.vertices[e].sample_index + 1)
      ++e;
    out.contacts.push_back(ContactRange{out.vertices[k].q, out.vertices[e].q});
    k = e + 1;
  }
  return out;
}

double lower_bound(const ConvexCurve& hull, double p) {
  if (p < 0.0 || p > 1.0)
    throw std::domain_error("mixing weight p must lie in [0,1], got " + std::to_string(p));
  const auto& v = hull.vertices;
  if (v.empty()) throw std::invalid_argument("empty envelope");
  if (p <= v.front().q) return v.front().value;
  if (p >= v.back().q) return v.back().value;
  size_t lo = 0, hi = v.size() - 1;
  while (hi - lo > 1) {
    const size_t mid = (lo + hi) / 2;
    (v[mid].q <= p ? lo : hi) = mid;
  }
  const double t = (p - v[lo].q) / (v[hi].q - v[lo].q);
  return v[lo].value + t * (v[hi].value - v[lo].value);
}

std::optional<double> refine_tangency(const CharacteristicCurve& curve, GapSide side,
                                      double window) {
  const ConvexCurve hull = convex_hull_curve(curve);
  if (hull.vertices.size() < 2) return std::nullopt;
  const auto& s = curve.samples;
  const double dq = s.size() > 1 ? s[1].q - s[0].q : 0.0;

  // The candidate gap is the hull segment touching the requested endpoint.
  const size_t seg = side == GapSide::left ? 0 : hull.vertices.size() - 2;
  const HullVertex& va = hull.vertices[seg];
  const HullVertex& vb = hull.vertices[seg + 1];
  if (vb.sample_index - va.sample_index < 2) return std::nullopt;
  double excess = 0.0;
  for (int i = va.sample_index + 1; i < vb.sample_index; ++i) {
    const double chord =
        va.value + (s[i].q - va.q) * (vb.value - va.value) / (vb.q - va.q);
    excess = std::max(excess, s[i].tau_tilde - chord);
  }
  if (excess <= kGapExcessTol) return std::nullopt;

  const HullVertex& anchor = side == GapSide::left ? va : vb;
  auto tau = [&](double p) {
    return tau_tilde_at(curve.pencil, curve.descriptor, p, curve.phase_grid).value;
  };
  // Chord slope from the anchor; minimal for a left gap, maximal for a right
  // one, so always minimize the signed version.
  auto slope = [&](double p) {
    const double sl = (tau(p) - anchor.value) / (p - anchor.q);
    return side == GapSide::left ? sl : -sl;
  };

  double lo, hi;
  if (side == GapSide::left) {
    lo = va.q + 0.25 * dq;
    hi = std::min(vb.q + 2.0 * dq, curve.samples.back().q);
  } else {
    lo = std::max(va.q - 2.0 * dq, curve.samples.front().q);
    hi = vb.q - 0.25 * dq;
  }
  if (!(lo < hi)) return std::nullopt;

  // Coarse scan to bracket the optimum, then golden-section refine.
  constexpr int kScan = 128;
  int best = 0;
  double best_val = slope(lo);
  for (int i = 1; i <= kScan; ++i) {
    const double p = lo + (hi - lo) * i / kScan;
    const double v = slope(p);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double step = (hi - lo) / kScan;
  const double a = std::max(lo, lo + (best - 1) * step);
  const double b = std::min(hi, lo + (best + 1) * step);
  return golden_min(slope, a, b, window).first;
}

std::optional<double> nonconvexity_onset(const CharacteristicCurve& curve) {
  const auto& s = curve.samples;
  const int n = int(s.size());
  if (n < 4) return std::nullopt;

  // Walk second differences from the right end; find concave -> convex.
  int cell = -1;
  for (int i = n - 2; i >= 1; --i) {
    const double d2 = s[i - 1].tau_tilde - 2.0 * s[i].tau_tilde + s[i + 1].tau_tilde;
    if (d2 > 0) {
      cell = i;
      break;
    }
  }
  if (cell < 0 || cell >= n - 2) return std::nullopt;

  auto tau = [&](double p) {
    return tau_tilde_at(curve.pencil, curve.descriptor, p, curve.phase_grid).value;
  };
  const double delta = 1e-4;
  auto curvature = [&](double p) {
    return tau(p - delta) - 2.0 * tau(p) + tau(p + delta);
  };

  double lo = s[cell].q, hi = s[cell + 1].q;
  double f_lo = curvature(lo), f_hi = curvature(hi);
  for (int widen = 0; widen < 3 && f_lo * f_hi > 0; ++widen) {
    lo = std::max(delta, lo - (hi - lo));
    f_lo = curvature(lo);
  }
  if (f_lo * f_hi > 0) return std::nullopt;
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    const double mid = (lo + hi) / 2;
    const double f_mid = curvature(mid);
    if ((f_mid > 0) == (f_lo > 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return (lo + hi) / 2;
}

}  // namespace tangleroof
