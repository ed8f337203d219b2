#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <tangleroof/charcurve.hpp>
#include <tangleroof/states.hpp>
#include <tangleroof/tangles.hpp>

using namespace tangleroof;

namespace {

constexpr double kPi = std::numbers::pi;

double ghz_w_tau_tilde(double q) {
  const double c = 8.0 * std::sqrt(6.0) / 9.0;
  return std::abs(q * q - c * std::sqrt(q * (1 - q) * (1 - q) * (1 - q)));
}

double ghz_w_boundary() {
  const double r = 4.0 * std::cbrt(2.0);
  return r / (3.0 + r);
}

double ghz_w_tangency() { return 0.5 + 3.0 / 310.0 * std::sqrt(465.0); }

// affine section of the roof above the tangency weight
double ghz_w_affine(double p) {
  return 1.0 - (1.0 - p) * (1.5 + std::sqrt(465.0) / 18.0);
}

bool near_symmetric_phase(double phi, double tol) {
  for (double target : {kPi / 3, kPi, 5 * kPi / 3})
    if (std::abs(phi - target) < tol) return true;
  return false;
}

}  // namespace

TEST_CASE("GHZ/W characteristic curve matches its closed form") {
  const auto pencil = make_pencil(ghz_state(), w_state(), 0.5);
  const auto curve = characteristic_curve(pencil, three_tangle_descriptor());

  REQUIRE(curve.samples.size() == 2001);
  CHECK(curve.samples.front().q == 0.0);
  CHECK(curve.samples.back().q == 1.0);

  double worst = 0.0;
  for (const auto& s : curve.samples)
    worst = std::max(worst, std::abs(s.tau_tilde - ghz_w_tau_tilde(s.q)));
  CHECK(worst < 1e-9);

  // a coarser grid gives the same pointwise values
  const auto coarse = characteristic_curve(pencil, three_tangle_descriptor(), 501);
  REQUIRE(coarse.samples.size() == 501);
  for (const auto& s : coarse.samples)
    CHECK(std::abs(s.tau_tilde - ghz_w_tau_tilde(s.q)) < 1e-9);
}

TEST_CASE("tau_tilde_at minimizes over the phase at fixed weight") {
  const auto pencil = make_pencil(ghz_state(), w_state(), 0.5);
  const auto& desc = three_tangle_descriptor();

  for (double q : {0.3, 0.65, 0.9}) {
    const auto m = tau_tilde_at(pencil, desc, q);
    CHECK(m.value == doctest::Approx(ghz_w_tau_tilde(q)).epsilon(1e-10));
    // minimizers sit at the cube roots of the negative real axis
    CHECK(near_symmetric_phase(m.phi, 1e-6));
    // no sampled phase does better
    for (int k = 0; k < 64; ++k) {
      const auto s = state_at(pencil, q, 2 * kPi * k / 64);
      CHECK(tangle(desc, s) >= m.value - 1e-12);
    }
  }

  CHECK_THROWS_AS(tau_tilde_at(pencil, desc, -0.2), std::domain_error);
}

TEST_CASE("convex hull of the GHZ/W curve") {
  const auto pencil = make_pencil(ghz_state(), w_state(), 0.5);
  const auto curve = characteristic_curve(pencil, three_tangle_descriptor());
  const auto hull = convex_hull_curve(curve);

  REQUIRE(!hull.vertices.empty());
  CHECK(hull.vertices.front().q == 0.0);
  CHECK(hull.vertices.back().q == 1.0);

  // slopes nondecreasing makes the envelope convex
  for (std::size_t i = 0; i + 1 < hull.slopes.size(); ++i)
    CHECK(hull.slopes[i] <= hull.slopes[i + 1] + 1e-12);

  // the envelope never exceeds the curve
  for (const auto& s : curve.samples)
    CHECK(lower_bound(hull, s.q) <= s.tau_tilde + 1e-12);

  // zero plateau covers [0, p0] up to grid resolution
  CHECK(lower_bound(hull, 0.3) < 1e-3);
  CHECK(lower_bound(hull, 0.3) >= 0.0);

  // affine gap on the right reproduces the blend with the pure state
  CHECK(lower_bound(hull, 0.9) == doctest::Approx(ghz_w_affine(0.9)).epsilon(2e-5));
  CHECK(ghz_w_affine(0.9) == doctest::Approx(0.7302007852619567).epsilon(1e-14));
  CHECK(lower_bound(hull, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  // between the polytope boundary and the tangency the curve is convex,
  // so the envelope follows it
  CHECK(lower_bound(hull, 0.65) ==
        doctest::Approx(ghz_w_tau_tilde(0.65)).epsilon(1e-6));

  CHECK_THROWS_AS(lower_bound(hull, 1.5), std::domain_error);
}

TEST_CASE("refine_tangency sharpens both GHZ/W gap endpoints") {
  const auto pencil = make_pencil(ghz_state(), w_state(), 0.5);
  const auto curve = characteristic_curve(pencil, three_tangle_descriptor());

  const auto left = refine_tangency(curve, GapSide::left);
  REQUIRE(left.has_value());
  CHECK(*left == doctest::Approx(ghz_w_boundary()).epsilon(1e-6));

  const auto right = refine_tangency(curve, GapSide::right);
  REQUIRE(right.has_value());
  CHECK(*right == doctest::Approx(ghz_w_tangency()).epsilon(1e-6));
}

TEST_CASE("nonconvexity_onset finds the convex-to-concave switch") {
  const auto pencil = make_pencil(ghz_state(), w_state(), 0.5);
  const auto curve = characteristic_curve(pencil, three_tangle_descriptor());
  const auto onset = nonconvexity_onset(curve);
  REQUIRE(onset.has_value());
  CHECK(std::floor(*onset * 1000.0) / 1000.0 == 0.825);
  // the switch lies strictly between the tangency and the pure state
  CHECK(*onset > ghz_w_tangency());
  CHECK(*onset < 1.0);
}

TEST_CASE("two-qubit example pair: curve, envelope, and no affine gaps") {
  const auto pencil = make_pencil(example_state_I(), example_state_II(), 0.5);
  const auto& desc = concurrence_descriptor();
  const auto curve = characteristic_curve(pencil, desc);
  const auto hull = convex_hull_curve(curve);

  // endpoints carry the pure tangles
  CHECK(curve.samples.front().tau_tilde == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(curve.samples.back().tau_tilde == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(lower_bound(hull, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(lower_bound(hull, 1.0) == doctest::Approx(0.8).epsilon(1e-10));

  // the curve vanishes exactly at the polynomial roots
  CHECK(tau_tilde_at(pencil, desc, 5.0 / 29.0).value < 1e-10);
  CHECK(tau_tilde_at(pencil, desc, 10.0 / 13.0).value < 1e-10);
  // the grid straddles the roots, so the envelope dips to grid resolution there
  CHECK(lower_bound(hull, 5.0 / 29.0) < 1e-3);
  CHECK(lower_bound(hull, 10.0 / 13.0) < 1e-3);
  CHECK(lower_bound(hull, 0.45) < 1e-3);

  // the phase minimizer is real: cos(phi*) = +-1
  for (double q : {0.1, 0.5, 0.9}) {
    const auto m = tau_tilde_at(pencil, desc, q);
    CHECK(std::abs(std::abs(std::cos(m.phi)) - 1.0) < 1e-6);
  }

  // both gaps are absent: the envelope starts and ends on the curve
  CHECK(!refine_tangency(curve, GapSide::left).has_value());
  CHECK(!refine_tangency(curve, GapSide::right).has_value());
}

TEST_CASE("curve construction rejects degenerate grids") {
  const auto pencil = make_pencil(ghz_state(), w_state(), 0.5);
  const auto& desc = three_tangle_descriptor();
  CHECK_THROWS_AS(characteristic_curve(pencil, desc, 1), std::invalid_argument);
  CHECK_THROWS_AS(characteristic_curve(pencil, desc, 101, 2), std::invalid_argument);
}
