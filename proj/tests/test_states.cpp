#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <tangleroof/pencil.hpp>
#include <tangleroof/states.hpp>

using namespace tangleroof;

namespace {

double overlap(const PureState& a, const PureState& b) {
  return std::abs(a.amplitudes.dot(b.amplitudes));
}

}  // namespace

TEST_CASE("built-in states have the advertised amplitudes") {
  const double s2 = 1.0 / std::sqrt(2.0);
  const auto ghz = ghz_state();
  CHECK(ghz.n_qubits == 3);
  CHECK(std::abs(ghz.amplitudes[0] - cd(s2, 0)) < 1e-15);
  CHECK(std::abs(ghz.amplitudes[7] - cd(s2, 0)) < 1e-15);
  CHECK(ghz.amplitudes.segment(1, 6).norm() == 0.0);

  const auto w = w_state();
  const double s3 = 1.0 / std::sqrt(3.0);
  // |100>, |010>, |001> with qubit A as the most significant bit
  CHECK(std::abs(w.amplitudes[4] - cd(s3, 0)) < 1e-15);
  CHECK(std::abs(w.amplitudes[2] - cd(s3, 0)) < 1e-15);
  CHECK(std::abs(w.amplitudes[1] - cd(s3, 0)) < 1e-15);
  CHECK(std::abs(w.amplitudes[0]) == 0.0);

  const auto bell = bell_state();
  CHECK(bell.n_qubits == 2);
  CHECK(std::abs(bell.amplitudes[0] - cd(s2, 0)) < 1e-15);
  CHECK(std::abs(bell.amplitudes[3] - cd(s2, 0)) < 1e-15);

  const auto one = example_state_I();
  const double s5 = std::sqrt(5.0);
  CHECK(std::abs(one.amplitudes[0] - cd(2 / s5, 0)) < 1e-15);
  CHECK(std::abs(one.amplitudes[3] - cd(1 / s5, 0)) < 1e-15);

  const auto two = example_state_II();
  const double s6 = std::sqrt(6.0);
  CHECK(std::abs(two.amplitudes[0] - cd(1 / s6, 0)) < 1e-15);
  CHECK(std::abs(two.amplitudes[1] - cd(1 / s6, 0)) < 1e-15);
  CHECK(std::abs(two.amplitudes[3] - cd(-2 / s6, 0)) < 1e-15);
}

TEST_CASE("builtin_state resolves every CLI name and rejects the rest") {
  for (const char* name : {"ghz", "w", "bell", "paper-I", "paper-II"}) {
    auto s = builtin_state(name);
    REQUIRE(s.has_value());
    CHECK(std::abs(s->amplitudes.norm() - 1.0) < 1e-12);
  }
  CHECK(overlap(*builtin_state("paper-I"), example_state_I()) == doctest::Approx(1.0));
  CHECK(overlap(*builtin_state("paper-II"), example_state_II()) == doctest::Approx(1.0));
  CHECK(!builtin_state("nope").has_value());
  CHECK(!builtin_state("").has_value());
}

TEST_CASE("make_pure_state validates its input") {
  Eigen::VectorXcd good(4);
  good << 1, 0, 0, 0;
  CHECK(make_pure_state(2, good).n_qubits == 2);

  CHECK_THROWS_WITH_AS(make_pure_state(0, good), doctest::Contains("between 1 and 5"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_pure_state(6, good), doctest::Contains("between 1 and 5"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_pure_state(3, good), doctest::Contains("length"),
                       std::invalid_argument);

  Eigen::VectorXcd off = good * 1.001;
  CHECK_THROWS_WITH_AS(make_pure_state(2, off), doctest::Contains("normalized"),
                       std::invalid_argument);
}

TEST_CASE("make_density_matrix validates shape, hermiticity, trace, positivity") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
  CHECK(make_density_matrix(2, m).n_qubits == 2);

  CHECK_THROWS_WITH_AS(make_density_matrix(3, m), doctest::Contains("must be"),
                       std::invalid_argument);

  Eigen::MatrixXcd nonh = m;
  nonh(0, 1) = cd(0.1, 0);
  CHECK_THROWS_WITH_AS(make_density_matrix(2, nonh), doctest::Contains("Hermitian"),
                       std::invalid_argument);

  CHECK_THROWS_WITH_AS(make_density_matrix(2, 2 * m), doctest::Contains("trace"),
                       std::invalid_argument);

  Eigen::MatrixXcd neg = Eigen::MatrixXcd::Zero(4, 4);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_WITH_AS(make_density_matrix(2, neg), doctest::Contains("negative"),
                       std::invalid_argument);
}

TEST_CASE("projector builds the rank-1 density matrix") {
  const auto ghz = ghz_state();
  const auto rho = projector(ghz);
  CHECK(rho.n_qubits == 3);
  CHECK(std::abs(rho.matrix.trace() - cd(1, 0)) < 1e-14);
  const Eigen::MatrixXcd outer = ghz.amplitudes * ghz.amplitudes.adjoint();
  CHECK((rho.matrix - outer).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("eigendecompose recovers a two-state mixture exactly") {
  const auto ghz = ghz_state();
  const auto w = w_state();
  const auto rho = make_density_matrix(
      3, 0.7 * projector(ghz).matrix + 0.3 * projector(w).matrix);
  const auto eig = eigendecompose(rho);

  CHECK(eig.rank == 2);
  CHECK(eig.eigenvalues[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(eig.eigenvalues[1] == doctest::Approx(0.3).epsilon(1e-12));
  // eigenvectors are phase-fixed, so the overlap check can be exact
  CHECK(overlap(eig.eigenstates[0], ghz) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(overlap(eig.eigenstates[1], w) == doctest::Approx(1.0).epsilon(1e-12));
  // phase fixing: largest-modulus amplitude is real positive
  CHECK(eig.eigenstates[0].amplitudes[0].real() > 0);
  CHECK(std::abs(eig.eigenstates[0].amplitudes[0].imag()) < 1e-12);

  const auto pure = eigendecompose(projector(ghz));
  CHECK(pure.rank == 1);
  CHECK(pure.eigenvalues[0] == doctest::Approx(1.0));
}

TEST_CASE("bloch_coordinates places pencil members where they belong") {
  const auto ghz = ghz_state();
  const auto w = w_state();

  CHECK(bloch_coordinates(ghz, ghz, w).z == doctest::Approx(1.0));
  CHECK(bloch_coordinates(w, ghz, w).z == doctest::Approx(-1.0));

  const auto pencil = make_pencil(ghz, w, 0.5);
  const auto chi = state_at(pencil, 0.25, std::numbers::pi / 2);
  const auto b = bloch_coordinates(chi, ghz, w);
  CHECK(b.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b.y == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
  CHECK(b.z == doctest::Approx(-0.5).epsilon(1e-12));

  // z-coordinate tracks the mixing weight as 2q - 1
  for (double q : {0.1, 0.35, 0.8}) {
    const auto s = state_at(pencil, q, 1.2);
    CHECK(bloch_coordinates(s, ghz, w).z == doctest::Approx(2 * q - 1).epsilon(1e-12));
  }

  // density overload: the diagonal family sits on the z-axis
  for (double p : {0.0, 0.4, 1.0}) {
    const auto rho = make_density_matrix(
        3, p * projector(ghz).matrix + (1 - p) * projector(w).matrix);
    const auto r = bloch_coordinates(rho, ghz, w);
    CHECK(std::abs(r.x) < 1e-13);
    CHECK(std::abs(r.y) < 1e-13);
    CHECK(r.z == doctest::Approx(2 * p - 1).epsilon(1e-12));
  }
}

TEST_CASE("bloch_coordinates rejects bad frames and leaking states") {
  const auto ghz = ghz_state();
  const auto w = w_state();
  const auto bell = bell_state();

  CHECK_THROWS_WITH_AS(bloch_coordinates(ghz, ghz, ghz), doctest::Contains("orthogonal"),
                       std::invalid_argument);
  CHECK_THROWS_AS(bloch_coordinates(bell, ghz, w), std::invalid_argument);

  // |000> is orthogonal to W but not in span{GHZ, W}
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(8);
  a[0] = 1;
  const auto outside = make_pure_state(3, a);
  CHECK_THROWS_WITH_AS(bloch_coordinates(outside, ghz, w), doctest::Contains("leaks"),
                       std::out_of_range);
}

TEST_CASE("density_from_bloch inverts bloch_coordinates") {
  const auto ghz = ghz_state();
  const auto w = w_state();
  const auto pencil = make_pencil(ghz, w, 0.5);

  BlochPoint north{0, 0, 1};
  const auto top = density_from_bloch(north, ghz, w);
  CHECK((top.matrix - projector(ghz).matrix).cwiseAbs().maxCoeff() < 1e-13);

  // pure pencil members land on the sphere and round-trip
  const auto chi = state_at(pencil, 0.3, 2.0);
  const auto b = bloch_coordinates(chi, ghz, w);
  CHECK(b.x * b.x + b.y * b.y + b.z * b.z == doctest::Approx(1.0).epsilon(1e-12));
  const auto back = density_from_bloch(b, ghz, w);
  CHECK((back.matrix - projector(chi).matrix).cwiseAbs().maxCoeff() < 1e-12);

  // interior points round-trip through the coordinate map
  BlochPoint inside{0.2, -0.4, 0.1};
  const auto rho = density_from_bloch(inside, ghz, w);
  const auto again = bloch_coordinates(rho, ghz, w);
  CHECK(again.x == doctest::Approx(inside.x).epsilon(1e-12));
  CHECK(again.y == doctest::Approx(inside.y).epsilon(1e-12));
  CHECK(again.z == doctest::Approx(inside.z).epsilon(1e-12));

  BlochPoint outside{0.9, 0.9, 0.9};
  CHECK_THROWS_WITH_AS(density_from_bloch(outside, ghz, w),
                       doctest::Contains("outside the unit ball"), std::invalid_argument);
}
