#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

#include <tangleroof/charcurve.hpp>
#include <tangleroof/io.hpp>
#include <tangleroof/roof.hpp>
#include <tangleroof/states.hpp>
#include <tangleroof/tangles.hpp>
#include <tangleroof/zeropoly.hpp>

using namespace tangleroof;

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, std::numbers::pi, -2.5e-9, 1e-300,
                   0.7302007852619567}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("state JSON round-trips bit for bit") {
  const auto psi = example_state_II();
  const auto back = state_from_json(state_to_json(psi));
  CHECK(back.n_qubits == psi.n_qubits);
  REQUIRE(back.amplitudes.size() == psi.amplitudes.size());
  for (int i = 0; i < psi.amplitudes.size(); ++i)
    CHECK(back.amplitudes[i] == psi.amplitudes[i]);

  // complex amplitudes survive too
  Eigen::VectorXcd v(2);
  v << cd(0.6, -0.3), cd(0.1, std::sqrt(1 - 0.36 - 0.09 - 0.01));
  const auto single = make_pure_state(1, v);
  const auto again = state_from_json(state_to_json(single));
  for (int i = 0; i < 2; ++i) CHECK(again.amplitudes[i] == single.amplitudes[i]);
}

TEST_CASE("state JSON parse errors name the offending field") {
  CHECK_THROWS_WITH_AS(state_from_json("{\"amplitudes\": []}"),
                       doctest::Contains("n_qubits"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(state_from_json("{\"n_qubits\": 1}"),
                       doctest::Contains("amplitudes"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(state_from_json("[1, 2]"), doctest::Contains("object"),
                       std::invalid_argument);
  CHECK_THROWS_AS(state_from_json("{not json"), std::invalid_argument);
  // amplitude entries must be [re, im] pairs
  CHECK_THROWS_WITH_AS(
      state_from_json("{\"n_qubits\": 1, \"amplitudes\": [[1, 0], 0.5]}"),
      doctest::Contains("pair"), std::invalid_argument);
  // validation runs after parsing: wrong length is rejected
  CHECK_THROWS_WITH_AS(
      state_from_json("{\"n_qubits\": 2, \"amplitudes\": [[1, 0], [0, 0]]}"),
      doctest::Contains("length"), std::invalid_argument);
}

TEST_CASE("density JSON round-trips bit for bit") {
  const auto rho = make_density_matrix(
      3, 0.65 * projector(ghz_state()).matrix + 0.35 * projector(w_state()).matrix);
  const auto back = density_from_json(density_to_json(rho));
  CHECK(back.n_qubits == 3);
  CHECK((back.matrix - rho.matrix).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_WITH_AS(density_from_json("{\"n_qubits\": 1}"),
                       doctest::Contains("matrix"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      density_from_json("{\"n_qubits\": 1, \"matrix\": [[[1, 0], [0, 0]]]}"),
      doctest::Contains("matrix"), std::invalid_argument);
}

TEST_CASE("file wrappers prefix diagnostics with the path") {
  CHECK_THROWS_WITH_AS(load_state("no_such_dir/missing.json"),
                       doctest::Contains("no_such_dir/missing.json"),
                       std::invalid_argument);

  const std::string path = "io_test_tmp.json";
  write_text_file(path, state_to_json(bell_state()));
  const auto loaded = load_state(path);
  CHECK(std::abs(loaded.amplitudes.dot(bell_state().amplitudes)) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(read_text_file(path) == state_to_json(bell_state()));

  // a state file is not a density file, and the path shows up in the error
  CHECK_THROWS_WITH_AS(load_density(path), doctest::Contains(path.c_str()),
                       std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("polytope JSON carries corners and intervals") {
  const auto pencil = make_pencil(ghz_state(), w_state(), 0.5);
  const auto poly = zero_polytope(pencil, three_tangle_descriptor());
  const auto intervals = intersect_family(poly);
  const auto text = polytope_to_json(poly, intervals);

  const auto j = nlohmann::json::parse(text);
  CHECK(j["whole_pencil_zero"] == false);
  REQUIRE(j["corners"].size() == 4);
  for (int i = 0; i < 3; ++i) {
    const auto& c = j["corners"][i];
    CHECK(c["z"].is_array());
    CHECK(c["multiplicity"] == 1);
    CHECK(c["amplitudes"].size() == 8);
    CHECK(c["bloch"].size() == 3);
    CHECK(std::abs(c["q"].get<double>() - poly.corners[i].q) == 0.0);
  }
  CHECK(j["corners"][3]["z"] == "inf");
  CHECK(j["corners"][3]["q"] == 0.0);

  REQUIRE(j["intervals"].size() == 1);
  CHECK(j["intervals"][0][0].get<double>() == intervals[0].p_lo);
  CHECK(j["intervals"][0][1].get<double>() == intervals[0].p_hi);
}

TEST_CASE("certificate JSON exposes the decomposition and optional Wootters value") {
  const auto cert = ghz_w_roof(0.65);
  const auto without = nlohmann::json::parse(certificate_to_json(cert, std::nullopt));
  CHECK(without["p"] == 0.65);
  CHECK(without["status"] == "certified");
  CHECK(without["lower"].get<double>() == cert.lower);
  CHECK(without["upper"].get<double>() == cert.upper);
  CHECK(without["gap"].get<double>() == cert.gap);
  CHECK(!without.contains("wootters"));
  REQUIRE(without["decomposition"]["weights"].size() ==
          cert.decomposition.weights.size());
  CHECK(without["decomposition"]["states"].size() == cert.decomposition.states.size());
  // states in the report are full amplitude lists
  CHECK(without["decomposition"]["states"][0]["amplitudes"].size() == 8);

  const auto with = nlohmann::json::parse(certificate_to_json(cert, 0.25));
  CHECK(with["wootters"] == 0.25);
}

TEST_CASE("curve CSV round-trips through curve_from_csv") {
  const auto pencil = make_pencil(example_state_I(), example_state_II(), 0.5);
  const auto& desc = concurrence_descriptor();
  const auto curve = characteristic_curve(pencil, desc, 11);
  const auto hull = convex_hull_curve(curve);
  const std::vector<double> phases{0.0, std::numbers::pi};

  const std::string csv = curve_to_csv(curve, hull, phases);
  CHECK(csv.rfind("q,tau_tilde,phi_star,tau_star,tau_phi_0,tau_phi_3.14159", 0) == 0);

  const auto table = curve_from_csv(csv);
  REQUIRE(table.columns.size() == 6);
  CHECK(table.column("q") == 0);
  CHECK(table.column("tau_star") == 3);
  CHECK(table.column("tau_phi_0") == 4);
  CHECK_THROWS_WITH_AS(table.column("nope"), doctest::Contains("nope"),
                       std::invalid_argument);

  REQUIRE(table.rows.size() == 11);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    REQUIRE(row.size() == 6);
    // formatting preserves every bit
    CHECK(row[0] == curve.samples[r].q);
    CHECK(row[1] == curve.samples[r].tau_tilde);
    CHECK(row[2] == curve.samples[r].phi_star);
    CHECK(row[3] == lower_bound(hull, curve.samples[r].q));
    // fixed-phase sections evaluate the tangle along the pencil
    const double direct = tangle(desc, state_at(pencil, curve.samples[r].q, 0.0));
    CHECK(row[4] == doctest::Approx(direct).epsilon(1e-15));
    // the phase minimum never exceeds a fixed-phase section
    CHECK(row[1] <= row[4] + 1e-12);
    CHECK(row[1] <= row[5] + 1e-12);
  }

  // q = 0 pins the second basis state, q = 1 the first
  CHECK(table.rows.front()[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(table.rows.back()[1] == doctest::Approx(0.8).epsilon(1e-10));
}

TEST_CASE("curve JSON mirrors the CSV table") {
  const auto pencil = make_pencil(example_state_I(), example_state_II(), 0.5);
  const auto curve = characteristic_curve(pencil, concurrence_descriptor(), 5);
  const auto hull = convex_hull_curve(curve);
  const auto j = nlohmann::json::parse(curve_to_json(curve, hull));
  REQUIRE(j["columns"].size() == 4);
  CHECK(j["columns"][0] == "q");
  REQUIRE(j["rows"].size() == 5);
  CHECK(j["rows"][0][0].get<double>() == 0.0);
  CHECK(j["rows"][4][0].get<double>() == 1.0);
}

TEST_CASE("curve CSV parser reports malformed input by line") {
  CHECK_THROWS_WITH_AS(curve_from_csv(""), doctest::Contains("empty"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(curve_from_csv("q,tau\n1,2\n3,4,5\n"),
                       doctest::Contains("line 3"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(curve_from_csv("q,tau\n1,oops\n"),
                       doctest::Contains("not a number"), std::invalid_argument);
  // blank lines are tolerated
  const auto table = curve_from_csv("q,tau\n1,2\n\n3,4\n");
  CHECK(table.rows.size() == 2);
}
