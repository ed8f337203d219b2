#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tangleroof/charcurve.hpp"
#include "tangleroof/roof.hpp"

// Serialization layer: JSON schemas for states and density matrices, JSON
// reports for zero polytopes and roof certificates, and the curve CSV format.
// All numbers are written with enough digits to round-trip exactly and
// without locale interference.

namespace tangleroof {

// Shortest decimal form that parses back to the same double ("%.17g").
std::string format_double(double v);

// {"n_qubits": n, "amplitudes": [[re, im], ...]}, amplitudes in binary order
// with qubit A as the most significant bit. Throws std::invalid_argument
// naming the offending field (or carrying the parser's line/column).
PureState state_from_json(const std::string& text);
std::string state_to_json(const PureState& psi);

// {"n_qubits": n, "matrix": [[[re, im], ...], ...]}, row-major.
DensityMatrix density_from_json(const std::string& text);
std::string density_to_json(const DensityMatrix& rho);

// File wrappers; diagnostics are prefixed with the path.
PureState load_state(const std::string& path);
DensityMatrix load_density(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Corners carry z (a [re, im] pair, or the string "inf" for the point at
// infinity), q, phi, multiplicity, amplitudes, and Bloch coordinates;
// intervals are [p_lo, p_hi] pairs.
std::string polytope_to_json(const ZeroPolytope& polytope,
                             const std::vector<ZeroInterval>& intervals);

// {p, lower, upper, gap, status, decomposition: {weights, states}}; the
// Wootters value is attached for two-qubit inputs when provided.
std::string certificate_to_json(const RoofCertificate& cert,
                                std::optional<double> wootters);

// CSV with header q,tau_tilde,phi_star,tau_star. Each extra phase in
// `phases` appends a column tau_phi_<value> holding the tangle along the
// fixed-phase section of the pencil.
std::string curve_to_csv(const CharacteristicCurve& curve, const ConvexCurve& hull,
                         const std::vector<double>& phases = {});
// Same table as JSON: {"columns": [...], "rows": [[...], ...]}.
std::string curve_to_json(const CharacteristicCurve& curve, const ConvexCurve& hull,
                          const std::vector<double>& phases = {});

struct CurveTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  // Index of a named column; throws std::invalid_argument if absent.
  int column(const std::string& name) const;
};

CurveTable curve_from_csv(const std::string& text);

}  // namespace tangleroof
