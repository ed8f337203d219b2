#include "tangleroof/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tangleroof {

using nlohmann::json;

namespace {

json complex_to_json(cd v) { return json::array({v.real(), v.imag()}); }

cd complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument(where + " must be a [re, im] pair of numbers");
  return cd(j[0].get<double>(), j[1].get<double>());
}

json parse_object(const std::string& text, const std::string& what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(what + ": " + e.what());
  }
  if (!j.is_object())
    throw std::invalid_argument(what + ": top level must be an object");
  return j;
}

int qubits_field(const json& j, const std::string& what) {
  if (!j.contains("n_qubits"))
    throw std::invalid_argument(what + ": missing field \"n_qubits\"");
  if (!j["n_qubits"].is_number_integer())
    throw std::invalid_argument(what + ": \"n_qubits\" must be an integer");
  return j["n_qubits"].get<int>();
}

json state_body(const PureState& psi) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i)
    amps.push_back(complex_to_json(psi.amplitudes[i]));
  return json{{"n_qubits", psi.n_qubits}, {"amplitudes", std::move(amps)}};
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

PureState state_from_json(const std::string& text) {
  const json j = parse_object(text, "state json");
  const int n = qubits_field(j, "state json");
  if (!j.contains("amplitudes"))
    throw std::invalid_argument("state json: missing field \"amplitudes\"");
  const json& amps = j["amplitudes"];
  if (!amps.is_array())
    throw std::invalid_argument("state json: \"amplitudes\" must be an array");
  Eigen::VectorXcd v(Eigen::Index(amps.size()));
  for (size_t i = 0; i < amps.size(); ++i)
    v[Eigen::Index(i)] =
        complex_from_json(amps[i], "state json: amplitudes[" + std::to_string(i) + "]");
  return make_pure_state(n, std::move(v));
}

std::string state_to_json(const PureState& psi) { return state_body(psi).dump(); }

DensityMatrix density_from_json(const std::string& text) {
  const json j = parse_object(text, "density json");
  const int n = qubits_field(j, "density json");
  if (!j.contains("matrix"))
    throw std::invalid_argument("density json: missing field \"matrix\"");
  const json& rows = j["matrix"];
  if (!rows.is_array())
    throw std::invalid_argument("density json: \"matrix\" must be an array of rows");
  const Eigen::Index dim = Eigen::Index(rows.size());
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const json& row = rows[size_t(r)];
    if (!row.is_array() || Eigen::Index(row.size()) != dim)
      throw std::invalid_argument("density json: matrix[" + std::to_string(r) +
                                  "] must be a row of " + std::to_string(dim) + " entries");
    for (Eigen::Index c = 0; c < dim; ++c)
      m(r, c) = complex_from_json(row[size_t(c)], "density json: matrix[" + std::to_string(r) +
                                                      "][" + std::to_string(c) + "]");
  }
  return make_density_matrix(n, std::move(m));
}

std::string density_to_json(const DensityMatrix& rho) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < rho.matrix.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < rho.matrix.cols(); ++c)
      row.push_back(complex_to_json(rho.matrix(r, c)));
    rows.push_back(std::move(row));
  }
  return json{{"n_qubits", rho.n_qubits}, {"matrix", std::move(rows)}}.dump();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument(path + ": cannot open file for writing");
  out << text;
  if (!out) throw std::invalid_argument(path + ": write failed");
}

PureState load_state(const std::string& path) {
  try {
    return state_from_json(read_text_file(path));
  } catch (const std::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

DensityMatrix load_density(const std::string& path) {
  try {
    return density_from_json(read_text_file(path));
  } catch (const std::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string polytope_to_json(const ZeroPolytope& polytope,
                             const std::vector<ZeroInterval>& intervals) {
  json corners = json::array();
  for (const auto& corner : polytope.corners) {
    json c;
    c["z"] = corner.z ? complex_to_json(*corner.z) : json("inf");
    c["q"] = corner.q;
    c["phi"] = corner.phi;
    c["multiplicity"] = corner.multiplicity;
    c["amplitudes"] = state_body(corner.state)["amplitudes"];
    c["bloch"] = json::array({corner.bloch.x, corner.bloch.y, corner.bloch.z});
    corners.push_back(std::move(c));
  }
  json ivals = json::array();
  for (const auto& iv : intervals) ivals.push_back(json::array({iv.p_lo, iv.p_hi}));
  return json{{"whole_pencil_zero", polytope.whole_pencil_zero},
              {"corners", std::move(corners)},
              {"intervals", std::move(ivals)}}
      .dump(2);
}

std::string certificate_to_json(const RoofCertificate& cert,
                                std::optional<double> wootters) {
  json states = json::array();
  for (const auto& st : cert.decomposition.states) states.push_back(state_body(st));
  json j{{"p", cert.p},
         {"lower", cert.lower},
         {"upper", cert.upper},
         {"gap", cert.gap},
         {"status", cert.status == CertificateStatus::certified ? "certified" : "bounded"},
         {"decomposition",
          json{{"weights", cert.decomposition.weights}, {"states", std::move(states)}}}};
  if (wootters) j["wootters"] = *wootters;
  return j.dump(2);
}

namespace {

// Shared row assembly for CSV and JSON curve output.
struct AssembledCurve {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

AssembledCurve assemble(const CharacteristicCurve& curve, const ConvexCurve& hull,
                        const std::vector<double>& phases) {
  AssembledCurve table;
  table.columns = {"q", "tau_tilde", "phi_star", "tau_star"};
  for (double phi : phases) table.columns.push_back("tau_phi_" + format_double(phi));
  table.rows.reserve(curve.samples.size());
  for (const auto& s : curve.samples) {
    std::vector<double> row{s.q, s.tau_tilde, s.phi_star, lower_bound(hull, s.q)};
    for (double phi : phases)
      row.push_back(tangle(curve.descriptor, state_at(curve.pencil, s.q, phi)));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

std::string curve_to_csv(const CharacteristicCurve& curve, const ConvexCurve& hull,
                         const std::vector<double>& phases) {
  const AssembledCurve table = assemble(curve, hull, phases);
  std::string out;
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string curve_to_json(const CharacteristicCurve& curve, const ConvexCurve& hull,
                          const std::vector<double>& phases) {
  const AssembledCurve table = assemble(curve, hull, phases);
  return json{{"columns", table.columns}, {"rows", table.rows}}.dump();
}

int CurveTable::column(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return int(i);
  throw std::invalid_argument("curve table has no column \"" + name + "\"");
}

CurveTable curve_from_csv(const std::string& text) {
  CurveTable table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("curve csv: empty input");
  std::istringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) table.columns.push_back(cell);
  if (table.columns.empty())
    throw std::invalid_argument("curve csv: header row has no columns");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    while (std::getline(cells, cell, ',')) {
      size_t used = 0;
      double v = 0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size())
        throw std::invalid_argument("curve csv: line " + std::to_string(lineno) +
                                    ": \"" + cell + "\" is not a number");
      row.push_back(v);
    }
    if (row.size() != table.columns.size())
      throw std::invalid_argument("curve csv: line " + std::to_string(lineno) + " has " +
                                  std::to_string(row.size()) + " cells, expected " +
                                  std::to_string(table.columns.size()));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace tangleroof
