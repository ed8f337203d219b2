#include "tangleroof/cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "tangleroof/charcurve.hpp"
#include "tangleroof/io.hpp"
#include "tangleroof/reproduce.hpp"
#include "tangleroof/roof.hpp"

namespace tangleroof {

namespace {

struct RunConfig {
  std::string state;           // single-state input (tangle subcommand)
  std::string state0, state1;  // pencil inputs
  std::string density;
  std::string tangle_name;
  int grid_n = 2001;
  int phase_grid = 720;
  int restarts = 20;
  std::uint64_t seed = 42;
  double p = -1.0;
  bool p_set = false;
  std::vector<double> phases;
  std::string out_path;
  std::string format = "csv";
};

PureState resolve_state(const std::string& token) {
  if (auto named = builtin_state(token)) return *named;
  std::ifstream probe(token);
  if (!probe)
    throw std::invalid_argument("unknown state '" + token +
                                "': not a built-in name (ghz, w, bell, paper-I, "
                                "paper-II) and not a readable file");
  return load_state(token);
}

const TangleDescriptor& select_tangle(const std::string& name, int n_qubits) {
  if (!name.empty()) {
    const TangleDescriptor* desc = find_tangle(name);
    if (!desc) {
      std::string known;
      for (const auto& nm : tangle_names()) known += (known.empty() ? "" : ", ") + nm;
      throw std::invalid_argument("unknown tangle '" + name + "' (available: " + known + ")");
    }
    if (desc->n_qubits != n_qubits)
      throw std::invalid_argument("tangle '" + name + "' expects " +
                                  std::to_string(desc->n_qubits) + " qubits, input has " +
                                  std::to_string(n_qubits));
    return *desc;
  }
  for (const auto& nm : tangle_names()) {
    const TangleDescriptor* desc = find_tangle(nm);
    if (desc && desc->n_qubits == n_qubits) return *desc;
  }
  throw std::invalid_argument("no built-in tangle for " + std::to_string(n_qubits) +
                              " qubits; pick one with --tangle");
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out_path.empty())
    out << text;
  else
    write_text_file(cfg.out_path, text);
}

std::string format_complex(cd v) {
  return format_double(v.real()) + (v.imag() < 0 ? " - " : " + ") +
         format_double(std::abs(v.imag())) + "i";
}

// Shared input resolution for the pencil-based subcommands: either two
// positional states or a rank-2 density file.
RankTwoPencil pencil_from_config(const RunConfig& cfg) {
  const bool have_density = !cfg.density.empty();
  const bool have0 = !cfg.state0.empty(), have1 = !cfg.state1.empty();
  if (have_density && (have0 || have1))
    throw std::invalid_argument("give either two states or --density, not both");
  if (have_density) return pencil_from_density(load_density(cfg.density));
  if (!have0 || !have1)
    throw std::invalid_argument("need two states (positional) or a --density file");
  return make_pencil(resolve_state(cfg.state0), resolve_state(cfg.state1), 0.5);
}

int cmd_tangle(const RunConfig& cfg, std::ostream& out) {
  const PureState psi = resolve_state(cfg.state);
  const TangleDescriptor& desc = select_tangle(cfg.tangle_name, psi.n_qubits);
  const double value = tangle(desc, psi);
  const cd pre = desc.pre_modulus(psi.amplitudes);
  std::string text = "tangle = " + desc.name + "\n";
  text += "value = " + format_double(value) + "\n";
  text += "pre = " + format_complex(pre) + "\n";
  emit(cfg, out, text);
  return 0;
}

int cmd_curve(const RunConfig& cfg, std::ostream& out) {
  const RankTwoPencil pencil = pencil_from_config(cfg);
  const TangleDescriptor& desc = select_tangle(cfg.tangle_name, pencil.psi0.n_qubits);
  const CharacteristicCurve curve =
      characteristic_curve(pencil, desc, cfg.grid_n, cfg.phase_grid);
  const ConvexCurve hull = convex_hull_curve(curve);
  emit(cfg, out,
       cfg.format == "json" ? curve_to_json(curve, hull, cfg.phases)
                            : curve_to_csv(curve, hull, cfg.phases));
  return 0;
}

int cmd_zeropoly(const RunConfig& cfg, std::ostream& out) {
  const RankTwoPencil pencil = pencil_from_config(cfg);
  const TangleDescriptor& desc = select_tangle(cfg.tangle_name, pencil.psi0.n_qubits);
  const ZeroPolytope polytope = zero_polytope(pencil, desc);
  const std::vector<ZeroInterval> intervals = intersect_family(polytope);
  emit(cfg, out, polytope_to_json(polytope, intervals) + "\n");
  return 0;
}

int cmd_roof(const RunConfig& cfg, std::ostream& out) {
  DensityMatrix rho;
  if (!cfg.density.empty()) {
    if (!cfg.state0.empty() || !cfg.state1.empty())
      throw std::invalid_argument("give either two states or --density, not both");
    if (cfg.p_set)
      throw std::invalid_argument("--p applies only to the two-state input form");
    rho = load_density(cfg.density);
  } else {
    if (cfg.state0.empty() || cfg.state1.empty())
      throw std::invalid_argument("need two states (positional) or a --density file");
    if (!cfg.p_set)
      throw std::invalid_argument("the two-state form needs --p, the weight of the first state");
    const RankTwoPencil input =
        make_pencil(resolve_state(cfg.state0), resolve_state(cfg.state1), cfg.p);
    rho = make_density_matrix(
        input.psi0.n_qubits,
        cfg.p * (input.psi0.amplitudes * input.psi0.amplitudes.adjoint()) +
            (1.0 - cfg.p) * (input.psi1.amplitudes * input.psi1.amplitudes.adjoint()));
  }

  const TangleDescriptor& desc = select_tangle(cfg.tangle_name, rho.n_qubits);
  const EigenDecomposition eig = eigendecompose(rho);

  RoofCertificate cert;
  if (eig.rank == 1) {
    cert.p = 1.0;
    cert.lower = cert.upper = tangle(desc, eig.eigenstates[0]);
    cert.gap = 0.0;
    cert.decomposition = Decomposition{{1.0}, {eig.eigenstates[0]}};
    cert.status = CertificateStatus::certified;
  } else {
    const RankTwoPencil pencil = pencil_from_density(rho);
    cert.p = pencil.p;

    const ZeroPolytope polytope = zero_polytope(pencil, desc);
    std::optional<Decomposition> corner;
    for (const ZeroInterval& iv : intersect_family(polytope))
      if (iv.p_lo - 1e-12 <= cert.p && cert.p <= iv.p_hi + 1e-12) {
        corner = corner_decomposition(polytope, pencil, cert.p);
        break;
      }

    if (corner) {
      cert.lower = 0.0;
      cert.decomposition = std::move(*corner);
      cert.upper = average_tangle(cert.decomposition, desc);
    } else {
      const CharacteristicCurve curve =
          characteristic_curve(pencil, desc, cfg.grid_n, cfg.phase_grid);
      cert.lower = lower_bound(convex_hull_curve(curve), cert.p);
      UpperBoundResult search = upper_bound_search(eig, desc, 0, cfg.restarts, cfg.seed);
      cert.upper = search.value;
      cert.decomposition = std::move(search.decomposition);
    }
    cert.gap = cert.upper - cert.lower;
    const DensityMatrix recon = reconstruct(cert.decomposition);
    const double recon_err = (recon.matrix - rho.matrix).cwiseAbs().maxCoeff();
    cert.status = (std::abs(cert.gap) <= 1e-8 && recon_err <= 1e-9)
                      ? CertificateStatus::certified
                      : CertificateStatus::bounded;
  }

  std::optional<double> wootters;
  if (rho.n_qubits == 2) wootters = wootters_concurrence(rho);
  emit(cfg, out, certificate_to_json(cert, wootters) + "\n");
  return 0;
}

int cmd_reproduce(std::ostream& out) {
  const ReproReport report = run_reproduction_suite();
  out << format_report(report);
  return report.pass ? 0 : 3;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Polynomial tangles of pure multi-qubit states and certified convex-roof "
      "bounds for rank-2 mixtures"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* tangle_cmd = app.add_subcommand("tangle", "Tangle of a pure state");
  tangle_cmd->add_option("state", cfg.state, "Built-in state name or state JSON file")
      ->required();
  tangle_cmd->add_option("--tangle", cfg.tangle_name,
                         "Tangle name (default: matches the qubit count)");
  tangle_cmd->add_option("--out", cfg.out_path, "Write the report to this file");

  auto add_pencil_inputs = [&cfg](CLI::App* cmd) {
    cmd->add_option("state0", cfg.state0, "First pencil state (built-in name or file)");
    cmd->add_option("state1", cfg.state1, "Second pencil state (built-in name or file)");
    cmd->add_option("--density", cfg.density, "Rank-2 density matrix JSON file");
    cmd->add_option("--tangle", cfg.tangle_name,
                    "Tangle name (default: matches the qubit count)");
    cmd->add_option("--out", cfg.out_path, "Write the output to this file");
  };

  CLI::App* curve_cmd =
      app.add_subcommand("curve", "Characteristic curve and its convex envelope");
  add_pencil_inputs(curve_cmd);
  curve_cmd->add_option("--grid-n", cfg.grid_n, "Weight grid size")
      ->check(CLI::Range(2, 2000001));
  curve_cmd->add_option("--phase-grid", cfg.phase_grid, "Coarse phase grid size")
      ->check(CLI::Range(3, 1000000));
  curve_cmd->add_option("--phases", cfg.phases,
                        "Comma-separated fixed phases; adds a tau column per phase")
      ->delimiter(',');
  curve_cmd->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* zeropoly_cmd =
      app.add_subcommand("zeropoly", "Zero polytope of the restricted tangle");
  add_pencil_inputs(zeropoly_cmd);

  CLI::App* roof_cmd =
      app.add_subcommand("roof", "Certified roof bounds for a rank-2 mixture");
  add_pencil_inputs(roof_cmd);
  CLI::Option* p_opt =
      roof_cmd->add_option("--p", cfg.p, "Weight of the first state in the mixture")
          ->check(CLI::Range(0.0, 1.0));
  roof_cmd->add_option("--grid-n", cfg.grid_n, "Weight grid size for the lower bound")
      ->check(CLI::Range(2, 2000001));
  roof_cmd->add_option("--phase-grid", cfg.phase_grid, "Coarse phase grid size")
      ->check(CLI::Range(3, 1000000));
  roof_cmd->add_option("--restarts", cfg.restarts, "Search restarts")
      ->check(CLI::Range(1, 10000));
  roof_cmd->add_option("--seed", cfg.seed, "Search seed");

  CLI::App* repro_cmd =
      app.add_subcommand("reproduce", "Recompute the built-in verification table");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  cfg.p_set = p_opt->count() > 0;

  try {
    if (tangle_cmd->parsed()) return cmd_tangle(cfg, out);
    if (curve_cmd->parsed()) return cmd_curve(cfg, out);
    if (zeropoly_cmd->parsed()) return cmd_zeropoly(cfg, out);
    if (roof_cmd->parsed()) return cmd_roof(cfg, out);
    if (repro_cmd->parsed()) return cmd_reproduce(out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace tangleroof
