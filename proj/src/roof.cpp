#include "tangleroof/roof.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "minimize.hpp"
#include "parallel.hpp"

namespace tangleroof {

using detail::golden_min;

namespace {

constexpr double kIsometryTol = 1e-10;
constexpr double kWeightFloor = 1e-14;
constexpr double kCertGapTol = 1e-8;
constexpr double kCertReconTol = 1e-9;

// Weighted tangle of an unnormalized ensemble member: w * tangle(x/|x|)
// with w = |x|^2, which simplifies to |x|^(2-h) * |pre(x)|.
double member_tangle(const Eigen::VectorXcd& x, const TangleDescriptor& desc) {
  const double nrm2 = x.squaredNorm();
  if (nrm2 < kWeightFloor) return 0.0;
  return std::pow(nrm2, 0.5 * (2 - desc.degree_h)) * std::abs(desc.pre_modulus(x));
}

struct GhzWFamily {
  RankTwoPencil pencil;  // psi0 = GHZ, psi1 = W
  double p0 = 0;         // zero-polytope boundary on the family
  double p1 = 0;         // tangency weight of the right affine branch
  double tau_p1 = 0;
  double tau_one = 0;    // tangle of GHZ
};

const GhzWFamily& ghz_w_family() {
  static const GhzWFamily family = [] {
    GhzWFamily f;
    f.pencil = make_pencil(ghz_state(), w_state(), 0.5);
    const TangleDescriptor& desc = three_tangle_descriptor();

    const ZeroPolytope polytope = zero_polytope(f.pencil, desc);
    double q_sum = 0;
    int n_finite = 0;
    for (const auto& corner : polytope.corners)
      if (corner.z) {
        q_sum += corner.q;
        ++n_finite;
      }
    if (n_finite == 0) throw std::runtime_error("GHZ/W zero polytope has no finite corners");
    f.p0 = q_sum / n_finite;

    const CharacteristicCurve curve = characteristic_curve(f.pencil, desc);
    const auto p1 = refine_tangency(curve, GapSide::right);
    if (!p1) throw std::runtime_error("GHZ/W curve has no right affine gap");
    f.p1 = *p1;
    f.tau_p1 = tau_tilde_at(f.pencil, desc, f.p1).value;
    f.tau_one = tangle(desc, f.pencil.psi0);
    return f;
  }();
  return family;
}

DensityMatrix family_density(const RankTwoPencil& pencil, double p) {
  Eigen::MatrixXcd m =
      p * (pencil.psi0.amplitudes * pencil.psi0.amplitudes.adjoint()) +
      (1.0 - p) * (pencil.psi1.amplitudes * pencil.psi1.amplitudes.adjoint());
  return DensityMatrix{pencil.psi0.n_qubits, std::move(m)};
}

double reconstruction_error(const Decomposition& dec, const DensityMatrix& rho) {
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(rho.matrix.rows(), rho.matrix.cols());
  for (size_t i = 0; i < dec.weights.size(); ++i)
    sum += dec.weights[i] * (dec.states[i].amplitudes * dec.states[i].amplitudes.adjoint());
  return (sum - rho.matrix).cwiseAbs().maxCoeff();
}

// Takagi factorization a = w * diag(s1, s2) * w^T of a 2x2 complex symmetric
// matrix, with w unitary and s1 >= s2 >= 0. Columns of w are con-eigenvectors:
// a * conj(w_i) = s_i * w_i.
struct Takagi2 {
  Eigen::Matrix2cd w;
  double s1 = 0;
  double s2 = 0;
};

Takagi2 takagi2(const Eigen::Matrix2cd& a) {
  Takagi2 t;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(a * a.adjoint());
  t.s1 = std::sqrt(std::max(es.eigenvalues()[1], 0.0));
  t.s2 = std::sqrt(std::max(es.eigenvalues()[0], 0.0));

  // If u is a unit eigenvector of a*a^dagger with eigenvalue s^2, then
  // a*conj(u) + s*u is a con-eigenvector unless it cancels, in which case u
  // itself works up to a factor i.
  const Eigen::Vector2cd u1 = es.eigenvectors().col(1);
  Eigen::Vector2cd w1 = a * u1.conjugate() + t.s1 * u1;
  if (w1.norm() > 1e-8 * (t.s1 + 1e-300))
    w1.normalize();
  else
    w1 = t.s1 > 0 ? (cd(0, 1) * u1).eval() : u1;

  // The second column is the orthogonal complement with its Takagi phase.
  Eigen::Vector2cd w2(-std::conj(w1[1]), std::conj(w1[0]));
  const cd mu = w2.dot(a * w2.conjugate());
  if (std::abs(mu) > 0) w2 *= std::polar(1.0, 0.5 * std::arg(mu));
  t.w.col(0) = w1;
  t.w.col(1) = w2;
  return t;
}

}  // namespace

MixingIsometry make_mixing_isometry(Eigen::MatrixXcd u) {
  if (u.rows() < u.cols())
    throw std::invalid_argument("mixing isometry needs at least as many rows as columns");
  for (Eigen::Index i = 0; i < u.cols(); ++i)
    for (Eigen::Index j = i; j < u.cols(); ++j) {
      const cd g = u.col(i).dot(u.col(j));
      const cd expected = i == j ? cd(1, 0) : cd(0, 0);
      if (std::abs(g - expected) > kIsometryTol)
        throw std::invalid_argument("matrix is not an isometry: columns " +
                                    std::to_string(i) + "," + std::to_string(j) +
                                    " have Gram entry off by " +
                                    std::to_string(std::abs(g - expected)));
    }
  return MixingIsometry{std::move(u)};
}

Decomposition mix(const EigenDecomposition& eig, const MixingIsometry& isometry) {
  const int r = int(isometry.u.cols());
  if (r > eig.rank)
    throw std::invalid_argument("isometry spans " + std::to_string(r) +
                                " columns but the state has rank " +
                                std::to_string(eig.rank));
  const Eigen::Index dim = eig.eigenstates[0].amplitudes.size();
  Decomposition dec;
  for (Eigen::Index l = 0; l < isometry.u.rows(); ++l) {
    Eigen::VectorXcd chi = Eigen::VectorXcd::Zero(dim);
    for (int j = 0; j < r; ++j)
      chi += isometry.u(l, j) * std::sqrt(eig.eigenvalues[j]) * eig.eigenstates[j].amplitudes;
    const double w = chi.squaredNorm();
    if (w < kWeightFloor) continue;
    chi /= std::sqrt(w);
    dec.weights.push_back(w);
    dec.states.push_back(PureState{eig.eigenstates[0].n_qubits, std::move(chi)});
  }
  return dec;
}

DensityMatrix reconstruct(const Decomposition& dec) {
  if (dec.weights.empty()) throw std::invalid_argument("empty decomposition");
  const Eigen::Index dim = dec.states[0].amplitudes.size();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (size_t i = 0; i < dec.weights.size(); ++i)
    sum += dec.weights[i] * (dec.states[i].amplitudes * dec.states[i].amplitudes.adjoint());
  return make_density_matrix(dec.states[0].n_qubits, std::move(sum));
}

double average_tangle(const Decomposition& dec, const TangleDescriptor& desc) {
  if (dec.weights.size() != dec.states.size())
    throw std::invalid_argument("decomposition weights and states differ in length");
  double sum = 0;
  for (size_t i = 0; i < dec.weights.size(); ++i)
    sum += dec.weights[i] * tangle(desc, dec.states[i]);
  return sum;
}

RoofCertificate ghz_w_roof(double p) {
  if (p < 0.0 || p > 1.0)
    throw std::domain_error("mixing weight p must lie in [0,1], got " + std::to_string(p));
  const GhzWFamily& fam = ghz_w_family();
  const TangleDescriptor& desc = three_tangle_descriptor();
  const double pi = std::numbers::pi;

  RoofCertificate cert;
  cert.p = p;

  auto star_states = [&](double weight) {
    std::vector<PureState> states;
    for (int j = 0; j < 3; ++j)
      states.push_back(state_at(fam.pencil, weight, pi + 2.0 * pi * j / 3.0));
    return states;
  };

  if (p <= fam.p0) {
    // Mixture of the three zero corners at p0 and the W projector.
    cert.lower = 0.0;
    const double s = p / fam.p0;
    for (const auto& st : star_states(fam.p0)) {
      cert.decomposition.weights.push_back(s / 3.0);
      cert.decomposition.states.push_back(st);
    }
    cert.decomposition.weights.push_back(1.0 - s);
    cert.decomposition.states.push_back(fam.pencil.psi1);
  } else if (p <= fam.p1) {
    // Symmetric ensemble: all three members share the phase-minimal tangle.
    cert.lower = tau_tilde_at(fam.pencil, desc, p).value;
    for (const auto& st : star_states(p)) {
      cert.decomposition.weights.push_back(1.0 / 3.0);
      cert.decomposition.states.push_back(st);
    }
  } else {
    // Blend of the tangency ensemble with the pure GHZ projector.
    cert.lower = fam.tau_p1 + (p - fam.p1) * (fam.tau_one - fam.tau_p1) / (1.0 - fam.p1);
    const double s = (1.0 - p) / (1.0 - fam.p1);
    for (const auto& st : star_states(fam.p1)) {
      cert.decomposition.weights.push_back(s / 3.0);
      cert.decomposition.states.push_back(st);
    }
    cert.decomposition.weights.push_back(1.0 - s);
    cert.decomposition.states.push_back(fam.pencil.psi0);
  }

  // Drop negligible members (pure endpoints of the family).
  Decomposition pruned;
  for (size_t i = 0; i < cert.decomposition.weights.size(); ++i)
    if (cert.decomposition.weights[i] >= kWeightFloor) {
      pruned.weights.push_back(cert.decomposition.weights[i]);
      pruned.states.push_back(cert.decomposition.states[i]);
    }
  cert.decomposition = std::move(pruned);

  cert.upper = average_tangle(cert.decomposition, desc);
  cert.gap = cert.upper - cert.lower;
  const double recon = reconstruction_error(cert.decomposition, family_density(fam.pencil, p));
  cert.status = (std::abs(cert.gap) < kCertGapTol && recon <= kCertReconTol)
                    ? CertificateStatus::certified
                    : CertificateStatus::bounded;
  return cert;
}

double wootters_concurrence(const DensityMatrix& rho) {
  if (rho.n_qubits != 2)
    throw std::invalid_argument("Wootters concurrence is defined for 2 qubits, got " +
                                std::to_string(rho.n_qubits));
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1;
  yy(1, 2) = 1;
  yy(2, 1) = 1;
  yy(3, 0) = -1;

  // The lambdas are the square roots of the eigenvalues of
  // sqrt(rho) * yy * conj(rho) * yy * sqrt(rho), i.e. the singular values of
  // M = sqrt(rho) * yy * sqrt(rho)^T. Taking them from an SVD of M avoids the
  // sqrt blow-up of eigenvalue round-off near degeneracies, which matters when
  // locating zeros of the concurrence curve.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> rho_eig(rho.matrix);
  Eigen::Vector4d ev = rho_eig.eigenvalues().cwiseMax(0.0);
  const double top = ev.maxCoeff();
  for (int i = 0; i < 4; ++i)
    if (ev[i] < 1e-13 * top) ev[i] = 0.0;  // snap rank-deficient directions
  const Eigen::Matrix4cd sqrt_rho = rho_eig.eigenvectors() *
                                    ev.cwiseSqrt().asDiagonal() *
                                    rho_eig.eigenvectors().adjoint();
  const Eigen::Matrix4cd m = sqrt_rho * yy * sqrt_rho.transpose();
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m);
  const Eigen::Vector4d& lambdas = svd.singularValues();  // descending
  return std::max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]);
}

UpperBoundResult upper_bound_search(const EigenDecomposition& eig,
                                    const TangleDescriptor& desc, int m, int restarts,
                                    std::uint64_t seed) {
  const int r = eig.rank;
  if (r < 1) throw std::invalid_argument("state has rank 0");
  if (eig.eigenstates[0].n_qubits != desc.n_qubits)
    throw std::invalid_argument("descriptor '" + desc.name + "' expects " +
                                std::to_string(desc.n_qubits) + " qubits");
  if (m == 0) m = desc.degree_h;
  if (m < r)
    throw std::invalid_argument("ensemble length " + std::to_string(m) +
                                " is below the rank " + std::to_string(r));
  if (restarts < 1) throw std::invalid_argument("need at least one restart");

  const Eigen::Index dim = eig.eigenstates[0].amplitudes.size();
  Eigen::MatrixXcd basis(dim, r);  // columns sqrt(p_j) |psi_j>
  for (int j = 0; j < r; ++j)
    basis.col(j) = std::sqrt(eig.eigenvalues[j]) * eig.eigenstates[j].amplitudes;

  auto objective_rows = [&](const std::vector<Eigen::VectorXcd>& rows) {
    double sum = 0;
    for (const auto& x : rows) sum += member_tangle(x, desc);
    return sum;
  };

  struct Outcome {
    double value = 0;
    Eigen::MatrixXcd u;
  };
  std::vector<Outcome> outcomes(restarts);

  detail::parallel_for(restarts, [&](int trial) {
    std::mt19937_64 rng(seed + std::uint64_t(trial));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(m, r);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < r; ++j) g(i, j) = cd(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd u = qr.householderQ() * Eigen::MatrixXcd::Identity(m, r);

    // chi rows of the current ensemble.
    std::vector<Eigen::VectorXcd> rows(m);
    for (int l = 0; l < m; ++l) rows[l] = (u.row(l) * basis.transpose()).transpose();

    const double pi = std::numbers::pi;
    double current = objective_rows(rows);
    auto descend = [&] {
      for (int sweep = 0; sweep < 60; ++sweep) {
        const double before = current;
        for (int k = 0; k < m; ++k)
          for (int l = k + 1; l < m; ++l) {
            const Eigen::VectorXcd xk = rows[k], xl = rows[l];
            const double rest = current - member_tangle(xk, desc) - member_tangle(xl, desc);

            auto apply_pair = [&](const Eigen::Matrix2cd& g) {
              rows[k] = g(0, 0) * xk + g(0, 1) * xl;
              rows[l] = g(1, 0) * xk + g(1, 1) * xl;
              // Track the rotation so the final isometry matches the rows.
              const Eigen::RowVectorXcd uk = u.row(k), ul = u.row(l);
              u.row(k) = g(0, 0) * uk + g(0, 1) * ul;
              u.row(l) = g(1, 0) * uk + g(1, 1) * ul;
              current = rest + member_tangle(rows[k], desc) + member_tangle(rows[l], desc);
            };

            if (desc.degree_h == 2) {
              // Quadratic measures admit an exact two-member step. Polarizing
              // the pre form gives the pair matrix [[pre(xk), b], [b, pre(xl)]]
              // whose Takagi values s1 >= s2 bound the reachable pair sum from
              // below by s1 - s2, attained by mixing the Takagi columns at 45
              // degrees with a quarter-turn phase.
              const cd b =
                  0.25 * (desc.pre_modulus(xk + xl) - desc.pre_modulus(xk - xl));
              Eigen::Matrix2cd pair_m;
              pair_m << desc.pre_modulus(xk), b, b, desc.pre_modulus(xl);
              const Takagi2 t = takagi2(pair_m);
              if (t.s1 - t.s2 < current - rest - 1e-15) {
                const double inv_rt2 = std::numbers::sqrt2 / 2.0;
                Eigen::Matrix2cd balance;
                balance << inv_rt2, cd(0, inv_rt2), cd(0, inv_rt2), inv_rt2;
                apply_pair(balance * t.w.adjoint());
              }
              continue;
            }

            auto pair_val = [&](double theta, double phi) {
              const cd e = std::polar(1.0, phi);
              const double c = std::cos(theta), s = std::sin(theta);
              return member_tangle(c * xk + s * e * xl, desc) +
                     member_tangle(-s * std::conj(e) * xk + c * xl, desc);
            };
            double bt = 0, bp = 0, bv = pair_val(0, 0);
            for (int it = 0; it <= 16; ++it)
              for (int ip = 0; ip < 24; ++ip) {
                const double theta = it * (pi / 2) / 16;
                const double phi = ip * 2 * pi / 24;
                const double v = pair_val(theta, phi);
                if (v < bv) {
                  bv = v;
                  bt = theta;
                  bp = phi;
                }
              }
            // Nested golden refinement: the outer theta search scores each theta
            // by the phase-minimized value, so the two directions cannot zigzag
            // against each other along a curved valley.
            for (int round = 0; round < 3; ++round) {
              const double span = 1.0 / (1 << (2 * round));
              double inner_phi = bp;
              auto theta_score = [&](double tt) {
                auto [ph, v] = golden_min(
                    [&](double q) { return pair_val(tt, q); },
                    bp - span * pi / 12, bp + span * pi / 12, 1e-10);
                inner_phi = ph;
                return v;
              };
              auto [t_ref, vt] =
                  golden_min(theta_score, bt - span * pi / 32, bt + span * pi / 32, 1e-10);
              if (vt < bv) {
                bv = vt;
                bt = t_ref;
                theta_score(t_ref);
                bp = inner_phi;
              }
            }
            if (bv < current - rest - 1e-15) {
              const cd e = std::polar(1.0, bp);
              const double c = std::cos(bt), s = std::sin(bt);
              Eigen::Matrix2cd g;
              g << c, s * e, -s * std::conj(e), c;
              apply_pair(g);
            }
          }
        if (before - current < 1e-13 * std::max(1.0, current)) break;
      }
    };

    descend();

    // Pair moves alone stop at pairwise-optimal local minima, which are
    // plentiful for the quartic measures. Basin hopping: perturb the converged
    // ensemble with random pair rotations of shrinking size, re-descend, and
    // keep the result only when it improves.
    Eigen::MatrixXcd best_u = u;
    std::vector<Eigen::VectorXcd> best_rows = rows;
    double best_value = current;
    if (m >= 2) {
      std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
      std::uniform_real_distribution<double> spread(0.3, 1.0);
      std::uniform_int_distribution<int> pick(0, m - 1);
      auto rotate_pair = [&](int k, int l, double theta, double phi) {
        const cd e = std::polar(1.0, phi);
        const double c = std::cos(theta), s = std::sin(theta);
        const Eigen::VectorXcd xk = rows[k], xl = rows[l];
        rows[k] = c * xk + s * e * xl;
        rows[l] = -s * std::conj(e) * xk + c * xl;
        const Eigen::RowVectorXcd uk = u.row(k), ul = u.row(l);
        u.row(k) = c * uk + s * e * ul;
        u.row(l) = -s * std::conj(e) * uk + c * ul;
      };
      for (int kick = 0; kick < 10; ++kick) {
        const double kappa = 0.6 * std::pow(0.7, kick);
        for (int hit = 0; hit < 2; ++hit) {
          const int k = pick(rng);
          int l = pick(rng);
          while (l == k) l = pick(rng);
          rotate_pair(k, l, kappa * spread(rng), angle(rng));
        }
        current = objective_rows(rows);
        descend();
        if (current < best_value - 1e-15) {
          best_value = current;
          best_u = u;
          best_rows = rows;
        } else {
          u = best_u;
          rows = best_rows;
          current = best_value;
        }
      }
    }
    outcomes[trial] = Outcome{best_value, std::move(best_u)};
  });

  int best = 0;
  for (int i = 1; i < restarts; ++i)
    if (outcomes[i].value < outcomes[best].value) best = i;

  UpperBoundResult result;
  // Rebuild the ensemble from the winning isometry through the public path.
  const Eigen::MatrixXcd& u_best = outcomes[best].u;
  // Re-orthonormalize to wash out drift accumulated over many rotations. The
  // raw Q factor carries arbitrary column phases, and column phases are not a
  // gauge freedom (they re-phase the eigenstate contributions inside each
  // member), so rotate each column back onto the optimized one.
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(u_best);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, r);
  for (int j = 0; j < r; ++j) {
    const cd overlap = q.col(j).dot(u_best.col(j));
    if (std::abs(overlap) > 0) q.col(j) *= overlap / std::abs(overlap);
  }
  result.decomposition = mix(eig, make_mixing_isometry(q));
  result.value = average_tangle(result.decomposition, desc);
  return result;
}

std::optional<Decomposition> corner_decomposition(const ZeroPolytope& polytope,
                                                  const RankTwoPencil& pencil,
                                                  double p) {
  if (p < 0.0 || p > 1.0)
    throw std::domain_error("mixing weight p must lie in [0,1], got " + std::to_string(p));
  if (polytope.corners.empty()) return std::nullopt;
  const int n = int(polytope.corners.size());
  Eigen::Vector4d target(0, 0, 2.0 * p - 1.0, 1.0);

  // Carathéodory: if the point lies in the hull, some simplex of at most
  // 4 corners contains it. Try subsets by ascending size.
  for (int size = 1; size <= std::min(4, n); ++size) {
    std::vector<int> idx(size);
    std::function<std::optional<Decomposition>(int, int)> search =
        [&](int pos, int start) -> std::optional<Decomposition> {
      if (pos == size) {
        Eigen::MatrixXd a(4, size);
        for (int c = 0; c < size; ++c) {
          const BlochPoint& b = polytope.corners[idx[c]].bloch;
          a.col(c) << b.x, b.y, b.z, 1.0;
        }
        Eigen::VectorXd w = a.colPivHouseholderQr().solve(target);
        if ((a * w - target).cwiseAbs().maxCoeff() > 1e-9) return std::nullopt;
        if (w.minCoeff() < -1e-9) return std::nullopt;
        Decomposition dec;
        for (int c = 0; c < size; ++c) {
          const double wc = std::max(w[c], 0.0);
          if (wc < kWeightFloor) continue;
          dec.weights.push_back(wc);
          dec.states.push_back(polytope.corners[idx[c]].state);
        }
        if (dec.weights.empty()) return std::nullopt;
        const double rec = reconstruction_error(dec, family_density(pencil, p));
        if (rec > 1e-8) return std::nullopt;
        return dec;
      }
      for (int i = start; i <= n - (size - pos); ++i) {
        idx[pos] = i;
        if (auto found = search(pos + 1, i + 1)) return found;
      }
      return std::nullopt;
    };
    if (auto found = search(0, 0)) return found;
  }
  return std::nullopt;
}

}  // namespace tangleroof
