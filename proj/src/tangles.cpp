#include "tangleroof/tangles.hpp"

#include <cmath>
#include <stdexcept>

namespace tangleroof {

cd concurrence_pre(const Eigen::VectorXcd& a) {
  return 2.0 * (a[0] * a[3] - a[1] * a[2]);
}

cd three_tangle_pre(const Eigen::VectorXcd& a) {
  // Basis index abc in binary: |000> = 0, ..., |111> = 7.
  const cd p000 = a[0], p001 = a[1], p010 = a[2], p011 = a[3];
  const cd p100 = a[4], p101 = a[5], p110 = a[6], p111 = a[7];
  const cd d1 = p000 * p000 * p111 * p111 + p001 * p001 * p110 * p110 +
                p010 * p010 * p101 * p101 + p100 * p100 * p011 * p011;
  const cd d2 = p000 * p111 * p011 * p100 + p000 * p111 * p101 * p010 +
                p000 * p111 * p110 * p001 + p011 * p100 * p101 * p010 +
                p011 * p100 * p110 * p001 + p101 * p010 * p110 * p001;
  const cd d3 = p000 * p110 * p101 * p011 + p111 * p001 * p010 * p100;
  return 4.0 * (d1 - 2.0 * d2 + 4.0 * d3);
}

const TangleDescriptor& concurrence_descriptor() {
  static const TangleDescriptor desc{"concurrence", 2, 2, concurrence_pre};
  return desc;
}

const TangleDescriptor& three_tangle_descriptor() {
  static const TangleDescriptor desc{"three_tangle", 3, 4, three_tangle_pre};
  return desc;
}

const TangleDescriptor* find_tangle(std::string_view name) {
  if (name == "concurrence") return &concurrence_descriptor();
  if (name == "three_tangle") return &three_tangle_descriptor();
  return nullptr;
}

std::vector<std::string> tangle_names() { return {"concurrence", "three_tangle"}; }

double tangle(const TangleDescriptor& desc, const PureState& psi) {
  if (desc.n_qubits != psi.n_qubits)
    throw std::invalid_argument("descriptor '" + desc.name + "' expects " +
                                std::to_string(desc.n_qubits) + " qubits, state has " +
                                std::to_string(psi.n_qubits));
  const double drift = std::abs(psi.amplitudes.norm() - 1.0);
  if (drift > 1e-9)
    throw std::invalid_argument("state norm drifted from 1 by " + std::to_string(drift));
  return std::abs(desc.pre_modulus(psi.amplitudes));
}

}  // namespace tangleroof
