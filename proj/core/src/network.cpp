#include "lindnet/network.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "lindnet/errors.hpp"

namespace lindnet {

namespace {
constexpr double kHermitianTol = 1e-12;
}

const char* to_string(Statistics s) {
  return s == Statistics::Bosonic ? "bosonic" : "fermionic";
}

std::string ValidationReport::joined() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i];
  }
  return os.str();
}

ValidationReport validate(const NetworkSpec& spec) {
  ValidationReport report;
  auto add = [&report](const std::string& msg) {
    report.violations.push_back(msg);
  };

  const Eigen::Index n = spec.hopping.rows();
  if (n < 1) add("network must have at least one site");
  if (spec.hopping.cols() != n)
    add("hopping matrix is not square");
  if (spec.loss.size() != n)
    add("loss vector length does not match site count");
  if (spec.gain.size() != n)
    add("gain vector length does not match site count");
  if (!report.ok()) return report;  // shape errors make the rest meaningless

  if (!spec.hopping.allFinite()) add("hopping matrix has non-finite entries");
  if (!spec.loss.allFinite()) add("loss rates have non-finite entries");
  if (!spec.gain.allFinite()) add("gain rates have non-finite entries");
  if (!std::isfinite(spec.dephasing)) add("dephasing rate is non-finite");
  if (!report.ok()) return report;

  double worst_asym = 0.0;
  Eigen::Index wi = 0, wj = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double asym =
          std::abs(spec.hopping(i, j) - std::conj(spec.hopping(j, i)));
      if (asym > worst_asym) {
        worst_asym = asym;
        wi = i;
        wj = j;
      }
    }
  }
  if (worst_asym > kHermitianTol) {
    std::ostringstream os;
    os << "hopping is not Hermitian: |J(" << wi + 1 << "," << wj + 1
       << ") - conj(J(" << wj + 1 << "," << wi + 1 << "))| = " << worst_asym;
    add(os.str());
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    if (spec.loss(i) < 0.0) {
      std::ostringstream os;
      os << "negative loss rate at node " << i + 1;
      add(os.str());
    }
    if (spec.gain(i) < 0.0) {
      std::ostringstream os;
      os << "negative gain rate at node " << i + 1;
      add(os.str());
    }
  }
  if (spec.dephasing < 0.0) add("negative dephasing rate");

  if (spec.statistics == Statistics::Bosonic) {
    // Stability: any node carrying gain must lose faster than it gains.
    // Nodes with gamma = g = 0 are fine; marginal g = gamma > 0 is rejected.
    for (Eigen::Index i = 0; i < n; ++i) {
      if (spec.gain(i) > 0.0 && spec.gain(i) >= spec.loss(i)) {
        std::ostringstream os;
        os << "gain exceeds loss at node " << i + 1 << " (g = " << spec.gain(i)
           << ", gamma = " << spec.loss(i) << "): bosonic spec is unstable";
        add(os.str());
      }
    }
  }
  return report;
}

void require_valid(const NetworkSpec& spec) {
  const ValidationReport report = validate(spec);
  if (!report.ok()) throw InvalidSpec("invalid network spec: " + report.joined());
}

NetworkSpec symmetrized(NetworkSpec spec) {
  spec.hopping = ((spec.hopping + spec.hopping.adjoint()) / 2.0).eval();
  return spec;
}

std::vector<int> dissipative_sites(const NetworkSpec& spec) {
  std::vector<int> sites;
  for (Eigen::Index i = 0; i < spec.n_sites(); ++i)
    if (spec.loss(i) > 0.0 || spec.gain(i) > 0.0)
      sites.push_back(static_cast<int>(i) + 1);
  return sites;
}

NetworkSpec with_dephasing(NetworkSpec spec, double gamma) {
  spec.dephasing = gamma;
  return spec;
}

NetworkSpec build_chain(const ChainBuilder& builder) {
  if (builder.n_sites < 1)
    throw ContractViolation("chain builder: n_sites must be positive");
  if (!(builder.hop_rate > 0.0))
    throw ContractViolation("chain builder: hop_rate must be positive");

  const Eigen::Index n = builder.n_sites;
  NetworkSpec spec;
  spec.hopping = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    spec.hopping(i, i + 1) = builder.hop_rate;
    spec.hopping(i + 1, i) = builder.hop_rate;
  }
  spec.loss = Eigen::VectorXd::Zero(n);
  spec.gain = Eigen::VectorXd::Zero(n);

  std::set<int> seen;
  for (const auto& node : builder.dissipative) {
    if (node.node < 1 || node.node > builder.n_sites) {
      std::ostringstream os;
      os << "chain builder: node " << node.node << " outside 1.."
         << builder.n_sites;
      throw ContractViolation(os.str());
    }
    if (!seen.insert(node.node).second) {
      std::ostringstream os;
      os << "chain builder: duplicate dissipative node " << node.node;
      throw ContractViolation(os.str());
    }
    spec.loss(node.node - 1) = node.loss;
    spec.gain(node.node - 1) = node.gain;
  }

  spec.dephasing = builder.dephasing;
  spec.statistics = builder.statistics;
  spec.reference_rate = builder.hop_rate;
  return spec;
}

std::vector<Eigenstate> standing_wave_eigenstates(const NetworkSpec& spec) {
  require_valid(spec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(spec.hopping);
  if (solver.info() != Eigen::Success)
    throw NumericalError("hopping eigendecomposition did not converge");

  std::vector<Eigenstate> states(spec.n_sites());
  for (Eigen::Index l = 0; l < spec.n_sites(); ++l) {
    states[l].energy = solver.eigenvalues()(l);
    states[l].vector = solver.eigenvectors().col(l);
  }
  return states;
}

}  // namespace lindnet
