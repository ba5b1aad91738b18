#include "lindnet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lindnet/errors.hpp"
#include "lindnet/generators.hpp"

namespace lindnet {

namespace {

constexpr double kNonRelaxingTol = 1e-12;

bool spectrum_order(const std::complex<double>& a,
                    const std::complex<double>& b) {
  const double ra = std::abs(a.real()), rb = std::abs(b.real());
  if (ra != rb) return ra < rb;
  if (a.imag() != b.imag()) return a.imag() < b.imag();
  return std::abs(a) < std::abs(b);
}

}  // namespace

const char* to_string(ModeClass c) {
  switch (c) {
    case ModeClass::Dark:
      return "dark";
    case ModeClass::QuasiDark:
      return "quasi-dark";
    default:
      return "bright";
  }
}

GapResult spectral_gap(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols())
    throw ContractViolation("spectral_gap: matrix must be square");
  if (!matrix.allFinite())
    throw ContractViolation("spectral_gap: matrix has non-finite entries");

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(matrix, /*computeU=*/false);
  if (schur.info() != Eigen::Success) {
    std::ostringstream os;
    os << "Schur decomposition did not converge for a " << matrix.rows()
       << " x " << matrix.cols() << " matrix (max iterations "
       << schur.getMaxIterations() << ")";
    throw NumericalError(os.str());
  }

  GapResult result;
  result.spectrum.resize(matrix.rows());
  for (Eigen::Index i = 0; i < matrix.rows(); ++i)
    result.spectrum[i] = schur.matrixT()(i, i);
  std::sort(result.spectrum.begin(), result.spectrum.end(), spectrum_order);

  result.achieving_eigenvalue = result.spectrum.front();
  result.gap = std::abs(result.achieving_eigenvalue.real());
  result.non_relaxing = result.gap < kNonRelaxingTol;
  return result;
}

double phi_of_gamma(const NetworkSpec& spec) {
  return spectral_gap(build_first_moment(spec).matrix).gap;
}

double theta_of_gamma(const NetworkSpec& spec) {
  return spectral_gap(build_second_moment(spec).matrix).gap;
}

EquilibriumState equilibrium(const NetworkSpec& spec) {
  const SecondMomentGenerator gen = build_second_moment(spec);
  const Eigen::Index n = gen.n_sites();
  const Eigen::VectorXcd g = gen.source.cast<std::complex<double>>();

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(gen.matrix);
  const double rhs_scale = std::max(1.0, gen.source.lpNorm<Eigen::Infinity>());
  const double residual_tol = 1e-10 * rhs_scale;

  auto singular = [&](const std::string& what) -> SingularSystem {
    const GapResult gap = spectral_gap(gen.matrix);
    std::ostringstream os;
    os << "equilibrium solve is singular (" << what
       << "): the generator has a near-zero relaxation mode at "
       << gap.achieving_eigenvalue
       << ", the signature of an exact dark state or marginal spectrum";
    return SingularSystem(os.str(), gap.achieving_eigenvalue);
  };

  if (!lu.isInvertible()) throw singular("rank-deficient LU");
  const Eigen::VectorXcd x = lu.solve(-g);
  const double residual = (gen.matrix * x + g).lpNorm<Eigen::Infinity>();
  if (residual > residual_tol) {
    std::ostringstream os;
    os << "residual " << residual << " exceeds " << residual_tol;
    throw singular(os.str());
  }

  Eigen::MatrixXcd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = x(flatten_index(i, j, n));

  const double asym = (c - c.adjoint()).cwiseAbs().maxCoeff();
  if (asym >= 1e-10) {
    std::ostringstream os;
    os << "equilibrium correlations lost Hermiticity (asymmetry " << asym
       << ")";
    throw NumericalError(os.str());
  }
  c = ((c + c.adjoint()) / 2.0).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
      c, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw NumericalError("equilibrium positivity check: eigensolver failed");
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig <= -1e-10) {
    std::ostringstream os;
    os << "equilibrium correlations are not positive semidefinite "
       << "(min eigenvalue " << min_eig << ")";
    throw NumericalError(os.str());
  }

  EquilibriumState state;
  state.c_eq = std::move(c);
  state.a_eq = Eigen::VectorXcd::Zero(n);
  state.residual = residual;
  state.min_eigenvalue = min_eig;
  return state;
}

std::vector<ModeLeakage> dark_state_analysis(const NetworkSpec& spec,
                                             double tol, double quasi_tol) {
  if (!(tol > 0.0))
    throw ContractViolation("dark_state_analysis: tol must be positive");
  if (quasi_tol < tol)
    throw ContractViolation("dark_state_analysis: quasi_tol must be >= tol");

  const std::vector<Eigenstate> states = standing_wave_eigenstates(spec);
  const std::vector<int> sites = dissipative_sites(spec);

  std::vector<ModeLeakage> modes(states.size());
  for (std::size_t l = 0; l < states.size(); ++l) {
    double leakage = 0.0;
    for (int site : sites) leakage += std::norm(states[l].vector(site - 1));
    modes[l].energy = states[l].energy;
    modes[l].vector = states[l].vector;
    modes[l].leakage = leakage;
    modes[l].classification = leakage < tol ? ModeClass::Dark
                              : leakage < quasi_tol ? ModeClass::QuasiDark
                                                    : ModeClass::Bright;
  }
  return modes;
}

}  // namespace lindnet
