#include "lindnet/generators.hpp"

#include <complex>
#include <sstream>

#include "lindnet/errors.hpp"

namespace lindnet {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

FirstMomentGenerator build_first_moment(const NetworkSpec& spec) {
  require_valid(spec);
  FirstMomentGenerator gen;
  gen.matrix = -kI * spec.hopping;
  gen.matrix.diagonal().array() -=
      (spec.loss.array() + spec.dephasing - spec.gain.array()) / 2.0;
  return gen;
}

SecondMomentGenerator build_second_moment(const NetworkSpec& spec,
                                          const SecondMomentOptions& opts) {
  require_valid(spec);
  const Eigen::Index n = spec.n_sites();
  if (opts.materialize_dense && n > opts.max_dense_sites) {
    std::ostringstream os;
    os << "dense second-moment generator refused for " << n << " sites (limit "
       << opts.max_dense_sites << "; a " << n * n << " x " << n * n
       << " complex matrix); raise max_dense_sites or go matrix-free";
    throw ContractViolation(os.str());
  }

  const bool fermionic = spec.statistics == Statistics::Fermionic;
  SecondMomentGenerator gen;
  gen.statistics = spec.statistics;
  gen.hopping_t = spec.hopping.transpose();
  gen.gain = spec.gain;

  gen.decay_mask = Eigen::MatrixXcd(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double damping =
          fermionic
              ? (spec.loss(i) + spec.loss(j) + spec.gain(i) + spec.gain(j)) / 2.0
              : (spec.loss(i) + spec.loss(j) - spec.gain(i) - spec.gain(j)) / 2.0;
      gen.decay_mask(i, j) = (i == j ? 0.0 : spec.dephasing) + damping;
    }
  }

  gen.source = Eigen::VectorXd::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    gen.source(flatten_index(i, i, n)) = spec.gain(i);

  if (opts.materialize_dense) {
    gen.matrix = Eigen::MatrixXcd::Zero(n * n, n * n);
    for (Eigen::Index nn = 0; nn < n; ++nn) {
      for (Eigen::Index mm = 0; mm < n; ++mm) {
        const Eigen::Index row = flatten_index(nn, mm, n);
        for (Eigen::Index l = 0; l < n; ++l) {
          gen.matrix(row, flatten_index(nn, l, n)) -= kI * spec.hopping(mm, l);
          gen.matrix(row, flatten_index(l, mm, n)) += kI * spec.hopping(l, nn);
        }
        gen.matrix(row, row) -= gen.decay_mask(nn, mm);
      }
    }
  }
  return gen;
}

Eigen::MatrixXcd apply_second_moment(const SecondMomentGenerator& gen,
                                     const Eigen::MatrixXcd& c) {
  const Eigen::Index n = gen.n_sites();
  if (c.rows() != n || c.cols() != n) {
    std::ostringstream os;
    os << "apply_second_moment: expected a " << n << " x " << n
       << " correlation matrix, got " << c.rows() << " x " << c.cols();
    throw ContractViolation(os.str());
  }
  Eigen::MatrixXcd dc = kI * (gen.hopping_t * c - c * gen.hopping_t);
  dc -= gen.decay_mask.cwiseProduct(c);
  dc.diagonal() += gen.gain.cast<std::complex<double>>();
  return dc;
}

}  // namespace lindnet
