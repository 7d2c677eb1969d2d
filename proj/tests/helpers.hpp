#pragma once

#include <Eigen/Dense>

#include <random>

#include "ncck/matpoly.hpp"
#include "ncck/poly.hpp"
#include "ncck/word.hpp"

namespace testing_util {

inline ncck::CMatrix random_complex(std::size_t k, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ncck::CMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m(i, j) = {g(rng), g(rng)};
  return m;
}

inline ncck::CMatrix random_hermitian(std::size_t k, std::mt19937_64& rng, double scale = 1.0) {
  ncck::CMatrix m = random_complex(k, rng);
  return scale * 0.5 * (m + m.adjoint());
}

inline ncck::CMatrix random_real_symmetric(std::size_t k, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m(i, j) = g(rng);
  return (scale * 0.5 * (m + m.transpose())).cast<ncck::Complex>();
}

inline ncck::MatrixTuple random_selfadjoint_tuple(std::size_t n, std::size_t k, std::mt19937_64& rng,
                                                   double scale = 1.0) {
  ncck::MatrixTuple a;
  for (std::size_t i = 0; i < n; ++i) a.push_back(random_hermitian(k, rng, scale));
  return a;
}

inline ncck::CMatrix random_unitary(std::size_t k, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ncck::CMatrix> qr(random_complex(k, rng));
  return qr.householderQ() * ncck::CMatrix::Identity(k, k);
}

/// Random polynomial with small integer Gaussian coefficients.
inline ncck::NcPolynomial random_poly(std::size_t n, std::size_t d, std::size_t terms, std::mt19937_64& rng,
                                      bool real = false) {
  const auto words = ncck::enumerate_words(n, d);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<long> c(-3, 3);
  ncck::NcPolynomial p;
  for (std::size_t t = 0; t < terms; ++t) {
    ncck::GaussianRational z(ncck::Rational(c(rng)), ncck::Rational(real ? 0 : c(rng)));
    p.add_term(words[pick(rng)], z);
  }
  return p;
}

inline double min_eig(const ncck::CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ncck::CMatrix> eig(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

inline double max_eig(const ncck::CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ncck::CMatrix> eig(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

}  // namespace testing_util
