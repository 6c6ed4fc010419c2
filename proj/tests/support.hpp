#pragma once

// Independent reference computations used as oracles by the unit tests.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include "dimerlab/linalg.hpp"

namespace testing_support {

using dimerlab::Complex;
using dimerlab::ComplexMatrix;

inline ComplexMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

/// Unitary from modified Gram-Schmidt on the columns of a Gaussian matrix.
inline ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  ComplexMatrix m = random_matrix(n, rng);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      Complex dot = 0.0;
      for (std::size_t r = 0; r < n; ++r) dot += std::conj(m(r, p)) * m(r, c);
      for (std::size_t r = 0; r < n; ++r) m(r, c) -= dot * m(r, p);
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += std::norm(m(r, c));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) m(r, c) /= norm;
  }
  return m;
}

/// Positive semidefinite with unit trace: G G^+ / tr.
inline ComplexMatrix random_density(std::size_t n, std::mt19937_64& rng) {
  const ComplexMatrix g = random_matrix(n, rng);
  ComplexMatrix rho = g * g.adjoint();
  const double t = rho.trace().real();
  rho *= Complex(1.0 / t);
  return rho;
}

/// Direct index-loop partial trace over a two-factor space dA x dB, keeping A.
inline ComplexMatrix trace_out_second(const ComplexMatrix& rho, std::size_t dA, std::size_t dB) {
  ComplexMatrix out(dA, dA);
  for (std::size_t i = 0; i < dA; ++i) {
    for (std::size_t j = 0; j < dA; ++j) {
      for (std::size_t k = 0; k < dB; ++k) out(i, j) += rho(i * dB + k, j * dB + k);
    }
  }
  return out;
}

/// Direct index-loop partial trace over a two-factor space dA x dB, keeping B.
inline ComplexMatrix trace_out_first(const ComplexMatrix& rho, std::size_t dA, std::size_t dB) {
  ComplexMatrix out(dB, dB);
  for (std::size_t i = 0; i < dB; ++i) {
    for (std::size_t j = 0; j < dB; ++j) {
      for (std::size_t k = 0; k < dA; ++k) out(i, j) += rho(k * dB + i, k * dB + j);
    }
  }
  return out;
}

/// Determinant-free check that two ascending-sorted spectra agree.
inline double spectrum_gap(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace testing_support
