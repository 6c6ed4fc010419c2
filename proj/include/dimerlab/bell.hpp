#pragma once

// Generalized Bell basis for two spin-s particles:
//   |(ab)> = S^{-1/2} sum_k gamma^{kb} |k>|k+a>,  gamma = exp(2 pi i / S),
// with all index arithmetic taken mod S.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "dimerlab/errors.hpp"
#include "dimerlab/linalg.hpp"

namespace dimerlab {

/// Local Hilbert-space dimension S = 2s + 1.
class SpinDim {
 public:
  explicit SpinDim(int S) : value_(S) {
    if (S < 2) throw ArgumentError("SpinDim: S must be >= 2, got " + std::to_string(S));
  }

  /// From twice the spin (2s), so half-integer spins stay exact.
  static SpinDim from_twice_spin(int two_s) { return SpinDim(two_s + 1); }

  int value() const noexcept { return value_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(value_); }
  double spin() const noexcept { return (value_ - 1) / 2.0; }

  /// gamma^k, with k reduced mod S first so large exponents stay exact.
  Complex gamma_pow(long long k) const {
    const long long r = ((k % value_) + value_) % value_;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / value_;
    return {std::cos(angle), std::sin(angle)};
  }

  int mod(long long k) const noexcept { return static_cast<int>(((k % value_) + value_) % value_); }

  friend bool operator==(const SpinDim&, const SpinDim&) = default;

 private:
  int value_;
};

struct BellLabel {
  int a = 0;
  int b = 0;

  void validate(SpinDim S) const {
    if (a < 0 || a >= S.value() || b < 0 || b >= S.value()) {
      throw ArgumentError("BellLabel (" + std::to_string(a) + "," + std::to_string(b) +
                          ") out of range for S=" + std::to_string(S.value()));
    }
  }

  friend bool operator==(const BellLabel&, const BellLabel&) = default;
};

/// All S^2 labels in (a, b) lexicographic order.
inline std::vector<BellLabel> all_labels(SpinDim S) {
  std::vector<BellLabel> out;
  for (int a = 0; a < S.value(); ++a) {
    for (int b = 0; b < S.value(); ++b) out.push_back({a, b});
  }
  return out;
}

/// Amplitude vector over num_sites sites of dimension S; site 0 varies slowest.
class PureState {
 public:
  PureState(SpinDim S, std::size_t num_sites, std::vector<Complex> amplitudes)
      : local_dim_(S), num_sites_(num_sites), amplitudes_(std::move(amplitudes)) {
    const std::size_t expected = checked_pow(S.size(), num_sites, amplitudes_.size());
    if (expected != amplitudes_.size()) {
      throw ArgumentError("PureState: " + std::to_string(amplitudes_.size()) + " amplitudes for " +
                          std::to_string(num_sites) + " sites of dimension " + std::to_string(S.value()));
    }
    for (const auto& z : amplitudes_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ArgumentError("PureState: non-finite amplitude");
    }
  }

  /// Zero vector; caps the size against the configured amplitude limit.
  static PureState zeros(SpinDim S, std::size_t num_sites) {
    const std::size_t cap = limits().max_amplitudes;
    const std::size_t n = checked_pow(S.size(), num_sites, cap);
    if (n > cap) {
      throw CapacityError("PureState: " + std::to_string(S.value()) + "^" + std::to_string(num_sites) +
                          " amplitudes exceed the cap of " + std::to_string(cap) +
                          " (raise DIMERLAB_MAX_STATE)");
    }
    return PureState(S, num_sites, std::vector<Complex>(n));
  }

  SpinDim local_dim() const noexcept { return local_dim_; }
  std::size_t num_sites() const noexcept { return num_sites_; }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  std::span<Complex> amplitudes() noexcept { return amplitudes_; }
  std::vector<std::size_t> dims() const { return std::vector<std::size_t>(num_sites_, local_dim_.size()); }

  double norm2() const {
    double s = 0.0;
    for (const auto& z : amplitudes_) s += std::norm(z);
    return s;
  }

  Complex inner(const PureState& other) const {
    if (other.amplitudes_.size() != amplitudes_.size()) throw ArgumentError("PureState::inner: size mismatch");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) acc += std::conj(amplitudes_[i]) * other.amplitudes_[i];
    return acc;
  }

  PureState& operator+=(const PureState& other) {
    if (other.amplitudes_.size() != amplitudes_.size()) throw ArgumentError("PureState: size mismatch");
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) amplitudes_[i] += other.amplitudes_[i];
    return *this;
  }

  DensityMatrix projector() const {
    return DensityMatrix(ComplexMatrix::outer(amplitudes_, amplitudes_), dims());
  }

 private:
  SpinDim local_dim_;
  std::size_t num_sites_;
  std::vector<Complex> amplitudes_;
};

inline PureState bell_state(SpinDim S, BellLabel label) {
  label.validate(S);
  const std::size_t n = S.size();
  std::vector<Complex> amp(n * n);
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < S.value(); ++k) {
    amp[static_cast<std::size_t>(k) * n + static_cast<std::size_t>(S.mod(k + label.a))] =
        S.gamma_pow(static_cast<long long>(k) * label.b) * inv_sqrt;
  }
  return PureState(S, 2, std::move(amp));
}

/// Gram matrix G[(a,b),(a',b')] = <(ab)|(a'b')> over all_labels(S).
inline ComplexMatrix bell_overlap_table(SpinDim S) {
  const auto labels = all_labels(S);
  std::vector<PureState> states;
  states.reserve(labels.size());
  for (const auto& l : labels) states.push_back(bell_state(S, l));
  ComplexMatrix g(labels.size(), labels.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < states.size(); ++j) g(i, j) = states[i].inner(states[j]);
  }
  return g;
}

inline DensityMatrix bell_projector(SpinDim S, BellLabel label) { return bell_state(S, label).projector(); }

/// |(ab)><(a'b')| as a bare matrix (not Hermitian unless the labels agree).
inline ComplexMatrix bell_outer(SpinDim S, BellLabel ket, BellLabel bra) {
  const auto k = bell_state(S, ket);
  const auto b = bell_state(S, bra);
  return ComplexMatrix::outer(k.amplitudes(), b.amplitudes());
}

/// One dimer |(ab)> placed on two sites; `first` carries the |k> factor and
/// `second` the |k+a> factor.
struct Dimer {
  std::size_t first = 0;
  std::size_t second = 0;
  BellLabel label{};
};

/// Product of dimers covering every one of `num_sites` sites exactly once.
inline PureState dimer_product(SpinDim S, std::size_t num_sites, std::span<const Dimer> dimers) {
  std::vector<int> owner(num_sites, -1);
  for (std::size_t d = 0; d < dimers.size(); ++d) {
    dimers[d].label.validate(S);
    for (std::size_t site : {dimers[d].first, dimers[d].second}) {
      if (site >= num_sites) throw ArgumentError("dimer_product: site out of range");
      if (owner[site] != -1) throw ArgumentError("dimer_product: site covered twice");
      owner[site] = static_cast<int>(d);
    }
  }
  if (2 * dimers.size() != num_sites) throw ArgumentError("dimer_product: dimers do not cover every site");

  PureState psi = PureState::zeros(S, num_sites);
  std::vector<std::size_t> stride(num_sites, 1);
  for (std::size_t p = num_sites; p-- > 1;) stride[p - 1] = stride[p] * S.size();

  const double amp = std::pow(static_cast<double>(S.value()), -0.5 * static_cast<double>(dimers.size()));
  std::vector<int> k(dimers.size(), 0);
  auto out = psi.amplitudes();
  while (true) {
    std::size_t idx = 0;
    long long phase = 0;
    for (std::size_t d = 0; d < dimers.size(); ++d) {
      idx += static_cast<std::size_t>(k[d]) * stride[dimers[d].first];
      idx += static_cast<std::size_t>(S.mod(k[d] + dimers[d].label.a)) * stride[dimers[d].second];
      phase += static_cast<long long>(k[d]) * dimers[d].label.b;
    }
    out[idx] = S.gamma_pow(phase) * amp;
    std::size_t d = dimers.size();
    while (d > 0) {
      --d;
      if (++k[d] < S.value()) break;
      k[d] = 0;
      if (d == 0) return psi;
    }
    if (dimers.empty()) return psi;
  }
}

/// p |(ab)><(ab)| + (1 - p) I/S^2.
inline DensityMatrix werner_state(SpinDim S, BellLabel label, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("werner_state: weight must lie in [0,1], got " + std::to_string(p));
  const std::size_t d = S.size() * S.size();
  ComplexMatrix m = bell_projector(S, label).matrix() * Complex(p);
  m += ComplexMatrix::identity(d) * Complex((1.0 - p) / static_cast<double>(d));
  return DensityMatrix(std::move(m), {S.size(), S.size()});
}

/// Maximally mixed state I/dim over `num_sites` sites of dimension S.
inline DensityMatrix white_noise(SpinDim S, std::size_t num_sites) {
  const std::size_t side = checked_pow(S.size(), num_sites, limits().max_matrix_side);
  if (side > limits().max_matrix_side) throw CapacityError("white_noise: side exceeds cap");
  return DensityMatrix(ComplexMatrix::identity(side) * Complex(1.0 / static_cast<double>(side)),
                       std::vector<std::size_t>(num_sites, S.size()));
}

}  // namespace dimerlab
