#pragma once

// Dimer coverings of a ring of 2N spin-s sites.
//
// Sites are numbered 1..2N in the public API. Covering C1 pairs (1,2), (3,4), ...,
// (2N-1,2N); covering C2 pairs (2,3), (4,5), ..., (2N-2,2N-1) and wraps with
// (2N,1), site 2N being the |k> factor of that dimer. Every dimer carries the same
// label (a,b). The spin liquid is the unnormalized sum |c1> + |c2>.
//
// Closed forms below were derived by contracting the dimer chains directly and
// are checked entrywise against brute-force reductions in the test suite:
//
//   rho12 = I/S^2 + |(ab)><(ab)| + X + X^+,  X = S^{1-N} g^{abN} |(ab)><(a'b)|, a' = a - 2Na
//   rho13 = 2 I/S^2 + Y + Y^+,  Y = S^{-N} g^{-abN} sum |k1,k2><k2 + 2(N-1)a, k1 + 2a|
//   rho_odd = 2 I/S^N + Z + Z^+, Z = S^{-N} g^{-abN} sum |k1..kN><kN+2a, k1+2a, .., k(N-1)+2a|
//   rho_even = rho_odd (same matrix; the even-site cross term is Z^+)
//   rho1234 = P12 P34 + I/S (x) P23 (x) I/S + W + W^+,
//             W = S^{2-N} g^{-ab(N-2)} |(ab)12 (ab)34><(ab)23 (a''b)41|, a'' = (2N-3)a
//
// The kTranscribed variants reproduce the commonly quoted forms (cross coefficient
// S^{-N}, bra label a + 2Na; even-site kernel shifted by a with no phase; trace
// condition 2N = 0 mod S) so that their deviation from the oracle can be reported.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dimerlab/bell.hpp"
#include "dimerlab/errors.hpp"
#include "dimerlab/linalg.hpp"

namespace dimerlab {

struct RingSpec {
  SpinDim S{2};
  int N = 2;  // half the site count
  BellLabel label{};

  void validate() const {
    if (N < 1) throw ArgumentError("RingSpec: N must be >= 1, got " + std::to_string(N));
    label.validate(S);
  }
  std::size_t num_sites() const noexcept { return 2 * static_cast<std::size_t>(N); }
  /// A two-site ring: both coverings sit on the same pair.
  bool degenerate() const noexcept { return N == 1; }
  /// True when 2Na = 0 mod S, i.e. the two coverings have nonzero overlap.
  bool coverings_overlap() const noexcept { return S.mod(2LL * N * label.a) == 0; }
};

enum class Covering { kC1, kC2 };
enum class Parity { kOdd, kEven };
enum class Transcription { kVerified, kTranscribed };

namespace detail {

inline std::vector<std::size_t> to_zero_based(const RingSpec& spec, std::span<const int> sites) {
  std::vector<std::size_t> out;
  out.reserve(sites.size());
  for (int s : sites) {
    if (s < 1 || static_cast<std::size_t>(s) > spec.num_sites()) {
      throw ArgumentError("ring site " + std::to_string(s) + " out of range 1.." + std::to_string(spec.num_sites()));
    }
    out.push_back(static_cast<std::size_t>(s - 1));
  }
  return out;
}

inline std::vector<int> sublattice_sites(const RingSpec& spec, Parity parity) {
  std::vector<int> sites;
  for (int j = 1; j <= spec.N; ++j) sites.push_back(parity == Parity::kOdd ? 2 * j - 1 : 2 * j);
  return sites;
}

inline void require_side(std::size_t S, std::size_t sites, const char* what) {
  if (checked_pow(S, sites, limits().max_matrix_side) > limits().max_matrix_side) {
    throw CapacityError(std::string(what) + ": " + std::to_string(S) + "^" + std::to_string(sites) +
                        " exceeds the matrix side cap of " + std::to_string(limits().max_matrix_side));
  }
}

/// coeff * sum_k |k><bra_of(k)| over `sites` sites, indices taken mod S.
template <class Map>
ComplexMatrix permutation_kernel(SpinDim S, std::size_t sites, Complex coeff, Map&& bra_of) {
  const std::size_t n = checked_pow(S.size(), sites, limits().max_matrix_side);
  ComplexMatrix m(n, n);
  std::vector<int> digits(sites, 0);
  std::vector<int> image(sites, 0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t rem = idx;
    for (std::size_t p = sites; p-- > 0;) {
      digits[p] = static_cast<int>(rem % S.size());
      rem /= S.size();
    }
    bra_of(digits, image);
    std::size_t col = 0;
    for (std::size_t p = 0; p < sites; ++p) col = col * S.size() + static_cast<std::size_t>(S.mod(image[p]));
    m(idx, col) += coeff;
  }
  return m;
}

inline ComplexMatrix plus_adjoint(const ComplexMatrix& x) { return x + x.adjoint(); }

}  // namespace detail

inline PureState build_covering(const RingSpec& spec, Covering which) {
  spec.validate();
  const std::size_t n = spec.num_sites();
  std::vector<Dimer> dimers;
  for (std::size_t j = 0; j < static_cast<std::size_t>(spec.N); ++j) {
    if (which == Covering::kC1) {
      dimers.push_back({2 * j, 2 * j + 1, spec.label});
    } else {
      dimers.push_back({2 * j + 1, (2 * j + 2) % n, spec.label});
    }
  }
  return dimer_product(spec.S, n, dimers);
}

inline PureState build_spin_liquid(const RingSpec& spec) {
  PureState psi = build_covering(spec, Covering::kC1);
  psi += build_covering(spec, Covering::kC2);
  return psi;
}

/// Unnormalized reduction of |psi><psi| onto 1-based `sites` (kept in ascending order).
inline DensityMatrix reduced_state(const PureState& psi, std::span<const int> sites) {
  std::vector<std::size_t> keep;
  for (int s : sites) {
    if (s < 1 || static_cast<std::size_t>(s) > psi.num_sites()) {
      throw ArgumentError("site " + std::to_string(s) + " out of range 1.." + std::to_string(psi.num_sites()));
    }
    keep.push_back(static_cast<std::size_t>(s - 1));
  }
  const auto dims = psi.dims();
  return reduce_pure(psi.amplitudes(), dims, keep);
}

inline DensityMatrix reduced_state(const PureState& psi, std::initializer_list<int> sites) {
  return reduced_state(psi, std::span<const int>(sites.begin(), sites.size()));
}

/// Tr_rest(|c1><c1| + |c2><c2|): the equal mixture of the two coverings, unnormalized
/// to the same scale as the superposition (trace 2).
inline DensityMatrix reduced_mixture(const RingSpec& spec, std::span<const int> sites) {
  const auto keep = detail::to_zero_based(spec, sites);
  const auto c1 = build_covering(spec, Covering::kC1);
  const auto c2 = build_covering(spec, Covering::kC2);
  const auto dims = c1.dims();
  const auto r1 = reduce_pure(c1.amplitudes(), dims, keep);
  const auto r2 = reduce_pure(c2.amplitudes(), dims, keep);
  return DensityMatrix(r1.matrix() + r2.matrix(), r1.dims());
}

/// Structural pieces of the unnormalized nearest-neighbour state.
struct ClosedFormNN {
  SpinDim S{2};
  int N = 2;
  BellLabel label{};
  /// Weight of the identity contributed by |c2><c2| (1/S^2 for N >= 2, 0 for N = 1).
  double noise_weight = 0.0;
  /// For N = 1 the |c2><c2| piece is itself a Bell projector with this label.
  BellLabel c2_label{};
  Complex cross_coefficient{};
  BellLabel cross_bra{};
};

inline ClosedFormNN nn_terms(const RingSpec& spec, Transcription form = Transcription::kVerified) {
  spec.validate();
  const SpinDim S = spec.S;
  const long long N = spec.N;
  const auto [a, b] = spec.label;
  ClosedFormNN t{S, spec.N, spec.label};
  t.noise_weight = spec.N >= 2 ? 1.0 / (S.value() * S.value()) : 0.0;
  if (form == Transcription::kVerified) {
    t.cross_bra = {S.mod(a - 2 * N * a), b};
    t.cross_coefficient = S.gamma_pow(a * b * N) * std::pow(static_cast<double>(S.value()), static_cast<double>(1 - N));
  } else {
    t.cross_bra = {S.mod(a + 2 * N * a), b};
    t.cross_coefficient = S.gamma_pow(a * b * N) * std::pow(static_cast<double>(S.value()), static_cast<double>(-N));
  }
  t.c2_label = {S.mod(-a), b};
  return t;
}

inline DensityMatrix assemble(const ClosedFormNN& t) {
  const std::size_t d = t.S.size() * t.S.size();
  ComplexMatrix m = bell_projector(t.S, t.label).matrix();
  if (t.N >= 2) {
    m += ComplexMatrix::identity(d) * Complex(t.noise_weight);
  } else {
    m += bell_projector(t.S, t.c2_label).matrix();
  }
  m += detail::plus_adjoint(bell_outer(t.S, t.label, t.cross_bra) * t.cross_coefficient);
  return DensityMatrix(std::move(m), {t.S.size(), t.S.size()});
}

/// Unnormalized reduced state of sites {1,2}.
inline DensityMatrix closed_form_nn(const RingSpec& spec, Transcription form = Transcription::kVerified) {
  return assemble(nn_terms(spec, form));
}

/// Norm^2 of |c1> + |c2>, equal to the trace of every reduced state:
/// 2 + 2 S^{1-N} cos(2 pi abN / S) when 2Na = 0 mod S, and 2 otherwise.
inline double covering_trace(const RingSpec& spec, Transcription form = Transcription::kVerified) {
  spec.validate();
  const SpinDim S = spec.S;
  const bool overlap = form == Transcription::kVerified ? spec.coverings_overlap() : S.mod(2LL * spec.N) == 0;
  if (!overlap) return 2.0;
  const double angle = 2.0 * std::numbers::pi *
                       static_cast<double>(S.mod(static_cast<long long>(spec.label.a) * spec.label.b * spec.N)) /
                       S.value();
  return 2.0 + 2.0 * std::pow(static_cast<double>(S.value()), 1.0 - spec.N) * std::cos(angle);
}

/// Infinite-ring nearest-neighbour state (1/2S^2) I + (1/2) |(ab)><(ab)|, trace 1.
inline DensityMatrix limit_nn_state(SpinDim S, BellLabel label) {
  const std::size_t d = S.size() * S.size();
  ComplexMatrix m = bell_projector(S, label).matrix() * Complex(0.5);
  m += ComplexMatrix::identity(d) * Complex(0.5 / static_cast<double>(d));
  return DensityMatrix(std::move(m), {S.size(), S.size()});
}

/// Unnormalized reduced state of sites {1,3}; requires N >= 2.
inline DensityMatrix closed_form_nnn(const RingSpec& spec) {
  spec.validate();
  if (spec.N < 2) throw ArgumentError("closed_form_nnn: needs N >= 2");
  const SpinDim S = spec.S;
  const long long N = spec.N;
  const int a = spec.label.a;
  const Complex coeff = S.gamma_pow(-static_cast<long long>(a) * spec.label.b * N) *
                        std::pow(static_cast<double>(S.value()), static_cast<double>(-N));
  const ComplexMatrix y =
      detail::permutation_kernel(S, 2, coeff, [&](const std::vector<int>& k, std::vector<int>& bra) {
        bra[0] = k[1] + 2 * static_cast<int>(N - 1) * a;
        bra[1] = k[0] + 2 * a;
      });
  const std::size_t d = S.size() * S.size();
  ComplexMatrix m = ComplexMatrix::identity(d) * Complex(2.0 / static_cast<double>(d));
  m += detail::plus_adjoint(y);
  return DensityMatrix(std::move(m), {S.size(), S.size()});
}

/// Unnormalized reduced state of the odd (sites 1,3,..) or even (2,4,..) sublattice.
inline DensityMatrix sublattice_state(const RingSpec& spec, Parity parity,
                                      Transcription form = Transcription::kVerified) {
  spec.validate();
  const SpinDim S = spec.S;
  const std::size_t n = static_cast<std::size_t>(spec.N);
  detail::require_side(S.size(), n, "sublattice_state");
  const int a = spec.label.a;
  const long long abN = static_cast<long long>(a) * spec.label.b * spec.N;
  const double scale = std::pow(static_cast<double>(S.value()), -static_cast<double>(spec.N));

  // Odd sites: Z = scale g^{-abN} sum_k |k><T k|, (T k)_1 = k_N + 2a, (T k)_j = k_{j-1} + 2a.
  auto shift_forward = [&](const std::vector<int>& k, std::vector<int>& bra) {
    for (std::size_t j = 0; j < n; ++j) bra[j] = k[(j + n - 1) % n] + 2 * a;
  };
  ComplexMatrix cross;
  if (parity == Parity::kOdd) {
    cross = detail::permutation_kernel(S, n, S.gamma_pow(-abN) * scale, shift_forward);
  } else if (form == Transcription::kVerified) {
    cross = detail::permutation_kernel(S, n, S.gamma_pow(-abN) * scale, shift_forward).adjoint();
  } else {
    // sum_k |k1+a, .., kN+a><k2, .., kN, k1|, written with the ket as loop index.
    cross = detail::permutation_kernel(S, n, Complex(scale), [&](const std::vector<int>& m, std::vector<int>& bra) {
      for (std::size_t j = 0; j < n; ++j) bra[j] = m[(j + 1) % n] - a;
    });
  }
  const std::size_t side = cross.rows();
  ComplexMatrix m = ComplexMatrix::identity(side) * Complex(2.0 / static_cast<double>(side));
  m += detail::plus_adjoint(cross);
  return DensityMatrix(std::move(m), std::vector<std::size_t>(n, S.size()));
}

/// Brute-force reduction of the spin liquid onto one sublattice.
inline DensityMatrix sublattice_state_brute(const RingSpec& spec, Parity parity) {
  const auto sites = detail::sublattice_sites(spec, parity);
  return reduced_state(build_spin_liquid(spec), sites);
}

/// Unnormalized reduced state of sites 1..4 in closed form; requires N >= 2.
inline DensityMatrix closed_form_four_site(const RingSpec& spec) {
  spec.validate();
  if (spec.N < 2) throw ArgumentError("closed_form_four_site: needs N >= 2");
  detail::require_side(spec.S.size(), 4, "closed_form_four_site");
  const SpinDim S = spec.S;
  const BellLabel l = spec.label;
  const long long N = spec.N;
  const std::vector<Dimer> c1{{0, 1, l}, {2, 3, l}};
  const BellLabel wrap{S.mod((2 * N - 3) * l.a), l.b};
  const std::vector<Dimer> c2{{1, 2, l}, {3, 0, wrap}};
  const auto ket = dimer_product(S, 4, c1);
  const auto bra = dimer_product(S, 4, c2);

  ComplexMatrix m = ket.projector().matrix();
  if (spec.N == 2) {
    m += bra.projector().matrix();
  } else {
    const auto id = ComplexMatrix::identity(S.size()) * Complex(1.0 / S.value());
    m += tensor_product(tensor_product(id, bell_projector(S, l).matrix()), id);
  }
  const Complex coeff =
      S.gamma_pow(-static_cast<long long>(l.a) * l.b * (N - 2)) * std::pow(static_cast<double>(S.value()), 2.0 - N);
  m += detail::plus_adjoint(ComplexMatrix::outer(ket.amplitudes(), bra.amplitudes()) * coeff);
  return DensityMatrix(std::move(m), {S.size(), S.size(), S.size(), S.size()});
}

/// Brute-force four-site state and its split into the two covering terms plus a
/// residual that vanishes like S^{2-N}.
struct FourSiteState {
  DensityMatrix state;
  DensityMatrix leading;  // P12 (x) P34 + I/S (x) P23 (x) I/S
  ComplexMatrix residual;
  double residual_max_entry = 0.0;
  double residual_norm = 0.0;  // spectral norm
};

inline FourSiteState four_site_state(const RingSpec& spec) {
  spec.validate();
  if (spec.N < 2) throw ArgumentError("four_site_state: needs N >= 2");
  const SpinDim S = spec.S;
  const auto psi = build_spin_liquid(spec);
  auto state = reduced_state(psi, {1, 2, 3, 4});
  const auto p = bell_projector(S, spec.label).matrix();
  const auto id = ComplexMatrix::identity(S.size()) * Complex(1.0 / S.value());
  ComplexMatrix lead = tensor_product(p, p) + tensor_product(tensor_product(id, p), id);
  FourSiteState out{state, DensityMatrix(lead, state.dims()), state.matrix() - lead, 0.0, 0.0};
  out.residual_max_entry = out.residual.max_abs();
  out.residual_norm = spectral_norm(out.residual);
  return out;
}

/// (S-1)^2 / 4S: negativity of the infinite-ring nearest-neighbour state.
inline double nn_negativity_closed(SpinDim S) {
  const double s = S.value();
  return (s - 1.0) * (s - 1.0) / (4.0 * s);
}

/// Trace distance between the normalized state and white noise of the same dimension.
inline double noise_distance(const DensityMatrix& tilde) {
  const auto rho = tilde.normalized();
  const std::size_t n = rho.side();
  return trace_distance(rho.matrix(), ComplexMatrix::identity(n) * Complex(1.0 / static_cast<double>(n)));
}

}  // namespace dimerlab
