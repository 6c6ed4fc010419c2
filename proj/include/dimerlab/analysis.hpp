#pragma once

// Entanglement thresholds for Werner-form neighbour states and the per-lattice
// critical spin.
//
// For p |(ab)><(ab)| + (1-p) I/S^2 the partial transpose has S(S-1)/2 eigenvalues
// equal to -p/S + (1-p)/S^2 and the rest positive, so the state is entangled
// exactly when p > 1/(S+1), i.e. when the white-noise fraction is below S/(S+1).
// A lattice of coordination number z gives p = 1/z, hence entanglement iff S > z - 1.

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

struct WernerMixture {
  SpinDim S{2};
  double p = 0.0;  // weight of the maximally entangled projector

  void validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("WernerMixture: p must lie in [0,1], got " + std::to_string(p));
  }
  DensityMatrix state(BellLabel label = {}) const { return werner_state(S, label, p); }
};

/// max(0, S(S-1)/2 * (p/S - (1-p)/S^2)).
inline double werner_negativity(const WernerMixture& w) {
  w.validate();
  const double s = w.S.value();
  return std::max(0.0, s * (s - 1.0) / 2.0 * (w.p / s - (1.0 - w.p) / (s * s)));
}

/// Same quantity from an explicit partial-transpose eigensolve.
inline double werner_negativity_numeric(const WernerMixture& w, BellLabel label = {}) {
  return negativity(w.state(label), 1);
}

/// Largest white-noise fraction that leaves the state entangled: S/(S+1).
inline double critical_noise(SpinDim S) {
  const double s = S.value();
  return s / (s + 1.0);
}

/// Entangled-weight threshold located by bisection on the sign of the smallest
/// partial-transpose eigenvalue (numeric eigensolve, no closed form involved).
inline double critical_weight_by_bisection(SpinDim S, double tol = 1e-12, BellLabel label = {}) {
  auto min_pt = [&](double p) {
    return hermitian_eigenvalues(partial_transpose(werner_state(S, label, p), 1).matrix()).min();
  };
  double lo = 0.0;  // PPT
  double hi = 1.0;  // NPT
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (min_pt(mid) < 0.0) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

struct LatticeThreshold {
  int z = 0;              // coordination number
  int R = 0;              // covering-ratio denominator; equal to z for simple regular lattices
  double f = 0.0;         // dimer fraction 1/z
  double noise = 0.0;     // white-noise fraction 1 - 1/z
  int S_min = 0;          // smallest S with an entangled neighbour state
  double s_min = 0.0;     // (S_min - 1)/2
  double negativity_at_S_min = 0.0;
};

/// Smallest S >= 2 with 1/z > 1/(S+1). The boundary 1/z = 1/(S+1) is PPT and
/// therefore counted as not entangled.
inline LatticeThreshold min_spin_for_lattice(int z) {
  if (z < 2) throw ArgumentError("min_spin_for_lattice: coordination number must be >= 2, got " + std::to_string(z));
  LatticeThreshold t;
  t.z = z;
  t.R = z;
  t.f = 1.0 / z;
  t.noise = 1.0 - t.f;
  int S = 2;
  while (!(S + 1 > z)) ++S;  // integer form of 1/z > 1/(S+1)
  t.S_min = S;
  t.s_min = (S - 1) / 2.0;
  t.negativity_at_S_min = werner_negativity({SpinDim(S), t.f});
  return t;
}

inline std::vector<LatticeThreshold> threshold_table(std::span<const int> z_values) {
  std::vector<LatticeThreshold> rows;
  rows.reserve(z_values.size());
  for (int z : z_values) rows.push_back(min_spin_for_lattice(z));
  return rows;
}

/// (num_sites/2) log(2s+1) in the given base (natural log by default).
inline double max_dimer_entanglement(int num_sites, double spin, double base = std::numbers::e) {
  if (num_sites < 0 || num_sites % 2 != 0) {
    throw ArgumentError("max_dimer_entanglement: site count must be even, got " + std::to_string(num_sites));
  }
  const double two_s = 2.0 * spin;
  if (!(spin > 0.0) || std::abs(two_s - std::round(two_s)) > 1e-12) {
    throw ArgumentError("max_dimer_entanglement: spin must be a positive multiple of 1/2");
  }
  if (!(base > 0.0) || base == 1.0) throw ArgumentError("max_dimer_entanglement: invalid log base");
  return num_sites / 2.0 * std::log(two_s + 1.0) / std::log(base);
}

}  // namespace dimerlab
