#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dimerlab/analysis.hpp"

using namespace dimerlab;

TEST(Werner, AnalyticNegativityMatchesEigensolve) {
  for (int s = 2; s <= 6; ++s) {
    for (double p : {0.0, 0.1, 0.2, 0.25, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
      const WernerMixture w{SpinDim(s), p};
      EXPECT_NEAR(werner_negativity(w), werner_negativity_numeric(w, {1, 0}), 1e-10) << "S=" << s << " p=" << p;
    }
  }
}

TEST(Werner, NegativityIsMonotoneInWeight) {
  const WernerMixture lo{SpinDim(3), 0.3};
  const WernerMixture hi{SpinDim(3), 0.6};
  EXPECT_LT(werner_negativity(lo), werner_negativity(hi));
  EXPECT_THROW(werner_negativity({SpinDim(2), 1.2}), ArgumentError);
}

TEST(Werner, ThresholdByBisectionAndCriticalNoise) {
  for (int s = 2; s <= 7; ++s) {
    EXPECT_NEAR(critical_weight_by_bisection(SpinDim(s)), 1.0 / (s + 1.0), 1e-9);
    EXPECT_DOUBLE_EQ(critical_noise(SpinDim(s)), s / (s + 1.0));
  }
  EXPECT_NEAR(critical_weight_by_bisection(SpinDim(3), 1e-12, {2, 1}), 0.25, 1e-9);
}

TEST(Thresholds, CoordinationNumbersOfCommonLattices) {
  const std::vector<int> z{2, 3, 4, 6};
  const auto rows = threshold_table(z);
  ASSERT_EQ(rows.size(), 4u);
  const int s_min[] = {2, 3, 4, 6};
  const double spin[] = {0.5, 1.0, 1.5, 2.5};
  const double noise[] = {0.5, 2.0 / 3.0, 0.75, 5.0 / 6.0};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].S_min, s_min[i]);
    EXPECT_DOUBLE_EQ(rows[i].s_min, spin[i]);
    EXPECT_NEAR(rows[i].noise, noise[i], 1e-15);
    EXPECT_GT(rows[i].negativity_at_S_min, 0.0);
    EXPECT_EQ(rows[i].R, rows[i].z);
  }
  EXPECT_THROW(min_spin_for_lattice(1), ArgumentError);
}

TEST(Thresholds, BoundaryIsNotEntangled) {
  // z = 3 with S = 2 sits exactly on p = 1/(S+1).
  EXPECT_NEAR(werner_negativity_numeric({SpinDim(2), 1.0 / 3.0}), 0.0, 1e-12);
  EXPECT_NEAR(werner_negativity({SpinDim(2), 1.0 / 4.0}), 0.0, 1e-15);
  EXPECT_GT(werner_negativity({SpinDim(4), 1.0 / 4.0}), 0.0);
  EXPECT_GT(werner_negativity({SpinDim(3), 1.0 / 3.0}), 0.0);
  // Below S_min every spin is separable.
  for (int z = 3; z <= 8; ++z) {
    const auto t = min_spin_for_lattice(z);
    EXPECT_NEAR(werner_negativity({SpinDim(t.S_min - 1), 1.0 / z}), 0.0, 1e-12) << "z=" << z;
  }
}

TEST(MaxEntanglement, DimerCountTimesLocalEntropy) {
  EXPECT_NEAR(max_dimer_entanglement(2, 0.5, 2.0), 1.0, 1e-15);
  EXPECT_NEAR(max_dimer_entanglement(10, 0.5, 2.0), 5.0, 1e-14);
  EXPECT_NEAR(max_dimer_entanglement(2, 4.0, 2.0), std::log2(9.0), 1e-14);
  EXPECT_NEAR(max_dimer_entanglement(2, 4.0, 2.0), 3.16992500144, 1e-10);
  EXPECT_NEAR(max_dimer_entanglement(4, 1.0), 2.0 * std::log(3.0), 1e-14);
  EXPECT_THROW(max_dimer_entanglement(3, 0.5), ArgumentError);
  EXPECT_THROW(max_dimer_entanglement(2, 0.3), ArgumentError);
  EXPECT_THROW(max_dimer_entanglement(2, 0.5, 1.0), ArgumentError);
}

TEST(Werner, ZeroExactlyUpToTheThreshold) {
  for (int s = 2; s <= 5; ++s) {
    const double p_star = 1.0 / (s + 1.0);
    for (int i = 0; i <= 200; ++i) {
      const double p = i / 200.0;
      const double numeric = werner_negativity_numeric({SpinDim(s), p});
      if (p <= p_star) {
        EXPECT_NEAR(numeric, 0.0, 1e-12) << "S=" << s << " p=" << p;
      } else if (p > p_star + 1e-9) {
        EXPECT_GT(numeric, 0.0) << "S=" << s << " p=" << p;
      }
    }
    EXPECT_DOUBLE_EQ(critical_noise(SpinDim(s)) + p_star, 1.0);
    const auto boundary = werner_state(SpinDim(s), {0, 1}, p_star);
    EXPECT_NEAR(hermitian_eigenvalues(partial_transpose(boundary, 1).matrix()).min(), 0.0, 1e-12);
  }
}

TEST(Thresholds, MinimalSpinIsNondecreasingInCoordination) {
  int prev = 0;
  for (int z = 2; z <= 20; ++z) {
    const int s = min_spin_for_lattice(z).S_min;
    EXPECT_GE(s, prev);
    prev = s;
  }
}
