//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <random>

#include <gtest/gtest.h>

#include "sabatier/transport.hpp"
#include "test_util.hpp"

using namespace sabatier;

namespace {

// Frozen from tests/oracles/thermo_transport_oracles.py.
constexpr double kMuBinary = 1.7651037930770083e-5;  // Y_CO2 = Y_H2 = 0.5
constexpr double kMuFeed = 2.3885635705725086e-5;
constexpr double kKappaFeed = 0.18432542173483681;
constexpr double kD_CO2_H2 = 2.0477100663235183e-5;
constexpr std::array<double, 4> kDmixFeed{2.0477100663235183e-5, 2.0477100663235183e-5,
                                          1.4107246437005775e-5, 1.6213460092633667e-5};
constexpr std::array<double, 4> kDmixMixed{9.7293524709429244e-6, 2.4267758596026239e-5,
                                           1.1721245623017869e-5, 1.2482503692897174e-5};
constexpr double kMuMixed = 2.1103210883667183e-5;
constexpr double kKappaMixed = 0.13754411408739281;
const FullComposition<double> kMixed{0.3, 0.1, 0.2, 0.4};

FullComposition<double> pure(std::size_t k) {
  FullComposition<double> Y{0, 0, 0, 0};
  Y[k] = 1.0;
  return Y;
}

}  // namespace

TEST(Transport, PureSpeciesViscosity) {
  const auto &tab = test::table();
  for (std::size_t k = 0; k < kNumSpecies; ++k) {
    EXPECT_LT(test::rel_err(viscosity_mix(tab, pure(k), 500.0),
                            viscosity_species(tab, k, 500.0)),
              1e-14);
  }
}

TEST(Transport, WilkeSelfWeightIsOne) {
  const auto &tab = test::table();
  for (std::size_t k = 0; k < kNumSpecies; ++k) {
    for (double T: {300.0, 573.15, 880.0}) {
      const double mu = viscosity_species(tab, k, T);
      EXPECT_NEAR(wilke_phi(mu, mu, tab.molar_mass(k), tab.molar_mass(k)), 1.0, 1e-15);
    }
  }
}

TEST(Transport, ViscosityOracles) {
  const auto &tab = test::table();
  EXPECT_LT(test::rel_err(viscosity_mix(tab, FullComposition<double>{0.5, 0.5, 0, 0}, 573.15),
                          kMuBinary),
            1e-12);
  EXPECT_LT(test::rel_err(viscosity_mix(tab, complete(stoichiometric_feed(tab)), 573.15),
                          kMuFeed),
            1e-12);
  EXPECT_LT(test::rel_err(viscosity_mix(tab, kMixed, 573.15), kMuMixed), 1e-12);
}

TEST(Transport, ConductivityOracles) {
  const auto &tab = test::table();
  for (std::size_t k = 0; k < kNumSpecies; ++k) {
    EXPECT_LT(test::rel_err(conductivity_mix(tab, pure(k), 450.0),
                            conductivity_species(tab, k, 450.0)),
              1e-14);
  }
  EXPECT_LT(test::rel_err(conductivity_mix(tab, complete(stoichiometric_feed(tab)), 573.15),
                          kKappaFeed),
            1e-12);
  EXPECT_LT(test::rel_err(conductivity_mix(tab, kMixed, 573.15), kKappaMixed), 1e-12);
  const FullComposition<double> lam{0.07, 0.07, 0.07, 0.07};
  EXPECT_NEAR(combined_conductivity(kMixed, lam), 0.07, 1e-16);
}

TEST(Transport, ConductivityBetweenMeans) {
  const auto &tab = test::table();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    FullComposition<double> Y{u(rng), u(rng), u(rng), u(rng)};
    const double s = Y[0] + Y[1] + Y[2] + Y[3];
    for (auto &y: Y)
      y /= s;
    const double T = 300.0 + 5.0 * i;
    const auto X = mole_fractions(tab, Y);
    double arith = 0, harm = 0;
    for (std::size_t k = 0; k < kNumSpecies; ++k) {
      arith += X[k] * conductivity_species(tab, k, T);
      harm += X[k] / conductivity_species(tab, k, T);
    }
    const double kap = conductivity_mix(tab, Y, T);
    EXPECT_LE(kap, arith * (1 + 1e-14));
    EXPECT_GE(kap, (1.0 / harm) * (1 - 1e-14));
    EXPECT_GT(viscosity_mix(tab, Y, T), 0.0);
  }
}

TEST(Transport, BinaryDiffusion) {
  const auto &tab = test::table();
  EXPECT_LT(test::rel_err(binary_diffusion(tab, kCO2, kH2, 573.15, 1e6), kD_CO2_H2), 1e-12);
  for (std::size_t k = 0; k < kNumSpecies; ++k) {
    for (std::size_t j = 0; j < kNumSpecies; ++j) {
      if (j == k)
        continue;
      for (double T: {300.0, 600.0, 850.0}) {
        const double a = binary_diffusion(tab, k, j, T, 1e6);
        EXPECT_EQ(a, binary_diffusion(tab, j, k, T, 1e6));
        EXPECT_LT(test::rel_err(binary_diffusion(tab, k, j, T, 5e5), 2.0 * a), 1e-14);
        // Grows faster than T^1.5 because Omega decreases with T.
        EXPECT_GT(binary_diffusion(tab, k, j, 1.1 * T, 1e6), std::pow(1.1, 1.5) * a);
      }
    }
  }
}

TEST(Transport, MixtureDiffusionOracles) {
  const auto &tab = test::table();
  const auto feed = diffusion_mix(tab, complete(stoichiometric_feed(tab)), 573.15, 1e6);
  const auto mixed = diffusion_mix(tab, kMixed, 573.15, 1e6);
  for (std::size_t k = 0; k < kNumSpecies; ++k) {
    EXPECT_LT(test::rel_err(feed[k], kDmixFeed[k]), 1e-12) << k;
    EXPECT_LT(test::rel_err(mixed[k], kDmixMixed[k]), 1e-12) << k;
  }
}

TEST(Transport, TraceSpeciesLimit) {
  const auto &tab = test::table();
  FullComposition<double> Y{0, 0, 1e-12, 1.0 - 1e-12};  // trace CH4 in H2O
  const auto D = diffusion_mix(tab, Y, 600.0, 1e6);
  EXPECT_LT(test::rel_err(D[kCH4], binary_diffusion(tab, kCH4, kH2O, 600.0, 1e6)), 1e-9);
}

TEST(Transport, EqualBinaryCoefficients) {
  std::array<std::array<double, 4>, 4> D;
  for (auto &row: D)
    row.fill(3.3e-5);
  const auto &tab = test::table();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 50; ++i) {
    FullComposition<double> Y{u(rng), u(rng), u(rng), u(rng)};
    const double s = Y[0] + Y[1] + Y[2] + Y[3];
    for (auto &y: Y)
      y /= s;
    const auto Dm = mixture_diffusion(mole_fractions(tab, Y), Y, D);
    for (double d: Dm)
      EXPECT_LT(test::rel_err(d, 3.3e-5), 1e-13);
  }
}

TEST(Transport, PureSpeciesRegularized) {
  const auto &tab = test::table();
  for (std::size_t k = 0; k < kNumSpecies; ++k) {
    const auto D = diffusion_mix(tab, pure(k), 500.0, 1e6);
    for (double d: D) {
      EXPECT_TRUE(std::isfinite(d));
      EXPECT_GT(d, 0.0);
    }
  }
}

TEST(Transport, PermutationInvariance) {
  const auto &tab = test::table();
  const std::array<std::size_t, 4> perm{2, 0, 3, 1};
  std::array<SpeciesRecord, 4> recs;
  FullComposition<double> Yp;
  for (std::size_t i = 0; i < 4; ++i) {
    recs[i] = tab[perm[i]];
    Yp[i] = kMixed[perm[i]];
  }
  const SpeciesTable permuted(recs);
  for (double T: {350.0, 573.15, 800.0}) {
    EXPECT_LT(test::rel_err(viscosity_mix(permuted, Yp, T), viscosity_mix(tab, kMixed, T)),
              1e-14);
    EXPECT_LT(
        test::rel_err(conductivity_mix(permuted, Yp, T), conductivity_mix(tab, kMixed, T)),
        1e-14);
  }
}

TEST(Transport, FitsContinuousAtRangeBoundaries) {
  const auto &tab = test::table();
  for (std::size_t k = 0; k < kNumSpecies; ++k) {
    for (const auto *fits: {&tab[k].viscosity, &tab[k].conductivity}) {
      for (std::size_t i = 1; i < fits->size(); ++i) {
        const double T = (*fits)[i].t_low;
        EXPECT_LT(test::rel_err(fit_eval((*fits)[i - 1], T), fit_eval((*fits)[i], T)), 0.01);
      }
    }
  }
}

TEST(Transport, StateBundleMatchesPieces) {
  const auto &tab = test::table();
  const auto st = transport_state(tab, kMixed, 640.0, 1e6);
  EXPECT_DOUBLE_EQ(st.mu, viscosity_mix(tab, kMixed, 640.0));
  EXPECT_DOUBLE_EQ(st.kappa, conductivity_mix(tab, kMixed, 640.0));
  const auto D = diffusion_mix(tab, kMixed, 640.0, 1e6);
  for (std::size_t k = 0; k < 4; ++k)
    EXPECT_DOUBLE_EQ(st.D[k], D[k]);
}
