//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "sabatier/common.hpp"
#include "sabatier/species.hpp"
#include "sabatier/thermo.hpp"

namespace sabatier {

namespace transport_units {
  inline constexpr double kMicropoise = 1e-7;             // -> Pa s
  inline constexpr double kMicrowattPerCmKelvin = 1e-4;  // -> W/(m K)
}  // namespace transport_units

template <class S>
S fit_eval(const TransportFit &f, const S &T) {
  using std::exp;
  using std::log;
  return exp(f.A * log(T) + f.B / T + f.C / (T * T) + f.D);
}

/// Pure-species dynamic viscosity, Pa s.
template <class S>
S viscosity_species(const SpeciesTable &tab, std::size_t k, const S &T) {
  return transport_units::kMicropoise * fit_eval(tab.viscosity_at(k, value_of(T)), T);
}

/// Pure-species thermal conductivity, W/(m K).
template <class S>
S conductivity_species(const SpeciesTable &tab, std::size_t k, const S &T) {
  return transport_units::kMicrowattPerCmKelvin *
         fit_eval(tab.conductivity_at(k, value_of(T)), T);
}

/// Wilke interaction weight.
template <class S>
S wilke_phi(const S &mu_k, const S &mu_j, double M_k, double M_j) {
  using std::sqrt;
  const S t = 1.0 + sqrt(mu_k / mu_j) * std::pow(M_j / M_k, 0.25);
  return t * t / std::sqrt(8.0 * (1.0 + M_k / M_j));
}

template <class S>
S wilke_viscosity(const SpeciesTable &tab, const FullComposition<S> &X,
                  const FullComposition<S> &mu) {
  S out(0.0);
  for (std::size_t k = 0; k < kNumSpecies; ++k) {
    S den(0.0);
    for (std::size_t j = 0; j < kNumSpecies; ++j)
      den += X[j] * wilke_phi(mu[k], mu[j], tab.molar_mass(k), tab.molar_mass(j));
    out += X[k] * mu[k] / den;
  }
  return out;
}

/// Average of the arithmetic and harmonic mole-fraction means.
template <class S>
S combined_conductivity(const FullComposition<S> &X, const FullComposition<S> &lam) {
  S arith(0.0), harm(0.0);
  for (std::size_t k = 0; k < kNumSpecies; ++k) {
    arith += X[k] * lam[k];
    harm += X[k] / lam[k];
  }
  return 0.5 * (arith + 1.0 / harm);
}

template <class S>
S viscosity_mix(const SpeciesTable &tab, const FullComposition<S> &Y, const S &T) {
  FullComposition<S> mu;
  for (std::size_t k = 0; k < kNumSpecies; ++k)
    mu[k] = viscosity_species(tab, k, T);
  return wilke_viscosity(tab, mole_fractions(tab, Y), mu);
}

template <class S>
S conductivity_mix(const SpeciesTable &tab, const FullComposition<S> &Y, const S &T) {
  FullComposition<S> lam;
  for (std::size_t k = 0; k < kNumSpecies; ++k)
    lam[k] = conductivity_species(tab, k, T);
  return combined_conductivity(mole_fractions(tab, Y), lam);
}

/// Neufeld fit of the reduced collision integral Omega(1,1)*.
template <class S>
S collision_integral_11(const S &Tstar) {
  using std::exp;
  using std::pow;
  return 1.06036 / pow(Tstar, 0.15610) + 0.19300 / exp(0.47635 * Tstar) +
         1.03587 / exp(1.52996 * Tstar) + 1.76474 / exp(3.89411 * Tstar);
}

/// First-order Chapman-Enskog binary diffusion coefficient, m^2/s.
template <class S>
S binary_diffusion(const SpeciesTable &tab, std::size_t k, std::size_t j,
                   const S &T, double p) {
  using std::sqrt;
  using constants::kAvogadro;
  using constants::kBoltzmann;
  const double mk = tab.molar_mass(k) / kAvogadro;
  const double mj = tab.molar_mass(j) / kAvogadro;
  const double m_red = mk * mj / (mk + mj);
  const double sigma = 0.5 * (tab[k].lj_sigma + tab[j].lj_sigma);
  const double eps = std::sqrt(tab[k].lj_eps_kb * tab[j].lj_eps_kb);
  const S kT = kBoltzmann * T;
  const S omega = collision_integral_11(S(T / eps));
  return (3.0 / 16.0) * sqrt(2.0 * M_PI * kT * kT * kT / m_red) /
         (p * M_PI * sigma * sigma * omega);
}

inline constexpr double kDiffusionRegularization = 1e-12;

/// Mixture-averaged diffusion coefficients from a symmetric binary matrix.
template <class S>
FullComposition<S> mixture_diffusion(const FullComposition<S> &X,
                                     const FullComposition<S> &Y,
                                     const std::array<std::array<S, kNumSpecies>, kNumSpecies> &Dkj) {
  FullComposition<S> out;
  for (std::size_t k = 0; k < kNumSpecies; ++k) {
    S sx(0.0), sy(0.0);
    for (std::size_t j = 0; j < kNumSpecies; ++j) {
      if (j == k)
        continue;
      sx += X[j] / Dkj[k][j];
      sy += Y[j] / Dkj[k][j];
    }
    S one_minus = S(1.0) - Y[k];
    if (value_of(one_minus) < kDiffusionRegularization)
      one_minus = S(kDiffusionRegularization);
    S den = sx + X[k] / one_minus * sy;
    // Negative Newton iterates can make den non-positive; cap D at 1 m^2/s.
    if (!(value_of(den) > 1.0))
      den = S(1.0);
    out[k] = 1.0 / den;
  }
  return out;
}

template <class S>
FullComposition<S> diffusion_mix(const SpeciesTable &tab, const FullComposition<S> &Y,
                                 const S &T, double p) {
  std::array<std::array<S, kNumSpecies>, kNumSpecies> D;
  for (std::size_t k = 0; k < kNumSpecies; ++k) {
    D[k][k] = S(0.0);
    for (std::size_t j = k + 1; j < kNumSpecies; ++j) {
      D[k][j] = binary_diffusion(tab, k, j, T, p);
      D[j][k] = D[k][j];
    }
  }
  return mixture_diffusion(mole_fractions(tab, Y), Y, D);
}

template <class S>
struct TransportState {
  S mu;
  S kappa;
  FullComposition<S> D;
};

/// All mixture transport properties at one state, sharing intermediate work.
template <class S>
TransportState<S> transport_state(const SpeciesTable &tab, const FullComposition<S> &Y,
                                  const S &T, double p) {
  const auto X = mole_fractions(tab, Y);
  FullComposition<S> mu, lam;
  for (std::size_t k = 0; k < kNumSpecies; ++k) {
    mu[k] = viscosity_species(tab, k, T);
    lam[k] = conductivity_species(tab, k, T);
  }
  std::array<std::array<S, kNumSpecies>, kNumSpecies> D;
  for (std::size_t k = 0; k < kNumSpecies; ++k) {
    D[k][k] = S(0.0);
    for (std::size_t j = k + 1; j < kNumSpecies; ++j) {
      D[k][j] = binary_diffusion(tab, k, j, T, p);
      D[j][k] = D[k][j];
    }
  }
  return {wilke_viscosity(tab, X, mu), combined_conductivity(X, lam),
          mixture_diffusion(X, Y, D)};
}

}  // namespace sabatier
