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

namespace sabatier {

template <class S>
using Composition = std::array<S, kNumPrimarySpecies>;

template <class S>
using FullComposition = std::array<S, kNumSpecies>;

/// Appends the derived water mass fraction.
template <class S>
FullComposition<S> complete(const Composition<S> &Y) {
  return {Y[0], Y[1], Y[2], S(1.0) - (Y[0] + Y[1] + Y[2])};
}

// Molar NASA forms, dimensionless: cp/R, h/(RT), s/R.
template <class S>
S nasa_cp_r(const NasaRange &r, const S &T) {
  const auto &a = r.a;
  return a[0] / (T * T) + a[1] / T + a[2] +
         T * (a[3] + T * (a[4] + T * (a[5] + T * a[6])));
}

template <class S>
S nasa_h_rt(const NasaRange &r, const S &T) {
  using std::log;
  const auto &a = r.a;
  return -a[0] / (T * T) + a[1] * log(T) / T + a[2] +
         T * (a[3] / 2.0 + T * (a[4] / 3.0 + T * (a[5] / 4.0 + T * a[6] / 5.0))) +
         r.b1 / T;
}

template <class S>
S nasa_s_r(const NasaRange &r, const S &T) {
  using std::log;
  const auto &a = r.a;
  return -a[0] / (2.0 * T * T) - a[1] / T + a[2] * log(T) +
         T * (a[3] + T * (a[4] / 2.0 + T * (a[5] / 3.0 + T * a[6] / 4.0))) + r.b2;
}

/// Specific heat of species k, J/(kg K).
template <class S>
S cp_species(const SpeciesTable &tab, std::size_t k, const S &T) {
  const auto &r = tab.nasa_at(k, value_of(T));
  return nasa_cp_r(r, T) * (constants::kGasConstant / tab.molar_mass(k));
}

/// Specific enthalpy of species k (formation enthalpy included), J/kg.
template <class S>
S h_species(const SpeciesTable &tab, std::size_t k, const S &T) {
  const auto &r = tab.nasa_at(k, value_of(T));
  return nasa_h_rt(r, T) * T * (constants::kGasConstant / tab.molar_mass(k));
}

/// Specific standard-state entropy of species k, J/(kg K).
template <class S>
S s_species(const SpeciesTable &tab, std::size_t k, const S &T) {
  const auto &r = tab.nasa_at(k, value_of(T));
  return nasa_s_r(r, T) * (constants::kGasConstant / tab.molar_mass(k));
}

template <class S>
S mean_molar_mass(const SpeciesTable &tab, const FullComposition<S> &Y) {
  S inv(0.0);
  for (std::size_t k = 0; k < kNumSpecies; ++k)
    inv += Y[k] / tab.molar_mass(k);
  return S(1.0) / inv;
}

template <class S>
S mean_molar_mass(const SpeciesTable &tab, const Composition<S> &Y) {
  return mean_molar_mass(tab, complete(Y));
}

/// rho = p_ref M / (R T); pressure variations are neglected in the equation of state.
template <class S>
S density(const SpeciesTable &tab, const FullComposition<S> &Y, const S &T,
          double p_ref) {
  return p_ref * mean_molar_mass(tab, Y) / (constants::kGasConstant * T);
}

template <class S>
S density(const SpeciesTable &tab, const Composition<S> &Y, const S &T,
          double p_ref) {
  return density(tab, complete(Y), T, p_ref);
}

template <class S>
FullComposition<S> mole_fractions(const SpeciesTable &tab,
                                  const FullComposition<S> &Y) {
  const S M = mean_molar_mass(tab, Y);
  FullComposition<S> X;
  for (std::size_t k = 0; k < kNumSpecies; ++k)
    X[k] = Y[k] * M / tab.molar_mass(k);
  return X;
}

template <class S>
FullComposition<S> mass_fractions(const SpeciesTable &tab,
                                  const FullComposition<S> &X) {
  S M(0.0);
  for (std::size_t k = 0; k < kNumSpecies; ++k)
    M += X[k] * tab.molar_mass(k);
  FullComposition<S> Y;
  for (std::size_t k = 0; k < kNumSpecies; ++k)
    Y[k] = X[k] * tab.molar_mass(k) / M;
  return Y;
}

template <class S>
S cp_mix(const SpeciesTable &tab, const FullComposition<S> &Y, const S &T) {
  S c(0.0);
  for (std::size_t k = 0; k < kNumSpecies; ++k)
    c += Y[k] * cp_species(tab, k, T);
  return c;
}

template <class S>
S h_mix(const SpeciesTable &tab, const FullComposition<S> &Y, const S &T) {
  S h(0.0);
  for (std::size_t k = 0; k < kNumSpecies; ++k)
    h += Y[k] * h_species(tab, k, T);
  return h;
}

template <class S>
S s_mix(const SpeciesTable &tab, const FullComposition<S> &Y, const S &T) {
  S s(0.0);
  for (std::size_t k = 0; k < kNumSpecies; ++k)
    s += Y[k] * s_species(tab, k, T);
  return s;
}

/// Mass fractions of a feed given in mole fractions.
inline FullComposition<double> feed_mass_fractions(const SpeciesTable &tab,
                                                   const FullComposition<double> &X) {
  return mass_fractions(tab, X);
}

/// Stoichiometric 1:4 CO2/H2 feed.
inline Composition<double> stoichiometric_feed(const SpeciesTable &tab) {
  const auto Y = feed_mass_fractions(tab, {0.2, 0.8, 0.0, 0.0});
  return {Y[0], Y[1], Y[2]};
}

}  // namespace sabatier
