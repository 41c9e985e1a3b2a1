//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "sabatier/common.hpp"
#include "sabatier/species.hpp"
#include "sabatier/thermo.hpp"

namespace sabatier {

/// Lunde-type rate law parameters. A carries units 1/s (mol/m^3)^(1-5n).
template <class S>
struct KineticParamsT {
  S E_a;   // J/mol
  S logA;  // ln A
  S n;
};

using KineticParams = KineticParamsT<double>;

/// Parameters identified from the Engelbrecht et al. experiments.
inline KineticParams reference_kinetics() { return {52141.0, std::log(4.744e5), 0.0581}; }

/// Reaction switched off (A = 0).
inline KineticParams no_reaction() {
  return {0.0, -std::numeric_limits<double>::infinity(), 1.0};
}

template <class S>
KineticParamsT<S> promote(const KineticParams &p) {
  return {S(p.E_a), S(p.logA), S(p.n)};
}

template <class S>
S forward_rate(const KineticParamsT<S> &params, const S &T) {
  using std::exp;
  if (value_of(params.logA) == -std::numeric_limits<double>::infinity())
    return S(0.0);
  return exp(params.logA - params.E_a / (constants::kGasConstant * T));
}

inline double forward_rate(const KineticParams &params, double T) {
  return forward_rate<double>(params, T);
}

/// Delta H_r = sum nu_k M_k h_k, J/mol.
template <class S>
S reaction_enthalpy(const SpeciesTable &tab, const S &T) {
  S d(0.0);
  for (std::size_t k = 0; k < kNumSpecies; ++k)
    d += kNuNet[k] * tab.molar_mass(k) * h_species(tab, k, T);
  return d;
}

/// Delta S_r = sum nu_k M_k s_k, J/(mol K).
template <class S>
S reaction_entropy(const SpeciesTable &tab, const S &T) {
  S d(0.0);
  for (std::size_t k = 0; k < kNumSpecies; ++k)
    d += kNuNet[k] * tab.molar_mass(k) * s_species(tab, k, T);
  return d;
}

inline constexpr double kSumNu = -2.0;

/// Concentration-based equilibrium constant, (mol/m^3)^(sum nu).
template <class S>
S equilibrium_constant(const SpeciesTable &tab, const S &T) {
  using std::exp;
  using std::log;
  const double R = constants::kGasConstant;
  const S g = reaction_entropy(tab, T) / R - reaction_enthalpy(tab, T) / (R * T);
  return exp(g + kSumNu * log(constants::kAtmosphere / (R * T)));
}

/// Q = k_f ((c_CO2 c_H2^4)^n - (c_CH4 c_H2O^2 / k_eq)^n), mol/(m^3 s).
template <class S>
S rate_of_progress(const SpeciesTable &tab, const FullComposition<S> &Y, const S &T,
                   const S &rho, const KineticParamsT<S> &params) {
  const S kf = forward_rate(params, T);
  if (value_of(kf) == 0.0)
    return S(0.0);
  FullComposition<S> c;
  for (std::size_t k = 0; k < kNumSpecies; ++k)
    c[k] = clamp_nonnegative(S(rho * Y[k] / tab.molar_mass(k)));
  const S h2 = c[kH2] * c[kH2];
  const S fwd = c[kCO2] * h2 * h2;
  const S rev = c[kCH4] * c[kH2O] * c[kH2O] / equilibrium_constant(tab, T);
  return kf * (guarded_pow(fwd, params.n) - guarded_pow(rev, params.n));
}

template <class S>
struct ReactionState {
  S Q;
  FullComposition<S> omega;  // kg/(m^3 s)
  S omega_T;                 // W/m^3
};

template <class S>
ReactionState<S> species_sources(const SpeciesTable &tab, const FullComposition<S> &Y,
                                 const S &T, const S &rho,
                                 const KineticParamsT<S> &params, bool in_reaction_zone) {
  ReactionState<S> r{S(0.0), {S(0.0), S(0.0), S(0.0), S(0.0)}, S(0.0)};
  if (!in_reaction_zone)
    return r;
  r.Q = rate_of_progress(tab, Y, T, rho, params);
  for (std::size_t k = 0; k < kNumSpecies; ++k)
    r.omega[k] = tab.molar_mass(k) * kNuNet[k] * r.Q;
  // -sum h_k omega_k collapses to -Q dH_r.
  r.omega_T = -r.Q * reaction_enthalpy(tab, T);
  return r;
}

struct EquilibriumPoint {
  double conversion;
  FullComposition<double> X;  // mole fractions
};

namespace detail {
  /// log of [CH4][H2O]^2 / ([CO2][H2]^4 k_eq) for a 1:4 feed at extent xi.
  inline double extent_residual(double xi, double log_target) {
    return std::log(4.0) + 3.0 * std::log(xi) + 2.0 * std::log(5.0 - 2.0 * xi) -
           std::log(256.0) - 5.0 * std::log1p(-xi) - log_target;
  }
}  // namespace detail

/// Equilibrium CO2 conversion of a stoichiometric feed at (T, p).
inline EquilibriumPoint equilibrium_conversion(const SpeciesTable &tab, double T,
                                               double p_total) {
  if (!(T > 0.0) || !(p_total > 0.0))
    throw RangeError("equilibrium needs positive T and p");
  const double c_scale = p_total / (constants::kGasConstant * T);
  const double log_target = std::log(equilibrium_constant(tab, T)) +
                            2.0 * std::log(c_scale);
  auto f = [&](double xi) { return detail::extent_residual(xi, log_target); };
  double lo = 1e-300;
  double hi = 1.0 - std::numeric_limits<double>::epsilon();
  const double flo = f(lo), fhi = f(hi);
  if (!(flo < 0.0 && fhi > 0.0)) {
    std::ostringstream os;
    os << "equilibrium extent not bracketed: f(" << lo << ") = " << flo << ", f("
       << hi << ") = " << fhi;
    throw SolverError(os.str());
  }
  std::uintmax_t iters = 300;
  const auto bracket = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
  const double xi = 0.5 * (bracket.first + bracket.second);
  const double tot = 5.0 - 2.0 * xi;
  return {xi, {(1.0 - xi) / tot, (4.0 - 4.0 * xi) / tot, xi / tot, 2.0 * xi / tot}};
}

}  // namespace sabatier
