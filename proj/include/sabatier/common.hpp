//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <ceres/jet.h>

namespace sabatier {

namespace constants {
  inline constexpr double kGasConstant = 8.314462618;  // J/(mol K)
  inline constexpr double kAtmosphere = 101325.0;      // Pa
  inline constexpr double kNormalTemperature = 273.15;  // K
  inline constexpr double kBoltzmann = 1.380649e-23;    // J/K
  inline constexpr double kAvogadro = 6.02214076e23;    // 1/mol
  inline constexpr double kZeroCelsius = 273.15;        // K
}  // namespace constants

// Error taxonomy. The CLI maps each family onto an exit code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DataError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class RangeError : public Error {
public:
  using Error::Error;
};

class SolverError : public Error {
public:
  using Error::Error;
};

template <int N>
using Jet = ceres::Jet<double, N>;

template <class T>
struct is_jet : std::false_type { };

template <class T, int N>
struct is_jet<ceres::Jet<T, N>> : std::true_type { };

/// Value part of a plain or dual scalar.
template <class S>
inline double value_of(const S &x) {
  if constexpr (is_jet<S>::value)
    return x.a;
  else
    return static_cast<double>(x);
}

/// max(x, 0) with a zero derivative on the clamped side and at the kink.
template <class S>
inline S clamp_nonnegative(const S &x) {
  if (value_of(x) > 0.0)
    return x;
  return S(0.0);
}

/// x^e for x >= 0; returns 0 (with zero derivative) for x <= 0.
template <class S>
inline S guarded_pow(const S &x, const S &e) {
  using std::exp;
  using std::log;
  if (!(value_of(x) > 0.0))
    return S(0.0);
  return exp(e * log(x));
}

}  // namespace sabatier
