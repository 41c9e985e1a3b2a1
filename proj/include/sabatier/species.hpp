//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sabatier/common.hpp"

#ifndef SABATIER_DATA_DIR
#define SABATIER_DATA_DIR "data"
#endif

namespace sabatier {

/// Fixed species order of the Sabatier system. Index 3 (H2O) is never a
/// primary unknown; its mass fraction is 1 - (Y_CO2 + Y_H2 + Y_CH4).
enum Species : std::size_t { kCO2 = 0, kH2 = 1, kCH4 = 2, kH2O = 3 };

inline constexpr std::size_t kNumSpecies = 4;
inline constexpr std::size_t kNumPrimarySpecies = 3;

inline constexpr std::array<std::string_view, kNumSpecies> kSpeciesNames{
    "CO2", "H2", "CH4", "H2O"};

// CO2 + 4 H2 <=> CH4 + 2 H2O
inline constexpr std::array<double, kNumSpecies> kNuReactant{1.0, 4.0, 0.0, 0.0};
inline constexpr std::array<double, kNumSpecies> kNuProduct{0.0, 0.0, 1.0, 2.0};
inline constexpr std::array<double, kNumSpecies> kNuNet{-1.0, -4.0, 1.0, 2.0};

/// Temperature window every fit must cover.
inline constexpr double kEnvelopeLow = 250.0;
inline constexpr double kEnvelopeHigh = 900.0;

struct NasaRange {
  double t_low = 0.0;
  double t_high = 0.0;
  std::array<double, 7> a{};
  double b1 = 0.0;
  double b2 = 0.0;
};

/// exp(A ln T + B/T + C/T^2 + D) fit, stored in the database's native units.
struct TransportFit {
  double t_low = 0.0;
  double t_high = 0.0;
  double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
};

struct SpeciesRecord {
  std::string name;
  double molar_mass = 0.0;  // kg/mol
  std::vector<NasaRange> nasa;
  std::vector<TransportFit> viscosity;
  std::vector<TransportFit> conductivity;
  double lj_sigma = 0.0;   // m
  double lj_eps_kb = 0.0;  // K
  std::string source;
};

namespace detail {
  template <class Range>
  const Range &find_range(const std::vector<Range> &ranges, double T,
                          const std::string &species, const char *what) {
    for (const auto &r: ranges) {
      if (T >= r.t_low && T <= r.t_high)
        return r;
    }
    std::ostringstream os;
    os << what << " fit of species " << species << " has no range containing T = "
       << T << " K";
    throw RangeError(os.str());
  }
}  // namespace detail

class SpeciesTable {
public:
  SpeciesTable() = default;
  explicit SpeciesTable(std::array<SpeciesRecord, kNumSpecies> records)
      : records_(std::move(records)) { }

  const SpeciesRecord &operator[](std::size_t k) const { return records_[k]; }
  const SpeciesRecord &record(std::size_t k) const { return records_[k]; }
  double molar_mass(std::size_t k) const { return records_[k].molar_mass; }
  std::array<double, kNumSpecies> molar_masses() const {
    return {records_[0].molar_mass, records_[1].molar_mass,
            records_[2].molar_mass, records_[3].molar_mass};
  }

  const NasaRange &nasa_at(std::size_t k, double T) const {
    return detail::find_range(records_[k].nasa, T, records_[k].name, "NASA");
  }
  const TransportFit &viscosity_at(std::size_t k, double T) const {
    return detail::find_range(records_[k].viscosity, T, records_[k].name,
                              "viscosity");
  }
  const TransportFit &conductivity_at(std::size_t k, double T) const {
    return detail::find_range(records_[k].conductivity, T, records_[k].name,
                              "conductivity");
  }

private:
  std::array<SpeciesRecord, kNumSpecies> records_;
};

namespace detail {
  inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
      return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
  }

  inline std::vector<double> parse_numbers(const std::string &text,
                                           std::size_t expected,
                                           const std::string &where) {
    std::istringstream is(text);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != tok.size())
        throw DataError("malformed coefficient block " + where + ": '" + tok +
                        "' is not a number");
      out.push_back(v);
    }
    if (out.size() != expected) {
      throw DataError("malformed coefficient block " + where + ": expected " +
                      std::to_string(expected) + " numbers, got " +
                      std::to_string(out.size()));
    }
    return out;
  }

  inline double nasa_cp_over_r(const NasaRange &r, double T) {
    const auto &a = r.a;
    return a[0] / (T * T) + a[1] / T + a[2] +
           T * (a[3] + T * (a[4] + T * (a[5] + T * a[6])));
  }

  inline double fit_value(const TransportFit &f, double T) {
    return std::exp(f.A * std::log(T) + f.B / T + f.C / (T * T) + f.D);
  }

  template <class Range>
  void check_ranges(std::vector<Range> &ranges, const std::string &species,
                    const char *what) {
    if (ranges.empty())
      throw DataError("species " + species + " has no " + what + " ranges");
    for (const auto &r: ranges) {
      if (!(r.t_low < r.t_high))
        throw DataError(std::string(what) + " range of species " + species +
                        " is not ascending");
    }
    for (std::size_t i = 1; i < ranges.size(); ++i) {
      const double prev = ranges[i - 1].t_high;
      const double next = ranges[i].t_low;
      if (next > prev) {
        std::ostringstream os;
        os << what << " range gap " << prev << "-" << next << " K in species "
           << species;
        throw DataError(os.str());
      }
      if (next < prev || ranges[i].t_low < ranges[i - 1].t_low) {
        std::ostringstream os;
        os << what << " ranges overlap or are out of order at " << next
           << " K in species " << species;
        throw DataError(os.str());
      }
    }
    if (ranges.front().t_low > kEnvelopeLow ||
        ranges.back().t_high < kEnvelopeHigh) {
      std::ostringstream os;
      os << what << " fit of species " << species << " does not cover "
         << kEnvelopeLow << "-" << kEnvelopeHigh << " K";
      throw DataError(os.str());
    }
  }

  template <class Range, class Eval>
  void check_continuity(const std::vector<Range> &ranges,
                        const std::string &species, const char *what,
                        Eval eval) {
    for (std::size_t i = 1; i < ranges.size(); ++i) {
      const double T = ranges[i].t_low;
      const double lo = eval(ranges[i - 1], T);
      const double hi = eval(ranges[i], T);
      if (std::abs(lo - hi) > 0.01 * std::abs(lo)) {
        std::ostringstream os;
        os << what << " fit of species " << species << " jumps by more than 1% at "
           << T << " K";
        throw DataError(os.str());
      }
    }
  }
}  // namespace detail

/// Parses the line-oriented species coefficient format (see data/species.dat).
inline SpeciesTable parse_species_table(std::istream &in,
                                        const std::string &origin = "<stream>") {
  std::array<std::optional<SpeciesRecord>, kNumSpecies> found;
  SpeciesRecord *cur = nullptr;
  std::string line;
  int lineno = 0;

  auto where = [&](const std::string &key) {
    return "'" + key + "' of species " + (cur ? cur->name : std::string("?")) +
           " (" + origin + ":" + std::to_string(lineno) + ")";
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    const std::string text = detail::trim(line);
    if (text.empty())
      continue;

    if (text.front() == '[') {
      if (text.back() != ']')
        throw DataError("unterminated section header at " + origin + ":" +
                        std::to_string(lineno));
      std::istringstream hs(text.substr(1, text.size() - 2));
      std::string kw, name, extra;
      hs >> kw >> name >> extra;
      if (kw != "species" || name.empty() || !extra.empty())
        throw DataError("bad section header '" + text + "' at " + origin + ":" +
                        std::to_string(lineno));
      std::size_t idx = kNumSpecies;
      for (std::size_t k = 0; k < kNumSpecies; ++k) {
        if (kSpeciesNames[k] == name)
          idx = k;
      }
      if (idx == kNumSpecies)
        throw DataError("unknown species " + name + " at " + origin + ":" +
                        std::to_string(lineno));
      if (found[idx])
        throw DataError("duplicate species " + name);
      found[idx].emplace();
      cur = &*found[idx];
      cur->name = name;
      continue;
    }

    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw DataError("expected 'key = value' at " + origin + ":" +
                      std::to_string(lineno));
    if (cur == nullptr)
      throw DataError("key outside a [species ...] block at " + origin + ":" +
                      std::to_string(lineno));
    const std::string key = detail::trim(std::string_view(text).substr(0, eq));
    const std::string val = detail::trim(std::string_view(text).substr(eq + 1));

    if (key == "molar_mass") {
      cur->molar_mass = detail::parse_numbers(val, 1, where(key))[0];
    } else if (key == "nasa_range") {
      const auto v = detail::parse_numbers(val, 11, where(key));
      NasaRange r;
      r.t_low = v[0];
      r.t_high = v[1];
      for (int i = 0; i < 7; ++i)
        r.a[i] = v[2 + i];
      r.b1 = v[9];
      r.b2 = v[10];
      cur->nasa.push_back(r);
    } else if (key == "visc_range" || key == "cond_range") {
      const auto v = detail::parse_numbers(val, 6, where(key));
      TransportFit f{v[0], v[1], v[2], v[3], v[4], v[5]};
      (key == "visc_range" ? cur->viscosity : cur->conductivity).push_back(f);
    } else if (key == "lj_sigma") {
      cur->lj_sigma = detail::parse_numbers(val, 1, where(key))[0];
    } else if (key == "lj_eps_kb") {
      cur->lj_eps_kb = detail::parse_numbers(val, 1, where(key))[0];
    } else if (key == "source") {
      cur->source = val;
    } else {
      throw DataError("unknown key '" + key + "' at " + origin + ":" +
                      std::to_string(lineno));
    }
  }

  std::array<SpeciesRecord, kNumSpecies> records;
  for (std::size_t k = 0; k < kNumSpecies; ++k) {
    if (!found[k])
      throw DataError("species " + std::string(kSpeciesNames[k]) + " absent");
    auto &r = *found[k];
    if (!(r.molar_mass > 0.0))
      throw DataError("species " + r.name + " needs a positive molar_mass");
    if (!(r.lj_sigma > 0.0) || !(r.lj_eps_kb > 0.0))
      throw DataError("species " + r.name +
                      " needs positive lj_sigma and lj_eps_kb");
    detail::check_ranges(r.nasa, r.name, "NASA");
    detail::check_ranges(r.viscosity, r.name, "viscosity");
    detail::check_ranges(r.conductivity, r.name, "conductivity");
    detail::check_continuity(r.nasa, r.name, "NASA cp", detail::nasa_cp_over_r);
    detail::check_continuity(r.viscosity, r.name, "viscosity", detail::fit_value);
    detail::check_continuity(r.conductivity, r.name, "conductivity",
                             detail::fit_value);
    records[k] = std::move(r);
  }
  return SpeciesTable(std::move(records));
}

inline SpeciesTable load_species_table(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open species file " + path.string());
  return parse_species_table(in, path.string());
}

inline std::filesystem::path default_species_path() {
  return std::filesystem::path(SABATIER_DATA_DIR) / "species.dat";
}

}  // namespace sabatier
