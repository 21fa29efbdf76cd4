#pragma once

// Pulsed cavity-optomechanics parameter chain: cavity linewidth, coupling,
// photon number, linearized coupling G, effective heralding strengths,
// static displacement, thermal figure of merit, and drive filtering.
//
// Conventions: kappa is the amplitude decay rate with intensity FWHM = FSR /
// finesse, i.e. kappa = pi c / (2 L F) in rad/s. The drive envelope is a
// flat pulse with |eps|^2 = 1/tau. n_bar is the exact Bose-Einstein occupation.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "phononforge/errors.hpp"

namespace phononforge {

namespace constants {
inline constexpr double c = 299792458.0;           // m/s
inline constexpr double h = 6.62607015e-34;        // J s
inline constexpr double hbar = h / (2.0 * std::numbers::pi);
inline constexpr double k_B = 1.380649e-23;        // J/K
}  // namespace constants

enum class DetuningSign { red, blue };  // red: +omega_M (beam splitter), blue: -omega_M

struct ExperimentParams {
  double wavelength = 1064e-9;                        // m
  double cavity_length = 75e-6;                       // m
  double finesse = 5e4;
  double mech_freq = 2.0 * std::numbers::pi * 200e6;  // rad/s
  double eff_mass = 20e-12;                           // kg
  double quality = 1e5;
  double bath_temp = 0.1;                             // K
  double pulse_power = 1.3e-3;                        // W
  double pulse_periods = 100.0;
  DetuningSign detuning_sign = DetuningSign::blue;
  double visibility = 0.9999;
  double filter_kappa = 2.0 * std::numbers::pi * 2e3;  // rad/s
};

struct DerivedParams {
  double kappa = 0.0;         // rad/s
  double fsr = 0.0;           // Hz
  double x_zpf = 0.0;         // m
  double g0 = 0.0;            // rad/s
  double tau = 0.0;           // s
  double photon_number = 0.0;
  double alpha_sq = 0.0;
  double G = 0.0;             // 1/s
  double theta_half = 0.0;
  double r = 0.0;
  double beta = 0.0;
  double n_bar = 0.0;
  double xi = 0.0;
  double sideband_resolution = 0.0;
  std::vector<std::string> warnings;
};

inline void validate(const ExperimentParams& p) {
  const std::pair<double, const char*> positive[] = {
      {p.wavelength, "wavelength"},   {p.cavity_length, "cavity_length"}, {p.finesse, "finesse"},
      {p.mech_freq, "mech_freq"},     {p.eff_mass, "eff_mass"},           {p.quality, "quality"},
      {p.bath_temp, "bath_temp"},     {p.pulse_power, "pulse_power"},     {p.pulse_periods, "pulse_periods"},
      {p.visibility, "visibility"},   {p.filter_kappa, "filter_kappa"}};
  for (const auto& [v, name] : positive) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument(std::string("experiment params: ") + name + " must be finite and > 0");
    }
  }
  if (p.visibility > 1.0) throw InvalidArgument("experiment params: visibility must be <= 1");
}

inline double bose_occupation(double omega, double temperature) {
  return 1.0 / std::expm1(constants::hbar * omega / (constants::k_B * temperature));
}

inline DerivedParams derive(const ExperimentParams& p) {
  validate(p);
  using std::numbers::pi;
  DerivedParams d;
  d.fsr = constants::c / (2.0 * p.cavity_length);
  d.kappa = pi * constants::c / (2.0 * p.cavity_length * p.finesse);
  d.sideband_resolution = p.mech_freq / d.kappa;
  d.x_zpf = std::sqrt(constants::hbar / (2.0 * p.eff_mass * p.mech_freq));
  const double omega_cav = 2.0 * pi * constants::c / p.wavelength;
  d.g0 = omega_cav / p.cavity_length * d.x_zpf;
  d.tau = p.pulse_periods * 2.0 * pi / p.mech_freq;
  d.photon_number = p.pulse_power * d.tau * p.wavelength / (constants::h * constants::c);
  // |alpha|^2 = 2 kappa |eps|^2 / (Delta^2 + kappa^2), |eps|^2 = 1/tau, Delta = +-omega_M
  d.alpha_sq = 2.0 * d.kappa / d.tau / (p.mech_freq * p.mech_freq + d.kappa * d.kappa);
  d.G = d.g0 * d.g0 / d.kappa * d.photon_number * d.alpha_sq;
  const double strength = std::sqrt(2.0 * d.G * d.tau);
  if (p.detuning_sign == DetuningSign::red) d.theta_half = strength;
  else d.r = strength;
  d.beta = d.g0 / p.mech_freq * d.photon_number * d.alpha_sq;
  d.n_bar = bose_occupation(p.mech_freq, p.bath_temp);
  d.xi = d.n_bar / p.quality * (d.tau * p.mech_freq / (2.0 * pi));

  if (d.kappa >= p.mech_freq / 5.0) {
    d.warnings.push_back("resolved-sideband breach: kappa >= omega_M/5 (omega_M/kappa = " +
                         std::to_string(d.sideband_resolution) + ")");
  }
  const double drive_coupling = d.g0 * std::sqrt(d.photon_number * d.alpha_sq);
  if (drive_coupling >= d.kappa / 5.0) {
    d.warnings.push_back("adiabatic breach: g0 sqrt(N) |alpha| >= kappa/5");
  }
  return d;
}

/// G tau = 2 g0^2 N / (omega_M^2 + kappa^2) for the flat pulse.
inline double closed_form_G_tau(const ExperimentParams& p, const DerivedParams& d) {
  return 2.0 * d.g0 * d.g0 * d.photon_number / (p.mech_freq * p.mech_freq + d.kappa * d.kappa);
}

/// kappa_f^2 / (kappa_f^2 + detuning^2).
inline double lorentzian_transmission(double filter_kappa, double detuning) {
  const double k2 = filter_kappa * filter_kappa;
  return k2 / (k2 + detuning * detuning);
}

/// Filter amplitude decay rate whose Lorentzian transmits `transmission` at `detuning`.
inline double required_filter_kappa(double transmission, double detuning) {
  if (!(transmission > 0.0 && transmission < 1.0)) {
    throw InvalidArgument("required_filter_kappa: transmission must lie in (0, 1)");
  }
  return std::abs(detuning) * std::sqrt(transmission / (1.0 - transmission));
}

struct FilterBudget {
  double interferometric_residual = 0.0;  // 1 - visibility
  double interferometric_suppression = 0.0;
  double filter_transmission = 0.0;       // at the sideband detuning
  double drive_to_sideband_ratio = 0.0;   // drive transmission / sideband transmission
  double residual_drive_photons = 0.0;    // per pulse
};

/// Drive suppression by displacement interference and a filter cavity resonant
/// with the sideband; the drive sits `sideband_detuning` (rad/s) away.
inline FilterBudget filter_budget(const ExperimentParams& p, double sideband_detuning) {
  validate(p);
  FilterBudget f;
  f.interferometric_residual = 1.0 - p.visibility;
  f.interferometric_suppression = 1.0 / f.interferometric_residual;
  f.filter_transmission = lorentzian_transmission(p.filter_kappa, sideband_detuning);
  f.drive_to_sideband_ratio = f.filter_transmission / lorentzian_transmission(p.filter_kappa, 0.0);
  const DerivedParams d = derive(p);
  f.residual_drive_photons = d.photon_number * f.interferometric_residual * f.drive_to_sideband_ratio;
  return f;
}

}  // namespace phononforge
