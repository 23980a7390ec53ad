#pragma once

#include <cstdint>

#include "pacb/channel.hpp"
#include "pacb/geometry.hpp"

// Energy detection at the eavesdropper under bounded noise uncertainty.
//
// The eavesdropper's noise power sigma_e^2 is uniform in dB on
// [nominal_dB - rho_dB, nominal_dB + rho_dB], i.e. it has density
// 1 / (2 x ln rho) on [x_lo, x_hi] = [nominal / rho, rho * nominal].
// Received power is Delta1 + sigma_e^2 when the device is silent and
// Delta2 + sigma_e^2 when it backscatters. Both hypotheses are equally likely
// and the total detection error is P_fa + P_md.

namespace pacb {

class NoiseUncertainty {
 public:
  /// Throws std::invalid_argument unless nominal > 0 and rho > 1.
  NoiseUncertainty(double nominal_watts, double rho);
  static NoiseUncertainty from_db(double nominal_watts, double rho_db);

  double nominal() const { return nominal_; }
  double rho() const { return rho_; }
  double log_rho() const { return log_rho_; }
  double x_lo() const { return nominal_ / rho_; }
  double x_hi() const { return nominal_ * rho_; }

  friend bool operator==(const NoiseUncertainty&, const NoiseUncertainty&) = default;

 private:
  double nominal_;
  double rho_;
  double log_rho_;
};

/// What the receiver side knows about the eavesdropper link.
struct EveUncertainty {
  double chi = 0.0;      // max location error, meters
  double delta = 0.1;    // max small-scale gain error
  double g_est = 1.278;  // estimated small-scale gain magnitude

  void validate() const;
  friend bool operator==(const EveUncertainty&, const EveUncertainty&) = default;
};

struct HypothesisPowers {
  double delta1 = 0.0;  // received signal power at Eve, device silent
  double delta2 = 0.0;  // received signal power at Eve, device backscattering
  double excess = 0.0;  // delta2 - delta1, kept exact since delta1 usually dwarfs it
};

struct OptimalDetection {
  double threshold = 0.0;  // x_lo + Delta2
  double dep_min = 1.0;    // clamped to [0, 1]
  double dep_min_raw = 1.0;
  // Delta2 - Delta1 > x_hi - x_lo: the hypotheses' supports do not overlap
  // and the eavesdropper separates them without error.
  bool separable = false;
};

struct DetectionReport {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double threshold_opt = 0.0;
  double dep_min = 1.0;
  double dep_worst_case = 1.0;
  // diagnostics
  double dep_min_raw = 1.0;
  double dep_worst_case_raw = 1.0;
  bool separable = false;
};

double noise_pdf(double x, const NoiseUncertainty& model);

/// Delta1 = P0 eta d_te^-2; Delta2 = Delta1 + zeta kappa P0 eta d_tb^-2 |h_b^e|^2.
/// Throws std::domain_error for non-positive distances.
HypothesisPowers hypothesis_powers(double p0, double tpa_to_eve, double tpa_to_bd,
                                   double eve_gain, const PowerConfig& cfg,
                                   const RfConstants& rf);

double dep_false_alarm(double threshold, double delta1, const NoiseUncertainty& model);
double dep_miss(double threshold, double delta2, const NoiseUncertainty& model);
double dep_total(double threshold, double delta1, double delta2, const NoiseUncertainty& model);

/// Minimiser of dep_total over the threshold and the minimum itself.
/// Requires delta2 >= delta1 (std::invalid_argument otherwise).
OptimalDetection optimal_detection(double delta1, double delta2, const NoiseUncertainty& model);
/// Same, using the exact excess instead of delta2 - delta1.
OptimalDetection optimal_detection(const HypothesisPowers& h, const NoiseUncertainty& model);

/// Largest |h_b^e|^2 consistent with the location and gain error bounds:
/// eta (|b - e_est| - chi)^-alpha ((1 + delta) g_est)^2.
/// Throws std::domain_error if the uncertainty ball reaches the device.
double worst_case_eve_gain(const Vec3& bd, const Vec3& eve_estimate, const EveUncertainty& unc,
                           const RfConstants& rf);

/// Closest point of the uncertainty ball to the device.
Vec3 worst_case_eve_location(const Vec3& bd, const Vec3& eve_estimate, double chi);

/// ln(x_hi / (x_lo + zeta kappa P0 eta d_tb^-2 |h|^2)) / (2 ln rho), unclamped.
double worst_case_dep_raw(double p0, double tpa_to_bd, double worst_gain, const PowerConfig& cfg,
                          const RfConstants& rf, const NoiseUncertainty& model);
/// Same, clamped to [0, 1].
double worst_case_dep(double p0, double tpa_to_bd, double worst_gain, const PowerConfig& cfg,
                      const RfConstants& rf, const NoiseUncertainty& model);

struct MonteCarloDep {
  double p_false_alarm = 0.0;
  double p_miss = 0.0;
  std::uint64_t samples = 0;
};

/// Empirical error rates from n noise draws. Deterministic for a fixed seed
/// and independent of how many worker threads are used.
/// Throws std::invalid_argument for n == 0.
MonteCarloDep monte_carlo_dep(double threshold, double delta1, double delta2,
                              const NoiseUncertainty& model, std::uint64_t n, std::uint64_t seed,
                              unsigned workers = 0);

/// Full detection picture for one operating point (power, TPA position).
DetectionReport analyze_detection(double p0, const Scenario& scenario, const PowerConfig& cfg,
                                  const RfConstants& rf, const NoiseUncertainty& model,
                                  const EveUncertainty& unc);

}  // namespace pacb
