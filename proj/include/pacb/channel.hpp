#pragma once

// Line-of-sight link budgets for the pinching-antenna backscatter link.
//
// Only squared channel magnitudes are carried. The in-waveguide and
// free-space phase factors are unit-modulus and never reach a power
// expression, so they are not modelled.

namespace pacb {

inline constexpr double kSpeedOfLight = 299792458.0;

class RfConstants {
 public:
  /// Throws std::invalid_argument unless f_c > 0, n_eff >= 1 and alpha > 0.
  RfConstants(double carrier_frequency_hz, double effective_index, double path_loss_exponent);

  double carrier_frequency() const { return carrier_frequency_; }
  double effective_index() const { return effective_index_; }
  double path_loss_exponent() const { return path_loss_exponent_; }

  double wavelength() const { return wavelength_; }
  double guided_wavelength() const { return wavelength_ / effective_index_; }
  /// Reference path loss at 1 m, lambda^2 / (16 pi^2).
  double eta() const { return eta_; }

  friend bool operator==(const RfConstants&, const RfConstants&) = default;

 private:
  double carrier_frequency_;
  double effective_index_;
  double path_loss_exponent_;
  double wavelength_;
  double eta_;
};

/// Powers in watts, bandwidth in hertz.
struct PowerConfig {
  double p0 = 0.0;         // operating transmit power
  double p_max = 100.0;    // transmit power budget
  double kappa = 0.375;    // reflected power fraction at the device
  double zeta = 1.0;       // backscattering efficiency
  double noise_rpa = 0.0;  // noise power at the receive antenna
  double bandwidth = 1e4;

  void validate() const;
  friend bool operator==(const PowerConfig&, const PowerConfig&) = default;
};

struct LinkBudget {
  double harvested_power = 0.0;  // P_b
  double received_power = 0.0;   // P_a
  double snr = 0.0;
  double rate = 0.0;  // bit/s
};

/// |h|^2 = eta / d^2 for a free-space LoS hop. Throws std::domain_error for d <= 0.
double channel_gain_downlink(double distance, const RfConstants& rf);

/// |h_b^e|^2 = eta * d^-alpha * |g|^2 for the ground-level device-to-eavesdropper hop.
double channel_gain_eve_ground(double distance, double small_scale_gain, const RfConstants& rf);

double harvested_power(double p0, double tpa_to_bd, const RfConstants& rf);

/// P_a = zeta kappa P0 eta^2 (d_tb d_br)^-2, SNR = P_a / sigma_p^2, rate = B log2(1 + SNR).
LinkBudget backscatter_budget(double p0, double tpa_to_bd, double bd_to_rpa,
                              const PowerConfig& cfg, const RfConstants& rf);

}  // namespace pacb
