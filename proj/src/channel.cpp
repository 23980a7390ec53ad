#include "pacb/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pacb {
namespace {

void require_positive_distance(double d) {
  if (!(d > 0.0)) throw std::domain_error("link distance must be positive");
}

}  // namespace

RfConstants::RfConstants(double carrier_frequency_hz, double effective_index,
                         double path_loss_exponent)
    : carrier_frequency_(carrier_frequency_hz),
      effective_index_(effective_index),
      path_loss_exponent_(path_loss_exponent) {
  if (!(carrier_frequency_hz > 0.0)) throw std::invalid_argument("carrier frequency must be positive");
  if (!(effective_index >= 1.0)) throw std::invalid_argument("effective refractive index must be >= 1");
  if (!(path_loss_exponent > 0.0)) throw std::invalid_argument("path loss exponent must be positive");
  wavelength_ = kSpeedOfLight / carrier_frequency_hz;
  eta_ = wavelength_ * wavelength_ / (16.0 * std::numbers::pi * std::numbers::pi);
}

void PowerConfig::validate() const {
  if (!(p_max >= 0.0)) throw std::invalid_argument("power budget must be non-negative");
  if (!(p0 >= 0.0 && p0 <= p_max)) throw std::invalid_argument("transmit power outside [0, p_max]");
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa outside [0, 1]");
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw std::invalid_argument("zeta outside [0, 1]");
  if (!(noise_rpa > 0.0)) throw std::invalid_argument("receive-antenna noise power must be positive");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
}

double channel_gain_downlink(double distance, const RfConstants& rf) {
  require_positive_distance(distance);
  return rf.eta() / (distance * distance);
}

double channel_gain_eve_ground(double distance, double small_scale_gain, const RfConstants& rf) {
  require_positive_distance(distance);
  return rf.eta() * std::pow(distance, -rf.path_loss_exponent()) * small_scale_gain * small_scale_gain;
}

double harvested_power(double p0, double tpa_to_bd, const RfConstants& rf) {
  return p0 * channel_gain_downlink(tpa_to_bd, rf);
}

LinkBudget backscatter_budget(double p0, double tpa_to_bd, double bd_to_rpa,
                              const PowerConfig& cfg, const RfConstants& rf) {
  LinkBudget out;
  out.harvested_power = harvested_power(p0, tpa_to_bd, rf);
  out.received_power =
      cfg.zeta * cfg.kappa * out.harvested_power * channel_gain_downlink(bd_to_rpa, rf);
  out.snr = out.received_power / cfg.noise_rpa;
  out.rate = cfg.bandwidth * std::log2(1.0 + out.snr);
  return out;
}

}  // namespace pacb
