#include "pacb/detection.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace pacb {
namespace {

constexpr std::uint64_t kShardSize = 1u << 16;

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

NoiseUncertainty::NoiseUncertainty(double nominal_watts, double rho)
    : nominal_(nominal_watts), rho_(rho), log_rho_(std::log(rho)) {
  if (!(nominal_watts > 0.0)) throw std::invalid_argument("nominal noise power must be positive");
  if (!(rho > 1.0)) throw std::invalid_argument("noise uncertainty ratio must exceed 1");
}

NoiseUncertainty NoiseUncertainty::from_db(double nominal_watts, double rho_db) {
  return {nominal_watts, std::pow(10.0, rho_db / 10.0)};
}

void EveUncertainty::validate() const {
  if (!(chi >= 0.0)) throw std::invalid_argument("location error bound chi must be non-negative");
  if (!(delta >= 0.0)) throw std::invalid_argument("CSI error bound delta must be non-negative");
  if (!(g_est > 0.0)) throw std::invalid_argument("estimated small-scale gain must be positive");
}

double noise_pdf(double x, const NoiseUncertainty& model) {
  if (x < model.x_lo() || x > model.x_hi()) return 0.0;
  return 1.0 / (2.0 * x * model.log_rho());
}

HypothesisPowers hypothesis_powers(double p0, double tpa_to_eve, double tpa_to_bd,
                                   double eve_gain, const PowerConfig& cfg,
                                   const RfConstants& rf) {
  HypothesisPowers h;
  h.delta1 = p0 * channel_gain_downlink(tpa_to_eve, rf);
  h.excess = cfg.zeta * cfg.kappa * harvested_power(p0, tpa_to_bd, rf) * eve_gain;
  h.delta2 = h.delta1 + h.excess;
  return h;
}

double dep_false_alarm(double threshold, double delta1, const NoiseUncertainty& model) {
  const double excess = threshold - delta1;
  if (excess < model.x_lo()) return 1.0;
  if (excess > model.x_hi()) return 0.0;
  return clamp01(std::log(model.x_hi() / excess) / (2.0 * model.log_rho()));
}

double dep_miss(double threshold, double delta2, const NoiseUncertainty& model) {
  const double excess = threshold - delta2;
  if (excess < model.x_lo()) return 0.0;
  if (excess > model.x_hi()) return 1.0;
  return clamp01(std::log(excess / model.x_lo()) / (2.0 * model.log_rho()));
}

double dep_total(double threshold, double delta1, double delta2, const NoiseUncertainty& model) {
  return dep_false_alarm(threshold, delta1, model) + dep_miss(threshold, delta2, model);
}

namespace {

OptimalDetection optimal_from_excess(double delta2, double excess, const NoiseUncertainty& model) {
  OptimalDetection out;
  out.threshold = model.x_lo() + delta2;
  out.dep_min_raw = std::log(model.x_hi() / (model.x_lo() + excess)) / (2.0 * model.log_rho());
  out.dep_min = clamp01(out.dep_min_raw);
  out.separable = excess > model.x_hi() - model.x_lo();
  return out;
}

}  // namespace

OptimalDetection optimal_detection(double delta1, double delta2, const NoiseUncertainty& model) {
  if (delta2 < delta1) throw std::invalid_argument("optimal_detection requires delta2 >= delta1");
  return optimal_from_excess(delta2, delta2 - delta1, model);
}

OptimalDetection optimal_detection(const HypothesisPowers& h, const NoiseUncertainty& model) {
  if (h.excess < 0.0) throw std::invalid_argument("optimal_detection requires a non-negative excess");
  return optimal_from_excess(h.delta2, h.excess, model);
}

Vec3 worst_case_eve_location(const Vec3& bd, const Vec3& eve_estimate, double chi) {
  const Vec3 dir = bd - eve_estimate;
  const double d = norm(dir);
  if (d == 0.0) return eve_estimate;
  return eve_estimate + (chi / d) * dir;
}

double worst_case_eve_gain(const Vec3& bd, const Vec3& eve_estimate, const EveUncertainty& unc,
                           const RfConstants& rf) {
  const double d = distance(bd, eve_estimate);
  if (!(d > unc.chi)) {
    throw std::domain_error("eavesdropper uncertainty region contains the device");
  }
  const double g_hat = (1.0 + unc.delta) * unc.g_est;
  return channel_gain_eve_ground(d - unc.chi, g_hat, rf);
}

double worst_case_dep_raw(double p0, double tpa_to_bd, double worst_gain, const PowerConfig& cfg,
                          const RfConstants& rf, const NoiseUncertainty& model) {
  const double excess = cfg.zeta * cfg.kappa * harvested_power(p0, tpa_to_bd, rf) * worst_gain;
  return std::log(model.x_hi() / (model.x_lo() + excess)) / (2.0 * model.log_rho());
}

double worst_case_dep(double p0, double tpa_to_bd, double worst_gain, const PowerConfig& cfg,
                      const RfConstants& rf, const NoiseUncertainty& model) {
  return clamp01(worst_case_dep_raw(p0, tpa_to_bd, worst_gain, cfg, rf, model));
}

MonteCarloDep monte_carlo_dep(double threshold, double delta1, double delta2,
                              const NoiseUncertainty& model, std::uint64_t n, std::uint64_t seed,
                              unsigned workers) {
  if (n == 0) throw std::invalid_argument("Monte-Carlo sample count must be at least 1");

  const std::uint64_t shards = (n + kShardSize - 1) / kShardSize;
  const double rho_db = 10.0 * std::log10(model.rho());
  std::vector<std::uint64_t> false_alarms(shards, 0);
  std::vector<std::uint64_t> misses(shards, 0);

  // Each shard owns its generator, seeded from (seed, shard index) only.
  auto run_shard = [&](std::uint64_t s) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> offset_db(-rho_db, rho_db);
    const std::uint64_t begin = s * kShardSize;
    const std::uint64_t count = std::min(kShardSize, n - begin);
    std::uint64_t fa = 0, md = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double noise = model.nominal() * std::pow(10.0, offset_db(rng) / 10.0);
      if (delta1 + noise >= threshold) ++fa;
      if (delta2 + noise <= threshold) ++md;
    }
    false_alarms[s] = fa;
    misses[s] = md;
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, shards));
  if (workers <= 1) {
    for (std::uint64_t s = 0; s < shards; ++s) run_shard(s);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t s = w; s < shards; s += workers) run_shard(s);
      });
    }
  }

  std::uint64_t fa = 0, md = 0;
  for (std::uint64_t s = 0; s < shards; ++s) {
    fa += false_alarms[s];
    md += misses[s];
  }
  const double total = static_cast<double>(n);
  return {static_cast<double>(fa) / total, static_cast<double>(md) / total, n};
}

DetectionReport analyze_detection(double p0, const Scenario& scenario, const PowerConfig& cfg,
                                  const RfConstants& rf, const NoiseUncertainty& model,
                                  const EveUncertainty& unc) {
  const LinkDistances d = link_distances(scenario);
  const double nominal_gain = channel_gain_eve_ground(d.bd_to_eve_estimate, unc.g_est, rf);
  const HypothesisPowers h =
      hypothesis_powers(p0, d.tpa_to_eve_estimate, d.tpa_to_bd, nominal_gain, cfg, rf);
  const OptimalDetection opt = optimal_detection(h, model);
  const double worst_gain = worst_case_eve_gain(scenario.layout.bd, scenario.layout.eve_estimate, unc, rf);

  DetectionReport r;
  r.delta1 = h.delta1;
  r.delta2 = h.delta2;
  r.threshold_opt = opt.threshold;
  r.dep_min = opt.dep_min;
  r.dep_min_raw = opt.dep_min_raw;
  r.separable = opt.separable;
  r.dep_worst_case_raw = worst_case_dep_raw(p0, d.tpa_to_bd, worst_gain, cfg, rf, model);
  r.dep_worst_case = std::clamp(r.dep_worst_case_raw, 0.0, 1.0);
  return r;
}

}  // namespace pacb
