#include "core/locksim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "core/constants.hpp"
#include "core/error.hpp"

namespace csclock {

void SimConfig::check() const {
  clock.check();
  if (detection_rate_per_s && !(*detection_rate_per_s > 0.0))
    fail(ErrorKind::InvalidArgument, "detection rate must be positive");
  if (linewidth_hz && !(*linewidth_hz > 0.0)) fail(ErrorKind::InvalidArgument, "linewidth must be positive");
  if (!(time_step_s > 0.0) || time_step_s > 1.0 / (10.0 * clock.f_m) * (1.0 + 1e-12))
    fail(ErrorKind::InvalidArgument, "time step must satisfy 0 < dt <= 1/(10 f_m)");
  if (duration_s < 100.0 / clock.f_s * (1.0 - 1e-12))
    fail(ErrorKind::InvalidArgument, "duration must be at least 100 switching periods");
  if (!(duty > 0.0) || duty > 1.0) fail(ErrorKind::InvalidArgument, "duty must lie in (0, 1]");
  if (!(servo_gain > 0.0) || servo_gain >= 2.0) fail(ErrorKind::InvalidArgument, "servo gain must lie in (0, 2)");
  if (record_interval_s < 1.0 / clock.f_s * (1.0 - 1e-12))
    fail(ErrorKind::InvalidArgument, "record interval must be at least one switching period");
  if (lo_psd < 0.0 || lo_floor_psd < 0.0 || !(lo_knee_hz > 0.0))
    fail(ErrorKind::InvalidArgument, "LO noise parameters out of range");
  if (b_amplitude < 0.0) fail(ErrorKind::InvalidArgument, "magnetic noise amplitude must be >= 0");
}

double SimConfig::ndot() const { return detection_rate_per_s ? *detection_rate_per_s : detection_rate(clock).ndot; }
double SimConfig::delta_nu() const { return linewidth_hz ? *linewidth_hz : linewidth(clock.tau_a, clock.saturation); }
double SimConfig::zeeman() const {
  return zeeman_hz_per_t ? *zeeman_hz_per_t : 2.0 * kPhys.bohr_magneton / kPhys.planck_h;
}

double analytic_shot_noise_sigma(const SimConfig& cfg) {
  return cfg.delta_nu() / cfg.clock.nu_c / std::sqrt(cfg.ndot());
}

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double normal() { return gauss_(rng_); }
  double counts(double mu) {
    if (mu <= 0.0) return 0.0;
    if (mu > 1e4) return mu + std::sqrt(mu) * normal();
    std::poisson_distribution<long> p(mu);
    return static_cast<double>(p(rng_));
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

class LoNoise {
 public:
  LoNoise(const SimConfig& cfg, double dt) : dt_(dt) {
    const double rc = 1.0 / (2.0 * kPi * cfg.lo_knee_hz);
    a_ = rc / (rc + dt);
    b_ = dt / (rc + dt);
    sig_hi_ = std::sqrt(cfg.lo_psd / (2.0 * dt));
    sig_lo_ = std::sqrt(cfg.lo_floor_psd / (2.0 * dt));
  }
  double next(Sampler& s) {
    double out = 0.0;
    if (sig_hi_ > 0.0) {
      const double w = sig_hi_ * s.normal();
      hp_ = a_ * (hp_ + w - w_prev_);
      w_prev_ = w;
      out += hp_;
    }
    if (sig_lo_ > 0.0) {
      lp_ += b_ * (sig_lo_ * s.normal() - lp_);
      out += lp_;
    }
    return out;
  }

 private:
  double dt_, a_ = 0.0, b_ = 0.0, sig_hi_ = 0.0, sig_lo_ = 0.0;
  double hp_ = 0.0, w_prev_ = 0.0, lp_ = 0.0;
};

}  // namespace

SimTrace simulate(const SimConfig& cfg) {
  cfg.check();
  const double T = 1.0 / cfg.clock.f_s;
  const double nd = cfg.ndot();
  const double dnu = cfg.delta_nu();
  const double h = dnu / 2.0;
  const double kappa = cfg.zeeman();
  const double pop = cfg.alternate ? 0.5 : 1.0;
  const double window = cfg.alternate ? T / 2.0 : T;
  const double mu0 = nd * pop * (window / 2.0) * cfg.duty;
  const double g = cfg.servo_gain;
  const bool time_varying = cfg.lo_psd > 0.0 || cfg.lo_floor_psd > 0.0;

  const auto cycles = static_cast<std::size_t>(std::llround(cfg.duration_s * cfg.clock.f_s));
  const auto per_record = static_cast<std::size_t>(std::max(1LL, std::llround(cfg.record_interval_s * cfg.clock.f_s)));
  const auto substeps = static_cast<std::size_t>(std::max(1LL, std::llround(window / cfg.time_step_s)));
  const double dt = window / static_cast<double>(substeps);
  const double fm_half = 1.0 / (2.0 * cfg.clock.f_m);

  auto L = [&](double x) {
    const double u = 2.0 * x / dnu;
    return 1.0 / (1.0 + u * u);
  };

  Sampler rng(cfg.seed);
  LoNoise lo(cfg, dt);
  SimTrace tr;
  tr.seed = cfg.seed;
  tr.record_interval_s = static_cast<double>(per_record) * T;
  tr.time_s.reserve(cycles / per_record);
  tr.y.reserve(cycles / per_record);
  if (cfg.keep_counts) tr.counts.reserve(cycles);

  double c_plus = 0.0, c_minus = 0.0, b_walk = 0.0;
  double y_acc = 0.0, c_acc = 0.0;
  std::size_t in_record = 0;

  // Expected red/blue counts for one transition window at static offset d0 plus LO noise.
  double lo_sum = 0.0;
  auto window_counts = [&](double d0, double& red, double& blue) {
    if (!time_varying) {
      red = mu0 * L(d0 - h);
      blue = mu0 * L(d0 + h);
      return;
    }
    const double rate = nd * pop * cfg.duty * dt;
    red = blue = 0.0;
    for (std::size_t k = 0; k < substeps; ++k) {
      const double x = lo.next(rng);
      lo_sum += x;
      const double t = (static_cast<double>(k) + 0.5) * dt;
      const bool red_side = (static_cast<long long>(t / fm_half) % 2) == 0;
      if (red_side) red += rate * L(d0 + x - h);
      else blue += rate * L(d0 + x + h);
    }
  };

  for (std::size_t cyc = 0; cyc < cycles; ++cyc) {
    double b = cfg.bias_b_t;
    if (cfg.b_amplitude > 0.0) {
      if (cfg.b_model == MagneticModel::White) {
        b += cfg.b_amplitude * rng.normal();
      } else {
        b_walk += cfg.b_amplitude * std::sqrt(T) * rng.normal();
        b += b_walk;
      }
    }
    const double z = kappa * b;
    lo_sum = 0.0;
    const double c_common = cfg.alternate ? 0.5 * (c_plus + c_minus) : c_plus;

    double rp = 0.0, bp = 0.0, rm = 0.0, bm = 0.0;
    window_counts(cfg.initial_detuning_hz + c_plus - z, rp, bp);
    if (cfg.alternate) window_counts(cfg.initial_detuning_hz + c_minus + z, rm, bm);
    if (cfg.shot_noise) {
      rp = rng.counts(rp);
      bp = rng.counts(bp);
      if (cfg.alternate) {
        rm = rng.counts(rm);
        bm = rng.counts(bm);
      }
    }
    const double e_plus = (rp - bp) * dnu / (2.0 * mu0);
    const double e_minus = cfg.alternate ? (rm - bm) * dnu / (2.0 * mu0) : 0.0;
    if (!std::isfinite(e_plus) || !std::isfinite(e_minus) || std::abs(e_plus) > 1e4 * dnu ||
        std::abs(e_minus) > 1e4 * dnu)
      fail(ErrorKind::UnstableServo, fmt::format("error signal diverged at t = {} s", static_cast<double>(cyc) * T));
    if (cfg.keep_counts) tr.counts.push_back({rp, bp, rm, bm});

    const double lo_avg = time_varying ? lo_sum / static_cast<double>(substeps * (cfg.alternate ? 2 : 1)) : 0.0;
    y_acc += (lo_avg + cfg.initial_detuning_hz + c_common) / cfg.clock.nu_c;
    c_acc += c_common;
    if (++in_record == per_record) {
      tr.time_s.push_back(static_cast<double>(cyc + 1) * T);
      tr.y.push_back(y_acc / static_cast<double>(per_record));
      tr.correction_hz.push_back(c_acc / static_cast<double>(per_record));
      y_acc = c_acc = 0.0;
      in_record = 0;
    }

    c_plus -= g * e_plus;
    if (cfg.alternate) c_minus -= g * e_minus;
  }
  return tr;
}

std::string trace_csv(const SimTrace& t) {
  std::string s = "time_s,y,correction_Hz\n";
  for (std::size_t i = 0; i < t.y.size(); ++i)
    s += fmt::format("{:.6f},{:.9e},{:.9e}\n", t.time_s[i], t.y[i], t.correction_hz[i]);
  return s;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::uint64_t> campaign_seeds(std::uint64_t master, std::size_t n) {
  std::vector<std::uint64_t> out(n);
  std::uint64_t state = master;
  for (auto& s : out) s = splitmix64(state);
  return out;
}

CampaignResult run_campaign(const SimConfig& cfg, std::size_t n, std::uint64_t master, const std::vector<double>& taus,
                            unsigned threads) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "campaign needs at least one seed");
  cfg.check();
  CampaignResult r;
  r.seeds = campaign_seeds(master, n);
  r.per_seed.resize(n);
  r.per_seed_mean_y.resize(n);
  std::vector<std::exception_ptr> errors(n);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        SimConfig c = cfg;
        c.seed = r.seeds[i];
        const SimTrace t = simulate(c);
        r.per_seed[i] = allan_deviation(t.y, t.record_interval_s, taus);
        double m = 0.0;
        for (double v : t.y) m += v;
        r.per_seed_mean_y[i] = m / static_cast<double>(t.y.size());
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned nt = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  nt = static_cast<unsigned>(std::min<std::size_t>(nt, n));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < nt; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  const auto& first = r.per_seed.front();
  r.tau = first.tau;
  const double dn = static_cast<double>(n);
  for (std::size_t k = 0; k < r.tau.size(); ++k) {
    double sum = 0.0;
    for (const auto& s : r.per_seed) sum += s.sigma[k];
    const double mean = sum / dn;
    double spread;
    if (n == 1) {
      spread = 0.5 * (first.ci_hi[k] - first.ci_lo[k]);
    } else {
      double ss = 0.0;
      for (const auto& s : r.per_seed) ss += (s.sigma[k] - mean) * (s.sigma[k] - mean);
      spread = std::sqrt(ss / (dn - 1.0)) / std::sqrt(dn);
    }
    r.mean_sigma.push_back(mean);
    r.spread.push_back(spread);
  }
  return r;
}

std::string campaign_csv(const CampaignResult& r) {
  std::string s = "tau_s,mean_sigma,spread\n";
  for (std::size_t k = 0; k < r.tau.size(); ++k)
    s += fmt::format("{:.6e},{:.6e},{:.6e}\n", r.tau[k], r.mean_sigma[k], r.spread[k]);
  return s;
}

}  // namespace csclock
