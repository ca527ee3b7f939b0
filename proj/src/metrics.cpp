#include "latsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

namespace latsim {

namespace {

double z_norm(const LogRow& r) {
  return std::sqrt(r.z1 * r.z1 + r.z2 * r.z2 + r.z3 * r.z3 + r.z4 * r.z4);
}

// Entry-and-stay time into |err| <= band: the time of the first sample after
// the last excursion. Returns nullopt when the band is degenerate or the
// error never settles.
template <typename Err>
void band_times(const std::vector<LogRow>& rows, double band, Err err,
                std::optional<double>& first_entry, std::optional<double>& conv_time) {
  if (!(band > 0.0)) return;
  std::size_t last_out = rows.size();  // sentinel: never out
  bool seen_out = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool inside = std::abs(err(rows[i])) <= band;
    if (inside && !first_entry) first_entry = rows[i].t;
    if (!inside) {
      last_out = i;
      seen_out = true;
    }
  }
  if (!seen_out) {
    conv_time = rows.front().t;
  } else if (last_out + 1 < rows.size()) {
    conv_time = rows[last_out + 1].t;
  }
}

}  // namespace

Metrics compute_metrics(const SimLog& log, const MetricsConfig& cfg) {
  Metrics m;
  const auto& rows = log.rows;
  if (rows.empty()) return m;

  m.duration = rows.back().t;
  m.initial_z_norm = z_norm(rows.front());
  m.terminal_z_norm = z_norm(rows.back());

  double sum_sq = 0.0;
  std::size_t n_sat = 0;
  for (const auto& r : rows) {
    sum_sq += r.z1 * r.z1;
    m.max_abs_z1 = std::max(m.max_abs_z1, std::abs(r.z1));
    m.peak_abs_z2_hat = std::max(m.peak_abs_z2_hat, std::abs(r.z2_hat));
    if (r.saturated) {
      ++n_sat;
      m.last_sat_time = r.t;
    }
    if (std::abs(r.delta_raw) > cfg.delta_raw_threshold) {
      if (m.first_delta_raw_exceed < 0.0) m.first_delta_raw_exceed = r.t;
      m.last_delta_raw_exceed = r.t;
    }
    if (r.t >= cfg.post_transient_start) {
      m.max_e2_post = std::max(m.max_e2_post, std::abs(r.z2 - r.z2_hat));
      m.max_ed_lat_post = std::max(m.max_ed_lat_post, std::abs(r.d_lat - r.d_lat_hat));
    }
  }
  m.rms_z1 = std::sqrt(sum_sq / static_cast<double>(rows.size()));
  m.sat_duty = static_cast<double>(n_sat) / static_cast<double>(rows.size());

  band_times(rows, cfg.band_fraction * std::abs(rows.front().e_h1),
             [](const LogRow& r) { return r.e_h1; }, m.first_entry_eh1, m.conv_time_eh1);
  band_times(rows, cfg.band_fraction * std::abs(rows.front().e_h3),
             [](const LogRow& r) { return r.e_h3; }, m.first_entry_eh3, m.conv_time_eh3);

  // Least-squares slope of log ||z|| over [decay_fit_start, ...], truncated
  // once the norm falls below the floor (discretization chatter dominates
  // beyond it and would bias the fit toward zero).
  double floor = -1.0;
  double st = 0.0, st2 = 0.0, sl = 0.0, stl = 0.0;
  std::size_t n_fit = 0;
  for (const auto& r : rows) {
    if (r.t < cfg.decay_fit_start) continue;
    const double nz = z_norm(r);
    if (floor < 0.0) floor = cfg.decay_floor_ratio * nz;
    if (nz <= floor || nz <= 0.0) break;
    const double lnz = std::log(nz);
    st += r.t;
    st2 += r.t * r.t;
    sl += lnz;
    stl += r.t * lnz;
    ++n_fit;
  }
  if (n_fit >= 2) {
    const double n = static_cast<double>(n_fit);
    const double denom = n * st2 - st * st;
    if (denom > 0.0) m.decay_rate = (n * stl - st * sl) / denom;
  }
  return m;
}

std::string metrics_to_json(const Metrics& m, const std::string& scenario_name,
                            const std::optional<AbortInfo>& abort) {
  nlohmann::json j;
  j["scenario"] = scenario_name;
  j["aborted"] = abort.has_value();
  j["abort_t"] = abort ? nlohmann::json(abort->t) : nlohmann::json(nullptr);
  j["abort_reason"] = abort ? nlohmann::json(abort->reason) : nlohmann::json(nullptr);
  j["duration"] = m.duration;
  j["rms_z1"] = m.rms_z1;
  j["max_abs_z1"] = m.max_abs_z1;
  j["initial_z_norm"] = m.initial_z_norm;
  j["terminal_z_norm"] = m.terminal_z_norm;
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  j["conv_time_eh1"] = opt(m.conv_time_eh1);
  j["conv_time_eh3"] = opt(m.conv_time_eh3);
  j["first_entry_eh1"] = opt(m.first_entry_eh1);
  j["first_entry_eh3"] = opt(m.first_entry_eh3);
  j["decay_rate"] = opt(m.decay_rate);
  j["sat_duty"] = m.sat_duty;
  j["last_sat_time"] = m.last_sat_time;
  j["first_delta_raw_exceed"] = m.first_delta_raw_exceed;
  j["last_delta_raw_exceed"] = m.last_delta_raw_exceed;
  j["max_e2_post"] = m.max_e2_post;
  j["max_ed_lat_post"] = m.max_ed_lat_post;
  j["peak_abs_z2_hat"] = m.peak_abs_z2_hat;
  return j.dump(2) + "\n";
}

}  // namespace latsim
