#include "octmc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "octmc/kernels/kernels.hpp"

namespace octmc {

std::string outcome_name(InjectionOutcome outcome) {
  switch (outcome) {
    case InjectionOutcome::bleb:
      return "bleb";
    case InjectionOutcome::vitreous:
      return "vitreous";
    case InjectionOutcome::rpe_breach:
      return "rpe_breach";
    case InjectionOutcome::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

UniformSeries resample(const Trace& trace, double dt_s) {
  if (trace.rows.empty()) throw std::invalid_argument("resample: empty trace");
  if (!(dt_s > 0.0)) throw std::invalid_argument("resample: dt must be > 0");
  const auto& rows = trace.rows;
  UniformSeries s;
  s.t0_s = rows.front().t_s;
  s.dt_s = dt_s;
  const double span = rows.back().t_s - s.t0_s;
  const auto n = static_cast<std::size_t>(std::floor(span / dt_s + 1e-9)) + 1;
  s.stage.reserve(n);
  s.needle.reserve(n);
  s.ilm.reserve(n);
  s.rpe.reserve(n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = s.t0_s + static_cast<double>(i) * dt_s;
    while (j + 1 < rows.size() && rows[j + 1].t_s <= t) ++j;
    const TraceRow& a = rows[j];
    if (j + 1 >= rows.size() || a.t_s >= t) {
      s.stage.push_back(a.stage_z_um);
      s.needle.push_back(a.needle_tip_z_um);
      s.ilm.push_back(a.true_ilm_z_um);
      s.rpe.push_back(a.true_rpe_z_um);
      continue;
    }
    const TraceRow& b = rows[j + 1];
    const double w = (t - a.t_s) / (b.t_s - a.t_s);
    auto lerp = [w](double x, double y) { return x + w * (y - x); };
    s.stage.push_back(lerp(a.stage_z_um, b.stage_z_um));
    s.needle.push_back(lerp(a.needle_tip_z_um, b.needle_tip_z_um));
    s.ilm.push_back(lerp(a.true_ilm_z_um, b.true_ilm_z_um));
    s.rpe.push_back(lerp(a.true_rpe_z_um, b.true_rpe_z_um));
  }
  return s;
}

double linear_slope(const std::vector<double>& y, double dt_s) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  const double tm = 0.5 * static_cast<double>(n - 1);
  double ym = 0.0;
  for (double v : y) ym += v;
  ym /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - tm;
    sxy += dx * (y[i] - ym);
    sxx += dx * dx;
  }
  return sxy / sxx / dt_s;
}

namespace {

std::vector<double> detrended(const std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<double> out(y);
  if (n < 2) return out;
  const double slope = linear_slope(y, 1.0);
  double ym = 0.0;
  for (double v : y) ym += v;
  ym /= static_cast<double>(n);
  const double tm = 0.5 * static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] - ym - slope * (static_cast<double>(i) - tm);
  return out;
}

// Pearson correlation of x[0..m) with y[0..m) given prefix sums.
double pearson(const double* x, const double* y, std::size_t m, double sx, double sxx, double sy, double syy) {
  const auto n = static_cast<double>(m);
  const double sxy = kernels::dot(std::span<const double>(x, m), std::span<const double>(y, m));
  const double cov = sxy - sx * sy / n;
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  if (vx <= 0.0 || vy <= 0.0) return -2.0;
  return cov / std::sqrt(vx * vy);
}

}  // namespace

std::optional<double> cross_correlation_lag(const std::vector<double>& reference, const std::vector<double>& lagging,
                                            double dt_s, double max_lag_s) {
  const std::size_t n = std::min(reference.size(), lagging.size());
  if (n < 3 || !(dt_s > 0.0)) return std::nullopt;
  const auto max_lag = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::floor(max_lag_s / dt_s)),
                                                static_cast<std::ptrdiff_t>(n) - 2);
  std::vector<double> pr(n + 1, 0.0), prr(n + 1, 0.0), pl(n + 1, 0.0), pll(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    pr[i + 1] = pr[i] + reference[i];
    prr[i + 1] = prr[i] + reference[i] * reference[i];
    pl[i + 1] = pl[i] + lagging[i];
    pll[i + 1] = pll[i] + lagging[i] * lagging[i];
  }
  std::vector<double> corr;
  corr.reserve(static_cast<std::size_t>(2 * max_lag + 1));
  for (std::ptrdiff_t k = -max_lag; k <= max_lag; ++k) {
    // Lag k pairs reference[i] with lagging[i + k].
    const std::size_t r0 = k >= 0 ? 0 : static_cast<std::size_t>(-k);
    const std::size_t l0 = k >= 0 ? static_cast<std::size_t>(k) : 0;
    const std::size_t m = n - std::max(r0, l0);
    corr.push_back(pearson(reference.data() + r0, lagging.data() + l0, m, pr[r0 + m] - pr[r0],
                           prr[r0 + m] - prr[r0], pl[l0 + m] - pl[l0], pll[l0 + m] - pll[l0]));
  }
  const auto best = static_cast<std::size_t>(std::max_element(corr.begin(), corr.end()) - corr.begin());
  if (corr[best] < -1.5) return std::nullopt;
  double offset = 0.0;
  if (best > 0 && best + 1 < corr.size()) {
    // Parabolic refinement around the discrete peak.
    const double a = corr[best - 1];
    const double b = corr[best];
    const double c = corr[best + 1];
    const double denom = a - 2.0 * b + c;
    if (denom < 0.0) offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }
  return (static_cast<double>(best) - static_cast<double>(max_lag) + offset) * dt_s;
}

double fundamental_amplitude(const std::vector<double>& series, double dt_s, double period_s) {
  const auto per_period = period_s / dt_s;
  const auto periods = std::floor(static_cast<double>(series.size() - (series.empty() ? 0 : 1)) / per_period);
  if (periods < 1.0) return 0.0;
  const auto m = static_cast<std::size_t>(std::llround(periods * per_period));
  std::vector<double> y(series.begin(), series.begin() + static_cast<std::ptrdiff_t>(m));
  y = detrended(y);
  std::vector<double> s(m), c(m);
  const double w = 2.0 * std::numbers::pi * dt_s / period_s;
  for (std::size_t i = 0; i < m; ++i) {
    s[i] = std::sin(w * static_cast<double>(i));
    c[i] = std::cos(w * static_cast<double>(i));
  }
  const double ps = kernels::dot(y, s) * 2.0 / static_cast<double>(m);
  const double pc = kernels::dot(y, c) * 2.0 / static_cast<double>(m);
  return std::hypot(ps, pc);
}

Metrics compute_metrics(const Trace& trace, double period_s, double dt_s) {
  if (trace.rows.empty()) throw std::invalid_argument("compute_metrics: empty trace");
  const UniformSeries u = resample(trace, dt_s);
  const std::size_t n = u.stage.size();
  Metrics m;

  std::vector<double> e(n), e_ilm(n);
  double sq = 0.0;
  double sq_ilm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dn = u.needle[i] - u.needle[0];
    e[i] = dn - (u.stage[i] - u.stage[0]);
    e_ilm[i] = dn - (u.ilm[i] - u.ilm[0]);
    m.max_deviation_um = std::max(m.max_deviation_um, std::abs(e[i]));
    m.max_deviation_ilm_um = std::max(m.max_deviation_ilm_um, std::abs(e_ilm[i]));
    sq += e[i] * e[i];
    sq_ilm += e_ilm[i] * e_ilm[i];
  }
  m.rms_error_um = std::sqrt(sq / static_cast<double>(n));
  m.rms_error_ilm_um = std::sqrt(sq_ilm / static_cast<double>(n));
  m.drift_slope_um_s = linear_slope(e, dt_s);

  const double span = trace.rows.back().t_s - trace.rows.front().t_s;
  if (period_s > 0.0 && span >= 2.0 * period_s - 1e-9) {
    const std::vector<double> stage = detrended(u.stage);
    const std::vector<double> needle = detrended(u.needle);
    m.phase_lag_s = cross_correlation_lag(stage, needle, dt_s, 0.5 * period_s);
    const double stage_amp = fundamental_amplitude(u.stage, dt_s, period_s);
    if (stage_amp > 0.0) m.amplitude_ratio = fundamental_amplitude(u.needle, dt_s, period_s) / stage_amp;
  }
  return m;
}

InjectionOutcome classify_injection(const Trace& trace, const ScenarioConfig& config) {
  if (config.kind != ScenarioKind::inject) throw std::invalid_argument("classify_injection: not an inject scenario");
  const auto& rows = trace.rows;
  std::size_t begin = rows.size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].has_event(kEventInjectStart)) {
      begin = i;
      break;
    }
  }
  if (begin == rows.size()) return InjectionOutcome::indeterminate;
  std::size_t end = rows.size() - 1;
  for (std::size_t i = begin + 1; i < rows.size(); ++i) {
    if (rows[i].has_event(kEventInjectEnd)) {
      end = i;
      break;
    }
  }
  if (end == begin) return InjectionOutcome::indeterminate;

  double total = 0.0;
  double in_band = 0.0;
  double above = 0.0;
  for (std::size_t i = begin; i <= end; ++i) {
    const TraceRow& r = rows[i];
    if (r.needle_tip_z_um >= r.true_rpe_z_um) return InjectionOutcome::rpe_breach;
    if (i == end) break;
    const double w = rows[i + 1].t_s - r.t_s;
    total += w;
    if (r.needle_tip_z_um > r.true_ilm_z_um) in_band += w;
    if (r.needle_tip_z_um < r.true_ilm_z_um) above += w;
  }
  if (total <= 0.0) return InjectionOutcome::indeterminate;
  if (in_band / total >= kBlebOccupancy) return InjectionOutcome::bleb;
  if (above / total > kVitreousFraction) return InjectionOutcome::vitreous;
  return InjectionOutcome::indeterminate;
}

}  // namespace octmc
