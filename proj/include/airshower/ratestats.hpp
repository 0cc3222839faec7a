#pragma once
/// @file ratestats.hpp
/// Binned count-rate series, rolling-median background baseline, robust
/// (MAD) spike flagging and the exponential altitude-rate fit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "airshower/core_model.hpp"
#include "airshower/error.hpp"

namespace airshower::rates {

inline constexpr std::int64_t kDefaultBinS = 60;
inline constexpr double kDefaultSpikeK = 5.0;
inline constexpr double kDefaultMadFloor = 0.5;
inline constexpr double kMadToSigma = 1.4826;

/// Default baseline window: 6 h worth of bins, forced odd.
constexpr std::size_t default_window_bins(std::int64_t bin_s) noexcept {
    std::size_t w = static_cast<std::size_t>(std::max<std::int64_t>(1, (6 * 3600) / std::max<std::int64_t>(1, bin_s)));
    if (w % 2 == 0) ++w;
    return std::max<std::size_t>(w, 3);
}

struct RateSeries {
    std::string device_id;
    std::int64_t bin_s = kDefaultBinS;
    std::int64_t t_start_ms = 0;
    std::vector<std::int64_t> counts;
    std::vector<double> cpm;
    std::vector<double> baseline;
    std::vector<bool> spike_flags;
    /// Window used by fit_baseline; 0 until a baseline is fitted.
    std::size_t baseline_window = 0;

    std::size_t size() const noexcept { return cpm.size(); }
    std::int64_t bin_start_ms(std::size_t i) const noexcept {
        return t_start_ms + static_cast<std::int64_t>(i) * bin_s * 1000;
    }
    double residual(std::size_t i) const { return cpm[i] - baseline[i]; }
    std::size_t spike_count() const {
        return static_cast<std::size_t>(std::count(spike_flags.begin(), spike_flags.end(), true));
    }
};

/// Wraps an arbitrary cpm sequence (counts derived by rounding).
inline RateSeries series_from_cpm(std::vector<double> cpm, std::int64_t bin_s = kDefaultBinS,
                                  std::int64_t t_start_ms = 0, std::string device_id = {}) {
    RateSeries s;
    s.device_id = std::move(device_id);
    s.bin_s = bin_s;
    s.t_start_ms = t_start_ms;
    s.counts.reserve(cpm.size());
    for (double v : cpm) s.counts.push_back(std::llround(v * static_cast<double>(bin_s) / 60.0));
    s.cpm = std::move(cpm);
    s.baseline.assign(s.cpm.size(), 0.0);
    s.spike_flags.assign(s.cpm.size(), false);
    return s;
}

/// Bins events of one device (or all events passed) over [t_start, t_end).
inline RateSeries bin_events(std::span<const FlashEvent> events, std::int64_t bin_s, std::int64_t t_start_ms,
                             std::int64_t t_end_ms, std::string device_id = {}) {
    if (bin_s < 1) throw Error(Errc::BadRange, "bin_s must be >= 1");
    if (t_end_ms <= t_start_ms) throw Error(Errc::BadRange, "t_end must exceed t_start");
    const std::int64_t width = bin_s * 1000;
    const auto n = static_cast<std::size_t>((t_end_ms - t_start_ms + width - 1) / width);
    RateSeries s;
    s.device_id = std::move(device_id);
    s.bin_s = bin_s;
    s.t_start_ms = t_start_ms;
    s.counts.assign(n, 0);
    for (const auto& e : events) {
        if (e.t_utc_ms < t_start_ms || e.t_utc_ms >= t_end_ms) continue;
        ++s.counts[static_cast<std::size_t>((e.t_utc_ms - t_start_ms) / width)];
    }
    const double scale = 60.0 / static_cast<double>(bin_s);
    s.cpm.reserve(n);
    for (auto c : s.counts) s.cpm.push_back(static_cast<double>(c) * scale);
    s.baseline.assign(n, 0.0);
    s.spike_flags.assign(n, false);
    return s;
}

namespace detail {

/// Median of a scratch buffer (reordered in place).
inline double median_inplace(std::vector<double>& v) {
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    const double hi = *mid;
    if (n % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), mid);
    return (lo + hi) / 2.0;
}

inline std::pair<std::size_t, std::size_t> window_bounds(std::size_t i, std::size_t n, std::size_t window) {
    const std::size_t half = window / 2;
    return {i >= half ? i - half : 0, std::min(n, i + half + 1)};
}

}  // namespace detail

/// baseline[i] = median of cpm over the centered window, truncated at the edges.
inline RateSeries fit_baseline(RateSeries series, std::size_t window_bins) {
    if (window_bins < 3 || window_bins % 2 == 0)
        throw Error(Errc::BadWindow, "window must be odd and >= 3, got " + std::to_string(window_bins));
    const std::size_t n = series.size();
    series.baseline.assign(n, 0.0);
    std::vector<double> scratch;
    for (std::size_t i = 0; i < n; ++i) {
        auto [lo, hi] = detail::window_bounds(i, n, window_bins);
        scratch.assign(series.cpm.begin() + static_cast<std::ptrdiff_t>(lo),
                       series.cpm.begin() + static_cast<std::ptrdiff_t>(hi));
        series.baseline[i] = detail::median_inplace(scratch);
    }
    series.baseline_window = window_bins;
    series.spike_flags.assign(n, false);
    return series;
}

/// Flags bins whose residual exceeds k robust sigmas (1.4826*MAD of the
/// residuals in the baseline window, floored at mad_floor).
inline RateSeries flag_spikes(RateSeries series, double k = kDefaultSpikeK, double mad_floor = kDefaultMadFloor) {
    if (series.baseline_window == 0 || series.baseline.size() != series.size())
        throw Error(Errc::BaselineMissing, "fit_baseline must run before flag_spikes");
    const std::size_t n = series.size();
    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i) residual[i] = series.residual(i);

    series.spike_flags.assign(n, false);
    std::vector<double> scratch;
    for (std::size_t i = 0; i < n; ++i) {
        auto [lo, hi] = detail::window_bounds(i, n, series.baseline_window);
        scratch.assign(residual.begin() + static_cast<std::ptrdiff_t>(lo),
                       residual.begin() + static_cast<std::ptrdiff_t>(hi));
        const double med = detail::median_inplace(scratch);
        for (double& r : scratch) r = std::abs(r - med);
        const double sigma = std::max(kMadToSigma * detail::median_inplace(scratch), mad_floor);
        series.spike_flags[i] = residual[i] > k * sigma;
    }
    return series;
}

// ---------------------------------------------------------------------------
// Altitude dependence

/// r(h) = r0 * 2^(h / h_d), h in km.
struct AltitudeModel {
    double r0 = 1.0;
    double h_d = 1.0;

    double rate(double alt_km) const noexcept { return r0 * std::exp2(alt_km / h_d); }
    bool valid() const noexcept { return r0 > 0.0 && h_d > 0.0 && std::isfinite(r0) && std::isfinite(h_d); }
};

struct AltitudePoint {
    double alt_km = 0.0;
    double cpm = 0.0;
};

/// Least squares on log2(cpm) = log2(r0) + h / h_d.
inline AltitudeModel fit_altitude(std::span<const AltitudePoint> points) {
    if (points.size() < 2) throw Error(Errc::DegenerateInput, "need at least two points");
    double mean_h = 0.0, mean_y = 0.0;
    for (const auto& p : points) {
        if (!(p.cpm > 0.0) || !std::isfinite(p.cpm) || !std::isfinite(p.alt_km))
            throw Error(Errc::DegenerateInput, "cpm must be positive and finite");
        mean_h += p.alt_km;
        mean_y += std::log2(p.cpm);
    }
    const double n = static_cast<double>(points.size());
    mean_h /= n;
    mean_y /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        const double dh = p.alt_km - mean_h;
        sxx += dh * dh;
        sxy += dh * (std::log2(p.cpm) - mean_y);
    }
    const bool distinct = std::any_of(points.begin(), points.end(),
                                      [&](const AltitudePoint& p) { return p.alt_km != points.front().alt_km; });
    if (!distinct || sxx <= 0.0) throw Error(Errc::DegenerateInput, "need at least two distinct altitudes");
    const double slope = sxy / sxx;
    if (!(slope > 0.0)) throw Error(Errc::BadFit, "rate does not increase with altitude");
    return {std::exp2(mean_y - slope * mean_h), 1.0 / slope};
}

/// Bins events and pairs each nonempty bin's cpm with the mean altitude of
/// its events.
inline std::vector<AltitudePoint> altitude_points(std::span<const FlashEvent> events, std::int64_t bin_s,
                                                  std::int64_t t_start_ms, std::int64_t t_end_ms) {
    const RateSeries s = bin_events(events, bin_s, t_start_ms, t_end_ms);
    std::vector<double> alt_sum(s.size(), 0.0);
    for (const auto& e : events) {
        if (e.t_utc_ms < t_start_ms || e.t_utc_ms >= t_end_ms) continue;
        alt_sum[static_cast<std::size_t>((e.t_utc_ms - t_start_ms) / (bin_s * 1000))] += e.geo.alt_m;
    }
    std::vector<AltitudePoint> out;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.counts[i] > 0) out.push_back({alt_sum[i] / static_cast<double>(s.counts[i]) / 1000.0, s.cpm[i]});
    return out;
}

// ---------------------------------------------------------------------------
// CSV: bin_start_ms,counts,cpm,baseline,spike

inline std::string to_csv(const RateSeries& s) {
    std::string out = "bin_start_ms,counts,cpm,baseline,spike\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += std::to_string(s.bin_start_ms(i));
        out += ',';
        out += std::to_string(s.counts[i]);
        out += ',';
        out += airshower::detail::format_fixed(s.cpm[i], 3);
        out += ',';
        out += airshower::detail::format_fixed(s.baseline[i], 3);
        out += ',';
        out += s.spike_flags[i] ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace airshower::rates
