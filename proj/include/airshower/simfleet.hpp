#pragma once
/// @file simfleet.hpp
/// Deterministic volunteer-fleet simulator and detector scoring.
///
/// All randomness comes from one SplitMix64 stream seeded by the config,
/// consumed in a fixed order:
///   1. devices, in index order: lat, lon, alt, clock offset;
///   2. background flashes, device by device: for each candidate point of
///      the dominating homogeneous process an exponential gap, a thinning
///      uniform, and (if accepted) the magnitude's geometric draws;
///   3. showers, in index order: time, lat, lon, then for each affected
///      device (index order) a jitter and the magnitude's geometric draws.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "airshower/core_model.hpp"
#include "airshower/error.hpp"
#include "airshower/exposure.hpp"
#include "airshower/ratestats.hpp"

namespace airshower::sim {

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [-r, r].
    std::int64_t symmetric(std::int64_t r) noexcept {
        if (r <= 0) return 0;
        return static_cast<std::int64_t>(uniform() * static_cast<double>(2 * r + 1)) - r;
    }
    double exponential(double rate) noexcept { return -std::log1p(-uniform()) / rate; }
    /// Number of failures before the first success.
    std::int64_t geometric(double p) noexcept {
        std::int64_t k = 0;
        while (uniform() >= p) ++k;
        return k;
    }

private:
    std::uint64_t state_;
};

struct SimConfig {
    std::size_t n_devices = 50;
    exposure::BBox bbox{50.35, 50.55, 30.35, 30.70};
    double duration_h = 24.0;
    double background_cpm = 5.0;
    double diurnal_amplitude = 0.3;
    double diurnal_peak_hour = 15.0;  // local time
    double utc_offset_h = 2.0;        // local = UTC + offset; Kyiv winter time
    std::size_t n_showers = 20;
    double shower_footprint_km = 1.0;
    std::int64_t shower_jitter_ms = 200;
    std::int64_t clock_offset_range_ms = 5000;
    double device_alt_min_m = 100.0;
    double device_alt_max_m = 200.0;
    std::int64_t t_start_ms = 1394409600000;  // 2014-03-10T00:00:00Z
    std::uint64_t seed = 1;

    std::int64_t duration_ms() const noexcept { return static_cast<std::int64_t>(std::llround(duration_h * 3.6e6)); }
    std::int64_t t_end_ms() const noexcept { return t_start_ms + duration_ms(); }

    void validate() const {
        const auto fail = [](const std::string& what) { throw Error(Errc::BadConfig, what); };
        if (!bbox.valid()) fail("bbox is invalid");
        if (!(duration_h > 0.0) || !std::isfinite(duration_h)) fail("duration_h must be positive");
        if (!(background_cpm > 0.0) || !std::isfinite(background_cpm)) fail("background_cpm must be positive");
        if (!(diurnal_amplitude >= 0.0 && diurnal_amplitude < 1.0)) fail("diurnal_amplitude must be in [0,1)");
        if (!(shower_footprint_km > 0.0)) fail("shower_footprint_km must be positive");
        if (shower_jitter_ms < 0) fail("shower_jitter_ms must be >= 0");
        if (clock_offset_range_ms < 0) fail("clock_offset_range_ms must be >= 0");
        if (!(device_alt_min_m <= device_alt_max_m)) fail("device altitude range is inverted");
    }
};

struct SimDevice {
    DeviceProfile profile;
    GeoPoint where;
    std::int64_t clock_offset_ms = 0;  // added to local time to obtain UTC
};

struct InjectedShower {
    std::int64_t t_true_ms = 0;
    GeoPoint epicenter;
    std::vector<std::string> devices;
};

struct GroundTruth {
    std::vector<InjectedShower> showers;
};

struct SimOutput {
    std::vector<SimDevice> devices;
    std::vector<std::string> lines;  // DEV lines, then EV lines in UTC order
    GroundTruth truth;
    std::size_t background_events = 0;
    std::size_t shower_events = 0;

    std::string text() const {
        std::string out;
        for (const auto& l : lines) {
            out += l;
            out += '\n';
        }
        return out;
    }
};

namespace detail {

inline double quantize(double v, double scale) { return std::round(v * scale) / scale; }

inline std::string device_name(std::string_view prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*s%03zu", static_cast<int>(prefix.size()), prefix.data(), i);
    return buf;
}

inline std::int64_t magnitude(SplitMix64& rng) { return 1 + rng.geometric(0.5); }

/// Points of an inhomogeneous Poisson process on [0, duration_ms) by
/// thinning a homogeneous process of rate `max_per_ms`.
template <class RateFn, class Emit>
void thinned_poisson(SplitMix64& rng, double duration_ms, double max_per_ms, RateFn rate_per_ms, Emit emit) {
    double t = 0.0;
    for (;;) {
        t += rng.exponential(max_per_ms);
        if (t >= duration_ms) break;
        if (rng.uniform() * max_per_ms < rate_per_ms(t)) emit(t);
    }
}

struct PendingEvent {
    FlashEvent event;
    std::int64_t offset_ms = 0;
};

inline void emit_lines(SimOutput& out, std::vector<PendingEvent>& events) {
    std::sort(events.begin(), events.end(), [](const PendingEvent& a, const PendingEvent& b) {
        return std::tie(a.event.t_utc_ms, a.event.device_id, a.event.magnitude) <
               std::tie(b.event.t_utc_ms, b.event.device_id, b.event.magnitude);
    });
    for (const auto& d : out.devices) out.lines.push_back(encode_record(Record{d.profile}));
    for (const auto& e : events) out.lines.push_back(encode_record(WireRecord{e.event, e.offset_ms}));
}

}  // namespace detail

/// Background rate multiplier at time t (ms since the epoch).
inline double diurnal_factor(const SimConfig& cfg, std::int64_t t_utc_ms) {
    const double hours = static_cast<double>(t_utc_ms) / 3.6e6 + cfg.utc_offset_h;
    const double local = std::fmod(std::fmod(hours, 24.0) + 24.0, 24.0);
    return 1.0 + cfg.diurnal_amplitude * std::cos(2.0 * std::numbers::pi * (local - cfg.diurnal_peak_hour) / 24.0);
}

inline SimOutput simulate(const SimConfig& cfg) {
    cfg.validate();
    SplitMix64 rng(cfg.seed);
    SimOutput out;

    for (std::size_t i = 0; i < cfg.n_devices; ++i) {
        SimDevice d;
        d.profile = {detail::device_name("dev", i), "SIM-PHONE", 80, 1.0};
        d.where.lat_deg = detail::quantize(rng.uniform(cfg.bbox.lat_min, cfg.bbox.lat_max), 1e6);
        d.where.lon_deg = detail::quantize(rng.uniform(cfg.bbox.lon_min, cfg.bbox.lon_max), 1e6);
        d.where.alt_m = detail::quantize(rng.uniform(cfg.device_alt_min_m, cfg.device_alt_max_m), 10.0);
        d.clock_offset_ms = rng.symmetric(cfg.clock_offset_range_ms);
        out.devices.push_back(std::move(d));
    }

    std::vector<detail::PendingEvent> events;
    const double duration_ms = static_cast<double>(cfg.duration_ms());
    for (const auto& d : out.devices) {
        const double base_per_ms = cfg.background_cpm * d.profile.sensitivity / 60000.0;
        detail::thinned_poisson(
            rng, duration_ms, base_per_ms * (1.0 + cfg.diurnal_amplitude),
            [&](double t) { return base_per_ms * diurnal_factor(cfg, cfg.t_start_ms + static_cast<std::int64_t>(t)); },
            [&](double t) {
                FlashEvent e{d.profile.device_id, cfg.t_start_ms + static_cast<std::int64_t>(t), d.where,
                             detail::magnitude(rng)};
                events.push_back({std::move(e), d.clock_offset_ms});
                ++out.background_events;
            });
    }

    for (std::size_t s = 0; s < cfg.n_showers; ++s) {
        InjectedShower sh;
        sh.t_true_ms = cfg.t_start_ms + static_cast<std::int64_t>(rng.uniform() * duration_ms);
        sh.epicenter.lat_deg = detail::quantize(rng.uniform(cfg.bbox.lat_min, cfg.bbox.lat_max), 1e6);
        sh.epicenter.lon_deg = detail::quantize(rng.uniform(cfg.bbox.lon_min, cfg.bbox.lon_max), 1e6);
        for (const auto& d : out.devices) {
            if (haversine_km(d.where, sh.epicenter) > cfg.shower_footprint_km) continue;
            const std::int64_t t = sh.t_true_ms + rng.symmetric(cfg.shower_jitter_ms);
            events.push_back({FlashEvent{d.profile.device_id, t, d.where, detail::magnitude(rng)}, d.clock_offset_ms});
            sh.devices.push_back(d.profile.device_id);
            ++out.shower_events;
        }
        out.truth.showers.push_back(std::move(sh));
    }

    detail::emit_lines(out, events);
    return out;
}

// ---------------------------------------------------------------------------
// Flight

enum class FlightPhase { Ground, Climb, Cruise, Descent };

/// Fractions of the total duration spent in each phase: ground, climb,
/// cruise, descent, ground.
inline constexpr std::array<double, 5> kFlightPhases{0.10, 0.15, 0.50, 0.15, 0.10};

inline FlightPhase flight_phase(double fraction) noexcept {
    if (fraction < kFlightPhases[0]) return FlightPhase::Ground;
    fraction -= kFlightPhases[0];
    if (fraction < kFlightPhases[1]) return FlightPhase::Climb;
    fraction -= kFlightPhases[1];
    if (fraction < kFlightPhases[2]) return FlightPhase::Cruise;
    fraction -= kFlightPhases[2];
    if (fraction < kFlightPhases[3]) return FlightPhase::Descent;
    return FlightPhase::Ground;
}

/// Altitude (km) at a fraction of the flight: linear ramps between ground and cruise.
inline double flight_altitude_km(double fraction, double cruise_km) noexcept {
    const double climb_start = kFlightPhases[0];
    const double cruise_start = climb_start + kFlightPhases[1];
    const double descent_start = cruise_start + kFlightPhases[2];
    const double landing = descent_start + kFlightPhases[3];
    if (fraction < climb_start || fraction >= landing) return 0.0;
    if (fraction < cruise_start) return cruise_km * (fraction - climb_start) / kFlightPhases[1];
    if (fraction < descent_start) return cruise_km;
    return cruise_km * (landing - fraction) / kFlightPhases[3];
}

struct FlightOutput {
    std::vector<SimDevice> devices;
    std::vector<std::string> lines;
    GroundTruth truth;

    std::string text() const {
        std::string out;
        for (const auto& l : lines) out += l + '\n';
        return out;
    }
};

/// Two co-located tablets (sensitivity 1.0 and 2.0) riding the profile
/// 0 -> cruise_km -> 0; each device's rate is model.rate(h) * sensitivity.
inline FlightOutput flight_profile(const SimConfig& cfg, double cruise_km, const rates::AltitudeModel& model) {
    cfg.validate();
    if (!model.valid()) throw Error(Errc::BadConfig, "altitude model must have r0 > 0 and h_d > 0");
    if (!(cruise_km > 0.0) || !std::isfinite(cruise_km)) throw Error(Errc::BadConfig, "cruise altitude must be positive");

    SplitMix64 rng(cfg.seed);
    SimOutput out;
    const GeoPoint cabin{detail::quantize((cfg.bbox.lat_min + cfg.bbox.lat_max) / 2.0, 1e6),
                         detail::quantize((cfg.bbox.lon_min + cfg.bbox.lon_max) / 2.0, 1e6), 0.0};
    const std::array<double, 2> sensitivity{1.0, 2.0};
    for (std::size_t i = 0; i < 2; ++i) {
        SimDevice d;
        d.profile = {detail::device_name("nexus", i), "NEXUS7", 12, sensitivity[i]};
        d.where = cabin;
        d.clock_offset_ms = rng.symmetric(cfg.clock_offset_range_ms);
        out.devices.push_back(std::move(d));
    }

    const double duration_ms = static_cast<double>(cfg.duration_ms());
    const auto altitude_at = [&](double t) { return flight_altitude_km(t / duration_ms, cruise_km); };
    const auto located = [&](const SimDevice& d, double t) {
        GeoPoint g = d.where;
        g.alt_m = detail::quantize(altitude_at(t) * 1000.0, 10.0);
        return g;
    };

    std::vector<detail::PendingEvent> events;
    for (const auto& d : out.devices) {
        const double scale = d.profile.sensitivity / 60000.0;
        detail::thinned_poisson(
            rng, duration_ms, model.rate(cruise_km) * scale, [&](double t) { return model.rate(altitude_at(t)) * scale; },
            [&](double t) {
                FlashEvent e{d.profile.device_id, cfg.t_start_ms + static_cast<std::int64_t>(t), located(d, t),
                             detail::magnitude(rng)};
                events.push_back({std::move(e), d.clock_offset_ms});
            });
    }
    for (std::size_t s = 0; s < cfg.n_showers; ++s) {
        InjectedShower sh;
        const double t_rel = rng.uniform() * duration_ms;
        sh.t_true_ms = cfg.t_start_ms + static_cast<std::int64_t>(t_rel);
        sh.epicenter = located(out.devices.front(), t_rel);
        for (const auto& d : out.devices) {
            const std::int64_t t = sh.t_true_ms + rng.symmetric(cfg.shower_jitter_ms);
            events.push_back({FlashEvent{d.profile.device_id, t, located(d, t_rel), detail::magnitude(rng)},
                              d.clock_offset_ms});
            sh.devices.push_back(d.profile.device_id);
        }
        out.truth.showers.push_back(std::move(sh));
    }
    detail::emit_lines(out, events);
    return {std::move(out.devices), std::move(out.lines), std::move(out.truth)};
}

// ---------------------------------------------------------------------------
// Scoring

struct Evaluation {
    double precision = 1.0;
    double recall = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> matches;  // (candidate, shower)
};

/// Greedy one-to-one matching in candidate time order. Each candidate takes
/// the unmatched shower nearest in time among those within both tolerances.
template <class Candidate>
Evaluation evaluate(std::span<const Candidate> candidates, const GroundTruth& truth, double match_window_s,
                    double match_radius_km) {
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return candidates[a].t0_utc_ms < candidates[b].t0_utc_ms; });

    std::vector<bool> taken(truth.showers.size(), false);
    Evaluation ev;
    const double window_ms = match_window_s * 1000.0;
    for (std::size_t ci : order) {
        const auto& c = candidates[ci];
        std::size_t best = truth.showers.size();
        double best_dt = 0.0;
        for (std::size_t si = 0; si < truth.showers.size(); ++si) {
            if (taken[si]) continue;
            const auto& s = truth.showers[si];
            const double dt = std::abs(static_cast<double>(c.t0_utc_ms - s.t_true_ms));
            if (dt > window_ms || haversine_km(c.epicenter, s.epicenter) > match_radius_km) continue;
            if (best == truth.showers.size() || dt < best_dt) {
                best = si;
                best_dt = dt;
            }
        }
        if (best != truth.showers.size()) {
            taken[best] = true;
            ev.matches.emplace_back(ci, best);
        }
    }
    const double m = static_cast<double>(ev.matches.size());
    ev.precision = candidates.empty() ? 1.0 : m / static_cast<double>(candidates.size());
    ev.recall = truth.showers.empty() ? 1.0 : m / static_cast<double>(truth.showers.size());
    return ev;
}

/// `{showers:[{t_true_ms, lat, lon, devices:[...]}]}`
inline nlohmann::json to_json(const GroundTruth& truth) {
    auto arr = nlohmann::json::array();
    for (const auto& s : truth.showers)
        arr.push_back({{"t_true_ms", s.t_true_ms},
                       {"lat", s.epicenter.lat_deg},
                       {"lon", s.epicenter.lon_deg},
                       {"devices", s.devices}});
    return {{"showers", arr}};
}

inline GroundTruth truth_from_json(const nlohmann::json& j) {
    GroundTruth t;
    try {
        for (const auto& s : j.at("showers")) {
            InjectedShower sh;
            sh.t_true_ms = s.at("t_true_ms").get<std::int64_t>();
            sh.epicenter.lat_deg = s.at("lat").get<double>();
            sh.epicenter.lon_deg = s.at("lon").get<double>();
            sh.devices = s.at("devices").get<std::vector<std::string>>();
            t.showers.push_back(std::move(sh));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::BadParameter, std::string("malformed ground truth: ") + e.what());
    }
    return t;
}

}  // namespace airshower::sim
