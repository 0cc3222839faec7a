#pragma once
/// @file coincidence.hpp
/// Multi-device spatio-temporal coincidence detection: flashes from
/// different devices that are close in time and space are linked
/// (single linkage) into air-shower candidates.
///
/// Two events are linked when |dt| <= window_s and their great-circle
/// distance is <= radius_km. Events are first sorted and cut into temporal
/// chains wherever consecutive events are more than window_s apart; no link
/// can cross a cut, so clustering runs chain by chain.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "airshower/core_model.hpp"
#include "airshower/error.hpp"

namespace airshower::coincidence {

struct CoincidenceParams {
    double window_s = 1.0;
    double radius_km = 2.0;
    std::size_t min_devices = 2;

    bool valid() const noexcept {
        return std::isfinite(window_s) && window_s > 0.0 && std::isfinite(radius_km) && radius_km > 0.0 &&
               min_devices >= 2;
    }
    double window_ms() const noexcept { return window_s * 1000.0; }
};

struct ShowerCandidate {
    std::int64_t t0_utc_ms = 0;
    std::vector<FlashEvent> members;  // in canonical event order
    std::size_t multiplicity = 0;     // distinct devices
    GeoPoint epicenter;
    std::int64_t span_ms = 0;
    double span_km = 0.0;

    friend bool operator==(const ShowerCandidate&, const ShowerCandidate&) = default;
};

/// Canonical total order on events.
inline bool event_less(const FlashEvent& a, const FlashEvent& b) {
    return std::tie(a.t_utc_ms, a.device_id, a.magnitude, a.geo.lat_deg, a.geo.lon_deg, a.geo.alt_m) <
           std::tie(b.t_utc_ms, b.device_id, b.magnitude, b.geo.lat_deg, b.geo.lon_deg, b.geo.alt_m);
}

/// Summary statistics of a member set that is already in canonical order.
inline ShowerCandidate make_candidate(std::vector<FlashEvent> members) {
    ShowerCandidate c;
    c.t0_utc_ms = members.front().t_utc_ms;
    c.span_ms = members.back().t_utc_ms - members.front().t_utc_ms;
    std::set<std::string> devices;
    double wsum = 0.0, lat = 0.0, lon = 0.0, alt = 0.0;
    for (const auto& m : members) {
        devices.insert(m.device_id);
        const double w = static_cast<double>(m.magnitude);
        wsum += w;
        lat += w * m.geo.lat_deg;
        lon += w * m.geo.lon_deg;
        alt += w * m.geo.alt_m;
    }
    c.multiplicity = devices.size();
    c.epicenter = {lat / wsum, lon / wsum, alt / wsum};
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            c.span_km = std::max(c.span_km, haversine_km(members[i].geo, members[j].geo));
    c.members = std::move(members);
    return c;
}

namespace detail {

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace detail

inline bool candidate_less(const ShowerCandidate& a, const ShowerCandidate& b) {
    if (a.t0_utc_ms != b.t0_utc_ms) return a.t0_utc_ms < b.t0_utc_ms;
    return std::lexicographical_compare(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                                        event_less);
}

inline std::vector<ShowerCandidate> detect(std::vector<FlashEvent> events, const CoincidenceParams& params = {}) {
    if (!params.valid()) throw Error(Errc::BadParameter, "invalid coincidence parameters");
    std::sort(events.begin(), events.end(), event_less);
    const double window_ms = params.window_ms();

    std::vector<ShowerCandidate> out;
    std::size_t begin = 0;
    while (begin < events.size()) {
        std::size_t end = begin + 1;
        while (end < events.size() &&
               static_cast<double>(events[end].t_utc_ms - events[end - 1].t_utc_ms) <= window_ms)
            ++end;

        // A single-device chain cannot produce a candidate.
        const bool multi = std::any_of(events.begin() + static_cast<std::ptrdiff_t>(begin),
                                       events.begin() + static_cast<std::ptrdiff_t>(end),
                                       [&](const FlashEvent& e) { return e.device_id != events[begin].device_id; });
        if (multi) {
            const std::size_t n = end - begin;
            detail::DisjointSets sets(n);
            for (std::size_t i = 0; i < n; ++i) {
                const FlashEvent& a = events[begin + i];
                for (std::size_t j = i + 1; j < n; ++j) {
                    const FlashEvent& b = events[begin + j];
                    if (static_cast<double>(b.t_utc_ms - a.t_utc_ms) > window_ms) break;
                    if (haversine_km(a.geo, b.geo) <= params.radius_km) sets.unite(i, j);
                }
            }
            std::vector<std::vector<FlashEvent>> groups(n);
            for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(events[begin + i]);
            for (auto& g : groups) {
                if (g.size() < params.min_devices) continue;
                ShowerCandidate c = make_candidate(std::move(g));
                if (c.multiplicity >= params.min_devices) out.push_back(std::move(c));
            }
        }
        begin = end;
    }
    std::sort(out.begin(), out.end(), candidate_less);
    return out;
}

/// Candidates with t0 in [t_start, t_end) per hour of range.
inline double candidate_rate(std::span<const ShowerCandidate> candidates, std::int64_t t_start_ms,
                             std::int64_t t_end_ms) {
    if (t_end_ms <= t_start_ms) throw Error(Errc::BadRange, "t_end must exceed t_start");
    const auto n = std::count_if(candidates.begin(), candidates.end(), [&](const ShowerCandidate& c) {
        return c.t0_utc_ms >= t_start_ms && c.t0_utc_ms < t_end_ms;
    });
    return static_cast<double>(n) / (static_cast<double>(t_end_ms - t_start_ms) / 3.6e6);
}

/// `[{t0_utc_ms, multiplicity, span_ms, span_km, epicenter:{lat,lon,alt}, member_count}]`
inline nlohmann::json to_json(std::span<const ShowerCandidate> candidates) {
    auto out = nlohmann::json::array();
    for (const auto& c : candidates) {
        out.push_back({{"t0_utc_ms", c.t0_utc_ms},
                       {"multiplicity", c.multiplicity},
                       {"span_ms", c.span_ms},
                       {"span_km", c.span_km},
                       {"epicenter", {{"lat", c.epicenter.lat_deg}, {"lon", c.epicenter.lon_deg}, {"alt", c.epicenter.alt_m}}},
                       {"member_count", c.members.size()}});
    }
    return out;
}

}  // namespace airshower::coincidence
