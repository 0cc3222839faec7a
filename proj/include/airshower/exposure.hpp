#pragma once
/// @file exposure.hpp
/// Personal exposure dose along a track (zero-order hold) and spatial
/// aggregation grids exported as GeoJSON.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "airshower/core_model.hpp"
#include "airshower/error.hpp"

namespace airshower::exposure {

inline constexpr double kDefaultMaxGapS = 300.0;
inline constexpr double kKmPerDegree = 111.1949;

/// Σ co[i] * min(t[i+1] - t[i], max_gap) in ppm*s. The last sample adds nothing.
inline double accumulate_dose(std::span<const TrackSample> track, double max_gap_s = kDefaultMaxGapS) {
    double dose = 0.0;
    for (std::size_t i = 0; i + 1 < track.size(); ++i) {
        const std::int64_t dt_ms = track[i + 1].t_utc_ms - track[i].t_utc_ms;
        if (dt_ms <= 0)
            throw Error(Errc::UnorderedTrack, "timestamps must strictly increase (sample " + std::to_string(i + 1) + ")");
        dose += track[i].co_ppm * std::min(static_cast<double>(dt_ms) / 1000.0, max_gap_s);
    }
    return dose;
}

enum class ValueKind { CoPpm, ShowerCount };

constexpr std::string_view to_string(ValueKind k) noexcept {
    return k == ValueKind::CoPpm ? "co_ppm" : "shower_count";
}

struct BBox {
    double lat_min = 0.0;
    double lat_max = 0.0;
    double lon_min = 0.0;
    double lon_max = 0.0;

    bool valid() const noexcept {
        return std::isfinite(lat_min) && std::isfinite(lat_max) && std::isfinite(lon_min) && std::isfinite(lon_max) &&
               lat_min < lat_max && lon_min < lon_max && lat_min >= -90.0 && lat_max <= 90.0 && lon_min >= -180.0 &&
               lon_max <= 180.0;
    }
    bool contains(const GeoPoint& p) const noexcept {
        return p.lat_deg >= lat_min && p.lat_deg <= lat_max && p.lon_deg >= lon_min && p.lon_deg <= lon_max;
    }
    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Smallest box around the points, padded so it is never degenerate.
inline BBox bbox_of(std::span<const GeoPoint> points, double pad_deg = 1e-3) {
    if (points.empty()) throw Error(Errc::BadBBox, "no points to bound");
    BBox b{points[0].lat_deg, points[0].lat_deg, points[0].lon_deg, points[0].lon_deg};
    for (const auto& p : points) {
        b.lat_min = std::min(b.lat_min, p.lat_deg);
        b.lat_max = std::max(b.lat_max, p.lat_deg);
        b.lon_min = std::min(b.lon_min, p.lon_deg);
        b.lon_max = std::max(b.lon_max, p.lon_deg);
    }
    b.lat_min = std::max(-90.0, b.lat_min - pad_deg);
    b.lat_max = std::min(90.0, b.lat_max + pad_deg);
    b.lon_min = std::max(-180.0, b.lon_min - pad_deg);
    b.lon_max = std::min(180.0, b.lon_max + pad_deg);
    return b;
}

struct CellStats {
    std::size_t count = 0;
    double sum = 0.0;
    double max = 0.0;

    double mean() const noexcept { return count ? sum / static_cast<double>(count) : 0.0; }
};

struct GridMap {
    BBox bbox;
    double cell_km = 1.0;
    ValueKind kind = ValueKind::CoPpm;
    std::map<std::pair<std::int64_t, std::int64_t>, CellStats> cells;  // (row, col)
    std::size_t dropped = 0;

    double dlat() const noexcept { return cell_km / kKmPerDegree; }
    double dlon() const noexcept {
        constexpr double kDeg = 3.14159265358979323846 / 180.0;
        return cell_km / (kKmPerDegree * std::cos((bbox.lat_min + bbox.lat_max) / 2.0 * kDeg));
    }
    std::size_t total_count() const noexcept {
        std::size_t n = 0;
        for (const auto& [k, c] : cells) n += c.count;
        return n;
    }
};

struct GridSample {
    GeoPoint where;
    double value = 0.0;
};

inline GridMap make_grid(const BBox& bbox, double cell_km, ValueKind kind) {
    if (!bbox.valid()) throw Error(Errc::BadBBox, "need lat_min < lat_max and lon_min < lon_max");
    if (!(cell_km > 0.0) || !std::isfinite(cell_km)) throw Error(Errc::BadBBox, "cell_km must be positive");
    GridMap g;
    g.bbox = bbox;
    g.cell_km = cell_km;
    g.kind = kind;
    return g;
}

inline void add_sample(GridMap& g, const GridSample& s) {
    if (!g.bbox.contains(s.where)) {
        ++g.dropped;
        return;
    }
    const auto row = static_cast<std::int64_t>(std::floor((s.where.lat_deg - g.bbox.lat_min) / g.dlat()));
    const auto col = static_cast<std::int64_t>(std::floor((s.where.lon_deg - g.bbox.lon_min) / g.dlon()));
    CellStats& c = g.cells[{row, col}];
    ++c.count;
    c.sum += s.value;
    c.max = c.count == 1 ? s.value : std::max(c.max, s.value);
}

inline GridMap build_grid(std::span<const GridSample> samples, const BBox& bbox, double cell_km,
                          ValueKind kind = ValueKind::CoPpm) {
    GridMap g = make_grid(bbox, cell_km, kind);
    for (const auto& s : samples) add_sample(g, s);
    return g;
}

/// Combines grids built over disjoint sample partitions.
inline GridMap merge(const GridMap& a, const GridMap& b) {
    if (!(a.bbox == b.bbox) || a.cell_km != b.cell_km || a.kind != b.kind)
        throw Error(Errc::BadBBox, "grids have different geometry");
    GridMap out = a;
    out.dropped += b.dropped;
    for (const auto& [key, cb] : b.cells) {
        CellStats& c = out.cells[key];
        if (c.count == 0) {
            c = cb;
            continue;
        }
        c.sum += cb.sum;
        c.max = std::max(c.max, cb.max);
        c.count += cb.count;
    }
    return out;
}

/// FeatureCollection with one Polygon per nonempty cell.
inline nlohmann::json to_geojson(const GridMap& g) {
    auto features = nlohmann::json::array();
    const double dlat = g.dlat(), dlon = g.dlon();
    for (const auto& [key, c] : g.cells) {
        const double lat0 = g.bbox.lat_min + static_cast<double>(key.first) * dlat;
        const double lon0 = g.bbox.lon_min + static_cast<double>(key.second) * dlon;
        const double lat1 = lat0 + dlat, lon1 = lon0 + dlon;
        nlohmann::json ring = nlohmann::json::array(
            {{lon0, lat0}, {lon1, lat0}, {lon1, lat1}, {lon0, lat1}, {lon0, lat0}});
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Polygon"}, {"coordinates", nlohmann::json::array({ring})}}},
                            {"properties",
                             {{"count", c.count}, {"mean", c.mean()}, {"max", c.max}, {"kind", to_string(g.kind)}}}});
    }
    return {{"type", "FeatureCollection"}, {"features", features}};
}

}  // namespace airshower::exposure
