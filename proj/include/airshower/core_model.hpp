#pragma once
/// @file core_model.hpp
/// Domain records, great-circle distance and the SHWR1 line codec.
///
/// Line grammar (one record per `\n`-terminated line):
///
///   SHWR1|DEV|<device_id>|<model>|<mpx_tenths>|<sensitivity>
///   SHWR1|EV|<device_id>|<t_local_ms>|<offset_ms>|<lat>|<lon>|<alt_m>|<magnitude>
///   SHWR1|CO|<device_id>|<t_local_ms>|<offset_ms>|<lat>|<lon>|<co_ppm>
///   SHWR1|ACC|<device_id>|<t0_local_ms>|<offset_ms>|<dt_ms>|<axis>|<s1;s2;...;sn>
///
/// Decoded records always carry UTC time (t_local + offset). Only canonical
/// text is accepted, so every accepted line re-encodes byte-exactly.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "airshower/error.hpp"

namespace airshower {

inline constexpr double kEarthRadiusKm = 6371.0088;
inline constexpr std::string_view kMagic = "SHWR1";
inline constexpr std::size_t kMaxIdLength = 64;
inline constexpr std::size_t kMaxModelLength = 64;
inline constexpr std::size_t kMinAccelSamples = 8;
inline constexpr double kMaxAbsAltitudeM = 1.0e6;

struct GeoPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
    double alt_m = 0.0;

    bool valid() const noexcept {
        return std::isfinite(lat_deg) && std::isfinite(lon_deg) && std::isfinite(alt_m) &&
               lat_deg >= -90.0 && lat_deg <= 90.0 && lon_deg >= -180.0 && lon_deg <= 180.0 &&
               std::abs(alt_m) <= kMaxAbsAltitudeM;
    }
    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct DeviceProfile {
    std::string device_id;
    std::string model;
    std::int64_t camera_mpx_tenths = 0;
    double sensitivity = 1.0;
    friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

struct FlashEvent {
    std::string device_id;
    std::int64_t t_utc_ms = 0;
    GeoPoint geo;
    std::int64_t magnitude = 1;
    friend bool operator==(const FlashEvent&, const FlashEvent&) = default;
};

struct TrackSample {
    std::string device_id;
    std::int64_t t_utc_ms = 0;
    GeoPoint geo;
    double co_ppm = 0.0;
    friend bool operator==(const TrackSample&, const TrackSample&) = default;
};

enum class Axis { X, Y, Z, Mag };

constexpr std::string_view to_string(Axis a) noexcept {
    switch (a) {
        case Axis::X: return "x";
        case Axis::Y: return "y";
        case Axis::Z: return "z";
        case Axis::Mag: return "mag";
    }
    return "x";
}

inline std::optional<Axis> parse_axis(std::string_view s) noexcept {
    if (s == "x") return Axis::X;
    if (s == "y") return Axis::Y;
    if (s == "z") return Axis::Z;
    if (s == "mag") return Axis::Mag;
    return std::nullopt;
}

struct AccelWindow {
    std::string device_id;
    std::int64_t t0_utc_ms = 0;
    std::int64_t dt_ms = 1;
    Axis axis = Axis::Mag;
    std::vector<double> samples;
    friend bool operator==(const AccelWindow&, const AccelWindow&) = default;
};

using Record = std::variant<DeviceProfile, FlashEvent, TrackSample, AccelWindow>;

/// A record plus the clock offset it was submitted with. The record's
/// timestamps are UTC; the wire carries `t_utc - offset_ms` as local time.
struct WireRecord {
    Record record;
    std::int64_t offset_ms = 0;
    friend bool operator==(const WireRecord&, const WireRecord&) = default;
};

inline const std::string& device_of(const Record& r) {
    return std::visit([](const auto& v) -> const std::string& { return v.device_id; }, r);
}

// ---------------------------------------------------------------------------
// Geodesy

/// Haversine great-circle distance; altitude is ignored.
inline double haversine_km(const GeoPoint& a, const GeoPoint& b) noexcept {
    constexpr double kDeg = 3.14159265358979323846 / 180.0;
    const double phi1 = a.lat_deg * kDeg;
    const double phi2 = b.lat_deg * kDeg;
    const double dphi = (b.lat_deg - a.lat_deg) * kDeg;
    const double dlambda = (b.lon_deg - a.lon_deg) * kDeg;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    h = std::min(1.0, std::max(0.0, h));
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

// ---------------------------------------------------------------------------
// Canonical number formatting

namespace detail {

inline std::string format_fixed(double v, int digits) {
    std::array<char, 64> buf{};
    const int n = std::snprintf(buf.data(), buf.size(), "%.*f", digits, v);
    std::string s(buf.data(), static_cast<std::size_t>(n));
    // "-0.000" is not canonical
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

/// Shortest fixed-notation text that round-trips, always with a '.'.
inline std::string format_shortest(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    std::array<char, 400> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
    std::string s(buf.data(), end);
    if (s.find('.') == std::string::npos) s += ".0";
    return s;
}

inline std::string format_int(std::int64_t v) { return std::to_string(v); }

inline bool is_canonical_int(std::string_view s) noexcept {
    if (s.empty()) return false;
    std::size_t i = s.front() == '-' ? 1 : 0;
    if (i == s.size()) return false;
    if (s[i] == '0' && (s.size() - i > 1 || i == 1)) return false;  // leading zero or "-0"
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) noexcept {
    if (!is_canonical_int(s)) return std::nullopt;
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

inline bool is_decimal_text(std::string_view s) noexcept {
    std::size_t i = s.empty() || s.front() != '-' ? 0 : 1;
    bool digits = false, dot = false;
    for (; i < s.size(); ++i) {
        if (s[i] >= '0' && s[i] <= '9') {
            digits = true;
        } else if (s[i] == '.' && !dot) {
            dot = true;
        } else {
            return false;
        }
    }
    return digits && dot;
}

inline std::optional<double> parse_double(std::string_view s) noexcept {
    if (!is_decimal_text(s)) return std::nullopt;
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::fixed);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

/// Parses a fixed-digit decimal and requires the text to be canonical.
inline std::optional<double> parse_fixed(std::string_view s, int digits) {
    auto v = parse_double(s);
    if (!v || format_fixed(*v, digits) != s) return std::nullopt;
    return v;
}

inline std::optional<double> parse_shortest(std::string_view s) {
    auto v = parse_double(s);
    if (!v || format_shortest(*v) != s) return std::nullopt;
    return v;
}

inline bool valid_device_id(std::string_view s) noexcept {
    if (s.empty() || s.size() > kMaxIdLength) return false;
    for (char c : s) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                        c == '_' || c == '-';
        if (!ok) return false;
    }
    return true;
}

inline bool valid_model(std::string_view s) noexcept {
    if (s.size() > kMaxModelLength) return false;
    for (char c : s)
        if (c < 0x20 || c > 0x7e || c == '|') return false;
    return true;
}

inline std::optional<std::int64_t> checked_add(std::int64_t a, std::int64_t b) noexcept {
    std::int64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) return std::nullopt;
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Encoding

inline std::string encode_record(const WireRecord& w) {
    const auto local = [&](std::int64_t t_utc) { return detail::format_int(t_utc - w.offset_ms); };
    std::string out{kMagic};
    const auto field = [&out](std::string_view f) {
        out += '|';
        out += f;
    };
    const auto geo = [&](const GeoPoint& g) {
        field(detail::format_fixed(g.lat_deg, 6));
        field(detail::format_fixed(g.lon_deg, 6));
    };
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, DeviceProfile>) {
                field("DEV");
                field(r.device_id);
                field(r.model);
                field(detail::format_int(r.camera_mpx_tenths));
                field(detail::format_shortest(r.sensitivity));
            } else if constexpr (std::is_same_v<T, FlashEvent>) {
                field("EV");
                field(r.device_id);
                field(local(r.t_utc_ms));
                field(detail::format_int(w.offset_ms));
                geo(r.geo);
                field(detail::format_fixed(r.geo.alt_m, 1));
                field(detail::format_int(r.magnitude));
            } else if constexpr (std::is_same_v<T, TrackSample>) {
                field("CO");
                field(r.device_id);
                field(local(r.t_utc_ms));
                field(detail::format_int(w.offset_ms));
                geo(r.geo);
                field(detail::format_fixed(r.co_ppm, 2));
            } else {
                field("ACC");
                field(r.device_id);
                field(local(r.t0_utc_ms));
                field(detail::format_int(w.offset_ms));
                field(detail::format_int(r.dt_ms));
                field(to_string(r.axis));
                std::string s;
                for (std::size_t i = 0; i < r.samples.size(); ++i) {
                    if (i) s += ';';
                    s += detail::format_shortest(r.samples[i]);
                }
                field(s);
            }
        },
        w.record);
    return out;
}

/// Canonical line (without the trailing newline) for an already-normalized record.
inline std::string encode_record(const Record& r) { return encode_record(WireRecord{r, 0}); }

// ---------------------------------------------------------------------------
// Decoding

/// Where and why a line was rejected. `field_index` counts `|`-separated
/// fields from 0 (the magic); `column` is the byte offset of that field.
struct DecodeError {
    Errc code = Errc::BadMagic;
    std::string field;
    std::size_t field_index = 0;
    std::size_t column = 0;

    std::string message() const {
        std::string s{to_string(code)};
        if (!field.empty()) s += "(" + field + ")";
        s += " at field " + std::to_string(field_index) + ", column " + std::to_string(column);
        return s;
    }
    Error to_error() const { return Error(code, message(), field); }
};

using DecodeOutcome = std::variant<WireRecord, DecodeError>;

namespace detail {

struct Fields {
    std::vector<std::string_view> items;
    std::vector<std::size_t> columns;
};

inline Fields split_fields(std::string_view line) {
    Fields f;
    std::size_t start = 0;
    for (;;) {
        const auto bar = line.find('|', start);
        f.items.push_back(line.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start));
        f.columns.push_back(start);
        if (bar == std::string_view::npos) break;
        start = bar + 1;
    }
    return f;
}

inline bool clean_ascii(std::string_view s) noexcept {
    for (char c : s)
        if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) > 0x7e) return false;
    return true;
}

}  // namespace detail

inline DecodeOutcome try_decode_record(std::string_view line) {
    if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
    if (line.size() < kMagic.size() + 1 || line.substr(0, kMagic.size()) != kMagic || line[kMagic.size()] != '|')
        return DecodeError{Errc::BadMagic, {}, 0, 0};

    const detail::Fields f = detail::split_fields(line);
    const auto bad = [&](std::size_t idx, std::string name) {
        return DecodeError{Errc::BadFieldValue, std::move(name), idx, f.columns[idx]};
    };
    const std::string_view kind = f.items[1];

    struct Layout {
        std::string_view kind;
        std::size_t count;
    };
    static constexpr std::array<Layout, 4> layouts{{{"DEV", 6}, {"EV", 9}, {"CO", 8}, {"ACC", 8}}};
    std::size_t expected = 0;
    for (const auto& l : layouts)
        if (l.kind == kind) expected = l.count;
    if (expected == 0) return bad(1, "kind");
    if (f.items.size() != expected) {
        const std::size_t idx = std::min(f.items.size(), expected) - 1;
        return DecodeError{Errc::BadFieldCount, {}, f.items.size(), f.columns[idx]};
    }
    for (std::size_t i = 2; i < f.items.size(); ++i) {
        if (!detail::clean_ascii(f.items[i])) {
            static constexpr std::array<std::string_view, 4> dev{"device_id", "model", "mpx_tenths", "sensitivity"};
            static constexpr std::array<std::string_view, 7> ev{"device_id", "t_local_ms", "offset_ms", "lat",
                                                                "lon",       "alt_m",      "magnitude"};
            static constexpr std::array<std::string_view, 6> co{"device_id", "t_local_ms", "offset_ms",
                                                                "lat",       "lon",        "co_ppm"};
            static constexpr std::array<std::string_view, 6> acc{"device_id", "t0_local_ms", "offset_ms",
                                                                 "dt_ms",     "axis",        "samples"};
            std::string_view name = kind == "DEV" ? dev[i - 2] : kind == "EV" ? ev[i - 2] : kind == "CO" ? co[i - 2] : acc[i - 2];
            return bad(i, std::string(name));
        }
    }

    const std::string_view id = f.items[2];
    if (!detail::valid_device_id(id)) return bad(2, "device_id");

    if (kind == "DEV") {
        if (!detail::valid_model(f.items[3])) return bad(3, "model");
        auto mpx = detail::parse_int(f.items[4]);
        if (!mpx || *mpx < 0) return bad(4, "mpx_tenths");
        auto sens = detail::parse_shortest(f.items[5]);
        if (!sens || *sens <= 0.0) return bad(5, "sensitivity");
        return WireRecord{DeviceProfile{std::string(id), std::string(f.items[3]), *mpx, *sens}, 0};
    }

    // EV, CO and ACC share (device, t_local, offset)
    auto t_local = detail::parse_int(f.items[3]);
    if (!t_local) return bad(3, kind == "ACC" ? "t0_local_ms" : "t_local_ms");
    auto offset = detail::parse_int(f.items[4]);
    if (!offset) return bad(4, "offset_ms");
    auto t_utc = detail::checked_add(*t_local, *offset);
    if (!t_utc) return bad(4, "offset_ms");

    if (kind == "ACC") {
        auto dt = detail::parse_int(f.items[5]);
        if (!dt || *dt <= 0) return bad(5, "dt_ms");
        auto axis = parse_axis(f.items[6]);
        if (!axis) return bad(6, "axis");
        AccelWindow w{std::string(id), *t_utc, *dt, *axis, {}};
        std::string_view rest = f.items[7];
        for (;;) {
            const auto semi = rest.find(';');
            auto v = detail::parse_shortest(rest.substr(0, semi));
            if (!v) return bad(7, "samples");
            w.samples.push_back(*v);
            if (semi == std::string_view::npos) break;
            rest.remove_prefix(semi + 1);
        }
        if (w.samples.size() < kMinAccelSamples) return bad(7, "samples");
        return WireRecord{std::move(w), *offset};
    }

    GeoPoint g;
    auto lat = detail::parse_fixed(f.items[5], 6);
    if (!lat || *lat < -90.0 || *lat > 90.0) return bad(5, "lat");
    auto lon = detail::parse_fixed(f.items[6], 6);
    if (!lon || *lon < -180.0 || *lon > 180.0) return bad(6, "lon");
    g.lat_deg = *lat;
    g.lon_deg = *lon;

    if (kind == "EV") {
        auto alt = detail::parse_fixed(f.items[7], 1);
        if (!alt || std::abs(*alt) > kMaxAbsAltitudeM) return bad(7, "alt_m");
        g.alt_m = *alt;
        auto mag = detail::parse_int(f.items[8]);
        if (!mag || *mag < 1) return bad(8, "magnitude");
        return WireRecord{FlashEvent{std::string(id), *t_utc, g, *mag}, *offset};
    }

    auto ppm = detail::parse_fixed(f.items[7], 2);
    if (!ppm || *ppm < 0.0) return bad(7, "co_ppm");
    return WireRecord{TrackSample{std::string(id), *t_utc, g, *ppm}, *offset};
}

/// Throwing form of try_decode_record.
inline WireRecord decode_record(std::string_view line) {
    auto out = try_decode_record(line);
    if (auto* err = std::get_if<DecodeError>(&out)) throw err->to_error();
    return std::get<WireRecord>(std::move(out));
}

/// Decodes every non-empty line of a text blob; throws on the first bad line.
inline std::vector<Record> decode_all(std::string_view text) {
    std::vector<Record> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (line.empty()) continue;
        auto res = try_decode_record(line);
        if (auto* err = std::get_if<DecodeError>(&res))
            throw Error(err->code, "line " + std::to_string(line_no) + ": " + err->message(), err->field);
        out.push_back(std::get<WireRecord>(std::move(res)).record);
    }
    return out;
}

template <class T>
std::vector<T> records_of(const std::vector<Record>& records) {
    std::vector<T> out;
    for (const auto& r : records)
        if (const auto* v = std::get_if<T>(&r)) out.push_back(*v);
    return out;
}

}  // namespace airshower
