#pragma once
// Test-only oracles and generators. Nothing here calls into the code paths
// it is used to check.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "airshower/core_model.hpp"
#include "airshower/flashdetect.hpp"

namespace test {

using HighPrec = boost::multiprecision::cpp_dec_float_50;

/// Definitional population moments in 50-digit arithmetic:
/// (mean, std, skewness, kurtosis_excess).
inline std::array<double, 4> moments_oracle(const std::vector<double>& xs) {
    const HighPrec n = static_cast<double>(xs.size());
    HighPrec mean = 0;
    for (double x : xs) mean += HighPrec(x);
    mean /= n;
    HighPrec m2 = 0, m3 = 0, m4 = 0;
    for (double x : xs) {
        const HighPrec d = HighPrec(x) - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    const HighPrec sd = boost::multiprecision::sqrt(m2);
    return {mean.convert_to<double>(), sd.convert_to<double>(), (m3 / (m2 * sd)).convert_to<double>(),
            (m4 / (m2 * m2) - 3).convert_to<double>()};
}

/// Haversine in 50-digit arithmetic.
inline double haversine_oracle(const airshower::GeoPoint& a, const airshower::GeoPoint& b) {
    using boost::multiprecision::asin;
    using boost::multiprecision::cos;
    using boost::multiprecision::sin;
    using boost::multiprecision::sqrt;
    const HighPrec pi = boost::math::constants::pi<HighPrec>();
    const HighPrec k = pi / 180;
    const HighPrec p1 = HighPrec(a.lat_deg) * k, p2 = HighPrec(b.lat_deg) * k;
    const HighPrec dp = (HighPrec(b.lat_deg) - HighPrec(a.lat_deg)) * k;
    const HighPrec dl = (HighPrec(b.lon_deg) - HighPrec(a.lon_deg)) * k;
    const HighPrec s1 = sin(dp / 2), s2 = sin(dl / 2);
    const HighPrec h = s1 * s1 + cos(p1) * cos(p2) * s2 * s2;
    return (2 * HighPrec("6371.0088") * asin(sqrt(h))).convert_to<double>();
}

inline double rel_err(double got, double want, double scale_floor = 1e-300) {
    return std::abs(got - want) / std::max(std::abs(want), scale_floor);
}

// ---------------------------------------------------------------------------
// Connected components by repeated min-label propagation.

struct OracleBlob {
    std::int64_t size;
    double cx, cy;
    auto key() const { return std::make_tuple(size, cx, cy); }
    bool operator<(const OracleBlob& o) const { return key() < o.key(); }
    bool operator==(const OracleBlob& o) const { return key() == o.key(); }
};

inline std::vector<OracleBlob> flood_fill_oracle(const airshower::flash::Frame& f,
                                                 const airshower::flash::HotPixelMask& mask, int threshold) {
    const int w = f.width, h = f.height;
    std::vector<long> label(static_cast<std::size_t>(w) * h, -1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const auto i = static_cast<std::size_t>(y) * w + x;
            if (f.luma[i] >= threshold && !mask.excluded[i]) label[i] = static_cast<long>(i);
        }
    for (bool changed = true; changed;) {
        changed = false;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const auto i = static_cast<std::size_t>(y) * w + x;
                if (label[i] < 0) continue;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx, ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const auto j = static_cast<std::size_t>(ny) * w + nx;
                        if (label[j] >= 0 && label[j] < label[i]) {
                            label[i] = label[j];
                            changed = true;
                        }
                    }
            }
    }
    std::map<long, std::tuple<std::int64_t, double, double>> acc;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const long l = label[static_cast<std::size_t>(y) * w + x];
            if (l < 0) continue;
            auto& [n, sx, sy] = acc[l];
            ++n;
            sx += x;
            sy += y;
        }
    std::vector<OracleBlob> out;
    for (const auto& [l, v] : acc) {
        const auto& [n, sx, sy] = v;
        out.push_back({n, sx / static_cast<double>(n), sy / static_cast<double>(n)});
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Coincidence: closure of the all-pairs link relation.

using MemberKey = std::tuple<std::int64_t, std::string, std::int64_t, double, double, double>;

inline MemberKey member_key(const airshower::FlashEvent& e) {
    return {e.t_utc_ms, e.device_id, e.magnitude, e.geo.lat_deg, e.geo.lon_deg, e.geo.alt_m};
}

/// Each candidate as its sorted member keys; the list itself sorted.
inline std::vector<std::vector<MemberKey>> coincidence_oracle(const std::vector<airshower::FlashEvent>& ev,
                                                              double window_s, double radius_km,
                                                              std::size_t min_devices) {
    const std::size_t n = ev.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double dt = std::abs(static_cast<double>(ev[i].t_utc_ms - ev[j].t_utc_ms));
            if (dt <= window_s * 1000.0 && airshower::haversine_km(ev[i].geo, ev[j].geo) <= radius_km)
                adj[i].push_back(j);
        }
    std::vector<bool> seen(n, false);
    std::vector<std::vector<MemberKey>> out;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<std::size_t> comp{s}, queue{s};
        seen[s] = true;
        while (!queue.empty()) {
            const auto u = queue.back();
            queue.pop_back();
            for (auto v : adj[u])
                if (!seen[v]) {
                    seen[v] = true;
                    comp.push_back(v);
                    queue.push_back(v);
                }
        }
        std::set<std::string> devices;
        for (auto i : comp) devices.insert(ev[i].device_id);
        if (devices.size() < min_devices) continue;
        std::vector<MemberKey> keys;
        for (auto i : comp) keys.push_back(member_key(ev[i]));
        std::sort(keys.begin(), keys.end());
        out.push_back(std::move(keys));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Random flashes clustered in time bursts over a small area.
inline std::vector<airshower::FlashEvent> random_events(std::mt19937_64& rng, std::size_t max_events) {
    std::uniform_int_distribution<std::size_t> count(0, max_events);
    std::uniform_int_distribution<int> dev(0, 7);
    std::uniform_int_distribution<std::int64_t> burst(0, 9), jitter(0, 1500), mag(1, 3);
    std::uniform_real_distribution<double> lat(50.40, 50.46), lon(30.50, 30.58);
    const std::size_t n = count(rng);
    std::vector<airshower::FlashEvent> out;
    for (std::size_t i = 0; i < n; ++i) {
        airshower::FlashEvent e;
        e.device_id = "d" + std::to_string(dev(rng));
        e.t_utc_ms = burst(rng) * 10000 + jitter(rng);
        e.geo = {std::round(lat(rng) * 1e6) / 1e6, std::round(lon(rng) * 1e6) / 1e6, 100.0};
        e.magnitude = mag(rng);
        out.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Codec generators

inline std::string random_id(std::mt19937_64& rng) {
    static const std::string alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_-";
    std::uniform_int_distribution<std::size_t> len(1, 64), ch(0, alphabet.size() - 1);
    std::string s(len(rng), 'a');
    for (auto& c : s) c = alphabet[ch(rng)];
    return s;
}

inline airshower::GeoPoint random_geo(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> lat(-90'000'000, 90'000'000), lon(-180'000'000, 180'000'000),
        alt(-5'000, 100'000);
    return {static_cast<double>(lat(rng)) / 1e6, static_cast<double>(lon(rng)) / 1e6,
            static_cast<double>(alt(rng)) / 10.0};
}

/// A valid record (values already at canonical precision) with an offset.
inline airshower::WireRecord random_record(std::mt19937_64& rng) {
    using namespace airshower;
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<std::int64_t> t(0, 4'000'000'000'000), off(-100'000, 100'000);
    const std::int64_t offset = off(rng);
    switch (kind(rng)) {
        case 0: {
            std::uniform_int_distribution<int> len(0, 64), ch(0x20, 0x7e), mpx(0, 500);
            std::string model(static_cast<std::size_t>(len(rng)), ' ');
            for (auto& c : model) {
                c = static_cast<char>(ch(rng));
                if (c == '|') c = '/';
            }
            std::uniform_real_distribution<double> sens(0.01, 10.0);
            return {DeviceProfile{random_id(rng), model, mpx(rng), sens(rng)}, 0};
        }
        case 1: {
            std::uniform_int_distribution<std::int64_t> mag(1, 10'000);
            return {FlashEvent{random_id(rng), t(rng), random_geo(rng), mag(rng)}, offset};
        }
        case 2: {
            std::uniform_int_distribution<std::int64_t> ppm(0, 100'000);
            auto g = random_geo(rng);
            g.alt_m = 0.0;  // CO lines carry no altitude
            return {TrackSample{random_id(rng), t(rng), g, static_cast<double>(ppm(rng)) / 100.0}, offset};
        }
        default: {
            std::uniform_int_distribution<std::size_t> n(8, 64);
            std::uniform_int_distribution<std::int64_t> dt(1, 1000);
            std::uniform_int_distribution<int> axis(0, 3);
            std::normal_distribution<double> acc(0.0, 9.81);
            AccelWindow w{random_id(rng), t(rng), dt(rng), static_cast<Axis>(axis(rng)), {}};
            w.samples.resize(n(rng));
            for (auto& s : w.samples) s = acc(rng);
            return {w, offset};
        }
    }
}

// ---------------------------------------------------------------------------

/// Fresh, empty directory removed when the object goes away.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("airshower-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace test
