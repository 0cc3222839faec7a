#pragma once
/// @file flashdetect.hpp
/// Flash extraction from light-shielded camera frames: luma threshold,
/// hot-pixel suppression and 8-connected bright-pixel clustering.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "airshower/error.hpp"

namespace airshower::flash {

inline constexpr int kDefaultThreshold = 40;
inline constexpr double kDefaultOccupancy = 0.5;
inline constexpr std::size_t kMinMaskFrames = 10;

struct Frame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> luma;  // row-major
    std::int64_t t_utc_ms = 0;

    std::uint8_t at(int x, int y) const { return luma[static_cast<std::size_t>(y) * width + x]; }
    bool valid() const noexcept {
        return width > 0 && height > 0 && luma.size() == static_cast<std::size_t>(width) * height;
    }
};

struct HotPixelMask {
    int width = 0;
    int height = 0;
    std::vector<bool> excluded;  // row-major, same size as the frames

    static HotPixelMask empty(int w, int h) {
        return {w, h, std::vector<bool>(static_cast<std::size_t>(w) * h, false)};
    }
    bool masked(int x, int y) const { return excluded[static_cast<std::size_t>(y) * width + x]; }
    std::size_t count() const {
        std::size_t n = 0;
        for (bool b : excluded) n += b;
        return n;
    }
};

struct Cluster {
    std::int64_t size = 0;  // pixel count, the flash magnitude
    double cx = 0.0;
    double cy = 0.0;
    friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Pixels at or above `threshold` in strictly more than `occupancy` of the frames.
inline HotPixelMask build_hot_pixel_mask(std::span<const Frame> frames, int threshold = kDefaultThreshold,
                                         double occupancy = kDefaultOccupancy) {
    if (frames.size() < kMinMaskFrames)
        throw Error(Errc::TooFewFrames, "need at least 10 frames, got " + std::to_string(frames.size()));
    const int w = frames.front().width;
    const int h = frames.front().height;
    for (const auto& f : frames)
        if (!f.valid() || f.width != w || f.height != h) throw Error(Errc::DimensionMismatch, "frame sizes differ");

    std::vector<std::size_t> hits(static_cast<std::size_t>(w) * h, 0);
    for (const auto& f : frames)
        for (std::size_t i = 0; i < hits.size(); ++i) hits[i] += f.luma[i] >= threshold;

    HotPixelMask mask = HotPixelMask::empty(w, h);
    const double n = static_cast<double>(frames.size());
    for (std::size_t i = 0; i < hits.size(); ++i) mask.excluded[i] = static_cast<double>(hits[i]) / n > occupancy;
    return mask;
}

/// Connected components of unmasked pixels >= threshold, ordered by each
/// component's smallest row-major pixel index.
inline std::vector<Cluster> extract_flashes(const Frame& frame, const HotPixelMask& mask,
                                            int threshold = kDefaultThreshold) {
    if (!frame.valid()) throw Error(Errc::DimensionMismatch, "luma size does not match width*height");
    if (mask.width != frame.width || mask.height != frame.height)
        throw Error(Errc::DimensionMismatch, "mask and frame sizes differ");

    const int w = frame.width;
    const int h = frame.height;
    std::vector<bool> seen(frame.luma.size(), false);
    const auto bright = [&](int x, int y) { return frame.at(x, y) >= threshold && !mask.masked(x, y); };

    std::vector<Cluster> out;
    std::vector<std::pair<int, int>> stack;
    // Row-major scan: the first pixel reached of each component is its minimum index.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            if (seen[idx] || !bright(x, y)) continue;
            Cluster c;
            double sx = 0.0, sy = 0.0;
            seen[idx] = true;
            stack.assign(1, {x, y});
            while (!stack.empty()) {
                auto [px, py] = stack.back();
                stack.pop_back();
                ++c.size;
                sx += px;
                sy += py;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = px + dx, ny = py + dy;
                        if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
                        if (!seen[n] && bright(nx, ny)) {
                            seen[n] = true;
                            stack.emplace_back(nx, ny);
                        }
                    }
                }
            }
            c.cx = sx / static_cast<double>(c.size);
            c.cy = sy / static_cast<double>(c.size);
            out.push_back(c);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// PGM (P5, maxval 255)

inline Frame read_pgm(std::istream& in, std::int64_t t_utc_ms = 0) {
    const auto token = [&in]() {
        std::string tok;
        char c = 0;
        while (in.get(c)) {
            if (c == '#') {
                std::string skip;
                std::getline(in, skip);
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!tok.empty()) break;
                continue;
            }
            tok += c;
        }
        return tok;
    };
    if (token() != "P5") throw Error(Errc::BadParameter, "not a binary PGM (P5) file");
    Frame f;
    f.t_utc_ms = t_utc_ms;
    try {
        f.width = std::stoi(token());
        f.height = std::stoi(token());
        if (std::stoi(token()) != 255) throw Error(Errc::BadParameter, "PGM maxval must be 255");
    } catch (const std::logic_error&) {
        throw Error(Errc::BadParameter, "malformed PGM header");
    }
    if (f.width <= 0 || f.height <= 0) throw Error(Errc::DimensionMismatch, "PGM dimensions must be positive");
    f.luma.resize(static_cast<std::size_t>(f.width) * f.height);
    in.read(reinterpret_cast<char*>(f.luma.data()), static_cast<std::streamsize>(f.luma.size()));
    if (static_cast<std::size_t>(in.gcount()) != f.luma.size())
        throw Error(Errc::BadParameter, "PGM pixel data truncated");
    return f;
}

inline Frame read_pgm_file(const std::string& path, std::int64_t t_utc_ms = 0) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::BadParameter, "cannot open " + path);
    return read_pgm(in, t_utc_ms);
}

inline void write_pgm(std::ostream& out, const Frame& f) {
    out << "P5\n" << f.width << ' ' << f.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(f.luma.data()), static_cast<std::streamsize>(f.luma.size()));
}

}  // namespace airshower::flash
