#pragma once
/// @file timesync.hpp
/// Two-message clock offset estimation (minimum round-trip selection) and
/// local-to-UTC timestamp normalization.

#include <cstdint>
#include <limits>
#include <span>

#include "airshower/error.hpp"

namespace airshower::timesync {

/// One request/response exchange. t1/t4 on the device clock, t2/t3 on the
/// reference clock, all in milliseconds.
struct SyncExchange {
    std::int64_t t1 = 0;
    std::int64_t t2 = 0;
    std::int64_t t3 = 0;
    std::int64_t t4 = 0;

    /// θ doubled, to stay exact in integers.
    constexpr std::int64_t offset_x2() const noexcept { return (t2 - t1) + (t3 - t4); }
    constexpr std::int64_t rtt() const noexcept { return (t4 - t1) - (t3 - t2); }
};

struct OffsetEstimate {
    std::int64_t offset_ms = 0;
    std::int64_t rtt_ms = 0;
    friend bool operator==(const OffsetEstimate&, const OffsetEstimate&) = default;
};

/// Halves an integer, rounding .5 away from zero.
constexpr std::int64_t half_round_away(std::int64_t twice) noexcept {
    return twice >= 0 ? (twice + 1) / 2 : -((-twice + 1) / 2);
}

/// Offset of the minimum-RTT exchange; ties go to the earliest t1.
inline OffsetEstimate estimate_offset(std::span<const SyncExchange> exchanges) {
    if (exchanges.empty()) throw Error(Errc::EmptyInput, "no sync exchanges");
    const SyncExchange* best = nullptr;
    for (const auto& e : exchanges) {
        if (e.rtt() < 0) throw Error(Errc::NegativeRtt, "round trip " + std::to_string(e.rtt()) + " ms < 0");
        if (!best || e.rtt() < best->rtt() || (e.rtt() == best->rtt() && e.t1 < best->t1)) best = &e;
    }
    return {half_round_away(best->offset_x2()), best->rtt()};
}

/// t_local + offset, saturating at the int64 range.
constexpr std::int64_t normalize(std::int64_t t_local_ms, std::int64_t offset_ms) noexcept {
    std::int64_t out = 0;
    if (__builtin_add_overflow(t_local_ms, offset_ms, &out))
        return offset_ms > 0 ? std::numeric_limits<std::int64_t>::max() : std::numeric_limits<std::int64_t>::min();
    return out;
}

}  // namespace airshower::timesync
