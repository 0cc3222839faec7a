#pragma once
/// @file activity.hpp
/// Accelerometer window moments and nearest-centroid activity classes.

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "airshower/core_model.hpp"
#include "airshower/error.hpp"

namespace airshower::activity {

enum class ActivityClass { Passive = 0, Moderate = 1, Active = 2 };
inline constexpr std::array<ActivityClass, 3> kClasses{ActivityClass::Passive, ActivityClass::Moderate,
                                                       ActivityClass::Active};

constexpr std::string_view to_string(ActivityClass c) noexcept {
    switch (c) {
        case ActivityClass::Passive: return "passive";
        case ActivityClass::Moderate: return "moderate";
        case ActivityClass::Active: return "active";
    }
    return "passive";
}

inline std::optional<ActivityClass> parse_class(std::string_view s) noexcept {
    for (auto c : kClasses)
        if (to_string(c) == s) return c;
    return std::nullopt;
}

/// Population moments: std = sqrt(m2), skewness = m3/m2^1.5,
/// kurtosis_excess = m4/m2^2 - 3.
struct MomentVector {
    double mean = 0.0;
    double std = 0.0;
    double skewness = 0.0;
    double kurtosis_excess = 0.0;

    std::array<double, 3> features() const noexcept { return {std, skewness, kurtosis_excess}; }
};

inline MomentVector compute_moments(std::span<const double> samples) {
    if (samples.size() < kMinAccelSamples)
        throw Error(Errc::TooFewSamples, "need at least 8 samples, got " + std::to_string(samples.size()));
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : samples) {
        const double d = x - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) throw Error(Errc::ZeroVariance, "all samples are equal");
    return {mean, std::sqrt(m2), m3 / (m2 * std::sqrt(m2)), m4 / (m2 * m2) - 3.0};
}

inline MomentVector compute_moments(const AccelWindow& window) { return compute_moments(window.samples); }

struct LabeledMoments {
    MomentVector moments;
    ActivityClass label = ActivityClass::Passive;
};

/// z-normalization over (std, skewness, kurtosis_excess) plus one centroid
/// per class in normalized space.
struct ActivityModel {
    std::array<double, 3> norm_mean{};
    std::array<double, 3> norm_std{1.0, 1.0, 1.0};
    std::array<std::array<double, 3>, 3> centroids{};  // indexed by ActivityClass

    std::array<double, 3> normalize(const MomentVector& v) const noexcept {
        const auto f = v.features();
        return {(f[0] - norm_mean[0]) / norm_std[0], (f[1] - norm_mean[1]) / norm_std[1],
                (f[2] - norm_mean[2]) / norm_std[2]};
    }
    const std::array<double, 3>& centroid(ActivityClass c) const { return centroids[static_cast<std::size_t>(c)]; }
};

inline ActivityModel train_model(std::span<const LabeledMoments> labeled) {
    std::array<std::size_t, 3> per_class{};
    for (const auto& s : labeled) ++per_class[static_cast<std::size_t>(s.label)];
    for (auto c : kClasses)
        if (per_class[static_cast<std::size_t>(c)] == 0)
            throw Error(Errc::MissingClass, "no samples for class " + std::string(to_string(c)));

    ActivityModel m;
    const double n = static_cast<double>(labeled.size());
    static constexpr std::array<const char*, 3> names{"std", "skewness", "kurtosis_excess"};
    for (std::size_t k = 0; k < 3; ++k) {
        double mean = 0.0;
        for (const auto& s : labeled) mean += s.moments.features()[k];
        mean /= n;
        double var = 0.0;
        for (const auto& s : labeled) {
            const double d = s.moments.features()[k] - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / n);
        if (!(sd > 0.0) || !std::isfinite(sd)) throw Error(Errc::DegenerateFeature, "zero spread", names[k]);
        m.norm_mean[k] = mean;
        m.norm_std[k] = sd;
    }
    for (const auto& s : labeled) {
        const auto z = m.normalize(s.moments);
        auto& c = m.centroids[static_cast<std::size_t>(s.label)];
        for (std::size_t k = 0; k < 3; ++k) c[k] += z[k];
    }
    for (std::size_t c = 0; c < 3; ++c)
        for (auto& v : m.centroids[c]) v /= static_cast<double>(per_class[c]);
    return m;
}

/// Nearest centroid; ties go to the lower class (passive < moderate < active).
inline ActivityClass classify(const ActivityModel& model, const MomentVector& v) {
    const auto z = model.normalize(v);
    ActivityClass best = ActivityClass::Passive;
    double best_d = std::numeric_limits<double>::infinity();
    for (auto c : kClasses) {
        const auto& ctr = model.centroid(c);
        double d = 0.0;
        for (std::size_t k = 0; k < 3; ++k) d += (z[k] - ctr[k]) * (z[k] - ctr[k]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

// `{norm:{mean:[3],std:[3]}, centroids:{passive:[3],moderate:[3],active:[3]}}`

inline nlohmann::json to_json(const ActivityModel& m) {
    nlohmann::json j;
    j["norm"] = {{"mean", m.norm_mean}, {"std", m.norm_std}};
    for (auto c : kClasses) j["centroids"][std::string(to_string(c))] = m.centroid(c);
    return j;
}

inline ActivityModel model_from_json(const nlohmann::json& j) {
    ActivityModel m;
    try {
        m.norm_mean = j.at("norm").at("mean").get<std::array<double, 3>>();
        m.norm_std = j.at("norm").at("std").get<std::array<double, 3>>();
        for (auto c : kClasses)
            m.centroids[static_cast<std::size_t>(c)] =
                j.at("centroids").at(std::string(to_string(c))).get<std::array<double, 3>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::BadParameter, std::string("malformed activity model: ") + e.what());
    }
    for (double s : m.norm_std)
        if (!(s > 0.0)) throw Error(Errc::BadParameter, "normalization std must be positive");
    return m;
}

}  // namespace airshower::activity
