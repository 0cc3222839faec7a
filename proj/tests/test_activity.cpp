#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "airshower/activity.hpp"
#include "support.hpp"

using namespace airshower;
using namespace airshower::activity;

namespace {

MomentVector mv(double sd, double sk, double ku) { return {0.0, sd, sk, ku}; }

Errc code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::BadParameter;
}

}  // namespace

TEST(Moments, TwoPointDistribution) {
    const std::vector<double> x{-1, 1, -1, 1, -1, 1, -1, 1};
    const auto m = compute_moments(x);
    EXPECT_EQ(m.mean, 0.0);
    EXPECT_EQ(m.std, 1.0);
    EXPECT_EQ(m.skewness, 0.0);
    EXPECT_EQ(m.kurtosis_excess, -2.0);
}

TEST(Moments, SingleOutlierAgainstOracle) {
    const std::vector<double> x{0, 0, 0, 0, 0, 0, 0, 1};
    const auto m = compute_moments(x);
    const auto o = test::moments_oracle(x);
    // definitional value is 6/sqrt(7)
    EXPECT_NEAR(o[2], 2.2677868380553634, 1e-15);
    EXPECT_NEAR(m.skewness, o[2], 1e-12);
    EXPECT_NEAR(m.kurtosis_excess, o[3], 1e-12);
    EXPECT_NEAR(m.kurtosis_excess, 22.0 / 7.0, 1e-12);
}

TEST(Moments, Errors) {
    EXPECT_EQ(code_of([] { compute_moments(std::vector<double>(8, 3.0)); }), Errc::ZeroVariance);
    EXPECT_EQ(code_of([] { compute_moments(std::vector<double>{1, 2, 3, 4, 5, 6, 7}); }), Errc::TooFewSamples);
}

TEST(Moments, AffineAndReflection) {
    std::mt19937_64 rng(2);
    std::gamma_distribution<double> g(2.0, 1.5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(64);
        for (auto& v : x) v = g(rng);
        const auto base = compute_moments(x);
        std::vector<double> y(x.size()), z(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            y[i] = 3.5 * x[i] - 7.25;
            z[i] = -x[i];
        }
        const auto ay = compute_moments(y), az = compute_moments(z);
        EXPECT_LE(test::rel_err(ay.skewness, base.skewness, 1e-3), 1e-9);
        EXPECT_LE(test::rel_err(ay.kurtosis_excess, base.kurtosis_excess, 1e-3), 1e-9);
        EXPECT_LE(test::rel_err(ay.std, 3.5 * base.std), 1e-12);
        EXPECT_LE(test::rel_err(az.skewness, -base.skewness, 1e-3), 1e-12);
        EXPECT_LE(test::rel_err(az.kurtosis_excess, base.kurtosis_excess, 1e-3), 1e-12);
    }
}

TEST(TrainModel, SinglePointPerClass) {
    const std::vector<LabeledMoments> l{
        {mv(0.1, 0.0, 0.0), ActivityClass::Passive},
        {mv(1.0, 0.5, 1.0), ActivityClass::Moderate},
        {mv(4.0, 1.0, 5.0), ActivityClass::Active},
    };
    const auto m = train_model(l);
    for (const auto& s : l) {
        const auto z = m.normalize(s.moments);
        for (std::size_t k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(m.centroid(s.label)[k], z[k]);
    }
}

TEST(TrainModel, WellSeparatedClusters) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<LabeledMoments> l;
    const std::array<std::array<double, 3>, 3> centers{{{0.2, 0.0, -0.5}, {1.5, 0.4, 0.5}, {5.0, 1.2, 3.0}}};
    for (int i = 0; i < 60; ++i)
        for (std::size_t c = 0; c < 3; ++c)
            l.push_back({mv(centers[c][0] + noise(rng), centers[c][1] + noise(rng), centers[c][2] + noise(rng)),
                         kClasses[c]});
    const auto m = train_model(l);
    for (std::size_t c = 0; c < 3; ++c) {
        // the centroid lies inside the per-feature range of its own cluster
        for (std::size_t k = 0; k < 3; ++k) {
            double lo = 1e300, hi = -1e300;
            for (const auto& s : l)
                if (s.label == kClasses[c]) {
                    lo = std::min(lo, m.normalize(s.moments)[k]);
                    hi = std::max(hi, m.normalize(s.moments)[k]);
                }
            EXPECT_GE(m.centroids[c][k], lo);
            EXPECT_LE(m.centroids[c][k], hi);
        }
    }
    for (const auto& s : l) EXPECT_EQ(classify(m, s.moments), s.label);
}

TEST(TrainModel, Errors) {
    const std::vector<LabeledMoments> two{{mv(0.1, 0.0, 0.0), ActivityClass::Passive},
                                          {mv(1.0, 0.5, 1.0), ActivityClass::Moderate}};
    EXPECT_EQ(code_of([&] { train_model(two); }), Errc::MissingClass);
    const std::vector<LabeledMoments> flat{{mv(0.1, 0.3, 0.0), ActivityClass::Passive},
                                           {mv(1.0, 0.3, 1.0), ActivityClass::Moderate},
                                           {mv(4.0, 0.3, 5.0), ActivityClass::Active}};
    try {
        train_model(flat);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DegenerateFeature);
        EXPECT_EQ(e.field(), "skewness");
    }
}

TEST(Classify, AtCentroidAndTies) {
    ActivityModel m;
    m.centroids = {{{0.0, 0.0, 0.0}, {2.0, 0.0, 0.0}, {10.0, 10.0, 10.0}}};
    EXPECT_EQ(classify(m, mv(10.0, 10.0, 10.0)), ActivityClass::Active);
    EXPECT_EQ(classify(m, mv(1.0, 0.0, 0.0)), ActivityClass::Passive);
    EXPECT_EQ(classify(m, mv(1.0000001, 0.0, 0.0)), ActivityClass::Moderate);
}

TEST(Classify, ShiftInvariant) {
    const std::vector<LabeledMoments> l{
        {mv(0.1, 0.0, 0.0), ActivityClass::Passive},
        {mv(1.0, 0.5, 1.0), ActivityClass::Moderate},
        {mv(4.0, 1.0, 5.0), ActivityClass::Active},
    };
    const auto m = train_model(l);
    std::mt19937_64 rng(9);
    std::exponential_distribution<double> e(1.0);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> x(32), y(32);
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k] = e(rng) * (1 + i % 5);
            y[k] = x[k] + 9.81;
        }
        EXPECT_EQ(classify(m, compute_moments(x)), classify(m, compute_moments(y)));
    }
}

TEST(ModelJson, RoundTrip) {
    const std::vector<LabeledMoments> l{
        {mv(0.1, 0.0, 0.0), ActivityClass::Passive},
        {mv(1.0, 0.5, 1.0), ActivityClass::Moderate},
        {mv(4.0, 1.0, 5.0), ActivityClass::Active},
    };
    const auto m = train_model(l);
    const auto back = model_from_json(nlohmann::json::parse(to_json(m).dump()));
    EXPECT_EQ(back.norm_mean, m.norm_mean);
    EXPECT_EQ(back.norm_std, m.norm_std);
    EXPECT_EQ(back.centroids, m.centroids);
    EXPECT_THROW(model_from_json(nlohmann::json::parse(R"({"norm":{}})")), Error);
}
