#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "airshower/flashdetect.hpp"
#include "support.hpp"

using namespace airshower;
using namespace airshower::flash;

namespace {

Frame blank(int w, int h) { return {w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 0), 0}; }

void set(Frame& f, int x, int y, std::uint8_t v) { f.luma[static_cast<std::size_t>(y) * f.width + x] = v; }

}  // namespace

TEST(HotPixelMask, PersistentPixelExcluded) {
    std::vector<Frame> frames(10, blank(4, 4));
    for (auto& f : frames) set(f, 0, 0, 255);
    const auto mask = build_hot_pixel_mask(frames, 40, 0.5);
    EXPECT_TRUE(mask.masked(0, 0));
    EXPECT_EQ(mask.count(), 1u);
}

TEST(HotPixelMask, DarkFramesGiveEmptyMask) {
    std::vector<Frame> frames(10, blank(4, 4));
    EXPECT_EQ(build_hot_pixel_mask(frames).count(), 0u);
}

TEST(HotPixelMask, OccupancyIsStrict) {
    std::vector<Frame> frames(10, blank(4, 4));
    for (int i = 0; i < 5; ++i) set(frames[i], 2, 1, 200);
    for (int i = 0; i < 6; ++i) set(frames[i], 3, 3, 200);
    const auto mask = build_hot_pixel_mask(frames, 40, 0.5);
    EXPECT_FALSE(mask.masked(2, 1));
    EXPECT_TRUE(mask.masked(3, 3));
}

TEST(HotPixelMask, Errors) {
    std::vector<Frame> few(9, blank(4, 4));
    EXPECT_THROW(build_hot_pixel_mask(few), Error);
    std::vector<Frame> mixed(10, blank(4, 4));
    mixed[3] = blank(5, 4);
    try {
        build_hot_pixel_mask(mixed);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DimensionMismatch);
    }
    try {
        build_hot_pixel_mask(few);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::TooFewFrames);
    }
}

TEST(ExtractFlashes, SinglePixel) {
    Frame f = blank(3, 3);
    set(f, 1, 1, 200);
    const auto c = extract_flashes(f, HotPixelMask::empty(3, 3), 40);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0], (Cluster{1, 1.0, 1.0}));
}

TEST(ExtractFlashes, DiagonalsJoin) {
    Frame f = blank(3, 3);
    set(f, 0, 0, 100);
    set(f, 1, 1, 100);
    const auto c = extract_flashes(f, HotPixelMask::empty(3, 3), 40);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].size, 2);
    EXPECT_DOUBLE_EQ(c[0].cx, 0.5);
}

TEST(ExtractFlashes, DarkFrameIsEmpty) {
    EXPECT_TRUE(extract_flashes(blank(8, 8), HotPixelMask::empty(8, 8)).empty());
}

TEST(ExtractFlashes, ThresholdIsInclusive) {
    Frame f = blank(3, 1);
    set(f, 0, 0, 40);
    set(f, 2, 0, 39);
    const auto c = extract_flashes(f, HotPixelMask::empty(3, 1), 40);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].cx, 0.0);
}

TEST(ExtractFlashes, OrderedByMinimumPixelIndex) {
    Frame f = blank(5, 3);
    set(f, 4, 0, 90);  // index 4
    set(f, 3, 1, 90);  // joins the first via diagonal
    set(f, 0, 1, 90);  // index 5, separate
    const auto c = extract_flashes(f, HotPixelMask::empty(5, 3), 40);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].size, 2);
    EXPECT_EQ(c[1].size, 1);
    EXPECT_EQ(c[1].cx, 0.0);
}

TEST(ExtractFlashes, MaskedPixelsSplitClusters) {
    Frame f = blank(3, 1);
    for (int x = 0; x < 3; ++x) set(f, x, 0, 255);
    auto mask = HotPixelMask::empty(3, 1);
    mask.excluded[1] = true;
    const auto c = extract_flashes(f, mask);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].size + c[1].size, 2);
}

TEST(ExtractFlashes, DimensionMismatch) {
    EXPECT_THROW(extract_flashes(blank(3, 3), HotPixelMask::empty(4, 3)), Error);
    Frame bad = blank(3, 3);
    bad.luma.pop_back();
    EXPECT_THROW(extract_flashes(bad, HotPixelMask::empty(3, 3)), Error);
}

TEST(ExtractFlashes, MatchesFloodFillOracle) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> dim(1, 64), luma(0, 255), coin(0, 99);
    for (int trial = 0; trial < 200; ++trial) {
        const int w = dim(rng), h = dim(rng);
        const int density = coin(rng);
        Frame f = blank(w, h);
        for (auto& v : f.luma) v = coin(rng) < density ? static_cast<std::uint8_t>(luma(rng)) : 0;
        auto mask = HotPixelMask::empty(w, h);
        for (std::size_t i = 0; i < mask.excluded.size(); ++i) mask.excluded[i] = coin(rng) < 5;
        const int threshold = 1 + coin(rng) * 2;

        const auto got = extract_flashes(f, mask, threshold);
        std::vector<test::OracleBlob> got_blobs;
        std::int64_t total = 0;
        for (const auto& c : got) {
            got_blobs.push_back({c.size, c.cx, c.cy});
            total += c.size;
        }
        std::sort(got_blobs.begin(), got_blobs.end());
        ASSERT_EQ(got_blobs, test::flood_fill_oracle(f, mask, threshold)) << "trial " << trial;

        std::int64_t bright = 0;
        for (std::size_t i = 0; i < f.luma.size(); ++i) bright += f.luma[i] >= threshold && !mask.excluded[i];
        ASSERT_EQ(total, bright);
    }
}

TEST(Pgm, ReadWriteRoundTrip) {
    Frame f = blank(7, 5);
    for (std::size_t i = 0; i < f.luma.size(); ++i) f.luma[i] = static_cast<std::uint8_t>(i * 7);
    std::stringstream ss;
    write_pgm(ss, f);
    const Frame back = read_pgm(ss, 42);
    EXPECT_EQ(back.width, 7);
    EXPECT_EQ(back.height, 5);
    EXPECT_EQ(back.luma, f.luma);
    EXPECT_EQ(back.t_utc_ms, 42);
}

TEST(Pgm, HeaderCommentsAndErrors) {
    std::stringstream ok("P5\n# shielded camera\n2 1\n255\n\x10\xff");
    EXPECT_EQ(read_pgm(ok).luma, (std::vector<std::uint8_t>{0x10, 0xff}));
    std::stringstream p2("P2\n2 1\n255\n0 0");
    EXPECT_THROW(read_pgm(p2), Error);
    std::stringstream maxval("P5\n2 1\n65535\n\x10\xff");
    EXPECT_THROW(read_pgm(maxval), Error);
    std::stringstream truncated("P5\n4 4\n255\n\x10");
    EXPECT_THROW(read_pgm(truncated), Error);
}
