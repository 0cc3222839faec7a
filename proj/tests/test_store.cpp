#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "airshower/store.hpp"
#include "support.hpp"

using namespace airshower;
using namespace airshower::store;

namespace {

constexpr std::int64_t kNow = 1394450000000;  // 2014-03-10

StoreConfig config(const test::TempDir& dir) {
    StoreConfig c;
    c.data_dir = dir.path();
    c.clock = [] { return kNow; };
    c.fsync = false;
    return c;
}

const char* kDev = "SHWR1|DEV|dev1|NEXUS7|12|1.0";
const char* kEv = "SHWR1|EV|dev1|1394450000000|0|50.450100|30.523400|120.0|3";

}  // namespace

TEST(LogFileName, UtcDay) {
    EXPECT_EQ(log_file_name(kNow), "events-20140310.log");
    EXPECT_EQ(log_file_name(0), "events-19700101.log");
}

TEST(Ingest, DeviceThenEvent) {
    test::TempDir dir("store");
    EventStore st(config(dir));
    const auto r = st.ingest_lines(std::string(kDev) + "\n" + kEv + "\n");
    EXPECT_EQ(r.accepted, 2u);
    EXPECT_TRUE(r.rejected.empty());
    EXPECT_EQ(st.snapshot()->event_count(), 1u);
    EXPECT_EQ(r.to_json(), nlohmann::json::parse(R"({"accepted":2,"rejected":[]})"));
}

TEST(Ingest, UnknownDevice) {
    test::TempDir dir("store");
    EventStore st(config(dir));
    const auto r = st.ingest_lines(kEv);
    EXPECT_EQ(r.accepted, 0u);
    ASSERT_EQ(r.rejected.size(), 1u);
    EXPECT_EQ(r.rejected[0].line_no, 1u);
    EXPECT_EQ(r.rejected[0].code, Errc::UnknownDevice);
    // nothing written
    EXPECT_FALSE(std::filesystem::exists(dir.path() / log_file_name(kNow)));
}

TEST(Ingest, MalformedMiddleLineIsIndependent) {
    test::TempDir dir("store");
    EventStore st(config(dir));
    const auto r = st.ingest_lines(std::string(kDev) + "\nSHWR1|EV|dev1|garbage\n" + kEv);
    EXPECT_EQ(r.accepted, 2u);
    ASSERT_EQ(r.rejected.size(), 1u);
    EXPECT_EQ(r.rejected[0].line_no, 2u);
    const auto j = r.to_json();
    EXPECT_EQ(j["rejected"][0]["line"], 2);
    EXPECT_EQ(j["rejected"][0]["error"], "BadFieldCount");
}

TEST(Ingest, EmptyLineInsidePayloadRejected) {
    test::TempDir dir("store");
    EventStore st(config(dir));
    const auto r = st.ingest_lines(std::string(kDev) + "\n\n" + kEv + "\n");
    EXPECT_EQ(r.accepted, 2u);
    ASSERT_EQ(r.rejected.size(), 1u);
    EXPECT_EQ(r.rejected[0].code, Errc::BadMagic);
}

TEST(Ingest, OffsetIsAppliedBeforeStoring) {
    test::TempDir dir("store");
    EventStore st(config(dir));
    st.ingest_lines(std::string(kDev) + "\nSHWR1|EV|dev1|1000|98|50.450100|30.523400|120.0|3\n");
    EXPECT_EQ(st.snapshot()->events().at(0).t_utc_ms, 1098);
    std::ifstream in(dir.path() / log_file_name(kNow));
    std::string a, b;
    std::getline(in, a);
    std::getline(in, b);
    EXPECT_EQ(b, "SHWR1|EV|dev1|1098|0|50.450100|30.523400|120.0|3");
}

TEST(Ingest, TimeOutsideAcceptedRange) {
    test::TempDir dir("store");
    auto cfg = config(dir);
    cfg.t_min_ms = 2000;
    EventStore st(cfg);
    const auto r = st.ingest_lines(std::string(kDev) + "\nSHWR1|EV|dev1|1000|0|50.450100|30.523400|120.0|3\n");
    ASSERT_EQ(r.rejected.size(), 1u);
    EXPECT_EQ(r.rejected[0].code, Errc::BadFieldValue);
}

TEST(Ingest, SnapshotsAreImmutable) {
    test::TempDir dir("store");
    EventStore st(config(dir));
    st.ingest_lines(kDev);
    const auto before = st.snapshot();
    st.ingest_lines(kEv);
    EXPECT_EQ(before->event_count(), 0u);
    EXPECT_EQ(st.snapshot()->event_count(), 1u);
}

TEST(Ingest, StorageFailureAcceptsNothing) {
    test::TempDir dir("store");
    EventStore st(config(dir));
    // a directory where the log file should be makes open() fail
    std::filesystem::create_directory(dir.path() / log_file_name(kNow));
    try {
        st.ingest_lines(std::string(kDev) + "\n" + kEv);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::StorageFailure);
    }
    EXPECT_TRUE(st.snapshot()->devices.empty());
    EXPECT_EQ(st.snapshot()->event_count(), 0u);
}

TEST(Replay, EmptyDirectory) {
    test::TempDir dir("store");
    EventStore st(config(dir));
    EXPECT_TRUE(st.snapshot()->devices.empty());
    EXPECT_EQ(st.snapshot()->event_count(), 0u);
    EXPECT_TRUE(st.replay_warnings().empty());
}

TEST(Replay, RestartReproducesContents) {
    test::TempDir dir("store");
    std::mt19937_64 rng(8);
    std::string payload = std::string(kDev) + "\nSHWR1|DEV|dev2|SIII|80|1.5\n";
    for (int i = 0; i < 200; ++i) {
        auto r = test::random_record(rng);
        std::visit(
            [&](auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (!std::is_same_v<T, DeviceProfile>) v.device_id = i % 2 ? "dev1" : "dev2";
            },
            r.record);
        if (std::holds_alternative<DeviceProfile>(r.record)) continue;
        payload += encode_record(r) + "\n";
    }
    std::shared_ptr<const Snapshot> first;
    {
        EventStore st(config(dir));
        st.ingest_lines(payload);
        first = st.snapshot();
    }
    EventStore again(config(dir));
    EXPECT_TRUE(again.snapshot()->same_contents(*first));
    EXPECT_TRUE(again.replay_warnings().empty());
}

TEST(Replay, CorruptLineSkippedWithWarning) {
    test::TempDir dir("store");
    {
        std::ofstream out(dir.path() / "events-20140310.log");
        out << kDev << "\n";
        for (int i = 0; i < 99; ++i) {
            if (i == 40) out << "SHWR1|EV|dev1|12|0|50.45|30.5|0.0|1\n";
            out << "SHWR1|EV|dev1|" << (kNow + i) << "|0|50.450100|30.523400|120.0|3\n";
        }
    }
    EventStore st(config(dir));
    EXPECT_EQ(st.snapshot()->event_count(), 99u);
    ASSERT_EQ(st.replay_warnings().size(), 1u);
    EXPECT_EQ(st.replay_warnings()[0].line_no, 42u);
    EXPECT_NE(st.replay_warnings()[0].detail.find("CorruptLine"), std::string::npos);
}

TEST(Replay, IgnoresUnrelatedFilesAndReadsInDayOrder) {
    test::TempDir dir("store");
    {
        std::ofstream(dir.path() / "events-20140311.log") << "SHWR1|EV|dev1|5|0|50.450100|30.523400|120.0|3\n";
        std::ofstream(dir.path() / "events-20140310.log") << kDev << "\n";
        std::ofstream(dir.path() / "notes.txt") << "not a log\n";
    }
    EventStore st(config(dir));
    EXPECT_EQ(st.snapshot()->event_count(), 1u);
    EXPECT_TRUE(st.replay_warnings().empty());
}

TEST(Ingest, ConcurrentWritersAllLand) {
    test::TempDir dir("store");
    {
        EventStore st(config(dir));
        st.ingest_lines(kDev);
        std::vector<std::thread> threads;
        for (int t = 0; t < 8; ++t)
            threads.emplace_back([&, t] {
                for (int i = 0; i < 50; ++i)
                    st.ingest_lines("SHWR1|EV|dev1|" + std::to_string(kNow + t * 1000 + i) +
                                    "|0|50.450100|30.523400|120.0|1\n");
            });
        for (auto& th : threads) th.join();
        EXPECT_EQ(st.snapshot()->event_count(), 400u);
    }
    EventStore again(config(dir));
    EXPECT_EQ(again.snapshot()->event_count(), 400u);
}
