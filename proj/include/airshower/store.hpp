#pragma once
/// @file store.hpp
/// Append-only event store. Accepted records are normalized to UTC and
/// written as canonical lines to daily logs (`events-YYYYMMDD.log`) before
/// they are acknowledged; replaying the directory rebuilds the store.
///
/// Writers are serialized. Readers take an immutable Snapshot; a payload's
/// accepted records are published to readers in one step.

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "airshower/core_model.hpp"
#include "airshower/error.hpp"

namespace airshower::store {

/// Milliseconds since the Unix epoch.
using Clock = std::function<std::int64_t()>;

inline std::int64_t system_now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

struct StoreConfig {
    std::filesystem::path data_dir;
    /// Accepted UTC time range, [t_min_ms, t_max_ms).
    std::int64_t t_min_ms = 0;
    std::int64_t t_max_ms = 4102444800000;  // 2100-01-01
    /// Picks the daily log file an append goes to.
    Clock clock = system_now_ms;
    bool fsync = true;
};

inline std::string log_file_name(std::int64_t now_ms) {
    const std::time_t secs = static_cast<std::time_t>(now_ms / 1000);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "events-%Y%m%d.log", &tm);
    return buf;
}

/// Records accepted from one payload (or one replayed file).
struct Batch {
    std::vector<FlashEvent> events;
    std::vector<TrackSample> tracks;
    std::vector<AccelWindow> windows;
};

/// Immutable view of the store contents.
class Snapshot {
public:
    std::map<std::string, DeviceProfile> devices;
    std::vector<std::shared_ptr<const Batch>> batches;
    std::size_t accepted_total = 0;
    std::size_t rejected_total = 0;

    bool has_device(const std::string& id) const { return devices.count(id) != 0; }

    std::size_t event_count() const {
        std::size_t n = 0;
        for (const auto& b : batches) n += b->events.size();
        return n;
    }

    /// All flash events in insertion order.
    std::vector<FlashEvent> events() const {
        std::vector<FlashEvent> out;
        out.reserve(event_count());
        for (const auto& b : batches) out.insert(out.end(), b->events.begin(), b->events.end());
        return out;
    }
    std::vector<TrackSample> tracks() const {
        std::vector<TrackSample> out;
        for (const auto& b : batches) out.insert(out.end(), b->tracks.begin(), b->tracks.end());
        return out;
    }
    std::vector<AccelWindow> windows() const {
        std::vector<AccelWindow> out;
        for (const auto& b : batches) out.insert(out.end(), b->windows.begin(), b->windows.end());
        return out;
    }

    /// One device's events by t_utc, then magnitude, then insertion order.
    std::vector<FlashEvent> events_for(const std::string& device_id) const {
        std::vector<FlashEvent> out;
        for (const auto& b : batches)
            for (const auto& e : b->events)
                if (e.device_id == device_id) out.push_back(e);
        std::stable_sort(out.begin(), out.end(), [](const FlashEvent& a, const FlashEvent& b) {
            return a.t_utc_ms != b.t_utc_ms ? a.t_utc_ms < b.t_utc_ms : a.magnitude < b.magnitude;
        });
        return out;
    }
    std::vector<TrackSample> tracks_for(const std::string& device_id) const {
        std::vector<TrackSample> out;
        for (const auto& b : batches)
            for (const auto& t : b->tracks)
                if (t.device_id == device_id) out.push_back(t);
        std::stable_sort(out.begin(), out.end(),
                         [](const TrackSample& a, const TrackSample& b) { return a.t_utc_ms < b.t_utc_ms; });
        return out;
    }

    /// Equal devices and equal record sequences, regardless of batching.
    bool same_contents(const Snapshot& o) const {
        return devices == o.devices && events() == o.events() && tracks() == o.tracks() && windows() == o.windows();
    }
};

struct LineRejection {
    std::size_t line_no = 0;  // 1-based
    Errc code = Errc::BadMagic;
    std::string detail;
};

struct IngestReport {
    std::size_t accepted = 0;
    std::vector<LineRejection> rejected;

    nlohmann::json to_json() const {
        auto rej = nlohmann::json::array();
        for (const auto& r : rejected)
            rej.push_back({{"line", r.line_no}, {"error", to_string(r.code)}, {"detail", r.detail}});
        return {{"accepted", accepted}, {"rejected", rej}};
    }
};

struct ReplayWarning {
    std::string file;
    std::size_t line_no = 0;
    std::string detail;
};

struct ReplayResult {
    Snapshot snapshot;
    std::vector<ReplayWarning> warnings;
};

namespace detail {

/// Splits a payload into lines, dropping one trailing newline per line.
inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        out.push_back(text.substr(0, nl));
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return out;
}

/// Validates a decoded record against the current registry and range.
/// nullopt when the record is acceptable.
inline std::optional<LineRejection> admit(const WireRecord& w, const std::map<std::string, DeviceProfile>& devices,
                                          const StoreConfig& cfg) {
    if (std::holds_alternative<DeviceProfile>(w.record)) return std::nullopt;
    const std::string& id = device_of(w.record);
    if (devices.count(id) == 0) return LineRejection{0, Errc::UnknownDevice, "device '" + id + "' is not registered"};
    const std::int64_t t = std::visit(
        [](const auto& r) -> std::int64_t {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, AccelWindow>) return r.t0_utc_ms;
            else if constexpr (std::is_same_v<T, DeviceProfile>) return 0;
            else return r.t_utc_ms;
        },
        w.record);
    if (t < cfg.t_min_ms || t >= cfg.t_max_ms)
        return LineRejection{0, Errc::BadFieldValue, "t_utc_ms " + std::to_string(t) + " outside accepted range"};
    return std::nullopt;
}

inline void apply(const Record& r, std::map<std::string, DeviceProfile>& devices, Batch& batch) {
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, DeviceProfile>) devices[v.device_id] = v;
            else if constexpr (std::is_same_v<T, FlashEvent>) batch.events.push_back(v);
            else if constexpr (std::is_same_v<T, TrackSample>) batch.tracks.push_back(v);
            else batch.windows.push_back(v);
        },
        r);
}

/// Appends to one log file at a time; truncates back on a failed write.
class LogWriter {
public:
    LogWriter(std::filesystem::path dir, bool fsync) : dir_(std::move(dir)), fsync_(fsync) {}
    LogWriter(const LogWriter&) = delete;
    LogWriter& operator=(const LogWriter&) = delete;
    ~LogWriter() { close(); }

    void append(const std::string& file_name, std::string_view bytes) {
        if (file_name != current_) {
            close();
            const auto path = dir_ / file_name;
            fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
            if (fd_ < 0) fail("open " + path.string());
            current_ = file_name;
        }
        const off_t before = ::lseek(fd_, 0, SEEK_END);
        if (before < 0) fail("seek");
        std::size_t done = 0;
        while (done < bytes.size()) {
            const ssize_t n = ::write(fd_, bytes.data() + done, bytes.size() - done);
            if (n < 0) {
                if (errno == EINTR) continue;
                rollback(before);
                fail("write");
            }
            done += static_cast<std::size_t>(n);
        }
        if (fsync_ && ::fsync(fd_) != 0) {
            rollback(before);
            fail("fsync");
        }
    }

private:
    [[noreturn]] void fail(const std::string& what) {
        const std::string reason = std::strerror(errno);
        close();
        throw Error(Errc::StorageFailure, what + ": " + reason);
    }
    void rollback(off_t size) {
        if (fd_ >= 0 && ::ftruncate(fd_, size) != 0) {
            // nothing more we can do; the error is reported by the caller
        }
    }
    void close() {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
        current_.clear();
    }

    std::filesystem::path dir_;
    bool fsync_;
    int fd_ = -1;
    std::string current_;
};

}  // namespace detail

/// Rebuilds store contents from the log files of `data_dir`, in lexical
/// file order. Bad lines are skipped and reported as warnings.
inline ReplayResult replay_directory(const std::filesystem::path& data_dir, const StoreConfig& cfg = {}) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(data_dir, ec)) throw Error(Errc::StorageFailure, "not a directory: " + data_dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(data_dir, ec)) {
        const std::string name = entry.path().filename().string();
        const bool dated = name.size() == 19 && name.starts_with("events-") && name.ends_with(".log") &&
                           std::all_of(name.begin() + 7, name.begin() + 15,
                                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
        if (dated && entry.is_regular_file()) files.push_back(entry.path());
    }
    if (ec) throw Error(Errc::StorageFailure, "cannot list " + data_dir.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());

    ReplayResult out;
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(Errc::StorageFailure, "cannot read " + path.string());
        auto batch = std::make_shared<Batch>();
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto warn = [&](std::string detail) {
                out.warnings.push_back({path.filename().string(), line_no, std::move(detail)});
                ++out.snapshot.rejected_total;
            };
            auto res = try_decode_record(line);
            if (auto* err = std::get_if<DecodeError>(&res)) {
                warn(std::string(to_string(Errc::CorruptLine)) + ": " + err->message());
                continue;
            }
            auto& w = std::get<WireRecord>(res);
            if (w.offset_ms != 0) {
                warn(std::string(to_string(Errc::CorruptLine)) + ": logged record is not normalized");
                continue;
            }
            if (auto rej = detail::admit(w, out.snapshot.devices, cfg)) {
                warn(std::string(to_string(Errc::CorruptLine)) + ": " + rej->detail);
                continue;
            }
            detail::apply(w.record, out.snapshot.devices, *batch);
            ++out.snapshot.accepted_total;
        }
        out.snapshot.batches.push_back(std::move(batch));
    }
    return out;
}

class EventStore {
public:
    /// Opens (creating if needed) the data directory and replays it.
    explicit EventStore(StoreConfig cfg) : cfg_(std::move(cfg)), writer_(cfg_.data_dir, cfg_.fsync) {
        std::error_code ec;
        std::filesystem::create_directories(cfg_.data_dir, ec);
        if (ec) throw Error(Errc::StorageFailure, "cannot create " + cfg_.data_dir.string() + ": " + ec.message());
        ReplayResult r = replay_directory(cfg_.data_dir, cfg_);
        warnings_ = std::move(r.warnings);
        snapshot_ = std::make_shared<const Snapshot>(std::move(r.snapshot));
    }

    EventStore(const EventStore&) = delete;
    EventStore& operator=(const EventStore&) = delete;

    std::shared_ptr<const Snapshot> snapshot() const {
        std::lock_guard lock(snapshot_mu_);
        return snapshot_;
    }
    const std::vector<ReplayWarning>& replay_warnings() const noexcept { return warnings_; }
    const StoreConfig& config() const noexcept { return cfg_; }

    /// Decodes each line independently; throws StorageFailure (nothing
    /// accepted) if the log append fails.
    IngestReport ingest_lines(std::string_view payload) {
        std::lock_guard write_lock(write_mu_);
        const auto current = snapshot();

        IngestReport report;
        auto devices = current->devices;
        auto batch = std::make_shared<Batch>();
        std::string log_bytes;
        const auto lines = detail::split_lines(payload);
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const std::size_t line_no = i + 1;
            if (lines[i].empty() && i + 1 == lines.size()) break;
            auto res = try_decode_record(lines[i]);
            if (auto* err = std::get_if<DecodeError>(&res)) {
                report.rejected.push_back({line_no, err->code, err->message()});
                continue;
            }
            const auto& w = std::get<WireRecord>(res);
            if (auto rej = detail::admit(w, devices, cfg_)) {
                rej->line_no = line_no;
                report.rejected.push_back(std::move(*rej));
                continue;
            }
            detail::apply(w.record, devices, *batch);
            log_bytes += encode_record(w.record);
            log_bytes += '\n';
            ++report.accepted;
        }

        if (report.accepted > 0) writer_.append(log_file_name(cfg_.clock()), log_bytes);

        auto next = std::make_shared<Snapshot>(*current);
        next->devices = std::move(devices);
        if (!batch->events.empty() || !batch->tracks.empty() || !batch->windows.empty())
            next->batches.push_back(std::move(batch));
        next->accepted_total += report.accepted;
        next->rejected_total += report.rejected.size();
        {
            std::lock_guard lock(snapshot_mu_);
            snapshot_ = std::move(next);
        }
        return report;
    }

private:
    StoreConfig cfg_;
    std::mutex write_mu_;
    mutable std::mutex snapshot_mu_;
    std::shared_ptr<const Snapshot> snapshot_;
    detail::LogWriter writer_;
    std::vector<ReplayWarning> warnings_;
};

}  // namespace airshower::store
