#pragma once
/// @file cli.hpp
/// `airshower` command line: one subcommand per pipeline stage.
///
/// Exit codes: 0 success, 1 usage error, 2 data error.

#include <pthread.h>

#include <csignal>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "airshower/activity.hpp"
#include "airshower/coincidence.hpp"
#include "airshower/core_model.hpp"
#include "airshower/exposure.hpp"
#include "airshower/flashdetect.hpp"
#include "airshower/ratestats.hpp"
#include "airshower/service.hpp"
#include "airshower/simfleet.hpp"
#include "airshower/store.hpp"
#include "airshower/timesync.hpp"

namespace airshower::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::StorageFailure, "cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(Errc::StorageFailure, "cannot write " + path);
    f << content;
    if (!f.flush()) throw Error(Errc::StorageFailure, "cannot write " + path);
}

inline std::vector<Record> read_records(const std::string& path) { return decode_all(read_file(path)); }

inline exposure::BBox parse_bbox(const std::string& text) {
    std::array<double, 4> v{};
    std::istringstream in(text);
    char c1 = 0, c2 = 0, c3 = 0;
    in >> v[0] >> c1 >> v[1] >> c2 >> v[2] >> c3 >> v[3];
    exposure::BBox b{v[0], v[1], v[2], v[3]};
    if (!in || c1 != ',' || c2 != ',' || c3 != ',' || !b.valid())
        throw Error(Errc::BadBBox, "bbox must be lat_min,lat_max,lon_min,lon_max");
    return b;
}

struct CoincidenceFlags {
    coincidence::CoincidenceParams params;
    std::int64_t from_ms = std::numeric_limits<std::int64_t>::min();
    std::int64_t to_ms = std::numeric_limits<std::int64_t>::max();

    void add_to(CLI::App* app) {
        app->add_option("--window-s", params.window_s, "Max time gap between linked flashes (s)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app->add_option("--radius-km", params.radius_km, "Max distance between linked flashes (km)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app->add_option("--min-devices", params.min_devices, "Minimum distinct devices per candidate")
            ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20))
            ->capture_default_str();
        app->add_option("--from-ms", from_ms, "Only events at or after this UTC time");
        app->add_option("--to-ms", to_ms, "Only events before this UTC time");
    }

    std::vector<coincidence::ShowerCandidate> run(const std::vector<Record>& records) const {
        auto events = records_of<FlashEvent>(records);
        std::erase_if(events, [&](const FlashEvent& e) { return e.t_utc_ms < from_ms || e.t_utc_ms >= to_ms; });
        return coincidence::detect(std::move(events), params);
    }
};

/// Blocks SIGINT/SIGTERM and stops the server when one arrives.
inline void serve_until_signal(service::HttpServer& server) {
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);
    std::thread waiter([&server, set] {
        int sig = 0;
        sigwait(&set, &sig);
        server.stop();
    });
    server.listen_after_bind();
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
}

}  // namespace detail

/// Runs one CLI invocation. `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Crowd-sensed air-shower detection pipeline", "airshower"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    // ingestd ---------------------------------------------------------------
    auto* ingestd = app.add_subcommand("ingestd", "Run the HTTP ingestion and query service");
    std::string data_dir = "data";
    std::string host = "127.0.0.1";
    int port = 8080;
    bool no_fsync = false;
    ingestd->add_option("--data-dir", data_dir, "Directory holding the daily event logs")
        ->envname("AIRSHOWER_DATA_DIR")
        ->capture_default_str();
    ingestd->add_option("--host", host, "Listen address")->envname("AIRSHOWER_HOST")->capture_default_str();
    ingestd->add_option("--port", port, "Listen port (0 picks a free port)")
        ->envname("AIRSHOWER_PORT")
        ->check(CLI::Range(0, 65535))
        ->capture_default_str();
    ingestd->add_flag("--no-fsync", no_fsync, "Flush without fsync (faster, less durable)");

    // simulate --------------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "Simulate a volunteer fleet and write protocol lines");
    sim::SimConfig cfg;
    std::string sim_out, truth_out, sim_bbox;
    bool flight = false;
    double cruise_km = 9.0;
    rates::AltitudeModel flight_model{1.0, 1.5};
    simulate->add_option("--out", sim_out, "Protocol lines output file")->required();
    simulate->add_option("--truth", truth_out, "Ground-truth JSON sidecar");
    simulate->add_option("--devices", cfg.n_devices, "Number of devices")->capture_default_str();
    simulate->add_option("--bbox", sim_bbox, "Device area lat_min,lat_max,lon_min,lon_max");
    simulate->add_option("--hours", cfg.duration_h, "Duration (h)")->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--background-cpm", cfg.background_cpm, "Per-device background rate (cpm)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--diurnal", cfg.diurnal_amplitude, "Diurnal amplitude, fraction of background")
        ->check(CLI::Range(0.0, 0.999999))
        ->capture_default_str();
    simulate->add_option("--showers", cfg.n_showers, "Number of injected showers")->capture_default_str();
    simulate->add_option("--footprint-km", cfg.shower_footprint_km, "Shower footprint radius (km)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--jitter-ms", cfg.shower_jitter_ms, "Shower arrival jitter (+/- ms)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    simulate->add_option("--offset-range-ms", cfg.clock_offset_range_ms, "Device clock offsets (+/- ms)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    simulate->add_option("--t-start-ms", cfg.t_start_ms, "Simulation start (UTC ms)")->capture_default_str();
    simulate->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    simulate->add_flag("--flight", flight, "Simulate two tablets on a commercial flight instead of a city fleet");
    simulate->add_option("--cruise-km", cruise_km, "Flight cruise altitude (km)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--r0", flight_model.r0, "Ground-level rate of the altitude model (cpm)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    simulate->add_option("--hd", flight_model.h_d, "Doubling height of the altitude model (km)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // detect ----------------------------------------------------------------
    auto* detect = app.add_subcommand("detect", "Find multi-device coincidences in protocol lines");
    std::string detect_in, detect_out;
    detail::CoincidenceFlags detect_flags;
    detect->add_option("--in", detect_in, "Protocol lines input")->required();
    detect->add_option("--out", detect_out, "Candidate JSON output (default stdout)");
    detect_flags.add_to(detect);

    // baseline --------------------------------------------------------------
    auto* baseline = app.add_subcommand("baseline", "Rate series with rolling-median baseline and spike flags");
    std::string base_in, base_out, base_device;
    std::int64_t bin_s = rates::kDefaultBinS;
    std::size_t window_bins = 0;
    double spike_k = rates::kDefaultSpikeK;
    double mad_floor = rates::kDefaultMadFloor;
    std::optional<std::int64_t> base_from, base_to;
    baseline->add_option("--in", base_in, "Protocol lines input")->required();
    baseline->add_option("--device", base_device, "Device id")->required();
    baseline->add_option("--out", base_out, "CSV output (default stdout)");
    baseline->add_option("--bin-s", bin_s, "Bin width (s)")->check(CLI::PositiveNumber)->capture_default_str();
    baseline->add_option("--window-bins", window_bins, "Baseline window in bins, odd (default 6 h)");
    baseline->add_option("--k", spike_k, "Spike threshold in robust sigmas")->check(CLI::PositiveNumber)->capture_default_str();
    baseline->add_option("--mad-floor", mad_floor, "Floor of the robust sigma (cpm)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    baseline->add_option("--from-ms", base_from, "Series start (UTC ms)");
    baseline->add_option("--to-ms", base_to, "Series end (UTC ms, exclusive)");

    // classify --------------------------------------------------------------
    auto* classify = app.add_subcommand("classify", "Train or apply the moment-based activity classifier");
    std::string train_passive, train_moderate, train_active, model_out, model_in, classify_in, classify_out;
    classify->add_option("--train-passive", train_passive, "ACC lines labeled passive");
    classify->add_option("--train-moderate", train_moderate, "ACC lines labeled moderate");
    classify->add_option("--train-active", train_active, "ACC lines labeled active");
    classify->add_option("--save-model", model_out, "Write the trained model JSON here");
    classify->add_option("--model", model_in, "Model JSON to classify with");
    classify->add_option("--in", classify_in, "ACC lines to classify");
    classify->add_option("--out", classify_out, "CSV output (default stdout)");

    // dose ------------------------------------------------------------------
    auto* dose = app.add_subcommand("dose", "Accumulated CO exposure dose along a device's track");
    std::string dose_in, dose_device;
    double max_gap_s = exposure::kDefaultMaxGapS;
    dose->add_option("--in", dose_in, "Protocol lines input")->required();
    dose->add_option("--device", dose_device, "Device id")->required();
    dose->add_option("--max-gap-s", max_gap_s, "Longest interval a reading is held (s)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // mapexport -------------------------------------------------------------
    auto* mapexport = app.add_subcommand("mapexport", "Export a GeoJSON grid of pollution or shower candidates");
    std::string map_in, map_out, map_kind = "pollution", map_bbox;
    double cell_km = 0.0;
    detail::CoincidenceFlags map_flags;
    mapexport->add_option("--in", map_in, "Protocol lines input")->required();
    mapexport->add_option("--out", map_out, "GeoJSON output (default stdout)");
    mapexport->add_option("--kind", map_kind, "pollution or showers")
        ->check(CLI::IsMember({"pollution", "showers"}))
        ->capture_default_str();
    mapexport->add_option("--cell-km", cell_km, "Cell edge (km; default 0.5 pollution, 1.0 showers)")
        ->check(CLI::PositiveNumber);
    mapexport->add_option("--bbox", map_bbox, "Grid area lat_min,lat_max,lon_min,lon_max (default: fit data)");
    map_flags.add_to(mapexport);

    // flashscan -------------------------------------------------------------
    auto* flashscan = app.add_subcommand("flashscan", "Extract flashes from shielded-camera PGM frames");
    std::vector<std::string> frames, mask_frames;
    int threshold = flash::kDefaultThreshold;
    double occupancy = flash::kDefaultOccupancy;
    bool no_mask = false;
    std::int64_t t0_ms = 0, frame_ms = 1000;
    std::string scan_device, scan_out;
    double scan_lat = 0.0, scan_lon = 0.0, scan_alt = 0.0;
    flashscan->add_option("frames", frames, "PGM (P5) frames in time order")->required()->check(CLI::ExistingFile);
    flashscan->add_option("--mask-frames", mask_frames, "Frames for the hot-pixel mask (default: the scanned frames)")
        ->check(CLI::ExistingFile);
    flashscan->add_flag("--no-mask", no_mask, "Do not suppress hot pixels");
    flashscan->add_option("--threshold", threshold, "Luma threshold")->check(CLI::Range(0, 255))->capture_default_str();
    flashscan->add_option("--occupancy", occupancy, "Hot-pixel occupancy fraction")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    flashscan->add_option("--t0-ms", t0_ms, "UTC time of the first frame")->capture_default_str();
    flashscan->add_option("--frame-ms", frame_ms, "Interval between frames")->check(CLI::PositiveNumber)->capture_default_str();
    flashscan->add_option("--device", scan_device, "Emit EV protocol lines for this device instead of CSV");
    flashscan->add_option("--lat", scan_lat, "Device latitude")->check(CLI::Range(-90.0, 90.0));
    flashscan->add_option("--lon", scan_lon, "Device longitude")->check(CLI::Range(-180.0, 180.0));
    flashscan->add_option("--alt", scan_alt, "Device altitude (m)");
    flashscan->add_option("--out", scan_out, "Output file (default stdout)");

    // sync ------------------------------------------------------------------
    auto* sync = app.add_subcommand("sync", "Estimate a clock offset from t1,t2,t3,t4 exchange records");
    std::string sync_in;
    std::vector<std::string> sync_exchanges;
    sync->add_option("--in", sync_in, "CSV file of t1,t2,t3,t4 rows");
    sync->add_option("--exchange", sync_exchanges, "One exchange as t1,t2,t3,t4 (repeatable)");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    const auto usage = [&](const std::string& reason) {
        err << "error: " << reason << "\n";
        const CLI::App* active = &app;
        for (const auto* sub : app.get_subcommands()) active = sub;
        err << active->help();
        return static_cast<int>(kUsage);
    };

    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        const CLI::App* active = &app;
        for (const auto* sub : app.get_subcommands()) active = sub;
        out << active->help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        return usage(e.what());
    }

    try {
        if (ingestd->parsed()) {
            store::StoreConfig sc;
            sc.data_dir = data_dir;
            sc.fsync = !no_fsync;
            store::EventStore st(sc);
            for (const auto& w : st.replay_warnings())
                err << "warning: " << w.file << ":" << w.line_no << ": " << w.detail << "\n";
            service::HttpServer server(st);
            const int bound = port == 0 ? server.bind_any_port(host) : (server.bind(host, port) ? port : -1);
            if (bound < 0) throw Error(Errc::StorageFailure, "cannot listen on " + host + ":" + std::to_string(port));
            err << "ingestd listening on " << host << ":" << bound << " data=" << data_dir << std::endl;
            detail::serve_until_signal(server);
            return kOk;
        }

        if (simulate->parsed()) {
            if (!sim_bbox.empty()) cfg.bbox = detail::parse_bbox(sim_bbox);
            if (flight) {
                const auto fo = sim::flight_profile(cfg, cruise_km, flight_model);
                detail::write_output(sim_out, fo.text(), out);
                if (!truth_out.empty()) detail::write_output(truth_out, sim::to_json(fo.truth).dump(2) + "\n", out);
            } else {
                const auto so = sim::simulate(cfg);
                detail::write_output(sim_out, so.text(), out);
                if (!truth_out.empty()) detail::write_output(truth_out, sim::to_json(so.truth).dump(2) + "\n", out);
            }
            return kOk;
        }

        if (detect->parsed()) {
            const auto cands = detect_flags.run(detail::read_records(detect_in));
            detail::write_output(detect_out, coincidence::to_json(cands).dump(2) + "\n", out);
            return kOk;
        }

        if (baseline->parsed()) {
            const std::size_t window = window_bins ? window_bins : rates::default_window_bins(bin_s);
            if (window < 3 || window % 2 == 0) return usage("--window-bins must be odd and >= 3");
            std::vector<FlashEvent> events;
            for (auto& e : records_of<FlashEvent>(detail::read_records(base_in)))
                if (e.device_id == base_device) events.push_back(std::move(e));
            std::sort(events.begin(), events.end(), coincidence::event_less);
            const std::int64_t width = bin_s * 1000;
            const std::int64_t from = base_from.value_or(events.empty() ? 0 : (events.front().t_utc_ms / width) * width);
            const std::int64_t to = base_to.value_or(events.empty() ? from + width : events.back().t_utc_ms + 1);
            auto s = rates::bin_events(events, bin_s, from, to, base_device);
            s = rates::flag_spikes(rates::fit_baseline(std::move(s), window), spike_k, mad_floor);
            detail::write_output(base_out, rates::to_csv(s), out);
            return kOk;
        }

        if (classify->parsed()) {
            activity::ActivityModel model;
            const bool training = !train_passive.empty() || !train_moderate.empty() || !train_active.empty();
            if (training) {
                if (train_passive.empty() || train_moderate.empty() || train_active.empty())
                    return usage("training needs --train-passive, --train-moderate and --train-active");
                std::vector<activity::LabeledMoments> labeled;
                const std::array<std::pair<const std::string*, activity::ActivityClass>, 3> sets{
                    {{&train_passive, activity::ActivityClass::Passive},
                     {&train_moderate, activity::ActivityClass::Moderate},
                     {&train_active, activity::ActivityClass::Active}}};
                for (const auto& [path, label] : sets)
                    for (const auto& w : records_of<AccelWindow>(detail::read_records(*path)))
                        labeled.push_back({activity::compute_moments(w), label});
                model = activity::train_model(labeled);
                if (!model_out.empty()) detail::write_output(model_out, activity::to_json(model).dump(2) + "\n", out);
            } else if (!model_in.empty()) {
                try {
                    model = activity::model_from_json(nlohmann::json::parse(detail::read_file(model_in)));
                } catch (const nlohmann::json::parse_error& e) {
                    throw Error(Errc::BadParameter, std::string("model is not JSON: ") + e.what());
                }
            } else {
                return usage("classify needs --model or the three --train-* sets");
            }
            if (!classify_in.empty()) {
                std::string csv = "device_id,t0_utc_ms,class,std,skewness,kurtosis_excess\n";
                for (const auto& w : records_of<AccelWindow>(detail::read_records(classify_in))) {
                    const auto m = activity::compute_moments(w);
                    csv += w.device_id + "," + std::to_string(w.t0_utc_ms) + "," +
                           std::string(activity::to_string(activity::classify(model, m))) + "," +
                           airshower::detail::format_fixed(m.std, 6) + "," +
                           airshower::detail::format_fixed(m.skewness, 6) + "," +
                           airshower::detail::format_fixed(m.kurtosis_excess, 6) + "\n";
                }
                detail::write_output(classify_out, csv, out);
            } else if (!training) {
                return usage("nothing to do: pass --in to classify windows");
            }
            return kOk;
        }

        if (dose->parsed()) {
            std::vector<TrackSample> track;
            for (auto& t : records_of<TrackSample>(detail::read_records(dose_in)))
                if (t.device_id == dose_device) track.push_back(std::move(t));
            std::stable_sort(track.begin(), track.end(),
                             [](const TrackSample& a, const TrackSample& b) { return a.t_utc_ms < b.t_utc_ms; });
            const double d = exposure::accumulate_dose(track, max_gap_s);
            out << airshower::detail::format_fixed(d, 2) << " ppm*s\n";
            return kOk;
        }

        if (mapexport->parsed()) {
            const auto records = detail::read_records(map_in);
            std::vector<exposure::GridSample> samples;
            exposure::ValueKind kind = exposure::ValueKind::CoPpm;
            if (map_kind == "showers") {
                kind = exposure::ValueKind::ShowerCount;
                for (const auto& c : map_flags.run(records))
                    samples.push_back({c.epicenter, static_cast<double>(c.multiplicity)});
            } else {
                for (const auto& t : records_of<TrackSample>(records)) samples.push_back({t.geo, t.co_ppm});
            }
            const double cell = cell_km > 0.0 ? cell_km : (kind == exposure::ValueKind::CoPpm ? 0.5 : 1.0);
            exposure::GridMap grid{{}, cell, kind, {}, 0};
            if (!map_bbox.empty()) {
                grid = exposure::build_grid(samples, detail::parse_bbox(map_bbox), cell, kind);
            } else if (!samples.empty()) {
                std::vector<GeoPoint> pts;
                for (const auto& s : samples) pts.push_back(s.where);
                grid = exposure::build_grid(samples, exposure::bbox_of(pts), cell, kind);
            }
            detail::write_output(map_out, exposure::to_geojson(grid).dump(2) + "\n", out);
            if (grid.dropped) err << "dropped " << grid.dropped << " samples outside bbox\n";
            return kOk;
        }

        if (flashscan->parsed()) {
            if (!scan_device.empty() && !airshower::detail::valid_device_id(scan_device))
                return usage("invalid --device id");
            std::vector<flash::Frame> scanned;
            for (std::size_t i = 0; i < frames.size(); ++i)
                scanned.push_back(flash::read_pgm_file(frames[i], t0_ms + static_cast<std::int64_t>(i) * frame_ms));
            flash::HotPixelMask mask = flash::HotPixelMask::empty(scanned.front().width, scanned.front().height);
            if (!no_mask && !mask_frames.empty()) {
                std::vector<flash::Frame> reference;
                for (const auto& p : mask_frames) reference.push_back(flash::read_pgm_file(p));
                mask = flash::build_hot_pixel_mask(reference, threshold, occupancy);
            } else if (!no_mask && scanned.size() >= flash::kMinMaskFrames) {
                mask = flash::build_hot_pixel_mask(scanned, threshold, occupancy);
            }
            std::string text;
            if (scan_device.empty()) text = "frame,t_utc_ms,magnitude,cx,cy\n";
            for (std::size_t i = 0; i < scanned.size(); ++i) {
                for (const auto& c : flash::extract_flashes(scanned[i], mask, threshold)) {
                    if (scan_device.empty()) {
                        text += std::to_string(i) + "," + std::to_string(scanned[i].t_utc_ms) + "," +
                                std::to_string(c.size) + "," + airshower::detail::format_fixed(c.cx, 2) + "," +
                                airshower::detail::format_fixed(c.cy, 2) + "\n";
                    } else {
                        const FlashEvent e{scan_device, scanned[i].t_utc_ms, {scan_lat, scan_lon, scan_alt}, c.size};
                        text += encode_record(Record{e}) + "\n";
                    }
                }
            }
            detail::write_output(scan_out, text, out);
            return kOk;
        }

        if (sync->parsed()) {
            std::vector<std::string> rows = sync_exchanges;
            if (!sync_in.empty()) {
                std::istringstream in(detail::read_file(sync_in));
                for (std::string line; std::getline(in, line);)
                    if (!line.empty() && (std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-'))
                        rows.push_back(line);
            }
            if (rows.empty()) return usage("sync needs --in or --exchange");
            std::vector<timesync::SyncExchange> ex;
            for (const auto& row : rows) {
                timesync::SyncExchange e;
                char c1 = 0, c2 = 0, c3 = 0;
                std::istringstream in(row);
                in >> e.t1 >> c1 >> e.t2 >> c2 >> e.t3 >> c3 >> e.t4;
                if (!in || c1 != ',' || c2 != ',' || c3 != ',')
                    throw Error(Errc::BadFieldValue, "exchange must be t1,t2,t3,t4: '" + row + "'");
                ex.push_back(e);
            }
            const auto est = timesync::estimate_offset(ex);
            out << "offset_ms=" << est.offset_ms << " rtt_ms=" << est.rtt_ms << "\n";
            return kOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kData;
    }
    return usage("no subcommand");
}

inline int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(std::move(args));
}

}  // namespace airshower::cli
