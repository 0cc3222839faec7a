#pragma once
/// @file service.hpp
/// HTTP ingestion and query endpoints over an EventStore.
///
///   POST /v1/ingest            protocol lines -> JSON ingest report
///   GET  /v1/healthz           {"status":"ok","devices":N,"events":M}
///   GET  /v1/devices           registered devices
///   GET  /v1/series            CSV rate series of one device
///   GET  /v1/candidates        JSON shower candidates
///   GET  /v1/map/showers       GeoJSON grid of candidate epicenters
///   GET  /v1/map/pollution     GeoJSON grid of CO samples
///
/// Errors are `{"error": <code>, "detail": <text>}` with 400 (BadParameter),
/// 404 (UnknownEndpoint) or 500 (StorageFailure).

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "airshower/coincidence.hpp"
#include "airshower/error.hpp"
#include "airshower/exposure.hpp"
#include "airshower/ratestats.hpp"
#include "airshower/store.hpp"

namespace airshower::service {

struct Request {
    std::string method = "GET";
    std::string path;
    std::map<std::string, std::string> params;
    std::string body;
};

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

inline Response error_response(Errc code, const std::string& detail) {
    const int status = code == Errc::UnknownEndpoint ? 404 : code == Errc::StorageFailure ? 500 : 400;
    return {status, "application/json", nlohmann::json{{"error", to_string(code)}, {"detail", detail}}.dump()};
}

/// Typed access to query-string parameters; malformed values are BadParameter.
class Params {
public:
    explicit Params(const std::map<std::string, std::string>& p) : p_(p) {}

    std::optional<std::string> text(const std::string& key) const {
        auto it = p_.find(key);
        if (it == p_.end() || it->second.empty()) return std::nullopt;
        return it->second;
    }
    std::optional<std::int64_t> integer(const std::string& key) const {
        auto s = text(key);
        if (!s) return std::nullopt;
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
        if (ec != std::errc{} || ptr != s->data() + s->size()) bad(key, *s);
        return v;
    }
    std::optional<double> number(const std::string& key) const {
        auto s = text(key);
        if (!s) return std::nullopt;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
        if (ec != std::errc{} || ptr != s->data() + s->size() || !std::isfinite(v)) bad(key, *s);
        return v;
    }
    double positive(const std::string& key, double fallback) const {
        const double v = number(key).value_or(fallback);
        if (!(v > 0.0)) bad(key, std::to_string(v));
        return v;
    }

    [[noreturn]] static void bad(const std::string& key, const std::string& value) {
        throw Error(Errc::BadParameter, "invalid value '" + value + "' for " + key, key);
    }

private:
    const std::map<std::string, std::string>& p_;
};

class Service {
public:
    explicit Service(store::EventStore& store) : store_(store) {}

    Response handle(const Request& req) const {
        try {
            if (req.method == "POST" && req.path == "/v1/ingest") {
                return {200, "application/json", store_.ingest_lines(req.body).to_json().dump()};
            }
            if (req.method != "GET") throw Error(Errc::UnknownEndpoint, req.method + " " + req.path);
            const auto snap = store_.snapshot();
            const Params p(req.params);
            if (req.path == "/v1/healthz") return healthz(*snap);
            if (req.path == "/v1/devices") return devices(*snap);
            if (req.path == "/v1/series") return series(*snap, p);
            if (req.path == "/v1/candidates") return candidates(*snap, p);
            if (req.path == "/v1/map/showers") return shower_map(*snap, p);
            if (req.path == "/v1/map/pollution") return pollution_map(*snap, p);
            throw Error(Errc::UnknownEndpoint, "no endpoint " + req.path);
        } catch (const Error& e) {
            return error_response(e.code(), e.detail());
        }
    }

    static coincidence::CoincidenceParams coincidence_params(const Params& p) {
        coincidence::CoincidenceParams cp;
        cp.window_s = p.positive("window_s", cp.window_s);
        cp.radius_km = p.positive("radius_km", cp.radius_km);
        const auto md = p.integer("min_devices").value_or(static_cast<std::int64_t>(cp.min_devices));
        if (md < 2) Params::bad("min_devices", std::to_string(md));
        cp.min_devices = static_cast<std::size_t>(md);
        return cp;
    }

private:
    static Response healthz(const store::Snapshot& s) {
        return {200, "application/json",
                nlohmann::json{{"status", "ok"}, {"devices", s.devices.size()}, {"events", s.event_count()}}.dump()};
    }

    static Response devices(const store::Snapshot& s) {
        auto arr = nlohmann::json::array();
        for (const auto& [id, d] : s.devices)
            arr.push_back({{"device_id", id},
                           {"model", d.model},
                           {"camera_mpx_tenths", d.camera_mpx_tenths},
                           {"sensitivity", d.sensitivity}});
        return {200, "application/json", arr.dump()};
    }

    static std::vector<FlashEvent> in_range(std::vector<FlashEvent> events, const Params& p) {
        const auto from = p.integer("from_ms");
        const auto to = p.integer("to_ms");
        if (from && to && *to <= *from) throw Error(Errc::BadParameter, "to_ms must exceed from_ms", "to_ms");
        std::erase_if(events, [&](const FlashEvent& e) {
            return (from && e.t_utc_ms < *from) || (to && e.t_utc_ms >= *to);
        });
        return events;
    }

    static Response series(const store::Snapshot& s, const Params& p) {
        const auto device = p.text("device");
        if (!device) throw Error(Errc::BadParameter, "device is required", "device");
        if (!s.has_device(*device)) throw Error(Errc::BadParameter, "unknown device '" + *device + "'", "device");
        const std::int64_t bin_s = p.integer("bin_s").value_or(rates::kDefaultBinS);
        if (bin_s < 1) Params::bad("bin_s", std::to_string(bin_s));
        const auto events = s.events_for(*device);
        const std::int64_t width = bin_s * 1000;

        auto from = p.integer("from_ms");
        auto to = p.integer("to_ms");
        if (!from) from = events.empty() ? std::int64_t{0} : (events.front().t_utc_ms / width) * width;
        if (!to) to = events.empty() ? *from + width : events.back().t_utc_ms + 1;
        if (*to <= *from) throw Error(Errc::BadParameter, "to_ms must exceed from_ms", "to_ms");

        const auto window = p.integer("window_bins").value_or(static_cast<std::int64_t>(rates::default_window_bins(bin_s)));
        if (window < 3 || window % 2 == 0) Params::bad("window_bins", std::to_string(window));
        const double k = p.positive("k", rates::kDefaultSpikeK);
        const double floor = p.positive("mad_floor", rates::kDefaultMadFloor);

        auto series = rates::bin_events(events, bin_s, *from, *to, *device);
        series = rates::flag_spikes(rates::fit_baseline(std::move(series), static_cast<std::size_t>(window)), k, floor);
        return {200, "text/csv", rates::to_csv(series)};
    }

    static Response candidates(const store::Snapshot& s, const Params& p) {
        const auto cands = coincidence::detect(in_range(s.events(), p), coincidence_params(p));
        return {200, "application/json", coincidence::to_json(cands).dump()};
    }

    static std::optional<exposure::BBox> bbox_param(const Params& p) {
        const auto text = p.text("bbox");
        if (!text) return std::nullopt;
        std::array<double, 4> v{};
        std::string_view rest = *text;
        for (std::size_t i = 0; i < 4; ++i) {
            const auto comma = rest.find(',');
            const auto part = rest.substr(0, comma);
            auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v[i]);
            if (ec != std::errc{} || ptr != part.data() + part.size() || (i < 3 && comma == std::string_view::npos))
                Params::bad("bbox", *text);
            rest.remove_prefix(comma == std::string_view::npos ? rest.size() : comma + 1);
        }
        exposure::BBox b{v[0], v[1], v[2], v[3]};
        if (!b.valid()) Params::bad("bbox", *text);
        return b;
    }

    static Response shower_map(const store::Snapshot& s, const Params& p) {
        const double cell_km = p.positive("cell_km", 1.0);
        const auto cands = coincidence::detect(in_range(s.events(), p), coincidence_params(p));
        std::vector<exposure::GridSample> samples;
        for (const auto& c : cands) samples.push_back({c.epicenter, static_cast<double>(c.multiplicity)});
        return grid_response(samples, bbox_param(p), cell_km, exposure::ValueKind::ShowerCount);
    }

    static Response pollution_map(const store::Snapshot& s, const Params& p) {
        const double cell_km = p.positive("cell_km", 0.5);
        std::vector<exposure::GridSample> samples;
        for (const auto& t : s.tracks()) samples.push_back({t.geo, t.co_ppm});
        return grid_response(samples, bbox_param(p), cell_km, exposure::ValueKind::CoPpm);
    }

    static Response grid_response(const std::vector<exposure::GridSample>& samples, std::optional<exposure::BBox> bbox,
                                  double cell_km, exposure::ValueKind kind) {
        if (!bbox) {
            if (samples.empty())
                return {200, "application/geo+json", exposure::to_geojson(exposure::GridMap{{}, cell_km, kind, {}, 0}).dump()};
            std::vector<GeoPoint> pts;
            for (const auto& s : samples) pts.push_back(s.where);
            bbox = exposure::bbox_of(pts);
        }
        return {200, "application/geo+json", exposure::to_geojson(exposure::build_grid(samples, *bbox, cell_km, kind)).dump()};
    }

    store::EventStore& store_;
};

/// Binds a Service to cpp-httplib.
class HttpServer {
public:
    explicit HttpServer(store::EventStore& store) : service_(store) {
        const auto bridge = [this](const httplib::Request& in, httplib::Response& out) {
            Request req;
            req.method = in.method;
            req.path = in.path;
            for (const auto& [k, v] : in.params) req.params[k] = v;
            req.body = in.body;
            const Response r = service_.handle(req);
            out.status = r.status;
            out.set_content(r.body, r.content_type);
        };
        server_.Get(R"(/.*)", bridge);
        server_.Post(R"(/.*)", bridge);
        server_.set_payload_max_length(256u << 20);
    }

    /// Binds to `host` on an ephemeral port and returns it.
    int bind_any_port(const std::string& host) { return server_.bind_to_any_port(host); }
    bool bind(const std::string& host, int port) { return server_.bind_to_port(host, port); }
    bool listen_after_bind() { return server_.listen_after_bind(); }
    void stop() { server_.stop(); }
    void wait_until_ready() { server_.wait_until_ready(); }
    const Service& service() const noexcept { return service_; }

private:
    Service service_;
    httplib::Server server_;
};

}  // namespace airshower::service
