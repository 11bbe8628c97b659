#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfwm/errors.hpp"
#include "sfwm/io.hpp"
#include "sfwm/parallel.hpp"

namespace sfwm {

struct SweepAxis {
    std::string path;            // dotted config path, e.g. "waveguide.delta"
    std::vector<double> values;  // finite, deduplicated
};

struct PointOutcome {
    double photons = 0.0;
    double enhancement_db = 0.0;
};

struct SweepPlan {
    std::vector<SweepAxis> axes;
    nlohmann::json base_config;
    std::filesystem::path output_csv;
    std::filesystem::path checkpoint;  // newline-delimited JSON, appended atomically

    std::size_t point_count() const {
        std::size_t n = 1;
        for (const auto& axis : axes) n *= axis.values.size();
        return n;
    }

    void validate() const {
        if (axes.empty()) throw config_error("sweep: no axes");
        for (const auto& axis : axes) {
            if (axis.values.empty()) throw config_error("sweep: empty axis " + axis.path);
            std::set<double> unique(axis.values.begin(), axis.values.end());
            if (unique.size() != axis.values.size())
                throw config_error("sweep: duplicate values on axis " + axis.path);
            for (double v : axis.values)
                if (!std::isfinite(v)) throw config_error("sweep: non-finite value on " + axis.path);
        }
    }
};

struct SweepRecord {
    std::size_t index = 0;
    std::vector<double> params;
    double photons = 0.0;
    double enhancement_db = 0.0;
    std::string status = "ok";
};

namespace detail {

inline std::vector<double> point_params(const SweepPlan& plan, std::size_t index) {
    std::vector<double> params(plan.axes.size());
    std::size_t rem = index;
    for (std::size_t a = plan.axes.size(); a-- > 0;) {
        const auto& vals = plan.axes[a].values;
        params[a] = vals[rem % vals.size()];
        rem /= vals.size();
    }
    return params;
}

inline std::string point_key(const SweepPlan& plan, const std::vector<double>& params) {
    nlohmann::json key;
    key["config"] = config_hash(plan.base_config);
    nlohmann::json p = nlohmann::json::object();
    for (std::size_t a = 0; a < plan.axes.size(); ++a) p[plan.axes[a].path] = params[a];
    key["point"] = std::move(p);
    return hex64(fnv1a64(key.dump()));
}

}  // namespace detail

/// Evaluator for one grid point: receives the base config with the axis
/// values applied. Exceptions become per-point "error:..." records.
using SweepEvaluator = std::function<PointOutcome(const nlohmann::json& point_config)>;

/// Deterministic, resumable grid scan. Completed points found in the
/// checkpoint are not recomputed; output rows are ordered by grid index no
/// matter how execution interleaves; each checkpoint record is written with
/// a single flushed append.
inline std::vector<SweepRecord> run_sweep(const SweepPlan& plan, const SweepEvaluator& evaluate,
                                          int threads = 1) {
    plan.validate();
    const std::size_t n = plan.point_count();

    // previously completed points
    std::map<std::string, SweepRecord> done;
    if (!plan.checkpoint.empty() && std::filesystem::exists(plan.checkpoint)) {
        std::ifstream in(plan.checkpoint);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded()) continue;  // torn tail of an interrupted run
            SweepRecord r;
            r.index = j.value("index", std::size_t{0});
            r.params = j.value("params", std::vector<double>{});
            r.photons = j.value("N_expected", 0.0);
            r.enhancement_db = j.value("enhancement_dB", 0.0);
            r.status = j.value("status", "ok");
            done[j.value("key", "")] = std::move(r);
        }
    }

    std::ofstream checkpoint_out;
    std::mutex checkpoint_mutex;
    if (!plan.checkpoint.empty()) {
        if (plan.checkpoint.has_parent_path())
            std::filesystem::create_directories(plan.checkpoint.parent_path());
        checkpoint_out.open(plan.checkpoint, std::ios::app);
        if (!checkpoint_out) throw io_error("cannot open checkpoint: " + plan.checkpoint.string());
    }

    std::vector<SweepRecord> records(n);
    parallel_for(n, threads, [&](std::size_t index) {
        SweepRecord rec;
        rec.index = index;
        rec.params = detail::point_params(plan, index);
        const std::string key = detail::point_key(plan, rec.params);
        if (const auto it = done.find(key); it != done.end()) {
            rec = it->second;
            rec.index = index;
            records[index] = std::move(rec);
            return;
        }
        nlohmann::json cfg = plan.base_config;
        for (std::size_t a = 0; a < plan.axes.size(); ++a)
            cfg[json_pointer_from_dotted(plan.axes[a].path)] = rec.params[a];
        try {
            const PointOutcome out = evaluate(cfg);
            rec.photons = out.photons;
            rec.enhancement_db = out.enhancement_db;
            rec.status = "ok";
        } catch (const std::exception& e) {
            rec.photons = std::nan("");
            rec.enhancement_db = std::nan("");
            rec.status = std::string("error: ") + e.what();
        }
        if (checkpoint_out.is_open()) {
            nlohmann::json j;
            j["key"] = key;
            j["index"] = rec.index;
            j["params"] = rec.params;
            j["N_expected"] = rec.photons;
            j["enhancement_dB"] = rec.enhancement_db;
            j["status"] = rec.status;
            const std::string line = j.dump() + "\n";
            std::lock_guard<std::mutex> lock(checkpoint_mutex);
            checkpoint_out << line;
            checkpoint_out.flush();
        }
        records[index] = std::move(rec);
    });

    if (!plan.output_csv.empty()) {
        std::string out = output_header("sweep", config_hash(plan.base_config));
        out += "index";
        for (const auto& axis : plan.axes) out += "," + axis.path;
        out += ",N_expected,enhancement_dB,status\n";
        for (const auto& rec : records) {
            out += std::to_string(rec.index);
            for (double p : rec.params) {
                out += ',';
                out += format_double(p);
            }
            out += ',';
            out += format_double(rec.photons);
            out += ',';
            out += format_double(rec.enhancement_db);
            out += ',';
            out += rec.status;
            out += '\n';
        }
        write_text_atomic(plan.output_csv, out);
    }
    return records;
}

}  // namespace sfwm
