#pragma once

#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfwm/analysis.hpp"
#include "sfwm/errors.hpp"
#include "sfwm/version.hpp"

namespace sfwm {

/// FNV-1a 64-bit; stable across runs and platforms, used to key checkpoint
/// records and stamp output files.
inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Canonical hash of a configuration (nlohmann dumps object keys sorted).
inline std::string config_hash(const nlohmann::json& config) {
    return hex64(fnv1a64(config.dump()));
}

/// "pump.power_W" -> /pump/power_W
inline nlohmann::json::json_pointer json_pointer_from_dotted(const std::string& dotted) {
    nlohmann::json::json_pointer ptr;
    std::size_t pos = 0;
    while (pos != std::string::npos) {
        const std::size_t next = dotted.find('.', pos);
        ptr.push_back(dotted.substr(pos, next == std::string::npos ? next : next - pos));
        pos = next == std::string::npos ? next : next + 1;
    }
    return ptr;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Write-then-rename so readers never see partial files.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw io_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw io_error("rename failed: " + path.string() + " (" + ec.message() + ")");
}

inline std::string output_header(const std::string& kind, const std::string& cfg_hash) {
    return "# sfwm " + kind + " v" + std::string(version_string) + " config=" + cfg_hash + "\n";
}

// ---------------------------------------------------------------------------
// Result writers (CSV/JSON are the plotting interface)
// ---------------------------------------------------------------------------

inline void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& spectrum,
                               const std::string& cfg_hash) {
    std::string out = output_header("spectrum", cfg_hash);
    out += spectrum.has_reference() ? "wavelength_nm,N_expected,enhancement_dB\n"
                                    : "wavelength_nm,N_expected\n";
    std::vector<double> db;
    if (spectrum.has_reference()) db = spectrum.enhancement_db();
    for (std::size_t k = 0; k < spectrum.wavelength_nm.size(); ++k) {
        out += format_double(spectrum.wavelength_nm[k]);
        out += ',';
        out += format_double(spectrum.photons[k]);
        if (!db.empty()) {
            out += ',';
            out += format_double(db[k]);
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

/// Matrix layout: first row is the idler axis, first column the signal axis.
inline void write_jsi_csv(const std::filesystem::path& path, const JointSpectralAmplitude& jsa,
                          const std::string& cfg_hash) {
    std::string out = output_header("jsi", cfg_hash);
    out += "# rows: signal_nm, columns: idler_nm, values: |T12|^2\n";
    out += "signal_nm\\idler_nm";
    for (double wl : jsa.idler_nm) {
        out += ',';
        out += format_double(wl);
    }
    out += '\n';
    for (std::size_t s = 0; s < jsa.signal_nm.size(); ++s) {
        out += format_double(jsa.signal_nm[s]);
        for (std::size_t i = 0; i < jsa.idler_nm.size(); ++i) {
            out += ',';
            out += format_double(jsa.intensity(s, i));
        }
        out += '\n';
    }
    write_text_atomic(path, out);
}

inline void write_jsa_json(const std::filesystem::path& path, const JointSpectralAmplitude& jsa,
                           const std::string& cfg_hash) {
    nlohmann::json j;
    j["version"] = version_string;
    j["config"] = cfg_hash;
    j["signal_nm"] = jsa.signal_nm;
    j["idler_nm"] = jsa.idler_nm;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t s = 0; s < jsa.signal_nm.size(); ++s) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t i = 0; i < jsa.idler_nm.size(); ++i) {
            const auto& v = jsa.at(s, i);
            row.push_back({v.real(), v.imag()});
        }
        rows.push_back(std::move(row));
    }
    j["jsa"] = std::move(rows);
    write_text_atomic(path, j.dump(1) + "\n");
}

inline JointSpectralAmplitude read_jsa_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open jsa file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("jsa file " + path.string() + ": " + e.what());
    }
    JointSpectralAmplitude jsa;
    jsa.signal_nm = j.at("signal_nm").get<std::vector<double>>();
    jsa.idler_nm = j.at("idler_nm").get<std::vector<double>>();
    const auto& rows = j.at("jsa");
    if (rows.size() != jsa.signal_nm.size())
        throw config_error("jsa file: row count does not match signal axis");
    for (const auto& row : rows) {
        if (row.size() != jsa.idler_nm.size())
            throw config_error("jsa file: column count does not match idler axis");
        for (const auto& cell : row) {
            if (cell.size() != 2) throw config_error("jsa file: cells must be [re, im]");
            jsa.values.emplace_back(cell[0].get<double>(), cell[1].get<double>());
        }
    }
    return jsa;
}

inline void write_purity_json(const std::filesystem::path& path, const SchmidtResult& schmidt,
                              const std::string& cfg_hash) {
    nlohmann::json j;
    j["version"] = version_string;
    j["config"] = cfg_hash;
    j["coefficients"] = schmidt.coefficients;
    j["purity"] = schmidt.purity;
    j["schmidt_number"] = schmidt.schmidt_number;
    write_text_atomic(path, j.dump(1) + "\n");
}

inline void write_map_csv(const std::filesystem::path& path, const EnhancementMap& map,
                          const std::string& cfg_hash) {
    std::string out = output_header("map", cfg_hash);
    out += "Delta,Lambda_T_m,enhancement_dB\n";
    for (std::size_t d = 0; d < map.delta_axis.size(); ++d)
        for (std::size_t p = 0; p < map.period_axis_m.size(); ++p) {
            out += format_double(map.delta_axis[d]);
            out += ',';
            out += format_double(map.period_axis_m[p]);
            out += ',';
            out += format_double(map.at(d, p));
            out += '\n';
        }
    write_text_atomic(path, out);
}

}  // namespace sfwm
