#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sfwm/dispersion.hpp"
#include "sfwm/errors.hpp"

namespace sfwm {

/// Rectangular grid of effective indices (and optionally mode areas) over
/// (geometry, wavelength). Ingestion point for external mode-solver output.
class DispersionTable {
public:
    DispersionTable(std::vector<double> geometry_um, std::vector<double> lambda_um,
                    std::vector<double> n_eff, std::vector<double> area_um2 = {})
        : geometry_(std::move(geometry_um)),
          lambda_(std::move(lambda_um)),
          n_(std::move(n_eff)),
          area_(std::move(area_um2)) {
        validate();
    }

    /// CSV schema: header `geometry_um,wavelength_um,n_eff[,area_um2]`,
    /// one row per grid node, full rectangular coverage required.
    static DispersionTable load_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw io_error("cannot open dispersion table: " + path);

        std::string line;
        if (!std::getline(in, line)) throw config_error("dispersion table empty: " + path);
        const bool has_area = parse_header(line, path);

        struct Node { double n; double area; };
        std::map<std::pair<double, double>, Node> nodes;
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ss(line);
            std::vector<double> vals;
            std::string cell;
            while (std::getline(ss, cell, ',')) vals.push_back(parse_double(cell, path, line_no));
            const std::size_t expect = has_area ? 4u : 3u;
            if (vals.size() != expect)
                throw config_error(path + ":" + std::to_string(line_no) + ": expected " +
                                   std::to_string(expect) + " columns");
            const auto key = std::make_pair(vals[0], vals[1]);
            if (nodes.count(key))
                throw config_error(path + ":" + std::to_string(line_no) + ": duplicate grid node");
            nodes[key] = {vals[2], has_area ? vals[3] : 0.0};
        }
        if (nodes.empty()) throw config_error("dispersion table has no data rows: " + path);

        std::vector<double> gs, ls;
        for (const auto& [key, node] : nodes) {
            gs.push_back(key.first);
            ls.push_back(key.second);
        }
        std::sort(gs.begin(), gs.end());
        gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
        if (nodes.size() != gs.size() * ls.size())
            throw config_error("dispersion table is not rectangular: " + path);

        std::vector<double> n(gs.size() * ls.size());
        std::vector<double> area(has_area ? gs.size() * ls.size() : 0);
        for (std::size_t i = 0; i < gs.size(); ++i)
            for (std::size_t j = 0; j < ls.size(); ++j) {
                const auto it = nodes.find({gs[i], ls[j]});
                if (it == nodes.end())
                    throw config_error("dispersion table is not rectangular: " + path);
                n[i * ls.size() + j] = it->second.n;
                if (has_area) area[i * ls.size() + j] = it->second.area;
            }
        return DispersionTable(std::move(gs), std::move(ls), std::move(n), std::move(area));
    }

    const std::vector<double>& geometry_axis() const { return geometry_; }
    const std::vector<double>& lambda_axis() const { return lambda_; }
    bool has_area() const { return !area_.empty(); }

    double interpolate_n(double lambda_um, double geometry_um) const {
        return bilinear(n_, lambda_um, geometry_um);
    }

    double interpolate_area(double lambda_um, double geometry_um) const {
        if (!has_area()) throw domain_error("dispersion table has no area column");
        return bilinear(area_, lambda_um, geometry_um);
    }

    bool covers(double lambda_um, double geometry_um) const {
        return lambda_um >= lambda_.front() && lambda_um <= lambda_.back() &&
               geometry_um >= geometry_.front() && geometry_um <= geometry_.back();
    }

private:
    void validate() const {
        if (geometry_.size() < 1 || lambda_.size() < 1)
            throw config_error("dispersion table: empty axis");
        for (std::size_t i = 1; i < geometry_.size(); ++i)
            if (!(geometry_[i] > geometry_[i - 1]))
                throw config_error("dispersion table: geometry axis not strictly increasing");
        for (std::size_t i = 1; i < lambda_.size(); ++i)
            if (!(lambda_[i] > lambda_[i - 1]))
                throw config_error("dispersion table: wavelength axis not strictly increasing");
        if (n_.size() != geometry_.size() * lambda_.size())
            throw config_error("dispersion table: grid size mismatch");
        for (double v : n_)
            if (!(v > 0.0)) throw config_error("dispersion table: n_eff must be positive");
        if (!area_.empty()) {
            if (area_.size() != n_.size())
                throw config_error("dispersion table: area grid size mismatch");
            for (double v : area_)
                if (!(v > 0.0)) throw config_error("dispersion table: area must be positive");
        }
    }

    static bool parse_header(const std::string& line, const std::string& path) {
        std::istringstream ss(line);
        std::vector<std::string> cols;
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cell.erase(std::remove_if(cell.begin(), cell.end(), ::isspace), cell.end());
            cols.push_back(cell);
        }
        if (cols.size() < 3 || cols[0] != "geometry_um" || cols[1] != "wavelength_um" ||
            cols[2] != "n_eff")
            throw config_error(path + ": header must be geometry_um,wavelength_um,n_eff[,area_um2]");
        if (cols.size() == 3) return false;
        if (cols.size() == 4 && cols[3] == "area_um2") return true;
        throw config_error(path + ": unrecognised table columns");
    }

    static double parse_double(const std::string& cell, const std::string& path,
                               std::size_t line_no) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(cell, &pos);
            return v;
        } catch (const std::exception&) {
            throw config_error(path + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
        }
    }

    // Bilinear over (geometry, lambda); exact at grid nodes; degenerate axes
    // (single row or column) reduce to linear/constant interpolation.
    double bilinear(const std::vector<double>& grid, double lambda_um, double geometry_um) const {
        if (!covers(lambda_um, geometry_um))
            throw domain_error("dispersion table query outside grid");
        const auto locate = [](const std::vector<double>& axis, double x) {
            if (axis.size() == 1) return std::make_pair<std::size_t, double>(0, 0.0);
            auto it = std::upper_bound(axis.begin(), axis.end(), x);
            std::size_t hi = std::min<std::size_t>(axis.size() - 1,
                                                   std::max<std::ptrdiff_t>(1, it - axis.begin()));
            const std::size_t lo = hi - 1;
            const double t = (x - axis[lo]) / (axis[hi] - axis[lo]);
            return std::make_pair(lo, t);
        };
        const auto [gi, tg] = locate(geometry_, geometry_um);
        const auto [li, tl] = locate(lambda_, lambda_um);
        const std::size_t gj = std::min(gi + 1, geometry_.size() - 1);
        const std::size_t lj = std::min(li + 1, lambda_.size() - 1);
        const double v00 = grid[gi * lambda_.size() + li];
        const double v01 = grid[gi * lambda_.size() + lj];
        const double v10 = grid[gj * lambda_.size() + li];
        const double v11 = grid[gj * lambda_.size() + lj];
        return (1.0 - tg) * ((1.0 - tl) * v00 + tl * v01) + tg * ((1.0 - tl) * v10 + tl * v11);
    }

    std::vector<double> geometry_;
    std::vector<double> lambda_;
    std::vector<double> n_;
    std::vector<double> area_;
};

class TableProvider final : public DispersionProvider {
public:
    explicit TableProvider(DispersionTable table) : table_(std::move(table)) {}

    double effective_index(double lambda_um, double geometry_um) const override {
        require_in_domain(lambda_um, geometry_um);
        return table_.interpolate_n(lambda_um, geometry_um);
    }

    std::optional<double> mode_area_um2(double lambda_um, double geometry_um) const override {
        if (!table_.has_area()) return std::nullopt;
        require_in_domain(lambda_um, geometry_um);
        return table_.interpolate_area(lambda_um, geometry_um);
    }

    DomainBox domain() const override {
        return {table_.lambda_axis().front(), table_.lambda_axis().back(),
                table_.geometry_axis().front(), table_.geometry_axis().back()};
    }

    const DispersionTable& table() const { return table_; }

private:
    DispersionTable table_;
};

}  // namespace sfwm
