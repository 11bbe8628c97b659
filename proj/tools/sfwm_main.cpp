// Command-line front end: parses a JSON run configuration, dispatches the
// requested computation and writes plot-ready CSV/JSON outputs.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sfwm/sfwm.hpp"

namespace fs = std::filesystem;
using namespace sfwm;

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;  // optional override of output.directory
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "run configuration (JSON)")->required();
    cmd->add_option("--set", args.overrides, "override config values, section.key=value");
    cmd->add_option("--out", args.out_dir, "output directory (default from config)");
}

RunConfig load(const CommonArgs& args) {
    return RunConfig::load(args.config_path, args.overrides);
}

fs::path out_dir(const RunConfig& cfg, const CommonArgs& args) {
    fs::path dir = args.out_dir.empty() ? cfg.output_dir() : fs::path(args.out_dir);
    fs::create_directories(dir);
    return dir;
}

struct ProviderBundle {
    std::unique_ptr<DispersionProvider> provider;
    MediumSpec medium;
};

ProviderBundle medium_of(const RunConfig& cfg) {
    ProviderBundle b;
    b.provider = cfg.make_provider();
    b.medium = cfg.medium(b.provider.get());
    return b;
}

int cmd_spectrum(const CommonArgs& args) {
    const auto cfg = load(args);
    const auto bundle = medium_of(cfg);
    const auto spectrum =
        spectrum_cw(bundle.medium, cfg.profile(), cfg.cw_pump(), cfg.spectrum_grid_nm(),
                    cfg.normalize_spectrum(), cfg.threads());
    const auto dir = out_dir(cfg, args);
    write_spectrum_csv(dir / "spectrum.csv", spectrum, cfg.hash());
    const auto it = std::max_element(spectrum.photons.begin(), spectrum.photons.end());
    std::printf("spectrum: peak N_expected %.6e at %.3f nm (%zu points) -> %s\n", *it,
                spectrum.wavelength_nm[it - spectrum.photons.begin()], spectrum.photons.size(),
                (dir / "spectrum.csv").c_str());
    return 0;
}

int cmd_jsi(const CommonArgs& args) {
    const auto cfg = load(args);
    const auto bundle = medium_of(cfg);
    const auto pulse = cfg.pulse_pump();
    const auto grid =
        default_jsa_grid(pulse, cfg.target_signal_nm(), cfg.jsa_points(), cfg.jsa_bandwidths());
    const auto jsa =
        jsi_pulsed(bundle.medium, cfg.profile(), pulse, grid.signal_nm, grid.idler_nm,
                   cfg.threads());
    const auto dir = out_dir(cfg, args);
    write_jsi_csv(dir / "jsi.csv", jsa, cfg.hash());
    write_jsa_json(dir / "jsa.json", jsa, cfg.hash());
    double peak = 0.0;
    std::size_t ps = 0, pi = 0;
    for (std::size_t s = 0; s < jsa.signal_nm.size(); ++s)
        for (std::size_t i = 0; i < jsa.idler_nm.size(); ++i)
            if (jsa.intensity(s, i) > peak) {
                peak = jsa.intensity(s, i);
                ps = s;
                pi = i;
            }
    std::printf("jsi: peak %.6e at signal %.3f nm, idler %.3f nm -> %s\n", peak,
                jsa.signal_nm[ps], jsa.idler_nm[pi], (dir / "jsi.csv").c_str());
    return 0;
}

int cmd_purity(const CommonArgs& args) {
    const auto cfg = load(args);
    SchmidtResult schmidt;
    if (const auto file = cfg.purity_jsa_file(); !file.empty()) {
        schmidt = schmidt_purity(read_jsa_json(file));
    } else {
        const auto bundle = medium_of(cfg);
        const auto pulse = cfg.pulse_pump();
        const auto grid = default_jsa_grid(pulse, cfg.target_signal_nm(), cfg.jsa_points(),
                                           cfg.jsa_bandwidths());
        schmidt = schmidt_purity(jsi_pulsed(bundle.medium, cfg.profile(), pulse, grid.signal_nm,
                                            grid.idler_nm, cfg.threads()));
    }
    const auto dir = out_dir(cfg, args);
    write_purity_json(dir / "purity.json", schmidt, cfg.hash());
    std::printf("purity %.6f schmidt_number %.4f -> %s\n", schmidt.purity,
                schmidt.schmidt_number, (dir / "purity.json").c_str());
    return 0;
}

int cmd_map(const CommonArgs& args) {
    const auto cfg = load(args);
    const auto bundle = medium_of(cfg);
    const auto spec = cfg.map_spec();
    const auto map =
        enhancement_map(bundle.medium, cfg.profile(), spec.deltas, spec.periods_m, cfg.cw_pump(),
                        omega_from_lambda_nm(cfg.target_signal_nm()), cfg.threads());
    const auto dir = out_dir(cfg, args);
    write_map_csv(dir / "map.csv", map, cfg.hash());
    double best = -1e300;
    std::size_t bd = 0, bp = 0;
    for (std::size_t d = 0; d < map.delta_axis.size(); ++d)
        for (std::size_t p = 0; p < map.period_axis_m.size(); ++p)
            if (map.at(d, p) > best) {
                best = map.at(d, p);
                bd = d;
                bp = p;
            }
    std::printf("map: max enhancement %.2f dB at delta %.4f, Lambda_T %.5f m -> %s\n", best,
                map.delta_axis[bd], map.period_axis_m[bp], (dir / "map.csv").c_str());
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    const auto cfg = load(args);
    const auto dir = out_dir(cfg, args);
    SweepPlan plan;
    plan.axes = cfg.sweep_axes();
    plan.base_config = cfg.raw();
    plan.output_csv = dir / "sweep.csv";
    plan.checkpoint = dir / "sweep.ndjson";
    const auto base_dir = cfg.base_dir();
    const SweepEvaluator evaluate = [&](const nlohmann::json& point) {
        const auto point_cfg = RunConfig::from_json(point, base_dir);
        const auto bundle = medium_of(point_cfg);
        const auto pump = point_cfg.cw_pump();
        const double omega_s = omega_from_lambda_nm(point_cfg.target_signal_nm());
        CwContext ctx(bundle.medium, point_cfg.profile(), pump, omega_s);
        const double n = propagate(ctx.tables()).photon_number();
        TaperProfile uniform = point_cfg.profile();
        uniform.delta = 0.0;
        CwContext ref(bundle.medium, uniform, pump, omega_s);
        const double n0 = propagate(ref.tables()).photon_number();
        return PointOutcome{n, 10.0 * std::log10(n / n0)};
    };
    const auto records = run_sweep(plan, evaluate, cfg.threads());
    std::size_t ok = 0;
    for (const auto& r : records) ok += r.status == "ok";
    std::printf("sweep: %zu points (%zu ok, %zu failed) -> %s\n", records.size(), ok,
                records.size() - ok, plan.output_csv.c_str());
    return 0;
}

int cmd_check(const CommonArgs& args) {
    const auto cfg = load(args);
    const auto bundle = medium_of(cfg);
    const auto profile = cfg.profile();
    const std::size_t fine_steps =
        std::max<std::size_t>(20000, static_cast<std::size_t>(profile.periods) *
                                         profile.steps_per_period * 2);
    double worst = 0.0;
    double worst_defect = 0.0;
    const double target = cfg.target_signal_nm();
    for (double wl : {target - 0.05, target, target + 0.05}) {
        double n_engine = 0.0, n_oracle = 0.0;
        TransferMatrix oracle;
        if (cfg.pump_is_pulse()) {
            const auto pulse = cfg.pulse_pump();
            const double omega_s = omega_from_lambda_nm(wl);
            PulsedContext ctx(bundle.medium, profile, pulse, omega_s,
                              2.0 * pulse.omega0() - omega_s);
            n_engine = propagate(ctx.tables()).photon_number();
            oracle = ode_oracle(ctx.field(), ctx.pairs(), ctx.length_m(), fine_steps, 1e-5);
        } else {
            CwContext ctx(bundle.medium, profile, cfg.cw_pump(), omega_from_lambda_nm(wl));
            n_engine = propagate(ctx.tables()).photon_number();
            oracle = ode_oracle(ctx.field(), ctx.pairs(), ctx.length_m(), fine_steps, 1e-5);
        }
        n_oracle = oracle.photon_number();
        worst = std::max(worst, std::abs(n_engine - n_oracle) / std::max(n_oracle, 1e-300));
        worst_defect = std::max(worst_defect, std::abs(oracle.bogoliubov_defect()));
    }
    const auto dir = out_dir(cfg, args);
    nlohmann::json j;
    j["version"] = version_string;
    j["config"] = cfg.hash();
    j["max_relative_deviation"] = worst;
    j["max_oracle_bogoliubov_defect"] = worst_defect;
    write_text_atomic(dir / "check.json", j.dump(1) + "\n");
    std::printf("check: max relative <N> deviation %.3e, oracle bogoliubov defect %.3e -> %s\n",
                worst, worst_defect, (dir / "check.json").c_str());
    return 0;
}

int fail(const char* type, const std::string& message, int code) {
    nlohmann::json j;
    j["error"] = {{"type", type}, {"message", message}};
    std::printf("%s\n", j.dump().c_str());
    std::fflush(stdout);
    std::fprintf(stderr, "sfwm: %s\n", message.c_str());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spontaneous four-wave mixing in periodically-tapered waveguides"};
    app.require_subcommand(1);

    CommonArgs args;
    const char* names[] = {"spectrum", "jsi", "purity", "map", "sweep", "check"};
    const char* descriptions[] = {
        "photon-number spectrum for a CW pump",
        "joint spectral intensity for a pulsed pump",
        "Schmidt purity of a joint spectral amplitude",
        "enhancement map over modulation depth and tapering period",
        "batch parameter scan with checkpoint/resume",
        "compare the transfer-matrix engine against the ODE oracle"};
    for (int k = 0; k < 6; ++k) add_common(app.add_subcommand(names[k], descriptions[k]), args);

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        if (command == "spectrum") return cmd_spectrum(args);
        if (command == "jsi") return cmd_jsi(args);
        if (command == "purity") return cmd_purity(args);
        if (command == "map") return cmd_map(args);
        if (command == "sweep") return cmd_sweep(args);
        if (command == "check") return cmd_check(args);
        return fail("internal", "unknown command " + command, 1);
    } catch (const config_error& e) {
        return fail("config", e.what(), 2);
    } catch (const domain_error& e) {
        return fail("numeric", e.what(), 3);
    } catch (const numeric_error& e) {
        return fail("numeric", e.what(), 3);
    } catch (const std::logic_error& e) {
        return fail("numeric", e.what(), 3);
    } catch (const io_error& e) {
        return fail("io", e.what(), 4);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 1);
    }
}
