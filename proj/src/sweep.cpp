#include "noon/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "noon/channels.hpp"
#include "noon/entanglement.hpp"
#include "noon/errors.hpp"
#include "noon/metrology.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace noon {

namespace {
constexpr const char* kVersion = "1.0.0";
const double kNan = std::numeric_limits<double>::quiet_NaN();
} // namespace

Scenario scenario_from_name(const std::string& name) {
    if (name == "fig1" || name == "mixed-phase-error") return Scenario::MixedPhaseError;
    if (name == "fig2" || name == "lossy-min-error") return Scenario::LossyMinError;
    if (name == "fig3" || name == "dephasing-min-error") return Scenario::DephasingMinError;
    if (name == "fig4" || name == "vacuum-mix-combined") return Scenario::VacuumMixCombined;
    if (name == "fig5" || name == "turbulence-tau") return Scenario::TurbulenceTau;
    if (name == "custom") return Scenario::Custom;
    throw ConfigError("unknown scenario '" + name + "'");
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::MixedPhaseError: return "fig1";
        case Scenario::LossyMinError: return "fig2";
        case Scenario::DephasingMinError: return "fig3";
        case Scenario::VacuumMixCombined: return "fig4";
        case Scenario::TurbulenceTau: return "fig5";
        case Scenario::Custom: return "custom";
    }
    return "custom";
}

SweepConfig preset_config(Scenario s) {
    SweepConfig c;
    c.scenario = s;
    switch (s) {
        case Scenario::MixedPhaseError:
            // 801 inclusive points puts a grid node exactly on the
            // quadrature phase pi/4; the singular endpoints drop out.
            c.sweep = {"phi", 0.0, M_PI / 2.0, 801, false};
            c.m = 2;
            c.mix_p = {0.4, 0.5, 0.9};
            break;
        case Scenario::LossyMinError:
            c.sweep = {"M", 1.0, 120.0, 120, false};
            c.kappa = 0.95;
            c.theta = 0.95;
            break;
        case Scenario::DephasingMinError:
            c.sweep = {"delta", 0.0, 0.6, 601, false};
            c.m = 3;
            break;
        case Scenario::VacuumMixCombined:
            c.sweep = {"p", 0.0, 1.0, 1001, false};
            c.m = 4;
            break;
        case Scenario::TurbulenceTau:
            c.sweep = {"d", 100.0, 4000.0, 40, false};
            c.m = 2;
            break;
        case Scenario::Custom:
            c.sweep = {"phi", 0.0, M_PI, 101, false};
            c.m = 1;
            c.state_spec = {{"type", "pure_noon"}, {"N", 1}};
            break;
    }
    return c;
}

namespace {

BeamParams beam_from_json(const nlohmann::json& j, const BeamParams& base) {
    BeamParams b = base;
    if (j.contains("spot_radius_m")) b.spot_radius = j.at("spot_radius_m").get<double>();
    if (j.contains("wavelength_m")) b.wavelength = j.at("wavelength_m").get<double>();
    if (j.contains("cn2")) b.cn2 = j.at("cn2").get<double>();
    if (j.contains("distance_m")) b.distance = j.at("distance_m").get<double>();
    if (j.contains("aperture_m")) {
        if (j.at("aperture_m").is_null())
            b.aperture.reset();
        else
            b.aperture = j.at("aperture_m").get<double>();
    }
    validate(b);
    return b;
}

nlohmann::json beam_to_json(const BeamParams& b) {
    nlohmann::json j;
    j["spot_radius_m"] = b.spot_radius;
    j["wavelength_m"] = b.wavelength;
    j["cn2"] = b.cn2;
    j["distance_m"] = b.distance;
    j["aperture_m"] = b.aperture ? nlohmann::json(*b.aperture) : nlohmann::json(nullptr);
    return j;
}

} // namespace

SweepConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (!j.contains("scenario")) throw ConfigError("missing field 'scenario'");
    SweepConfig c = preset_config(scenario_from_name(j.at("scenario").get<std::string>()));
    try {
        if (j.contains("M")) c.m = j.at("M").get<int>();
        if (j.contains("kappa")) c.kappa = j.at("kappa").get<double>();
        if (j.contains("theta")) c.theta = j.at("theta").get<double>();
        if (j.contains("mix_p")) c.mix_p = j.at("mix_p").get<std::vector<double>>();
        if (j.contains("beam")) c.beam = beam_from_json(j.at("beam"), c.beam);
        if (j.contains("state")) c.state_spec = j.at("state");
        if (j.contains("channels")) c.channel_specs = j.at("channels");
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("jobs")) c.jobs = j.at("jobs").get<int>();
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            if (s.contains("name")) c.sweep.name = s.at("name").get<std::string>();
            if (s.contains("start")) c.sweep.start = s.at("start").get<double>();
            if (s.contains("stop")) c.sweep.stop = s.at("stop").get<double>();
            if (s.contains("count")) c.sweep.count = s.at("count").get<int>();
            if (s.contains("scale")) {
                const auto scale = s.at("scale").get<std::string>();
                if (scale != "linear" && scale != "log")
                    throw ConfigError("sweep.scale must be 'linear' or 'log'");
                c.sweep.log_scale = scale == "log";
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config field: ") + e.what());
    }
    if (!std::isfinite(c.sweep.start) || !std::isfinite(c.sweep.stop))
        throw ConfigError("sweep bounds must be finite");
    if (c.sweep.count < 2) throw ConfigError("sweep.count must be >= 2");
    if (c.sweep.log_scale && !(c.sweep.start > 0.0 && c.sweep.stop > 0.0))
        throw ConfigError("log sweep requires positive bounds");
    if (c.m < 1) throw ConfigError("M must be >= 1");
    if (c.scenario == Scenario::MixedPhaseError)
        for (double p : c.mix_p)
            if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("mix_p entries must lie in [0,1]");
    if (c.scenario == Scenario::Custom && c.state_spec.is_null())
        throw ConfigError("custom scenario requires a 'state' spec");
    return c;
}

nlohmann::json config_to_json(const SweepConfig& c) {
    nlohmann::json j;
    j["scenario"] = scenario_name(c.scenario);
    j["M"] = c.m;
    j["kappa"] = c.kappa;
    j["theta"] = c.theta;
    j["mix_p"] = c.mix_p;
    j["beam"] = beam_to_json(c.beam);
    if (!c.state_spec.is_null()) j["state"] = c.state_spec;
    if (!c.channel_specs.empty()) j["channels"] = c.channel_specs;
    j["seed"] = c.seed;
    j["jobs"] = c.jobs;
    j["sweep"] = {{"name", c.sweep.name},
                  {"start", c.sweep.start},
                  {"stop", c.sweep.stop},
                  {"count", c.sweep.count},
                  {"scale", c.sweep.log_scale ? "log" : "linear"}};
    return j;
}

std::vector<double> sweep_grid(const SweepVar& v) {
    std::vector<double> g(v.count);
    if (v.log_scale) {
        const double la = std::log(v.start), lb = std::log(v.stop);
        for (int i = 0; i < v.count; ++i)
            g[i] = std::exp(la + (lb - la) * i / (v.count - 1));
    } else {
        for (int i = 0; i < v.count; ++i)
            g[i] = v.start + (v.stop - v.start) * i / (v.count - 1);
    }
    return g;
}

void serial_for(long n, const std::function<void(long)>& body) {
    for (long i = 0; i < n; ++i) body(i);
}

void parallel_for(long n, int jobs, const std::function<void(long)>& body) {
    if (jobs <= 0) {
        if (const char* env = std::getenv("NOON_SIM_JOBS")) jobs = std::atoi(env);
    }
#ifdef _OPENMP
    std::exception_ptr err = nullptr;
    if (jobs == 1) {
        serial_for(n, body);
        return;
    }
#pragma omp parallel for schedule(dynamic) num_threads(jobs > 0 ? jobs : omp_get_max_threads())
    for (long i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
#else
    (void)jobs;
    serial_for(n, body);
#endif
}

NoisyNoonState state_from_spec(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("type"))
        throw ConfigError("state spec requires a 'type'");
    const std::string type = spec.at("type").get<std::string>();
    try {
        if (type == "pure_noon") return pure_noon(spec.at("N").get<int>());
        if (type == "mixed_noon") return mixed_noon(spec.at("weights").get<std::vector<double>>());
        if (type == "vacuum_mix")
            return vacuum_mix(spec.at("p").get<double>(), spec.at("N").get<int>());
        if (type == "raw") return state_from_json(spec.at("value"));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("state spec: ") + e.what());
    }
    throw ConfigError("state spec: unknown type '" + type + "'");
}

NoisyNoonState apply_channel_spec(const NoisyNoonState& s, const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("type"))
        throw ConfigError("channel spec requires a 'type'");
    const std::string type = spec.at("type").get<std::string>();
    try {
        if (type == "loss") {
            return apply_constant_loss(
                s, {spec.at("kappa").get<double>(), spec.at("theta").get<double>()});
        }
        if (type == "dephase") {
            return apply_dephasing(s, gaussian_dephasing_spec(spec.at("delta").get<double>(),
                                                              spec.value("phi0", 0.0)));
        }
        if (type == "atmosphere") {
            const BeamParams beam = beam_from_json(spec, BeamParams{});
            const auto provider =
                std::make_shared<WeibullMomentProvider>(derive_weibull(beam));
            const std::string geom = spec.value("geometry", std::string("counter"));
            if (geom == "co") return apply_fluctuating_loss(s, co_propagation(provider));
            if (geom == "counter") {
                // Both arms share the link parameters; distance_m is per arm.
                return apply_fluctuating_loss(s, counter_propagation(provider, provider));
            }
            throw ConfigError("channel spec: geometry must be 'co' or 'counter'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("channel spec: ") + e.what());
    }
    throw ConfigError("channel spec: unknown type '" + type + "'");
}

namespace {

nlohmann::json base_metadata(const SweepConfig& c) {
    nlohmann::json meta;
    meta["config"] = config_to_json(c);
    meta["version"] = kVersion;
    meta["tolerances"] = {{"state_validation", 1e-12},
                          {"moment_quadrature_rel", 1e-9},
                          {"entanglement_tau", 1e-12}};
    return meta;
}

SweepResult run_mixed_phase_error(const SweepConfig& c) {
    SweepResult r;
    r.columns = {"phi"};
    std::vector<NoisyNoonState> states;
    for (double p : c.mix_p) {
        states.push_back(vacuum_mix(p, c.m));
        char buf[64];
        std::snprintf(buf, sizeof(buf), "dphi_p%g", p);
        r.columns.push_back(buf);
    }
    r.columns.push_back("sql");
    r.columns.push_back("hl");
    const auto grid = sweep_grid(c.sweep);
    const double sql = 1.0 / std::sqrt(static_cast<double>(c.m));
    const double hl = 1.0 / c.m;
    r.rows.assign(grid.size(), {});
    parallel_for(static_cast<long>(grid.size()), c.jobs, [&](long i) {
        std::vector<double> row{grid[i]};
        for (const auto& st : states) {
            try {
                row.push_back(phase_error(st, c.m, grid[i]));
            } catch (const PhaseInsensitiveError&) {
                row.push_back(kNan);
            }
        }
        row.push_back(sql);
        row.push_back(hl);
        r.rows[i] = std::move(row);
    });
    r.metadata = base_metadata(c);
    return r;
}

SweepResult run_lossy_min_error(const SweepConfig& c) {
    SweepResult r;
    r.columns = {"M", "dphi_min", "sql", "hl"};
    const auto grid = sweep_grid(c.sweep);
    r.rows.assign(grid.size(), {});
    parallel_for(static_cast<long>(grid.size()), c.jobs, [&](long i) {
        const int m = static_cast<int>(std::lround(grid[i]));
        const auto lossy = apply_constant_loss(pure_noon(m), {c.kappa, c.theta});
        const double dmin = min_phase_error(lossy, m).dphi;
        r.rows[i] = {static_cast<double>(m), dmin, 1.0 / std::sqrt(static_cast<double>(m)),
                     1.0 / m};
    });
    r.metadata = base_metadata(c);
    const auto best = optimal_m(c.kappa, c.theta);
    r.metadata["optimal_M"] = best.m;
    r.metadata["optimal_dphi_min"] = best.dphi;
    return r;
}

SweepResult run_dephasing_min_error(const SweepConfig& c) {
    SweepResult r;
    r.columns = {"delta", "dphi_min", "sql", "hl"};
    const auto grid = sweep_grid(c.sweep);
    const double sql = 1.0 / std::sqrt(static_cast<double>(c.m));
    r.rows.assign(grid.size(), {});
    parallel_for(static_cast<long>(grid.size()), c.jobs, [&](long i) {
        const auto st = apply_dephasing(pure_noon(c.m), gaussian_dephasing_spec(grid[i], 0.0));
        r.rows[i] = {grid[i], min_phase_error(st, c.m).dphi, sql, 1.0 / c.m};
    });
    r.metadata = base_metadata(c);
    if (c.m >= 2) {
        r.metadata["sql_crossing_delta"] = dephasing_threshold(c.m);
        r.metadata["naive_log_bound"] = std::log(static_cast<double>(c.m)) / c.m;
        r.metadata["note"] =
            "the often-quoted log(M)/M noise bound disagrees with the actual "
            "|lambda|^2 = 1/M crossing at sqrt(ln M)/M; both values are reported";
    }
    return r;
}

SweepResult run_vacuum_mix_combined(const SweepConfig& c) {
    SweepResult r;
    r.columns = {"p", "tau", "dphi_min", "sql"};
    const auto grid = sweep_grid(c.sweep);
    const double sql = 1.0 / std::sqrt(static_cast<double>(c.m));
    r.rows.assign(grid.size(), {});
    parallel_for(static_cast<long>(grid.size()), c.jobs, [&](long i) {
        const auto st = vacuum_mix(grid[i], c.m);
        const double tau = min_pt_eigenvalue(st).tau;
        double dmin = kNan;
        try {
            dmin = min_phase_error(st, c.m).dphi;
        } catch (const PhaseInsensitiveError&) {
        }
        r.rows[i] = {grid[i], tau, dmin, sql};
    });
    r.metadata = base_metadata(c);
    return r;
}

SweepResult run_turbulence_tau(const SweepConfig& c) {
    SweepResult r;
    r.columns = {"d", "tau_counter", "tau_co"};
    const auto grid = sweep_grid(c.sweep);
    r.rows.assign(grid.size(), {});
    parallel_for(static_cast<long>(grid.size()), c.jobs, [&](long i) {
        const double d = grid[i];
        // d is the receiver separation: counter-propagation splits it into
        // two arms of d/2 with the sender midway; co-propagation traverses
        // a single arm of length d.
        BeamParams arm = c.beam;
        arm.distance = d / 2.0;
        const auto half = std::make_shared<WeibullMomentProvider>(derive_weibull(arm));
        arm.distance = d;
        const auto full = std::make_shared<WeibullMomentProvider>(derive_weibull(arm));
        const auto st = pure_noon(c.m);
        const double tau_counter =
            min_pt_eigenvalue(apply_fluctuating_loss(st, counter_propagation(half, half))).tau;
        const double tau_co =
            min_pt_eigenvalue(apply_fluctuating_loss(st, co_propagation(full))).tau;
        r.rows[i] = {d, tau_counter, tau_co};
    });
    r.metadata = base_metadata(c);
    BeamParams ref = c.beam;
    const WeibullParams wp = derive_weibull(ref);
    r.metadata["weibull_at_reference_distance"] = {{"t0", wp.t0},
                                                   {"zeta", wp.zeta},
                                                   {"scale_m", wp.scale},
                                                   {"sigma2_m2", wp.sigma2},
                                                   {"spot_at_aperture_m", wp.spot_at_aperture}};
    r.metadata["mean_transmission_at_reference"] = pdtc_moment(wp, 1);
    r.metadata["mean_intensity_transmission_at_reference"] = pdtc_moment(wp, 2);
    r.metadata["note"] =
        "the wavelength is a free calibration parameter; use "
        "'atmosphere-info --calibrate <target>' to find the wavelength whose "
        "mean transmission matches a measured link";
    return r;
}

SweepResult run_custom(const SweepConfig& c) {
    NoisyNoonState st = state_from_spec(c.state_spec);
    for (const auto& ch : c.channel_specs) st = apply_channel_spec(st, ch);
    SweepResult r;
    r.columns = {"phi", "dphi", "sql", "hl"};
    if (c.sweep.name != "phi")
        throw ConfigError("custom scenario sweeps 'phi'; got '" + c.sweep.name + "'");
    const auto grid = sweep_grid(c.sweep);
    const double sql = 1.0 / std::sqrt(static_cast<double>(c.m));
    r.rows.assign(grid.size(), {});
    parallel_for(static_cast<long>(grid.size()), c.jobs, [&](long i) {
        double dphi = kNan;
        try {
            dphi = phase_error(st, c.m, grid[i]);
        } catch (const PhaseInsensitiveError&) {
        }
        r.rows[i] = {grid[i], dphi, sql, 1.0 / c.m};
    });
    r.metadata = base_metadata(c);
    r.metadata["state_after_channels"] = to_json(st);
    r.metadata["tau"] = min_pt_eigenvalue(st).tau;
    return r;
}

} // namespace

SweepResult run_scenario(const SweepConfig& config) {
    SweepResult r;
    switch (config.scenario) {
        case Scenario::MixedPhaseError: r = run_mixed_phase_error(config); break;
        case Scenario::LossyMinError: r = run_lossy_min_error(config); break;
        case Scenario::DephasingMinError: r = run_dephasing_min_error(config); break;
        case Scenario::VacuumMixCombined: r = run_vacuum_mix_combined(config); break;
        case Scenario::TurbulenceTau: r = run_turbulence_tau(config); break;
        case Scenario::Custom: r = run_custom(config); break;
    }
    for (size_t i = 0; i < r.rows.size(); ++i) {
        for (size_t k = 0; k < r.rows[i].size(); ++k) {
            if (std::isnan(r.rows[i][k])) {
                char buf[128];
                std::snprintf(buf, sizeof(buf), "row %zu (%s=%.12g): %s singular, row omitted",
                              i, r.columns[0].c_str(), r.rows[i][0], r.columns[k].c_str());
                r.skipped.emplace_back(buf);
                break;
            }
        }
    }
    r.metadata["skipped_rows"] = r.skipped.size();
    return r;
}

std::string to_csv(const SweepResult& r) {
    std::ostringstream os;
    for (size_t k = 0; k < r.columns.size(); ++k)
        os << (k ? "," : "") << r.columns[k];
    os << "\n";
    char buf[64];
    for (const auto& row : r.rows) {
        bool bad = false;
        for (double v : row)
            if (std::isnan(v)) bad = true;
        if (bad) continue;
        for (size_t k = 0; k < row.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.12g", row[k]);
            os << (k ? "," : "") << buf;
        }
        os << "\n";
    }
    return os.str();
}

std::string emit_plot_script(const SweepResult& r, const std::string& csv_name) {
    std::ostringstream os;
    const std::string scen = r.metadata.at("config").at("scenario").get<std::string>();
    os << "# gnuplot script; run: gnuplot " << scen << ".gp\n";
    os << "set datafile separator ','\n";
    os << "set key autotitle columnhead\n";
    os << "set grid\n";
    if (scen == "fig1" || scen == "custom") {
        os << "set xlabel 'phi (rad)'\nset ylabel 'phase error'\n";
        os << "set yrange [0:1.2]\n";
        os << "plot";
        for (size_t k = 1; k + 2 < r.columns.size(); ++k)
            os << (k > 1 ? "," : "") << " '" << csv_name << "' using 1:" << k + 1 << " with lines";
        os << ", '" << csv_name << "' using 1:" << r.columns.size() - 1
           << " with lines dashtype 3 title 'SQL'";
        os << ", '" << csv_name << "' using 1:" << r.columns.size()
           << " with lines dashtype 2 title 'HL'\n";
    } else if (scen == "fig2") {
        os << "set xlabel 'M'\nset ylabel 'minimal phase error'\n";
        os << "set logscale y\n";
        os << "plot '" << csv_name << "' using 1:2 with linespoints title 'lossy N00N'"
           << ", '" << csv_name << "' using 1:3 with lines dashtype 3 title 'SQL'"
           << ", '" << csv_name << "' using 1:4 with lines dashtype 2 title 'HL'\n";
    } else if (scen == "fig3") {
        os << "set xlabel 'delta'\nset ylabel 'minimal phase error'\n";
        os << "plot '" << csv_name << "' using 1:2 with lines title 'dephased N00N'"
           << ", '" << csv_name << "' using 1:3 with lines dashtype 3 title 'SQL'"
           << ", '" << csv_name << "' using 1:4 with lines dashtype 2 title 'HL'\n";
    } else if (scen == "fig4") {
        os << "set xlabel 'p'\n";
        os << "set ylabel 'tau'\nset y2label 'minimal phase error'\n";
        os << "set ytics nomirror\nset y2tics\n";
        os << "plot '" << csv_name << "' using 1:2 with lines axes x1y1 title 'tau'"
           << ", '" << csv_name << "' using 1:3 with lines axes x1y2 title 'dphi_min'"
           << ", '" << csv_name << "' using 1:4 with lines axes x1y2 dashtype 3 title 'SQL'"
           << ", 0 with lines axes x1y1 dashtype 4 title ''\n";
    } else if (scen == "fig5") {
        os << "set xlabel 'd (m)'\nset ylabel 'tau'\n";
        os << "plot '" << csv_name << "' using 1:2 with lines title 'counter-propagation'"
           << ", '" << csv_name << "' using 1:3 with lines title 'co-propagation'"
           << ", 0 with lines dashtype 4 title ''\n";
    }
    return os.str();
}

void write_result(const SweepResult& r, const std::string& out_dir, const std::string& base) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    {
        std::ofstream f(dir / (base + ".csv"), std::ios::binary);
        f << to_csv(r);
    }
    {
        std::ofstream f(dir / (base + ".meta.json"), std::ios::binary);
        f << r.metadata.dump(2) << "\n";
    }
    {
        std::ofstream f(dir / (base + ".gp"), std::ios::binary);
        f << emit_plot_script(r, base + ".csv");
    }
    if (!r.skipped.empty()) {
        std::ofstream f(dir / (base + ".skipped.log"), std::ios::binary);
        for (const auto& line : r.skipped) f << line << "\n";
    }
}

} // namespace noon
