#pragma once

// Case runner and the Mach-number sweep.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <string>
#include <vector>

#include "gpr4/cases.hpp"
#include "gpr4/driver.hpp"
#include "gpr4/io.hpp"

namespace gpr4 {

struct Snapshot {
    double t;
    ConservedState state;
};

struct RunReport {
    std::string case_name;
    GridSpec grid;
    std::vector<Snapshot> snapshots;        // t = 0, every output time, t_end
    std::vector<DiagnosticsRow> diagnostics;  // after every step, plus t = 0
    std::vector<StepStats> steps;
    std::vector<double> step_seconds;
    double wall_seconds = 0.0;
    int retries = 0;
    ConservedState final_state;
    double t_final = 0.0;
};

struct RunOptions {
    std::filesystem::path out_dir;  // empty: no files
    bool keep_snapshots = true;
    bool write_vtk = true;
    std::optional<Checkpoint> restart;
    /// Called after every accepted step with (step, t, state).
    std::function<void(long, double, const ConservedState&)> on_step;
    int max_retries = 6;
};

namespace detail {

inline std::string snapshot_name(const std::string& base, int index, const char* ext) {
    std::ostringstream s;
    s << base << '_' << std::setw(4) << std::setfill('0') << index << ext;
    return s.str();
}

}  // namespace detail

inline RunReport run_case(const CaseSpec& c, const RunOptions& opt = {}) {
    c.validate();
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    rep.case_name = c.name;
    rep.grid = c.grid();
    const GridSpec& g = rep.grid;
    const ModelParams& p = c.params;

    ConservedState s;
    double t = 0.0;
    long step = 0;
    if (opt.restart) {
        if (!(opt.restart->grid == g)) throw ConfigError("restart grid does not match case " + c.name);
        s = opt.restart->state;
        t = opt.restart->t;
        step = opt.restart->step;
    } else {
        s = initial_state(c, g);
    }

    const bool files = !opt.out_dir.empty();
    if (files) std::filesystem::create_directories(opt.out_dir);
    const double cut_y = c.cut_y.value_or(g.origin[1] + 0.5 * g.length_y());
    int out_index = 0;
    auto emit = [&](double time) {
        if (opt.keep_snapshots) rep.snapshots.push_back({time, s});
        if (files) {
            if (opt.write_vtk) write_vtk(opt.out_dir / detail::snapshot_name(c.name, out_index, ".vtk"), s, g, p, time);
            write_cut_csv(opt.out_dir / detail::snapshot_name(c.name + "_cut", out_index, ".csv"), s, g, p, cut_y);
        }
        ++out_index;
    };
    rep.diagnostics.push_back(diagnostics(s, g, t));
    emit(t);

    const double eps = 1e-12 * c.t_end;
    double next_out = c.output_interval > 0.0 ? t + c.output_interval : c.t_end;
    while (t < c.t_end - eps) {
        if (step - (opt.restart ? opt.restart->step : 0) >= c.max_steps)
            throw TimeStepFailure(c.name + ": max_steps reached at t = " + std::to_string(t));
        double dt = compute_dt(s, g, c.time_step);
        const double target = std::min(next_out, c.t_end);
        if (t + dt * (1.0 + 1e-9) >= target) dt = target - t;

        const auto ts = std::chrono::steady_clock::now();
        StepStats st;
        ConservedState next;
        for (int attempt = 0;; ++attempt) {
            try {
                next = advance_step(s, dt, g, p, c.solver, &st);
                break;
            } catch (const TimeStepFailure& e) {
                if (attempt >= opt.max_retries)
                    throw TimeStepFailure("step " + std::to_string(step + 1) + ", t = " + std::to_string(t) + ": " +
                                          e.what());
                dt *= 0.5;
                ++rep.retries;
            } catch (const SolverError& e) {
                throw SolverError("step " + std::to_string(step + 1) + ", t = " + std::to_string(t) + ": " + e.what(),
                                  e.iterations(), e.residual());
            } catch (const StateError& e) {
                throw StateError("step " + std::to_string(step + 1) + ", t = " + std::to_string(t) + ": " + e.what());
            }
        }
        rep.step_seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - ts).count());
        s = std::move(next);
        t += dt;
        ++step;
        if (std::abs(t - target) <= eps) t = target;
        rep.steps.push_back(st);
        rep.diagnostics.push_back(diagnostics(s, g, t));
        if (opt.on_step) opt.on_step(step, t, s);
        if (t >= next_out - eps) {
            emit(t);
            next_out = c.output_interval > 0.0 ? next_out + c.output_interval : c.t_end;
            if (next_out > c.t_end) next_out = c.t_end;
        }
    }
    if (files) {
        write_diagnostics_csv(opt.out_dir / (c.name + "_diagnostics.csv"), rep.diagnostics);
        save_checkpoint(opt.out_dir / (c.name + "_final.bin"), {g, s, t, step});
    }
    rep.final_state = std::move(s);
    rep.t_final = t;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// --- Mach-number sweep ------------------------------------------------------------

struct MachRow {
    double p0;
    double mach;
    double l2_rho;
    double linf_rho;
    double linf_divv;
    std::optional<double> order_l2_rho, order_linf_rho, order_linf_divv;
};

/// Deviation measures of the final state from ρ₀ and from solenoidal flow.
struct IncompressibilityErrors {
    double l2_rho;
    double linf_rho;
    double linf_divv;
};

inline IncompressibilityErrors incompressibility_errors(const ConservedState& s, const GridSpec& g, double rho0) {
    IncompressibilityErrors e{0.0, 0.0, 0.0};
    for (double r : s.rho) {
        e.l2_rho += (r - rho0) * (r - rho0);
        e.linf_rho = std::max(e.linf_rho, std::abs(r - rho0));
    }
    e.l2_rho = std::sqrt(e.l2_rho * g.cell_volume());
    e.linf_divv = norm_inf(div_cp(vertex_velocity(s.mom, s.rho, g), g));
    return e;
}

/// Taylor–Green runs at each p₀ with one fixed Δt, taken from the CFL
/// condition of the initial state (the velocity does not depend on p₀).
inline std::vector<MachRow> convergence_harness(const std::vector<double>& p0s, int n = 128, double t_end = 0.1,
                                                const SolverSettings& solver = {}) {
    std::vector<MachRow> rows;
    if (p0s.empty()) return rows;
    CaseSpec base = cases::taylor_green(n, p0s.front());
    const GridSpec g = base.grid();
    const double dt = compute_dt(initial_state(base, g), g, base.time_step);
    for (double p0 : p0s) {
        CaseSpec c = cases::taylor_green(n, p0);
        c.t_end = t_end;
        c.time_step = TimeStepPolicy::fixed(dt);
        c.solver = solver;
        RunOptions o;
        o.keep_snapshots = false;
        const RunReport r = run_case(c, o);
        const auto e = incompressibility_errors(r.final_state, g, c.params.rho0);
        MachRow row{p0, 1.0 / std::sqrt(c.params.gamma * p0 / c.params.rho0), e.l2_rho, e.linf_rho, e.linf_divv,
                    {}, {}, {}};
        if (!rows.empty()) {
            const MachRow& a = rows.back();
            const double lm = std::log(row.mach / a.mach);
            row.order_l2_rho = std::log(row.l2_rho / a.l2_rho) / lm;
            row.order_linf_rho = std::log(row.linf_rho / a.linf_rho) / lm;
            row.order_linf_divv = std::log(row.linf_divv / a.linf_divv) / lm;
        }
        rows.push_back(row);
    }
    return rows;
}

inline void write_mach_table_csv(const std::filesystem::path& path, const std::vector<MachRow>& rows) {
    std::ofstream f;
    io_detail::open_for_write(f, path);
    f << std::setprecision(6);
    f << "p0,Ma,L2_rho,Linf_rho,Linf_divv,order_L2_rho,order_Linf_rho,order_Linf_divv\n";
    auto opt = [&](const std::optional<double>& x) {
        if (x) f << *x;
    };
    for (const auto& r : rows) {
        f << r.p0 << ',' << r.mach << ',' << r.l2_rho << ',' << r.linf_rho << ',' << r.linf_divv << ',';
        opt(r.order_l2_rho);
        f << ',';
        opt(r.order_linf_rho);
        f << ',';
        opt(r.order_linf_divv);
        f << '\n';
    }
}

}  // namespace gpr4
