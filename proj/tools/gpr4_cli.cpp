// gpr4 command line: run a named case, reproduce the Mach-number table, list cases.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gpr4/gpr4.hpp"

namespace {

int exit_code(const std::exception& e) {
    if (dynamic_cast<const gpr4::ConfigError*>(&e)) return 2;
    if (dynamic_cast<const gpr4::SolverError*>(&e)) return 3;
    if (dynamic_cast<const gpr4::TimeStepFailure*>(&e)) return 4;
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-implicit staggered solver for the GPR model"};
    app.require_subcommand(1);

    std::string case_name, config, out_dir;
    std::optional<int> nx, ny;
    std::optional<double> t_end, cfl;
    bool deterministic = false, no_vtk = false;
    auto* run = app.add_subcommand("run", "Run one case");
    run->add_option("--case", case_name, "Case name (see list-cases)");
    run->add_option("--config", config, "Config file with key = value lines");
    run->add_option("--nx", nx, "Cells in x");
    run->add_option("--ny", ny, "Cells in y");
    run->add_option("--t-end", t_end, "Final time");
    run->add_option("--cfl", cfl, "CFL number, (0, 0.5]");
    run->add_option("--out", out_dir, "Output directory (default out/<case>)");
    run->add_flag("--deterministic", deterministic, "Fixed-order reductions");
    run->add_flag("--no-vtk", no_vtk, "Skip VTK snapshots");

    std::string table_dir = "out/table1";
    int table_n = 64;
    double table_t = 0.1;
    auto* table = app.add_subcommand("table1", "Taylor-Green Mach-number sweep");
    table->add_option("--out", table_dir, "Output directory");
    table->add_option("--n", table_n, "Cells per direction");
    table->add_option("--t-end", table_t, "Final time");

    auto* list = app.add_subcommand("list-cases", "List the case library");

    CLI11_PARSE(app, argc, argv);

    try {
        using namespace gpr4;
        if (*list) {
            for (const auto& n : case_names()) std::printf("%-13s %s\n", n.c_str(), make_case(n).description.c_str());
            return 0;
        }
        if (*table) {
            const auto rows = convergence_harness({1e2, 1e4, 1e6}, table_n, table_t);
            const auto path = std::filesystem::path(table_dir) / "table1.csv";
            std::filesystem::create_directories(table_dir);
            write_mach_table_csv(path, rows);
            std::printf("%-8s %-10s %-11s %-11s %-11s %s\n", "p0", "Ma", "L2 rho", "Linf rho", "Linf divv",
                        "orders");
            for (const auto& r : rows) {
                std::printf("%-8.0e %-10.3e %-11.3e %-11.3e %-11.3e", r.p0, r.mach, r.l2_rho, r.linf_rho, r.linf_divv);
                if (r.order_l2_rho)
                    std::printf(" %.2f %.2f %.2f", *r.order_l2_rho, *r.order_linf_rho, *r.order_linf_divv);
                std::printf("\n");
            }
            std::printf("wrote %s\n", path.string().c_str());
            return 0;
        }

        CaseOverrides o;
        if (!config.empty()) {
            const ConfigFile f = load_config(config);
            o = f.overrides;
            if (f.case_name) {
                if (!case_name.empty() && case_name != *f.case_name)
                    throw ConfigError("--case " + case_name + " conflicts with case = " + *f.case_name + " in " + config);
                case_name = *f.case_name;
            }
        }
        if (case_name.empty()) throw ConfigError("no case given (use --case or case = ... in the config)");
        CaseOverrides cli;
        cli.nx = nx;
        cli.ny = ny;
        cli.t_end = t_end;
        cli.cfl = cfl;
        if (deterministic) cli.deterministic = true;
        o = merge(o, cli);
        const CaseSpec c = make_case(case_name, o);

        RunOptions ro;
        ro.out_dir = out_dir.empty() ? std::filesystem::path("out") / c.name : std::filesystem::path(out_dir);
        ro.keep_snapshots = false;
        ro.write_vtk = !no_vtk;
        std::printf("%s: %d x %d, t_end = %g -> %s\n", c.name.c_str(), c.nx, c.ny, c.t_end, ro.out_dir.string().c_str());
        const RunReport r = run_case(c, ro);
        const auto& d = r.diagnostics;
        std::printf("done: %zu steps, t = %g, %.2f s wall, %d retries\n", r.steps.size(), r.t_final, r.wall_seconds,
                    r.retries);
        std::printf("mass %.12e -> %.12e, energy %.12e -> %.12e\n", d.front().mass, d.back().mass, d.front().energy,
                    d.back().energy);
        if (c.curl_series) std::printf("curl A %.3e, curl J %.3e\n", d.back().curlA_inf, d.back().curlJ_inf);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e);
    }
}
