#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "test_util.hpp"

using namespace gpr4;
using namespace gpr4::testing;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("gpr4_io_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

ConfigFile parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

}  // namespace

TEST(Config, ParsesKeysAndComments) {
    const ConfigFile c = parse("# header\ncase = rp1\nnx = 400   # finer\n\ncfl=0.4\nrescale_det = false\n");
    ASSERT_TRUE(c.case_name);
    EXPECT_EQ(*c.case_name, "rp1");
    EXPECT_EQ(*c.overrides.nx, 400);
    EXPECT_EQ(*c.overrides.cfl, 0.4);
    EXPECT_FALSE(*c.overrides.rescale_det);
    EXPECT_FALSE(c.overrides.ny);
}

TEST(Config, RejectsBadInput) {
    EXPECT_THROW(parse("viscosity = 1\n"), ConfigError);
    EXPECT_THROW(parse("nx = 10\nnx = 20\n"), ConfigError);
    EXPECT_THROW(parse("nx 10\n"), ConfigError);
    EXPECT_THROW(parse("nx = \n"), ConfigError);
    EXPECT_THROW(parse("nx = 10.5\n"), ConfigError);
    EXPECT_THROW(parse("cfl = fast\n"), ConfigError);
    EXPECT_THROW(parse("deterministic = maybe\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/gpr4.cfg"), ConfigError);
    try {
        parse("nx = 4\n\nbogus = 1\n");
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Config, CommandLineWinsOverFile) {
    CaseOverrides file, cli;
    file.nx = 100;
    file.cfl = 0.3;
    cli.nx = 50;
    const CaseOverrides m = merge(file, cli);
    EXPECT_EQ(*m.nx, 50);
    EXPECT_EQ(*m.cfl, 0.3);
}

TEST(Output, CutCsvHeaderAndRows) {
    const auto dir = scratch("cut");
    const CaseSpec c = cases::rp1(20, 4);
    const GridSpec g = c.grid();
    write_cut_csv(dir / "cut.csv", initial_state(c, g), g, c.params, 0.01);
    const auto lines = read_lines(dir / "cut.csv");
    ASSERT_EQ(lines.size(), 21u);
    EXPECT_EQ(lines[0], "x,rho,u,v,p,T,A11,A21,J1");
    std::istringstream row(lines[1]);
    std::vector<double> vals;
    for (std::string cell; std::getline(row, cell, ',');) vals.push_back(std::stod(cell));
    ASSERT_EQ(vals.size(), 9u);
    EXPECT_NEAR(vals[0], -0.475, 1e-12);
    EXPECT_NEAR(vals[1], 1.0, 1e-12);
    EXPECT_NEAR(vals[4], 1.0, 1e-9);
    EXPECT_NEAR(vals[6], 1.0, 1e-12);
    std::filesystem::remove_all(dir);
}

TEST(Output, DiagnosticsCsvHeader) {
    const auto dir = scratch("diag");
    const GridSpec g = periodic_grid(4, 4);
    const ConservedState s = state_from(g, ModelParams{}, CellScalar(g, 2.0), VertexVector(g, {1, 0, 0}),
                                        CellScalar(g, 1.0));
    const DiagnosticsRow r = diagnostics(s, g, 0.5);
    EXPECT_NEAR(r.mass, 2.0, 1e-14);
    EXPECT_NEAR(r.mom_x, 2.0, 1e-14);
    EXPECT_EQ(r.curlA_inf, 0.0);
    write_diagnostics_csv(dir / "d.csv", {r});
    const auto lines = read_lines(dir / "d.csv");
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0], "t,curlA_inf,curlJ_inf,mass,mom_x,mom_y,energy");
    EXPECT_EQ(lines[1].substr(0, 4), "0.5,");
    std::filesystem::remove_all(dir);
}

TEST(Output, VtkHasAllFields) {
    const auto dir = scratch("vtk");
    const CaseSpec c = cases::solid_rotor(6);
    const GridSpec g = c.grid();
    write_vtk(dir / "s.vtk", initial_state(c, g), g, c.params, 0.0);
    const auto lines = read_lines(dir / "s.vtk");
    ASSERT_GT(lines.size(), 4u);
    EXPECT_EQ(lines[0], "# vtk DataFile Version 3.0");
    EXPECT_EQ(lines[2], "ASCII");
    EXPECT_EQ(lines[3], "DATASET STRUCTURED_GRID");
    std::set<std::string> names;
    for (const auto& l : lines)
        if (l.rfind("SCALARS ", 0) == 0) names.insert(l.substr(8, l.find(' ', 8) - 8));
    for (const char* n : {"rho", "u", "v", "p", "T", "A11", "A12", "A13", "A21", "A22", "A23", "A31", "A32", "A33",
                          "J1", "J2", "J3"})
        EXPECT_TRUE(names.count(n)) << n;
    EXPECT_NE(std::find(lines.begin(), lines.end(), "DIMENSIONS 7 7 1"), lines.end());
    std::filesystem::remove_all(dir);
}

TEST(Output, MachTableCsv) {
    const auto dir = scratch("mach");
    std::vector<MachRow> rows{{1e2, 0.0845, 1e-3, 2e-3, 3e-3, {}, {}, {}},
                              {1e4, 0.00845, 1e-5, 2e-5, 3e-5, 2.0, 2.0, 2.0}};
    write_mach_table_csv(dir / "t.csv", rows);
    const auto lines = read_lines(dir / "t.csv");
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], "p0,Ma,L2_rho,Linf_rho,Linf_divv,order_L2_rho,order_Linf_rho,order_Linf_divv");
    EXPECT_EQ(lines[1].substr(lines[1].size() - 3), ",,,");
    std::filesystem::remove_all(dir);
}

TEST(Checkpoint, RoundTripIsBitwise) {
    const auto dir = scratch("ckpt");
    const CaseSpec c = cases::lid_cavity(6);
    const GridSpec g = c.grid();
    std::mt19937_64 rng(3);
    ConservedState s = initial_state(c, g);
    s.E = random_field<CellScalar>(g, rng, 1.0, 2.0);
    s.A = random_field<CellTensor>(g, rng);
    save_checkpoint(dir / "c.bin", {g, s, 0.125, 17});
    const Checkpoint back = load_checkpoint(dir / "c.bin");
    EXPECT_TRUE(back.grid == g);
    EXPECT_TRUE(back.state == s);
    EXPECT_EQ(back.t, 0.125);
    EXPECT_EQ(back.step, 17);

    std::ofstream(dir / "bad.bin") << "not a checkpoint";
    EXPECT_THROW(load_checkpoint(dir / "bad.bin"), ConfigError);
    std::filesystem::resize_file(dir / "c.bin", 100);
    EXPECT_THROW(load_checkpoint(dir / "c.bin"), ConfigError);
    EXPECT_THROW(load_checkpoint(dir / "missing.bin"), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST(RunCase, WritesSnapshotFiles) {
    const auto dir = scratch("run");
    CaseSpec c = cases::taylor_green(8);
    c.t_end = 0.004;
    c.output_interval = 0.002;
    RunOptions o;
    o.out_dir = dir;
    run_case(c, o);
    for (const char* f : {"taylor_green_0000.vtk", "taylor_green_0002.vtk", "taylor_green_cut_0001.csv",
                          "taylor_green_diagnostics.csv", "taylor_green_final.bin"})
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    std::filesystem::remove_all(dir);
}
