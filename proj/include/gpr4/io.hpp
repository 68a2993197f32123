#pragma once

// Config files, snapshot/cut/diagnostics writers and binary restart files.

#include <cstdint>
#include <cstring>
#include <set>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include "gpr4/cases.hpp"
#include "gpr4/compatible.hpp"
#include "gpr4/errors.hpp"
#include "gpr4/grid.hpp"
#include "gpr4/state.hpp"

namespace gpr4 {

// --- config -------------------------------------------------------------------

struct ConfigFile {
    std::optional<std::string> case_name;
    CaseOverrides overrides;
};

namespace io_detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& key, const std::string& v, int line) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty())
        throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects a number, got '" + v + "'");
    return x;
}

inline int to_int(const std::string& key, const std::string& v, int line) {
    const double x = to_double(key, v, line);
    if (x != std::floor(x) || std::abs(x) > 1e9)
        throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects an integer");
    return static_cast<int>(x);
}

inline bool to_bool(const std::string& key, const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects true or false");
}

}  // namespace io_detail

/// Parse `key = value` lines. '#' starts a comment. Unknown keys, repeated
/// keys and malformed lines are errors.
inline ConfigFile parse_config(std::istream& in) {
    using namespace io_detail;
    ConfigFile cfg;
    CaseOverrides& o = cfg.overrides;
    std::set<std::string> seen;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key or value");
        if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(line) + ": repeated key '" + key + "'");

        auto d = [&] { return to_double(key, val, line); };
        auto n = [&] { return to_int(key, val, line); };
        if (key == "case") cfg.case_name = val;
        else if (key == "nx") o.nx = n();
        else if (key == "ny") o.ny = n();
        else if (key == "t_end") o.t_end = d();
        else if (key == "cfl") o.cfl = d();
        else if (key == "dt") o.dt = d();
        else if (key == "dt_min") o.dt_min = d();
        else if (key == "dt_max") o.dt_max = d();
        else if (key == "output_interval") o.output_interval = d();
        else if (key == "gamma") o.gamma = d();
        else if (key == "cv") o.cv = d();
        else if (key == "cs") o.cs = d();
        else if (key == "ch") o.ch = d();
        else if (key == "rho0") o.rho0 = d();
        else if (key == "tau1") o.tau1 = d();
        else if (key == "tau2") o.tau2 = d();
        else if (key == "mu") o.mu = d();
        else if (key == "p0") o.p0 = d();
        else if (key == "rel_tol") o.rel_tol = d();
        else if (key == "max_iter") o.max_iter = n();
        else if (key == "max_steps") o.max_steps = n();
        else if (key == "deterministic") o.deterministic = to_bool(key, val, line);
        else if (key == "rescale_det") o.rescale_det = to_bool(key, val, line);
        else if (key == "cut_y") o.cut_y = d();
        else throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
    return cfg;
}

inline ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

/// Values set in `top` win over `base`.
inline CaseOverrides merge(const CaseOverrides& base, const CaseOverrides& top) {
    CaseOverrides r = base;
#define GPR4_MERGE(f) \
    if (top.f) r.f = top.f;
    GPR4_MERGE(nx) GPR4_MERGE(ny) GPR4_MERGE(t_end) GPR4_MERGE(cfl) GPR4_MERGE(dt) GPR4_MERGE(dt_min)
    GPR4_MERGE(dt_max) GPR4_MERGE(output_interval) GPR4_MERGE(gamma) GPR4_MERGE(cv) GPR4_MERGE(cs) GPR4_MERGE(ch)
    GPR4_MERGE(rho0) GPR4_MERGE(tau1) GPR4_MERGE(tau2) GPR4_MERGE(mu) GPR4_MERGE(p0) GPR4_MERGE(rel_tol)
    GPR4_MERGE(max_iter) GPR4_MERGE(max_steps) GPR4_MERGE(deterministic) GPR4_MERGE(rescale_det)
    GPR4_MERGE(cut_y)
#undef GPR4_MERGE
    return r;
}

// --- derived output fields ----------------------------------------------------

struct CellPrimitives {
    CellScalar rho, p, T;
    CellVector v;
};

inline CellPrimitives cell_primitives(const ConservedState& s, const GridSpec& g, const ModelParams& p) {
    CellPrimitives c{s.rho, CellScalar(g), temperature(s, g, p), cell_velocity(s.mom, s.rho, g)};
    for (std::size_t k = 0; k < c.p.size(); ++k) c.p[k] = eos_pressure(s.rho[k], c.T[k], p);
    return c;
}

namespace io_detail {

inline void open_for_write(std::ofstream& f, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    f.open(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << std::setprecision(std::numeric_limits<double>::max_digits10);
}

}  // namespace io_detail

/// Legacy ASCII VTK structured grid. Velocity is point data at the vertices
/// (periodic vertex lines repeated), everything else is cell data.
inline void write_vtk(const std::filesystem::path& path, const ConservedState& s, const GridSpec& g,
                      const ModelParams& p, double t) {
    std::ofstream f;
    io_detail::open_for_write(f, path);
    const CellPrimitives c = cell_primitives(s, g, p);
    const VertexVector v = vertex_velocity(s.mom, s.rho, g);
    const int npx = g.nx + 1, npy = g.ny + 1;
    f << "# vtk DataFile Version 3.0\n";
    f << "gpr4 t=" << t << "\nASCII\nDATASET STRUCTURED_GRID\n";
    f << "DIMENSIONS " << npx << ' ' << npy << " 1\n";
    f << "POINTS " << npx * npy << " double\n";
    for (int j = 0; j < npy; ++j)
        for (int i = 0; i < npx; ++i) f << g.xv(i) << ' ' << g.yv(j) << " 0\n";

    f << "POINT_DATA " << npx * npy << '\n';
    for (int comp = 0; comp < 2; ++comp) {
        f << "SCALARS " << (comp == 0 ? "u" : "v") << " double 1\nLOOKUP_TABLE default\n";
        for (int j = 0; j < npy; ++j)
            for (int i = 0; i < npx; ++i) f << v(g.wrap_vx(i), g.wrap_vy(j))[comp] << '\n';
    }

    f << "CELL_DATA " << g.num_cells() << '\n';
    auto scalar = [&](const char* name, auto get) {
        f << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (std::size_t k = 0; k < g.num_cells(); ++k) f << get(k) << '\n';
    };
    scalar("rho", [&](std::size_t k) { return c.rho[k]; });
    scalar("p", [&](std::size_t k) { return c.p[k]; });
    scalar("T", [&](std::size_t k) { return c.T[k]; });
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) {
            const std::string name = "A" + std::to_string(a + 1) + std::to_string(b + 1);
            scalar(name.c_str(), [&](std::size_t k) { return s.A[k](a, b); });
        }
    for (std::size_t a = 0; a < 3; ++a) {
        const std::string name = "J" + std::to_string(a + 1);
        scalar(name.c_str(), [&](std::size_t k) { return s.J[k][a]; });
    }
}

/// Cell row whose centre is closest to y.
inline int cut_row(const GridSpec& g, double y) {
    const int j = static_cast<int>(std::floor((y - g.origin[1]) / g.dy));
    return std::clamp(j, 0, g.ny - 1);
}

inline void write_cut_csv(const std::filesystem::path& path, const ConservedState& s, const GridSpec& g,
                          const ModelParams& p, double y) {
    std::ofstream f;
    io_detail::open_for_write(f, path);
    const CellPrimitives c = cell_primitives(s, g, p);
    const int j = cut_row(g, y);
    f << "x,rho,u,v,p,T,A11,A21,J1\n";
    for (int i = 0; i < g.nx; ++i) {
        const std::size_t k = g.cell_index(i, j);
        f << g.xc(i) << ',' << c.rho[k] << ',' << c.v[k][0] << ',' << c.v[k][1] << ',' << c.p[k] << ',' << c.T[k]
          << ',' << s.A[k](0, 0) << ',' << s.A[k](1, 0) << ',' << s.J[k][0] << '\n';
    }
}

struct DiagnosticsRow {
    double t;
    double curlA_inf;
    double curlJ_inf;
    double mass;
    double mom_x;
    double mom_y;
    double energy;
};

inline DiagnosticsRow diagnostics(const ConservedState& s, const GridSpec& g, double t) {
    const CurlReport c = curl_diagnostics(s.A, s.J, g);
    const Totals tot = totals(s, g);
    return {t, c.A, c.J, tot.mass, tot.momentum[0], tot.momentum[1], tot.energy};
}

inline void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRow>& rows) {
    std::ofstream f;
    io_detail::open_for_write(f, path);
    f << "t,curlA_inf,curlJ_inf,mass,mom_x,mom_y,energy\n";
    for (const auto& r : rows)
        f << r.t << ',' << r.curlA_inf << ',' << r.curlJ_inf << ',' << r.mass << ',' << r.mom_x << ',' << r.mom_y
          << ',' << r.energy << '\n';
}

// --- restart files --------------------------------------------------------------

struct Checkpoint {
    GridSpec grid;
    ConservedState state;
    double t = 0.0;
    long step = 0;
};

namespace io_detail {

constexpr char kMagic[8] = {'G', 'P', 'R', '4', 'S', 'T', '0', '1'};

template <class T>
void put(std::ostream& o, const T& x) {
    o.write(reinterpret_cast<const char*>(&x), sizeof(T));
}
template <class T>
void get(std::istream& in, T& x) {
    in.read(reinterpret_cast<char*>(&x), sizeof(T));
    if (!in) throw ConfigError("restart file truncated");
}
template <class T, Loc L>
void put_field(std::ostream& o, const Field<T, L>& f) {
    o.write(reinterpret_cast<const char*>(f.values().data()), static_cast<std::streamsize>(f.size() * sizeof(T)));
}
template <class T, Loc L>
void get_field(std::istream& in, Field<T, L>& f) {
    in.read(reinterpret_cast<char*>(f.values().data()), static_cast<std::streamsize>(f.size() * sizeof(T)));
    if (!in) throw ConfigError("restart file truncated");
}

}  // namespace io_detail

/// Raw binary dump; reloading reproduces the state bit for bit.
inline void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
    using namespace io_detail;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream o(path, std::ios::binary);
    if (!o) throw std::runtime_error("cannot write " + path.string());
    o.write(kMagic, sizeof kMagic);
    const GridSpec& g = c.grid;
    put(o, g.nx);
    put(o, g.ny);
    put(o, g.dx);
    put(o, g.dy);
    put(o, g.origin);
    for (const auto& b : g.sides) {
        put(o, static_cast<std::int32_t>(b.kind));
        put(o, b.wall_velocity);
    }
    put(o, c.t);
    put(o, c.step);
    put_field(o, c.state.rho);
    put_field(o, c.state.mom);
    put_field(o, c.state.E);
    put_field(o, c.state.A);
    put_field(o, c.state.J);
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
    using namespace io_detail;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open restart file " + path.string());
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw ConfigError("not a gpr4 restart file");
    Checkpoint c;
    GridSpec& g = c.grid;
    get(in, g.nx);
    get(in, g.ny);
    get(in, g.dx);
    get(in, g.dy);
    get(in, g.origin);
    for (auto& b : g.sides) {
        std::int32_t k;
        get(in, k);
        if (k < 0 || k > 3) throw ConfigError("restart file: bad boundary kind");
        b.kind = static_cast<BoundaryKind>(k);
        get(in, b.wall_velocity);
    }
    g.validate();
    get(in, c.t);
    get(in, c.step);
    c.state = ConservedState(g);
    get_field(in, c.state.rho);
    get_field(in, c.state.mom);
    get_field(in, c.state.E);
    get_field(in, c.state.A);
    get_field(in, c.state.J);
    return c;
}

}  // namespace gpr4
