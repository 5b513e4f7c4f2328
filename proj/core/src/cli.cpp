#include "voromesh/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "voromesh/flux_model.hpp"
#include "voromesh/staggered_solver.hpp"
#include "voromesh/vtk_io.hpp"

namespace voromesh {

namespace {

PrimalGrid load_grid_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open grid file: " + path);
    return load_grid(is);
}

PatternTable load_table_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open pattern file: " + path);
    return load_pattern_table(is);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << std::setprecision(17);
    return os;
}

/// Replace a single %d / %0Nd placeholder by the zero-padded index.
std::string substitute_index(const std::string& pattern, int idx) {
    const size_t pos = pattern.find('%');
    if (pos == std::string::npos) return pattern;
    size_t end = pos + 1;
    while (end < pattern.size() && std::isdigit(uint8_t(pattern[end]))) ++end;
    if (end >= pattern.size() || pattern[end] != 'd')
        throw std::runtime_error("output pattern: only %d / %0Nd placeholders supported");
    int width = 0;
    if (end > pos + 1) width = std::stoi(pattern.substr(pos + 1, end - pos - 1));
    std::ostringstream num;
    num << std::setw(width) << std::setfill('0') << idx;
    return pattern.substr(0, pos) + num.str() + pattern.substr(end + 1);
}

int run_grid_build(int dim, int level, int cap, const std::string& indicator,
                   const std::string& out) {
    PrimalGrid g = PrimalGrid::unit_cube(dim, cap);
    if (indicator == "uniform") {
        g = PrimalGrid::uniform(dim, level, cap);
    } else if (indicator == "sphere") {
        const auto ind = dim == 3 ? sphere_indicator() : std::function<bool(Vec3d)>([](Vec3d p) {
            const double dx = p[0] - 0.5, dy = p[1] - 0.5;
            return dx * dx + dy * dy > 0.3 * 0.3;
        });
        g = refine_by_indicator(g, ind, level);
    } else if (indicator == "paraboloid") {
        if (dim != 3) {
            std::cerr << "grid build: paraboloid indicator is 3D only\n";
            return 2;
        }
        g = refine_by_indicator(g, paraboloid_indicator(), level);
    } else {
        std::cerr << "grid build: unknown indicator '" << indicator << "'\n";
        return 2;
    }
    auto os = open_out(out);
    save_grid(g, os);
    std::cerr << "grid build: " << g.leaves().size() << " leaves, max level "
              << g.max_level() << ", " << g.nodes().size() << " nodes\n";
    return 0;
}

int run_patterns_generate(int dim, const std::string& out) {
    const PatternTable t = build_table(dim);
    auto os = open_out(out);
    save_pattern_table(t, os);
    std::cerr << "patterns generate: " << t.canonical.size() << " canonical / "
              << t.index.size() << " keys\n";
    return 0;
}

int run_patterns_verify(const std::string& in, uint64_t seed) {
    const PatternTable t = load_table_file(in);
    const int dim = t.dim;
    bool ok = true;
    auto expect = [&](bool cond, const char* what) {
        if (!cond) {
            std::cerr << "patterns verify: FAILED: " << what << '\n';
            ok = false;
        }
    };

    // counting
    const auto keys = enumerate_valid_keys(dim);
    expect(t.index.size() == keys.size(), "index covers all valid keys");
    expect(t.canonical.size() == size_t(dim == 3 ? 227 : 6), "canonical pattern count");
    expect(keys.size() == size_t(dim == 3 ? 6210 : 16), "valid key count");

    // partition of unity over every key, via the table
    for (RefinementKey k : keys) {
        const LocalPattern p = instantiate(t, k);
        int64_t vol = 0;
        for (const auto& r : p.regions) vol += r.volume_units;
        if (vol != volume_unit_den(dim)) {
            expect(false, "region volumes sum to the cell volume");
            break;
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, keys.size() - 1);
    const auto& group = symmetry_group(dim);
    std::uniform_int_distribution<size_t> gpick(0, group.size() - 1);

    // equivariance of fresh constructions against the table
    for (int i = 0; i < 50 && ok; ++i) {
        const RefinementKey k = keys[pick(rng)];
        const auto& op = group[gpick(rng)];
        const LocalPattern lhs = apply_symmetry(build_pattern(dim, k), op);
        const LocalPattern rhs = build_pattern(dim, transform_key(dim, op, k));
        expect(lhs.owner == rhs.owner, "equivariance");
    }

    // trace compatibility on matching face configurations (3D)
    if (dim == 3) {
        int tested = 0;
        while (tested < 50 && ok) {
            const RefinementKey k1 = keys[pick(rng)], k2 = keys[pick(rng)];
            const int f = int(gpick(rng) % 6);
            if (face_config(k1, f) != face_config(k2, f)) continue;
            ++tested;
            expect(build_pattern(3, k1).traces[size_t(f)] ==
                       build_pattern(3, k2).traces[size_t(f)],
                   "trace compatibility");
        }
    }

    // sampling oracle on a few keys
    for (int i = 0; i < 3 && ok; ++i) {
        const RefinementKey k = keys[pick(rng)];
        const auto vols = local_voronoi_oracle(dim, k, dim == 3 ? 48 : 96);
        const LocalPattern p = instantiate(t, k);
        expect(vols.size() == p.regions.size(), "oracle region count");
        for (const auto& r : p.regions) {
            const double exact = double(r.volume_units) / double(volume_unit_den(dim));
            if (std::abs(vols.at(r.node) - exact) > 0.02)
                expect(false, "oracle volumes within 2%");
        }
    }

    std::cout << t.canonical.size() << " canonical / " << t.index.size() << " keys\n";
    return ok ? 0 : 1;
}

int run_dual_assemble(const std::string& grid_path, const std::string& patterns_path,
                      const std::string& out, const std::string& stats,
                      const std::string& faces_out, bool residuals) {
    const PrimalGrid g = load_grid_file(grid_path);
    const PatternTable t = load_table_file(patterns_path);
    const DualMesh m = assemble(g, t);
    {
        auto os = open_out(out);
        write_dual_vtk(m, os, residuals);
    }
    if (!faces_out.empty()) {
        auto os = open_out(faces_out);
        write_dual_faces_vtk(m, os);
    }
    if (!stats.empty()) {
        const MeshStats st = mesh_stats(g, t, m);
        auto os = open_out(stats);
        os << "leaves,primal_faces,primal_nodes,dual_cells,dual_nodes,"
              "distinct_patterns,trivial_fraction\n";
        os << st.leaves << ',' << st.primal_faces << ',' << st.primal_nodes << ','
           << st.dual_cells << ',' << st.dual_nodes << ',' << st.distinct_patterns << ','
           << st.trivial_fraction << '\n';
    }
    std::cerr << "dual assemble: " << m.cells().size() << " dual cells\n";
    return 0;
}

int run_verify_gauss(const std::string& grid_path, const std::string& patterns_path) {
    const PrimalGrid g = load_grid_file(grid_path);
    const PatternTable t = load_table_file(patterns_path);
    const DualMesh m = assemble(g, t);
    const GaussReport rep = gauss_check(m);
    std::cout << "max relative residual " << rep.max_rel_residual << "\n";
    std::cerr << "gauss: closedness " << rep.max_closedness << ", boundary flux "
              << rep.total_boundary_flux << " (worst cell node " << rep.worst_node
              << ")\n";
    return rep.max_rel_residual <= 1e-12 ? 0 : 1;
}

int run_verify_oracle(const std::string& grid_path, const std::string& patterns_path,
                      int resolution) {
    const PrimalGrid g = load_grid_file(grid_path);
    const PatternTable t = load_table_file(patterns_path);
    const DualMesh m = assemble(g, t);
    const double err = sampling_oracle_check(g, m, resolution);
    const double tol = 2.0 / double(resolution);
    std::cout << "max volume-fraction discrepancy " << err << " (tolerance " << tol
              << ")\n";
    return err <= tol ? 0 : 1;
}

int run_advect_cone(int level, double cfl, double tend, const std::string& grid_kind,
                    const std::string& out, const std::string& report,
                    const std::string& patterns_path, int snapshot_every) {
    PrimalGrid g = PrimalGrid::unit_cube(3);
    const VelocityModel model;
    if (grid_kind == "uniform") {
        g = PrimalGrid::uniform(3, level);
    } else if (grid_kind == "adaptive") {
        g = refine_by_indicator(
            g, [&](Vec3d x) { return model.cone_profile(x) > 0.0; }, level);
    } else {
        std::cerr << "advect cone: unknown grid kind '" << grid_kind << "'\n";
        return 2;
    }
    const PatternTable t =
        patterns_path.empty() ? build_table(3) : load_table_file(patterns_path);
    const DualMesh mesh = assemble(g, t);
    const StaggeredScheme scheme(mesh);

    SchemeConfig cfg;
    cfg.cfl = cfl;
    cfg.t_end = tend;
    const RunReport rep = scheme.run_advection(model, cfg);

    if (!report.empty()) {
        auto os = open_out(report);
        os << "# rotating cone, q = 4|1 - r^2| with r = |x-c|/R (radius-normalized), "
              "octant relative to c; zero-inflow boundary\n";
        os << "step,t,mass,min,max,L1err,Linferr\n";
        for (const auto& r : rep.records)
            os << r.step << ',' << r.t << ',' << r.mass << ',' << r.vmin << ',' << r.vmax
               << ',' << r.l1_err << ',' << r.linf_err << '\n';
    }
    if (!out.empty()) {
        const Field initial = scheme.init_cone(model);
        auto write_snapshot = [&](const Field& f, int idx) {
            auto os = open_out(substitute_index(out, idx));
            write_primal_vtk(g, os, &f.values, "v");
        };
        write_snapshot(initial, 0);
        write_snapshot(rep.final_field, int(rep.records.back().step));
        (void)snapshot_every;  // intermediate states are not retained by the run
    }
    std::cerr << "advect cone: " << rep.records.back().step << " step pairs, final L1 "
              << rep.records.back().l1_err << "\n";
    return 0;
}

int run_fluxcount(const FluxCountInputs& in, const std::string& out) {
    const FluxCountReport r = flux_count(in);
    auto os = open_out(out);
    os << "# inputs: primal_cells=" << in.primal_cells << " primal_faces=" << in.primal_faces
       << " primal_nodes=" << in.primal_nodes << " dual_nodes=" << in.dual_nodes << '\n';
    os << "scheme,primal_to_dual,dual_to_primal,total\n";
    os << "diamond," << r.diamond.primal_to_dual << ',' << r.diamond.dual_to_primal << ','
       << r.diamond.total() << '\n';
    os << "hll," << r.hll.primal_to_dual << ',' << r.hll.dual_to_primal << ','
       << r.hll.total() << '\n';
    os << "voronoi," << r.voronoi.primal_to_dual << ',' << r.voronoi.dual_to_primal << ','
       << r.voronoi.total() << '\n';
    return 0;
}

int run_census(const std::string& grid_path, const std::string& patterns_path,
               const std::string& out) {
    const PrimalGrid g = load_grid_file(grid_path);
    const PatternTable t = load_table_file(patterns_path);
    const DualMesh m = assemble(g, t);
    const CensusRow row = census(g, t, m);
    auto os = open_out(out);
    os << "level,primal_cells,dual_cells,fluxes_non_staggered,fluxes_staggered,"
          "primal_faces,primal_nodes,dual_nodes,distinct_patterns,trivial_fraction\n";
    os << row.level << ',' << row.primal_cells << ',' << row.dual_cells << ','
       << row.fluxes_non_staggered << ',' << row.fluxes_staggered << ','
       << row.primal_faces << ',' << row.primal_nodes << ',' << row.dual_nodes << ','
       << row.distinct_patterns << ',' << row.trivial_fraction << '\n';
    return 0;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args) {
    CLI::App app{"L-inf Voronoi staggered dual meshes on adaptive Cartesian grids"};
    app.require_subcommand(1);
    int rc = 0;

    // grid build
    auto* grid_cmd = app.add_subcommand("grid", "primal grid operations");
    grid_cmd->require_subcommand(1);
    auto* build = grid_cmd->add_subcommand("build", "build a refined grid");
    struct {
        int dim = 3, level = 3, cap = 12;
        std::string indicator = "uniform", out;
    } gb;
    build->add_option("--dim", gb.dim)->check(CLI::IsMember({2, 3}));
    build->add_option("--level", gb.level, "target refinement level")->required();
    build->add_option("--cap", gb.cap, "hard level cap");
    build->add_option("--indicator", gb.indicator, "paraboloid|sphere|uniform");
    build->add_option("--out", gb.out, "grid JSON output")->required();
    build->callback([&] { rc = run_grid_build(gb.dim, gb.level, gb.cap, gb.indicator, gb.out); });

    // patterns generate | verify
    auto* patterns = app.add_subcommand("patterns", "local pattern table");
    patterns->require_subcommand(1);
    auto* pgen = patterns->add_subcommand("generate", "build and store the table");
    struct {
        int dim = 3;
        std::string out;
    } pg;
    pgen->add_option("--dim", pg.dim)->check(CLI::IsMember({2, 3}));
    pgen->add_option("--out", pg.out, "pattern table JSON output")->required();
    pgen->callback([&] { rc = run_patterns_generate(pg.dim, pg.out); });

    auto* pver = patterns->add_subcommand("verify", "run the pattern verification suites");
    struct {
        std::string in;
        uint64_t seed = 0;
    } pv;
    pver->add_option("--in", pv.in, "pattern table JSON")->required();
    pver->add_option("--seed", pv.seed, "rng seed for sampled checks");
    pver->callback([&] { rc = run_patterns_verify(pv.in, pv.seed); });

    // dual assemble
    auto* dual = app.add_subcommand("dual", "dual mesh operations");
    dual->require_subcommand(1);
    auto* asmb = dual->add_subcommand("assemble", "assemble and export the dual mesh");
    struct {
        std::string grid, patterns, out, stats, faces;
        bool residuals = false;
    } da;
    asmb->add_option("--grid", da.grid)->required();
    asmb->add_option("--patterns", da.patterns)->required();
    asmb->add_option("--out", da.out, "VTK polyhedron output")->required();
    asmb->add_option("--stats", da.stats, "mesh statistics CSV");
    asmb->add_option("--faces-out", da.faces, "faces-only POLYDATA output");
    asmb->add_flag("--residuals", da.residuals, "attach gauss residual per cell");
    asmb->callback([&] {
        rc = run_dual_assemble(da.grid, da.patterns, da.out, da.stats, da.faces,
                               da.residuals);
    });

    // verify gauss | oracle
    auto* verify = app.add_subcommand("verify", "geometric verification");
    verify->require_subcommand(1);
    auto* vg = verify->add_subcommand("gauss", "divergence identity on the dual mesh");
    struct {
        std::string grid, patterns;
    } gv;
    vg->add_option("--grid", gv.grid)->required();
    vg->add_option("--patterns", gv.patterns)->required();
    vg->callback([&] { rc = run_verify_gauss(gv.grid, gv.patterns); });

    auto* vo = verify->add_subcommand("oracle", "sampling oracle vs assembled volumes");
    struct {
        std::string grid, patterns;
        int resolution = 32;
    } ov;
    vo->add_option("--grid", ov.grid)->required();
    vo->add_option("--patterns", ov.patterns)->required();
    vo->add_option("--resolution", ov.resolution);
    vo->callback([&] { rc = run_verify_oracle(ov.grid, ov.patterns, ov.resolution); });

    // advect cone
    auto* advect = app.add_subcommand("advect", "staggered advection runs");
    advect->require_subcommand(1);
    auto* cone = advect->add_subcommand("cone", "rotating cone experiment");
    struct {
        int level = 4;
        double cfl = 0.45;
        double tend = M_PI / 4.0;
        std::string grid = "uniform", out, report, patterns;
        int snapshot_every = 0;
    } ac;
    cone->add_option("--level", ac.level)->required();
    cone->add_option("--cfl", ac.cfl);
    cone->add_option("--tend", ac.tend);
    cone->add_option("--grid", ac.grid, "uniform|adaptive");
    cone->add_option("--out", ac.out, "snapshot VTK pattern, e.g. series_%04d.vtk");
    cone->add_option("--report", ac.report, "per-step CSV report");
    cone->add_option("--patterns", ac.patterns, "reuse a stored pattern table");
    cone->add_option("--snapshot-every", ac.snapshot_every);
    cone->callback([&] {
        rc = run_advect_cone(ac.level, ac.cfl, ac.tend, ac.grid, ac.out, ac.report,
                             ac.patterns, ac.snapshot_every);
    });

    // analyze fluxcount | census
    auto* analyze = app.add_subcommand("analyze", "cost model and grid census");
    analyze->require_subcommand(1);
    auto* fc = analyze->add_subcommand("fluxcount", "flux evaluations per scheme");
    struct {
        int64_t cells = -1, faces = -1, nodes = -1, dualnodes = -1;
        std::string grid, patterns, out;
    } fx;
    fc->add_option("--cells", fx.cells, "primal cell count");
    fc->add_option("--faces", fx.faces, "primal face count");
    fc->add_option("--nodes", fx.nodes, "primal node count");
    fc->add_option("--dualnodes", fx.dualnodes, "dual node count");
    fc->add_option("--grid", fx.grid, "derive inputs from a grid file");
    fc->add_option("--patterns", fx.patterns);
    fc->add_option("--out", fx.out)->required();
    fc->callback([&] {
        FluxCountInputs in;
        if (!fx.grid.empty()) {
            const PrimalGrid g = load_grid_file(fx.grid);
            const PatternTable t = load_table_file(fx.patterns);
            const DualMesh m = assemble(g, t);
            in = census_inputs(mesh_stats(g, t, m));
        } else {
            if (fx.cells < 0 || fx.faces < 0 || fx.nodes < 0 || fx.dualnodes < 0)
                throw CLI::ValidationError(
                    "fluxcount needs --cells/--faces/--nodes/--dualnodes or --grid");
            in = {fx.cells, fx.faces, fx.nodes, fx.dualnodes};
        }
        rc = run_fluxcount(in, fx.out);
    });

    auto* cs = analyze->add_subcommand("census", "comparison-table row for a grid");
    struct {
        std::string grid, patterns, out;
    } cv;
    cs->add_option("--grid", cv.grid)->required();
    cs->add_option("--patterns", cv.patterns)->required();
    cs->add_option("--out", cv.out)->required();
    cs->callback([&] { rc = run_census(cv.grid, cv.patterns, cv.out); });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}

}  // namespace voromesh
