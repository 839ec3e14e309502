#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "robin/robin.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

void write_text(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw robin::Error("cannot write " + path.string());
    out << body;
}

// Dropped before any heavy work so a crashed or interrupted run still
// documents what it was asked to do.
void emit_manifest(const fs::path& outdir, robin::RunManifest man) {
    man.version = kVersion;
    fs::create_directories(outdir);
    write_text(outdir / "manifest.json", robin::manifest_to_json(man).dump(2) + "\n");
}

json load_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(std::string("cannot open ") + what + ": " + path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string(what) + " " + path +
                                    " is not valid JSON: " + e.what());
    }
}

robin::ConvexPolygon require_polygon(const std::string& path) {
    if (path.empty())
        throw std::invalid_argument("--polygon is required (JSON file with a \"vertices\" array)");
    return robin::load_polygon(path);
}

// ---------------------------------------------------------------- spectra

int run_spectra(const std::string& polygon_path, const std::string& kind, int count,
                const std::string& outdir_s) {
    const auto poly = require_polygon(polygon_path);
    if (count < 1) throw std::invalid_argument("--count must be >= 1");
    std::vector<robin::SpectrumKind> kinds;
    if (kind == "dirichlet" || kind == "both") kinds.push_back(robin::SpectrumKind::Dirichlet);
    if (kind == "neumann" || kind == "both") kinds.push_back(robin::SpectrumKind::Neumann);
    if (kinds.empty())
        throw std::invalid_argument("--kind must be dirichlet, neumann or both, got " + kind);

    const fs::path outdir(outdir_s);
    robin::RunManifest man;
    man.subcommand = "spectra";
    man.config = json{{"polygon", polygon_path}, {"kind", kind}, {"count", count}};
    man.inputs = {{polygon_path, robin::hash_file(polygon_path)}};
    for (const auto k : kinds)
        man.outputs.push_back(std::string("spectra_") + robin::to_string(k) + ".csv");
    emit_manifest(outdir, man);

    for (const auto k : kinds) {
        const auto sp = robin::merged_spectrum(poly, k, count);
        std::ostringstream csv;
        robin::write_spectrum_csv(csv, sp);
        std::cout << csv.str();
        write_text(outdir / (std::string("spectra_") + robin::to_string(k) + ".csv"), csv.str());
    }
    return 0;
}

// ---------------------------------------------------------------- bracket

int run_bracket(const std::string& polygon_path, std::vector<double> alphas, int m,
                const std::string& outdir_s) {
    const auto poly = require_polygon(polygon_path);
    if (alphas.empty()) throw std::invalid_argument("bracket needs at least one --alpha");
    if (m < 1) throw std::invalid_argument("--m must be >= 1");

    const fs::path outdir(outdir_s);
    robin::RunManifest man;
    man.subcommand = "bracket";
    man.config = json{{"polygon", polygon_path}, {"alphas", alphas}, {"m", m}};
    man.inputs = {{polygon_path, robin::hash_file(polygon_path)}};
    man.outputs = {"bracket.json"};
    emit_manifest(outdir, man);

    json rows = json::array();
    for (const double a : alphas) {
        const robin::Bracket b = robin::bracket(poly, a, m);
        std::cout << "alpha: " << robin::format_double(a) << "\n"
                  << "  m: " << b.m << "\n"
                  << "  mu_neumann: " << robin::format_double(b.mu_neumann) << "\n"
                  << "  mu_dirichlet: " << robin::format_double(b.mu_dirichlet) << "\n"
                  << "  lower: " << robin::format_double(b.lower) << "\n"
                  << "  upper: " << robin::format_double(b.upper) << "\n"
                  << "  width: " << robin::format_double(b.width()) << "\n"
                  << "  validity: " << (b.valid ? "true" : "false") << "\n";
        if (!b.valid)
            std::cout << "  note: upper bound needs alpha^2 > mu_dirichlet, i.e. alpha > "
                      << robin::format_double(std::sqrt(b.mu_dirichlet)) << "\n";
        rows.push_back(json{{"alpha", a},
                            {"m", b.m},
                            {"mu_neumann", b.mu_neumann},
                            {"mu_dirichlet", b.mu_dirichlet},
                            {"lower", b.lower},
                            {"upper", b.upper},
                            {"width", b.width()},
                            {"valid", b.valid}});
    }
    write_text(outdir / "bracket.json", json{{"brackets", rows}}.dump(2) + "\n");
    return 0;
}

// ------------------------------------------------------------------- mesh

robin::TruncationSpec resolve_spec(const robin::ConvexPolygon& poly, double alpha, int m,
                                   const std::string& mesh_config, const std::string& bc,
                                   json* resolved, robin::RunManifest* man) {
    robin::TruncationSpec spec = robin::default_spec(poly, alpha, m);
    if (!mesh_config.empty()) {
        const json j = load_json_file(mesh_config, "mesh config");
        spec = robin::truncation_from_json(j, spec);
        if (man) man->inputs.push_back({mesh_config, robin::hash_file(mesh_config)});
    }
    if (bc == "dirichlet")
        spec.bc = robin::ArtificialBC::Dirichlet;
    else if (bc == "neumann")
        spec.bc = robin::ArtificialBC::Neumann;
    else if (!bc.empty() && bc != "default")
        throw std::invalid_argument("--bc must be dirichlet or neumann here, got " + bc);
    if (resolved) *resolved = robin::truncation_to_json(spec);
    return spec;
}

int run_mesh(const std::string& polygon_path, double alpha, int m, const std::string& bc,
             int refine_steps, const std::string& mesh_config, const std::string& outdir_s) {
    const auto poly = require_polygon(polygon_path);
    if (!(alpha > 0.0)) throw std::invalid_argument("mesh needs --alpha > 0");
    if (m < 1) throw std::invalid_argument("--m must be >= 1");
    if (refine_steps < 0) throw std::invalid_argument("--refine must be >= 0");

    const fs::path outdir(outdir_s);
    robin::RunManifest man;
    man.subcommand = "mesh";
    man.inputs = {{polygon_path, robin::hash_file(polygon_path)}};
    json resolved;
    const robin::TruncationSpec spec = resolve_spec(poly, alpha, m, mesh_config, bc, &resolved, &man);
    man.config = json{{"polygon", polygon_path},
                      {"alpha", alpha},
                      {"m", m},
                      {"refine", refine_steps},
                      {"mesh", resolved}};
    man.outputs = {"mesh.txt", "mesh.svg"};
    emit_manifest(outdir, man);

    robin::TriangleMesh mesh = robin::build_mesh(poly, spec);
    for (int r = 0; r < refine_steps; ++r) mesh = robin::refine(mesh);

    {
        std::ostringstream txt;
        robin::write_mesh_text(txt, mesh);
        write_text(outdir / "mesh.txt", txt.str());
        std::ostringstream svg;
        robin::write_mesh_svg(svg, mesh);
        write_text(outdir / "mesh.svg", svg.str());
    }
    std::cout << "nodes: " << mesh.nodes.size() << "\n"
              << "triangles: " << mesh.triangles.size() << "\n"
              << "boundary_edges: " << mesh.boundary_edges.size() << "\n"
              << "min_angle_deg: " << robin::format_double(mesh.min_angle() * 180.0 / robin::kPi)
              << "\n"
              << "max_diameter: " << robin::format_double(mesh.max_diameter()) << "\n"
              << "artificial_bc: " << robin::to_string(spec.bc) << "\n";
    for (int n = 0; n < poly.side_count(); ++n)
        std::cout << "wall_length[R" << (n + 1)
                  << "]: " << robin::format_double(mesh.robin_length(n)) << "\n";
    return 0;
}

// ------------------------------------------------------------------ solve

int run_solve(const std::string& polygon_path, double alpha, int m, const std::string& bc,
              int refine_steps, const std::string& mesh_config, std::uint64_t seed,
              const std::string& outdir_s) {
    const auto poly = require_polygon(polygon_path);
    if (!(alpha > 0.0)) throw std::invalid_argument("solve needs --alpha > 0");
    if (m < 1) throw std::invalid_argument("--m must be >= 1");
    if (refine_steps < 0) throw std::invalid_argument("--refine must be >= 0");

    // Refuse upfront when the model upper bound cannot hold: the enclosure
    // would be meaningless however fine the mesh.
    const robin::Bracket top = robin::bracket(poly, alpha, m);
    if (!top.valid)
        throw robin::BracketInvalid(
            "model bracket invalid for m = " + std::to_string(m) + ": mu_dirichlet = " +
            robin::format_double(top.mu_dirichlet) + " >= alpha^2 = " +
            robin::format_double(alpha * alpha) + "; raise alpha above " +
            robin::format_double(std::sqrt(top.mu_dirichlet)));

    std::vector<robin::ArtificialBC> routes;
    if (bc == "both" || bc == "neumann") routes.push_back(robin::ArtificialBC::Neumann);
    if (bc == "both" || bc == "dirichlet") routes.push_back(robin::ArtificialBC::Dirichlet);
    if (routes.empty())
        throw std::invalid_argument("--bc must be dirichlet, neumann or both, got " + bc);

    const fs::path outdir(outdir_s);
    robin::RunManifest man;
    man.subcommand = "solve";
    man.inputs = {{polygon_path, robin::hash_file(polygon_path)}};
    json resolved;
    robin::TruncationSpec spec =
        resolve_spec(poly, alpha, m, mesh_config, "default", &resolved, &man);
    man.config = json{{"polygon", polygon_path}, {"alpha", alpha},   {"m", m},
                      {"bc", bc},                {"refine", refine_steps}, {"seed", seed},
                      {"mesh", resolved}};
    man.seed = seed;
    man.outputs = {"solve.json"};
    emit_manifest(outdir, man);

    std::vector<std::vector<double>> values;  // per route, per mode
    for (const auto route : routes) {
        spec.bc = route;
        robin::TriangleMesh mesh = robin::build_mesh(poly, spec);
        for (int r = 0; r < refine_steps; ++r) mesh = robin::refine(mesh);
        const robin::DiscreteForm form = robin::assemble(mesh, alpha, route);
        robin::EigenOptions opts;
        opts.count = m;
        opts.block = std::max({4, poly.side_count() + 1, m + 1});
        opts.seed = seed;
        const robin::EigenResult res = robin::solve_lowest(form, opts);
        std::vector<double> vals;
        for (int i = 0; i < m; ++i) vals.push_back(res.pairs[static_cast<std::size_t>(i)].value);
        values.push_back(std::move(vals));
        std::cout << robin::to_string(route) << ": " << form.unknowns() << " unknowns, "
                  << mesh.triangles.size() << " triangles\n";
    }

    const auto& low = values.front();          // Neumann route when both run
    const auto& high = values.back();          // Dirichlet route when both run
    json modes = json::array();
    for (int i = 0; i < m; ++i) {
        const robin::Bracket b = robin::bracket(poly, alpha, i + 1);
        const double e_lo = low[static_cast<std::size_t>(i)];
        const double e_hi = high[static_cast<std::size_t>(i)];
        std::cout << "E_" << (i + 1) << ": [" << robin::format_double(e_lo) << ", "
                  << robin::format_double(e_hi) << "]  model bracket ["
                  << robin::format_double(b.lower) << ", " << robin::format_double(b.upper)
                  << "]\n";
        modes.push_back(json{{"m", i + 1},
                             {"enclosure", {e_lo, e_hi}},
                             {"model_lower", b.lower},
                             {"model_upper", b.upper}});
    }
    write_text(outdir / "solve.json",
               json{{"alpha", alpha}, {"bc", bc}, {"modes", modes}}.dump(2) + "\n");
    return 0;
}

// ------------------------------------------------------------------ sweep

int run_sweep_cmd(const std::string& polygon_path, const std::string& config_path,
                  std::vector<double> alphas, int m, int refinements, const std::string& bc,
                  std::uint64_t seed, bool seed_given, const std::string& outdir_s) {
    const auto poly = require_polygon(polygon_path);
    robin::SweepConfig cfg;
    if (!config_path.empty())
        cfg = robin::sweep_config_from_json(load_json_file(config_path, "sweep config"));
    if (!alphas.empty()) cfg.alphas = std::move(alphas);
    if (m > 0) cfg.m_max = m;
    if (refinements > 0) cfg.refinements = refinements;
    if (seed_given) cfg.seed = seed;
    if (bc == "dirichlet")
        cfg.bc_mode = robin::SweepBCMode::DirichletOnly;
    else if (bc == "neumann")
        cfg.bc_mode = robin::SweepBCMode::NeumannOnly;
    else if (bc == "both")
        cfg.bc_mode = robin::SweepBCMode::Both;
    else if (!bc.empty())
        throw std::invalid_argument("--bc must be dirichlet, neumann or both, got " + bc);
    if (cfg.alphas.empty())
        throw std::invalid_argument("sweep needs --alpha values or a config file with them");

    const fs::path outdir(outdir_s);
    robin::RunManifest man;
    man.subcommand = "sweep";
    man.config = robin::sweep_config_to_json(cfg);
    man.config["polygon"] = polygon_path;
    man.inputs = {{polygon_path, robin::hash_file(polygon_path)}};
    if (!config_path.empty()) man.inputs.push_back({config_path, robin::hash_file(config_path)});
    man.seed = cfg.seed;
    man.outputs = {"sweep.csv", "sweep.json", "remainder.svg"};
    emit_manifest(outdir, man);

    const robin::SweepReport rep = robin::run_sweep(poly, cfg);

    {
        std::ostringstream csv;
        robin::write_sweep_csv(csv, rep);
        write_text(outdir / "sweep.csv", csv.str());
        write_text(outdir / "sweep.json", robin::sweep_report_to_json(rep).dump(2) + "\n");
        std::ostringstream svg;
        robin::write_remainder_svg(svg, rep);
        write_text(outdir / "remainder.svg", svg.str());
    }

    for (const auto& e : rep.entries)
        std::cout << "alpha " << robin::format_double(e.alpha) << " m " << e.m << ": enclosure ["
                  << robin::format_double(e.e_neu) << ", " << robin::format_double(e.e_dir)
                  << "] remainder " << robin::format_double(e.remainder) << " eps_h "
                  << robin::format_double(e.eps_h) << "\n";
    for (const auto& [a, k] : rep.bound_state_counts)
        std::cout << "bound states below 0 at alpha " << robin::format_double(a) << ": " << k
                  << "\n";
    if (cfg.alphas.size() >= 3) {
        for (int mm = 1; mm <= cfg.m_max; ++mm) {
            std::vector<double> as;
            const auto rs = robin::remainder_series(rep, mm, &as);
            try {
                const robin::RateFit fit = robin::fit_rate(as, rs);
                std::cout << "remainder rate m " << mm << ": slope "
                          << robin::format_double(fit.slope) << " residual "
                          << robin::format_double(fit.residual) << "\n";
            } catch (const robin::TooFewPoints&) {
                std::cout << "remainder rate m " << mm << ": not enough positive values to fit\n";
            }
        }
    }
    if (!rep.violations.empty()) {
        std::cerr << "warning: " << rep.violations.size()
                  << " bracket violation(s), see sweep.json\n";
        for (const auto& v : rep.violations)
            std::cerr << "  alpha " << robin::format_double(v.alpha) << " m " << v.m << ": "
                      << v.what << "\n";
    }
    return 0;
}

// ----------------------------------------------------------- check-lemmas

struct CheckRow {
    std::string name;
    bool pass = false;
    std::string detail;
};

void add_row(std::vector<CheckRow>& rows, const std::string& name, bool pass,
             const std::string& detail) {
    rows.push_back({name, pass, detail});
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
}

int run_check_lemmas(std::vector<double> alphas, int trials, std::uint64_t seed,
                     const std::string& polygon_path, const std::string& outdir_s) {
    if (trials < 1) throw std::invalid_argument("--trials must be >= 1");
    if (alphas.empty()) alphas = {4.0, 8.0, 16.0};
    if (alphas.size() < 2)
        throw std::invalid_argument("the delta trend needs at least two --alpha values");
    for (std::size_t i = 0; i + 1 < alphas.size(); ++i)
        if (!(alphas[i] > 0.0 && alphas[i] < alphas[i + 1]))
            throw std::invalid_argument("--alpha values must be positive and increasing");
    const robin::ConvexPolygon poly =
        polygon_path.empty()
            ? robin::ConvexPolygon::validate(
                  {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}})
            : robin::load_polygon(polygon_path);

    const fs::path outdir(outdir_s);
    robin::RunManifest man;
    man.subcommand = "check-lemmas";
    man.config = json{{"alphas", alphas}, {"trials", trials}, {"seed", seed}};
    if (!polygon_path.empty()) {
        man.config["polygon"] = polygon_path;
        man.inputs = {{polygon_path, robin::hash_file(polygon_path)}};
    }
    man.seed = seed;
    man.outputs = {"check_lemmas.json"};
    emit_manifest(outdir, man);

    std::vector<CheckRow> rows;
    std::mt19937_64 rng(seed);

    {  // ground-state projection bound on random profiles
        const std::vector<double> proj_alphas = {1.0, 2.0, 5.0, 10.0};
        int bad = 0;
        double worst = 0.0;
        std::uniform_int_distribution<int> cells(5, 80);
        for (const double a : proj_alphas)
            for (int t = 0; t < trials; ++t) {
                const auto v = robin::random_profile(rng, 20.0 / a, cells(rng));
                const auto gap = robin::groundstate_projection_gap(v, a);
                worst = std::max(worst, gap.lhs - gap.rhs);
                if (!(gap.lhs <= gap.rhs + 1e-8)) ++bad;
            }
        add_row(rows, "projection bound, random profiles", bad == 0,
                std::to_string(trials * 4) + " trials, worst margin " +
                    robin::format_double(worst));
    }
    {  // projection bound saturates on the ground state itself
        bool ok = true;
        double worst = 0.0;
        for (const double a : {1.0, 2.0, 5.0, 10.0}) {
            const auto v = robin::groundstate_profile(a, 20.0 / a, 20000);
            const auto gap = robin::groundstate_projection_gap(v, a);
            worst = std::max({worst, std::abs(gap.lhs), std::abs(gap.rhs)});
            if (!(std::abs(gap.lhs) <= 1e-6 && std::abs(gap.rhs) <= 1e-6)) ok = false;
        }
        add_row(rows, "projection bound, equality case", ok,
                "largest side " + robin::format_double(worst));
    }
    {  // wedge trace inequality on compactly supported sector fields
        const int n = std::max(1, trials / 5);
        int bad = 0;
        double worst = 0.0;
        for (const double th : {robin::kPi / 3.0, robin::kPi / 2.0, 2.0 * robin::kPi / 3.0})
            for (const double eps : {0.1, 1.0, 10.0})
                for (int t = 0; t < n; ++t) {
                    const auto u = robin::random_sector_field(rng, th, 1.0, 24, 16, true);
                    const auto tb = robin::sector_trace_check(u, eps);
                    worst = std::max(worst, tb.boundary - tb.bound);
                    if (!(tb.boundary <= tb.bound + 1e-8)) ++bad;
                }
        add_row(rows, "sector trace inequality", bad == 0,
                std::to_string(9 * n) + " trials, worst margin " + robin::format_double(worst));
    }
    {  // trace constant is continuous at the straight-angle switch
        const double c = robin::sector_trace_constant(robin::kPi - 1e-6);
        add_row(rows, "trace constant continuity at pi", std::abs(c - 1.0) < 1e-5,
                "C(pi - 1e-6) = " + robin::format_double(c));
    }
    {  // strip energy chain
        const int n = std::max(1, trials / 2);
        int bad = 0;
        double worst = 0.0;
        std::uniform_real_distribution<double> adist(0.5, 12.0);
        std::uniform_real_distribution<double> ldist(0.5, 2.0);
        for (int t = 0; t < n; ++t) {
            const double a = adist(rng);
            const auto f = robin::random_strip_field(rng, ldist(rng), 20.0 / a, 12, 24);
            const auto split = robin::strip_energy_split(f, a);
            worst = std::max(worst, split.transverse - split.robin_form);
            if (!(split.transverse >= 0.0 && split.transverse <= split.robin_form + 1e-8)) ++bad;
        }
        add_row(rows, "strip energy chain", bad == 0,
                std::to_string(n) + " trials, worst margin " + robin::format_double(worst));
    }
    {  // eigenvalue comparison arithmetic
        const double pinned = robin::comparison_bound(1.0, 0.1, 0.1);
        bool ok = (pinned == 1.5);
        std::string detail = "bound(1, 0.1, 0.1) = " + robin::format_double(pinned);
        bool threshold_ok = true;
        try {
            robin::comparison_bound(1.0, 0.5 + 1e-12, 0.0);
            threshold_ok = false;
        } catch (const robin::DeltaTooLarge&) {
        }
        if (!std::isinf(robin::comparison_bound(1.0, 0.5, 0.0))) threshold_ok = false;
        int bad = 0;
        std::uniform_real_distribution<double> ldist(0.0, 10.0);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (int t = 0; t < 10 * trials; ++t) {
            const double l = ldist(rng);
            const double d1 = 0.9 * u01(rng) / (1.0 + l);
            const double d2 = u01(rng);
            const double base = robin::comparison_bound(l, d1, d2);
            const double h = 1e-6;
            if (robin::comparison_bound(l, d1, d2 + h) < base - 1e-12) ++bad;
            if (robin::comparison_bound(l, d1 + h / (1.0 + l), d2) < base - 1e-12) ++bad;
            if (robin::comparison_bound(l + h, d1, d2) < base - 1e-12) ++bad;
        }
        ok = ok && threshold_ok && bad == 0;
        add_row(rows, "eigenvalue comparison bound", ok,
                detail + ", threshold " + (threshold_ok ? "ok" : "wrong") + ", " +
                    std::to_string(bad) + " monotonicity failures");
    }

    // identification-map defect trend on one fixed field
    json deltas = json::array();
    {
        const auto dec = robin::decompose(poly);
        const auto cut = robin::default_cutoffs(poly);
        std::mt19937_64 frng(seed);
        const auto field = robin::decaying_test_field(dec, 6.0, frng);
        bool dec1 = true, dec2 = true;
        double prev1 = 0.0, prev2 = 0.0;
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            const auto res = robin::identification_map(dec, field, alphas[i], cut);
            if (i > 0 && !(res.delta1 < prev1)) dec1 = false;
            if (i > 0 && !(res.delta2 < prev2)) dec2 = false;
            prev1 = res.delta1;
            prev2 = res.delta2;
            std::cout << "  alpha " << robin::format_double(alphas[i]) << ": delta1 "
                      << robin::format_double(res.delta1) << ", delta2 "
                      << robin::format_double(res.delta2) << "\n";
            deltas.push_back(
                json{{"alpha", alphas[i]}, {"delta1", res.delta1}, {"delta2", res.delta2}});
        }
        add_row(rows, "identification defects decrease with alpha", dec1 && dec2,
                std::string("delta1 ") + (dec1 ? "monotone" : "not monotone") + ", delta2 " +
                    (dec2 ? "monotone" : "not monotone"));
    }

    json checks = json::array();
    bool all = true;
    for (const auto& r : rows) {
        checks.push_back(json{{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        all = all && r.pass;
    }
    write_text(outdir / "check_lemmas.json",
               json{{"checks", checks}, {"deltas", deltas}, {"all_pass", all}}.dump(2) + "\n");
    std::cout << (all ? "all checks passed\n" : "some checks FAILED\n");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-sided eigenvalue bounds for the exterior Robin Laplacian on convex polygons"};
    app.require_subcommand(1);

    std::string polygon, outdir = "robin-out", kind = "both", mesh_config, sweep_config;
    std::string mesh_bc = "default", solve_bc = "both", sweep_bc;
    std::vector<double> alphas;
    double alpha = 0.0;
    int m = 1, sweep_m = 0, count = 10, refine_steps = 0, sweep_refine = 0, trials = 1000;
    std::uint64_t seed = 12345;

    auto* sp = app.add_subcommand("spectra", "model interval spectra of the polygon sides");
    sp->add_option("--polygon", polygon, "polygon JSON file")->required();
    sp->add_option("--kind", kind, "dirichlet, neumann or both");
    sp->add_option("--count", count, "number of eigenvalues");
    sp->add_option("--out", outdir, "output directory");

    auto* br = app.add_subcommand("bracket", "model eigenvalue bracket for given alpha");
    br->add_option("--polygon", polygon, "polygon JSON file")->required();
    br->add_option("--alpha", alphas, "Robin parameter (repeatable)")->required();
    br->add_option("--m", m, "mode index (1-based)");
    br->add_option("--out", outdir, "output directory");

    auto* me = app.add_subcommand("mesh", "triangulate the truncated exterior domain");
    me->add_option("--polygon", polygon, "polygon JSON file")->required();
    me->add_option("--alpha", alpha, "Robin parameter sizing the truncation")->required();
    me->add_option("--m", m, "highest mode the truncation must support");
    me->add_option("--bc", mesh_bc, "artificial boundary condition: dirichlet or neumann");
    me->add_option("--refine", refine_steps, "uniform refinement steps after building");
    me->add_option("--mesh-config", mesh_config, "JSON overrides for the truncation spec");
    me->add_option("--out", outdir, "output directory");

    auto* so = app.add_subcommand("solve", "solve the truncated exterior eigenproblem");
    so->add_option("--polygon", polygon, "polygon JSON file")->required();
    so->add_option("--alpha", alpha, "Robin parameter")->required();
    so->add_option("--m", m, "number of modes");
    so->add_option("--bc", solve_bc, "routes to run: dirichlet, neumann or both");
    so->add_option("--refine", refine_steps, "uniform refinement steps after building");
    so->add_option("--mesh-config", mesh_config, "JSON overrides for the truncation spec");
    so->add_option("--seed", seed, "eigensolver start seed");
    so->add_option("--out", outdir, "output directory");

    auto* sw = app.add_subcommand("sweep", "two-sided enclosure sweep over alpha");
    sw->add_option("--polygon", polygon, "polygon JSON file")->required();
    sw->add_option("--config", sweep_config, "sweep config JSON file");
    sw->add_option("--alpha", alphas, "Robin parameters (repeatable, increasing)");
    sw->add_option("--m", sweep_m, "modes per alpha");
    sw->add_option("--refine", sweep_refine, "mesh levels above the base (>= 1)");
    sw->add_option("--bc", sweep_bc, "routes: dirichlet, neumann or both");
    auto* sw_seed = sw->add_option("--seed", seed, "eigensolver start seed");
    sw->add_option("--out", outdir, "output directory");

    auto* cl = app.add_subcommand("check-lemmas", "run the inequality property battery");
    cl->add_option("--alpha", alphas, "alphas for the defect trend (repeatable, increasing)");
    cl->add_option("--trials", trials, "randomized trials per family");
    cl->add_option("--seed", seed, "random seed");
    cl->add_option("--polygon", polygon, "polygon for the identification check");
    cl->add_option("--out", outdir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sp->parsed()) return run_spectra(polygon, kind, count, outdir);
        if (br->parsed()) return run_bracket(polygon, alphas, m, outdir);
        if (me->parsed())
            return run_mesh(polygon, alpha, m, mesh_bc, refine_steps, mesh_config, outdir);
        if (so->parsed())
            return run_solve(polygon, alpha, m, solve_bc, refine_steps, mesh_config, seed, outdir);
        if (sw->parsed())
            return run_sweep_cmd(polygon, sweep_config, alphas, sweep_m, sweep_refine, sweep_bc,
                                 seed, sw_seed->count() > 0, outdir);
        if (cl->parsed()) return run_check_lemmas(alphas, trials, seed, polygon, outdir);
    } catch (const robin::BracketInvalid& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const robin::DegenerateSpec& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const robin::Error& e) {
        std::cerr << "computation failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "computation failed: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
