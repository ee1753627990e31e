#include "adopt/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include <json.hpp>

#include "adopt/adoption.hpp"
#include "adopt/autarky.hpp"
#include "adopt/cone.hpp"
#include "adopt/csv.hpp"
#include "adopt/errors.hpp"
#include "adopt/multitech.hpp"
#include "adopt/parallel.hpp"
#include "adopt/scenario.hpp"

namespace adopt {

namespace {

std::uint64_t fnv64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("scenario", "cannot open file: " + path);
    std::string data((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return data;
}

std::vector<std::string> vec_headers(const std::string& stem, std::size_t n) {
    std::vector<std::string> cols;
    for (std::size_t i = 1; i <= n; ++i) cols.push_back(stem + "_" + std::to_string(i));
    return cols;
}

void append(std::vector<std::string>& into, const std::vector<std::string>& from) {
    into.insert(into.end(), from.begin(), from.end());
}

struct SweepRow {
    double chi = 0.0;
    double lambda_star = 0.0;
    double output = 0.0;
    Regime regime = Regime::NoAdoption;
    double phi0 = 0.0;
    bool inside = false;
};

struct RunContext {
    Scenario sc;
    AutarkySolution autarky;
    AdoptionOptions adoption_opts;
    MonteCarloParams mc;
    mutable std::optional<std::vector<SweepRow>> sweep_cache;
};

const Technology& primary_tech(const RunContext& ctx, const char* artifact) {
    if (ctx.sc.technologies.empty())
        throw ValidationError("technologies",
                              std::string("artifact '") + artifact +
                                  "' requires at least one technology");
    return ctx.sc.technologies.front();
}

const GridRange& chi_grid(const RunContext& ctx, const char* artifact) {
    if (!ctx.sc.chi_grid)
        throw ValidationError("sweeps.chi", std::string("artifact '") + artifact +
                                                "' requires a chi sweep grid");
    return *ctx.sc.chi_grid;
}

std::string make_autarky(const RunContext& ctx) {
    const std::size_t n = ctx.sc.worker.size();
    const AutarkySolution& a = ctx.autarky;
    CsvWriter csv;
    std::vector<std::string> cols;
    append(cols, vec_headers("x_A", n));
    append(cols, vec_headers("p_A", n));
    cols.push_back("phi");
    cols.push_back("Y_A");
    cols.push_back("rho");
    append(cols, vec_headers("omega", n));
    csv.header(cols);
    for (double v : a.x_A) csv.field(v);
    for (double v : a.p_A.p) csv.field(v);
    csv.field(a.phi);
    csv.field(a.output);
    csv.field(a.rho_A);
    for (double v : a.shares) csv.field(v);
    csv.end_row();
    return csv.str();
}

std::string make_adoption(const RunContext& ctx) {
    primary_tech(ctx, "adoption");
    const std::size_t n = ctx.sc.worker.size();
    CsvWriter csv;
    std::vector<std::string> cols = {"chi", "chi0", "chi100", "c",
                                     "lambda_star", "output", "regime"};
    append(cols, vec_headers("x_H", n));
    append(cols, vec_headers("z", n));
    append(cols, vec_headers("p_star", n));
    csv.header(cols);
    for (const Technology& tech : ctx.sc.technologies) {
        AdoptionSolution sol = optimal_intensity(tech, ctx.sc.worker, ctx.adoption_opts);
        double c = ctx.autarky.output /
                   (ctx.sc.worker.budget * ces_output(tech.t, ctx.sc.worker));
        csv.field(tech.chi);
        csv.field(sol.chi0);
        csv.field(sol.chi100);
        csv.field(c);
        csv.field(sol.lambda_star);
        csv.field(sol.output);
        csv.field(std::string(regime_name(sol.regime)));
        for (double v : sol.x_H) csv.field(v);
        for (double v : sol.z_star) csv.field(v);
        for (double v : sol.p_star.p) csv.field(v);
        csv.end_row();
    }
    return csv.str();
}

const std::vector<SweepRow>& sweep_rows(const RunContext& ctx) {
    if (ctx.sweep_cache) return *ctx.sweep_cache;
    const Technology& tech = primary_tech(ctx, "sweep");
    std::vector<double> grid = linear_grid(chi_grid(ctx, "sweep"));
    std::vector<SweepRow> rows(grid.size());
    const WorkerJob& w = ctx.sc.worker;
    detail::parallel_for(static_cast<long>(grid.size()), [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            auto idx = static_cast<std::size_t>(i);
            Technology probe = tech;
            probe.chi = grid[idx];
            AdoptionSolution sol = optimal_intensity(probe, w, ctx.adoption_opts);
            ConeSpec cone{ctx.autarky.p_A, ctx.autarky.rho_A, probe.chi};
            auto angle = (probe.chi > 0.0) ? half_angle(cone) : std::nullopt;
            rows[idx] = {probe.chi,
                         sol.lambda_star,
                         sol.output,
                         sol.regime,
                         angle ? *angle : std::numeric_limits<double>::quiet_NaN(),
                         in_cone(tech.t, cone)};
        }
    });
    ctx.sweep_cache = std::move(rows);
    return *ctx.sweep_cache;
}

std::string make_sweep(const RunContext& ctx) {
    CsvWriter csv;
    csv.header({"chi", "lambda_star", "output", "regime", "phi0", "in_cone"});
    for (const SweepRow& r : sweep_rows(ctx)) {
        csv.field(r.chi);
        csv.field(r.lambda_star);
        csv.field(r.output);
        csv.field(std::string(regime_name(r.regime)));
        csv.field(r.phi0);
        csv.field(static_cast<long>(r.inside ? 1 : 0));
        csv.end_row();
    }
    return csv.str();
}

std::string make_intensity(const RunContext& ctx) {
    CsvWriter csv;
    csv.header({"chi", "lambda_star", "regime"});
    for (const SweepRow& r : sweep_rows(ctx)) {
        csv.field(r.chi);
        csv.field(r.lambda_star);
        csv.field(std::string(regime_name(r.regime)));
        csv.end_row();
    }
    return csv.str();
}

std::string make_half_angle(const RunContext& ctx) {
    const GridRange& grid = chi_grid(ctx, "half_angle");
    double rho = ctx.autarky.rho_A;
    if (!(grid.max > rho))
        throw ValidationError("sweeps.chi.max",
                              "half_angle requires max above the autarky unit revenue");
    CsvWriter csv;
    csv.header({"chi", "phi0"});
    // The curve starts exactly at the threshold, where the angle is zero.
    for (long i = 0; i < grid.steps; ++i) {
        double chi = rho + (grid.max - rho) * static_cast<double>(i) /
                               static_cast<double>(grid.steps - 1);
        auto angle = half_angle(ConeSpec{ctx.autarky.p_A, rho, chi});
        csv.field(chi);
        csv.field(angle ? *angle : std::numeric_limits<double>::quiet_NaN());
        csv.end_row();
    }
    return csv.str();
}

std::string make_measure(const RunContext& ctx) {
    std::vector<double> grid = linear_grid(chi_grid(ctx, "measure"));
    CsvWriter csv;
    csv.header({"chi", "measure", "std_error"});
    for (double chi : grid) {
        MeasureResult m = adoption_measure(ConeSpec{ctx.autarky.p_A, ctx.autarky.rho_A, chi},
                                           ctx.mc.samples, ctx.mc.seed);
        csv.field(chi);
        csv.field(m.measure);
        csv.field(m.std_error);
        csv.end_row();
    }
    return csv.str();
}

std::string make_curvature(const RunContext& ctx) {
    const Technology& tech = primary_tech(ctx, "curvature");
    if (!ctx.sc.curvature_grid)
        throw ValidationError("sweeps.curvature",
                              "artifact 'curvature' requires a curvature grid");
    for (double ti : tech.t)
        if (ti == 0.0)
            throw ValidationError("technologies[0].t",
                                  "curvature sweep needs a strictly positive direction");
    std::vector<double> sums = geometric_grid(*ctx.sc.curvature_grid);
    CsvWriter csv;
    csv.header({"gamma", "sigma", "phi0", "chi_ratio"});
    for (const CurvatureRow& row :
         curvature_sweep(ctx.sc.worker, sums, tech.chi, tech.t)) {
        csv.field(row.gamma);
        csv.field(row.sigma);
        csv.field(row.phi0);
        csv.field(row.chi_ratio);
        csv.end_row();
    }
    return csv.str();
}

std::string make_multi(const RunContext& ctx) {
    primary_tech(ctx, "multi");
    const std::size_t n = ctx.sc.worker.size();
    MultiTechSolution sol = solve_multi(ctx.sc.worker, ctx.sc.technologies);
    CsvWriter csv;
    std::vector<std::string> cols = vec_headers("lambda", sol.lambdas.size());
    append(cols, vec_headers("x_H", n));
    append(cols, vec_headers("z", n));
    cols.push_back("output");
    append(cols, vec_headers("p_star", n));
    cols.push_back("rho_K");
    csv.header(cols);
    for (double v : sol.lambdas) csv.field(v);
    for (double v : sol.x_H) csv.field(v);
    for (double v : sol.z_star) csv.field(v);
    csv.field(sol.output);
    for (double v : sol.p_star.p) csv.field(v);
    csv.field(sol.rho_K_at_p_star);
    csv.end_row();
    return csv.str();
}

const std::map<std::string, std::vector<std::string>> kVerbDefaults = {
    {"solve", {"autarky", "adoption"}},
    {"sweep", {"sweep", "intensity"}},
    {"cone", {"half_angle", "measure"}},
    {"multi", {"multi"}},
};

}  // namespace

int run(const std::string& verb, const std::string& scenario_path,
        const std::string& out_dir, const RunOverrides& overrides) {
    try {
        auto verb_it = kVerbDefaults.find(verb);
        if (verb_it == kVerbDefaults.end())
            throw ValidationError("verb", "unknown verb: " + verb);

        std::string scenario_bytes = read_file(scenario_path);
        RunContext ctx;
        ctx.sc = load_scenario(scenario_path);
        ctx.autarky = solve_autarky(ctx.sc.worker);
        ctx.adoption_opts.lambda_tol = overrides.tolerance.value_or(1e-10);
        if (!(ctx.adoption_opts.lambda_tol > 0.0) || ctx.adoption_opts.lambda_tol > 0.5)
            throw ValidationError("tolerance", "must lie in (0, 0.5]");
        ctx.mc = ctx.sc.monte_carlo.value_or(MonteCarloParams{});
        if (overrides.samples) {
            if (*overrides.samples < 1)
                throw ValidationError("samples", "must be at least 1");
            ctx.mc.samples = *overrides.samples;
        }
        if (overrides.seed) ctx.mc.seed = *overrides.seed;

        std::vector<std::string> requested =
            ctx.sc.outputs.empty() ? verb_it->second : ctx.sc.outputs;
        // The solve default includes adoption only when a technology exists.
        if (ctx.sc.outputs.empty() && verb == "solve" && ctx.sc.technologies.empty())
            requested = {"autarky"};

        std::filesystem::create_directories(out_dir);

        nlohmann::ordered_json manifest;
        manifest["verb"] = verb;
        manifest["scenario"] = {{"path", scenario_path},
                                {"fnv64", hex64(fnv64(scenario_bytes))}};
        manifest["parameters"] = {{"seed", ctx.mc.seed},
                                  {"samples", ctx.mc.samples},
                                  {"lambda_tolerance", ctx.adoption_opts.lambda_tol},
                                  {"kkt_tolerance", ctx.adoption_opts.inner.kkt_tol},
                                  {"gap_tolerance", MultiTechOptions{}.gap_tol}};
        manifest["outputs"] = nlohmann::ordered_json::array();

        for (const std::string& name : requested) {
            std::string content;
            if (name == "autarky") content = make_autarky(ctx);
            else if (name == "adoption") content = make_adoption(ctx);
            else if (name == "sweep") content = make_sweep(ctx);
            else if (name == "intensity") content = make_intensity(ctx);
            else if (name == "half_angle") content = make_half_angle(ctx);
            else if (name == "measure") content = make_measure(ctx);
            else if (name == "curvature") content = make_curvature(ctx);
            else if (name == "multi") content = make_multi(ctx);
            else throw ValidationError("outputs", "unknown artifact: " + name);

            std::string file = name + ".csv";
            std::ofstream out(std::filesystem::path(out_dir) / file, std::ios::binary);
            if (!out) throw ValidationError("out", "cannot write " + file);
            out << content;
            manifest["outputs"].push_back({{"name", name},
                                           {"file", file},
                                           {"bytes", content.size()},
                                           {"fnv64", hex64(fnv64(content))}});
        }

        std::ofstream mout(std::filesystem::path(out_dir) / "manifest.json",
                           std::ios::binary);
        if (!mout) throw ValidationError("out", "cannot write manifest.json");
        mout << manifest.dump(2) << "\n";
        return 0;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

}  // namespace adopt
