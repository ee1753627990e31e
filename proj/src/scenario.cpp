#include "adopt/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "adopt/errors.hpp"

namespace adopt {

namespace {

using nlohmann::json;

const json& require(const json& j, const std::string& key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(path + "." + key, "missing required field");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ValidationError(path, "must be a number");
    return j.get<double>();
}

long as_count(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ValidationError(path, "must be an integer");
    return j.get<long>();
}

TaskVector as_vector(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty())
        throw ValidationError(path, "must be a non-empty array of numbers");
    TaskVector v;
    v.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw ValidationError(path + "[" + std::to_string(i) + "]", "must be a number");
        v.push_back(j[i].get<double>());
    }
    return v;
}

GridRange as_grid(const json& j, const std::string& path) {
    if (!j.is_object()) throw ValidationError(path, "must be an object {min, max, steps}");
    GridRange g;
    g.min = as_number(require(j, "min", path), path + ".min");
    g.max = as_number(require(j, "max", path), path + ".max");
    g.steps = as_count(require(j, "steps", path), path + ".steps");
    if (g.steps < 2) throw ValidationError(path + ".steps", "must be at least 2");
    if (!(g.min < g.max)) throw ValidationError(path + ".min", "must be less than max");
    if (!std::isfinite(g.min) || !std::isfinite(g.max))
        throw ValidationError(path, "bounds must be finite");
    return g;
}

const std::set<std::string> kArtifacts = {"autarky",    "adoption", "sweep",
                                          "intensity",  "half_angle", "measure",
                                          "curvature",  "multi"};

}  // namespace

std::vector<double> linear_grid(const GridRange& g) {
    std::vector<double> pts(static_cast<std::size_t>(g.steps));
    for (long i = 0; i < g.steps; ++i)
        pts[static_cast<std::size_t>(i)] =
            g.min + (g.max - g.min) * static_cast<double>(i) /
                        static_cast<double>(g.steps - 1);
    return pts;
}

std::vector<double> geometric_grid(const GridRange& g) {
    std::vector<double> pts(static_cast<std::size_t>(g.steps));
    double lmin = std::log(g.min), lmax = std::log(g.max);
    for (long i = 0; i < g.steps; ++i)
        pts[static_cast<std::size_t>(i)] =
            std::exp(lmin + (lmax - lmin) * static_cast<double>(i) /
                                static_cast<double>(g.steps - 1));
    return pts;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("scenario", "cannot open file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("scenario", std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) throw ValidationError("scenario", "top level must be an object");

    Scenario sc;

    const json& jw = require(root, "worker", "scenario");
    if (!jw.is_object()) throw ValidationError("worker", "must be an object");
    sc.worker.theta = as_vector(require(jw, "theta", "worker"), "worker.theta");
    sc.worker.s = as_vector(require(jw, "s", "worker"), "worker.s");
    sc.worker.sigma = as_number(require(jw, "sigma", "worker"), "worker.sigma");
    sc.worker.gamma = as_number(require(jw, "gamma", "worker"), "worker.gamma");
    sc.worker.budget = as_number(require(jw, "budget", "worker"), "worker.budget");
    sc.worker.validate("worker");

    if (auto it = root.find("technologies"); it != root.end()) {
        if (!it->is_array()) throw ValidationError("technologies", "must be an array");
        for (std::size_t k = 0; k < it->size(); ++k) {
            std::string tp = "technologies[" + std::to_string(k) + "]";
            const json& jt = (*it)[k];
            if (!jt.is_object()) throw ValidationError(tp, "must be an object {t, chi}");
            TaskVector dir = as_vector(require(jt, "t", tp), tp + ".t");
            if (dir.size() != sc.worker.size())
                throw ValidationError(tp + ".t", "length must match worker.theta");
            double chi = as_number(require(jt, "chi", tp), tp + ".chi");
            double nrm = norm2(dir);
            if (nrm > 0.0 && std::abs(nrm - 1.0) > 1e-6)
                std::fprintf(stderr,
                             "warning: %s.t normalized to unit length (|t| was %.9g)\n",
                             tp.c_str(), nrm);
            sc.technologies.push_back(Technology::unit(std::move(dir), chi, tp));
        }
    }

    if (auto it = root.find("sweeps"); it != root.end()) {
        if (!it->is_object()) throw ValidationError("sweeps", "must be an object");
        if (auto c = it->find("chi"); c != it->end())
            sc.chi_grid = as_grid(*c, "sweeps.chi");
        if (auto c = it->find("curvature"); c != it->end()) {
            sc.curvature_grid = as_grid(*c, "sweeps.curvature");
            if (!(sc.curvature_grid->min > 0.0))
                throw ValidationError("sweeps.curvature.min", "must be positive");
            // Each grid point rescales (gamma, sigma) proportionally; the
            // scaled sigma must stay valid and outside the band around 1.
            double base = sc.worker.gamma + sc.worker.sigma;
            for (double target : geometric_grid(*sc.curvature_grid)) {
                WorkerJob probe = sc.worker;
                probe.gamma = sc.worker.gamma * target / base;
                probe.sigma = sc.worker.sigma * target / base;
                probe.validate("sweeps.curvature (scaled worker)");
            }
        }
    }

    if (auto it = root.find("monte_carlo"); it != root.end()) {
        if (!it->is_object())
            throw ValidationError("monte_carlo", "must be an object {samples, seed}");
        MonteCarloParams mc;
        mc.samples = as_count(require(*it, "samples", "monte_carlo"), "monte_carlo.samples");
        if (mc.samples < 1)
            throw ValidationError("monte_carlo.samples", "must be at least 1");
        const json& js = require(*it, "seed", "monte_carlo");
        if (!js.is_number_integer() || js.get<long long>() < 0)
            throw ValidationError("monte_carlo.seed", "must be a nonnegative integer");
        mc.seed = js.get<std::uint64_t>();
        sc.monte_carlo = mc;
    }

    if (auto it = root.find("outputs"); it != root.end()) {
        if (!it->is_array()) throw ValidationError("outputs", "must be an array of names");
        for (std::size_t i = 0; i < it->size(); ++i) {
            if (!(*it)[i].is_string())
                throw ValidationError("outputs[" + std::to_string(i) + "]",
                                      "must be a string");
            std::string name = (*it)[i].get<std::string>();
            if (!kArtifacts.count(name))
                throw ValidationError("outputs[" + std::to_string(i) + "]",
                                      "unknown artifact: " + name);
            sc.outputs.push_back(std::move(name));
        }
    }

    return sc;
}

}  // namespace adopt
