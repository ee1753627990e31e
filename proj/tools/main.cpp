#include <cstdint>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "adopt/runner.hpp"

namespace {

struct CommonArgs {
    std::string scenario;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<long> samples;
    std::optional<double> tolerance;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--scenario", args.scenario, "Scenario JSON file")
        ->required();
    sub->add_option("--out", args.out, "Output directory for CSV artifacts")
        ->required();
    sub->add_option("--seed", [&args](const CLI::results_t& r) {
        args.seed = std::stoull(r.at(0));
        return true;
    }, "Monte Carlo seed (overrides scenario)")->expected(1);
    sub->add_option("--samples", [&args](const CLI::results_t& r) {
        args.samples = std::stol(r.at(0));
        return true;
    }, "Monte Carlo sample count (overrides scenario)")->expected(1);
    sub->add_option("--tolerance", [&args](const CLI::results_t& r) {
        args.tolerance = std::stod(r.at(0));
        return true;
    }, "Intensity (lambda) tolerance, default 1e-10")->expected(1);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Task-allocation and directional technology adoption runner"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* solve = app.add_subcommand("solve", "Autarky and single-technology adoption");
    CLI::App* sweep = app.add_subcommand("sweep", "Capability sweep over a chi grid");
    CLI::App* cone = app.add_subcommand("cone", "Cone half-angle and Monte Carlo measure");
    CLI::App* multi = app.add_subcommand("multi", "Joint K-technology allocation");
    for (CLI::App* sub : {solve, sweep, cone, multi}) add_common(sub, args);

    CLI11_PARSE(app, argc, argv);

    std::string verb = app.get_subcommands().front()->get_name();
    adopt::RunOverrides overrides{args.seed, args.samples, args.tolerance};
    return adopt::run(verb, args.scenario, args.out, overrides);
}
