// hybridq: batch front end for the double-dot spin-charge qubit solver.
//
//   hybridq solve     --config run.cfg [--out dir] [--workers n] [--track n]
//   hybridq stabilize --config run.cfg ...
//   hybridq sweep     --config run.cfg ...   (task sweep-bsl, sweep-w0 or sweep-B0)
//   hybridq quartic   --config run.cfg ...
//   hybridq contour   --config run.cfg ...

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hybridq/config.hpp"
#include "hybridq/parallel.hpp"
#include "hybridq/run.hpp"

namespace {

struct Options {
    std::string config;
    std::optional<std::string> out;
    std::optional<int> workers;
    std::optional<int> track;
};

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "key = value configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory (overrides the config)");
    sub->add_option("--workers", o.workers, "worker threads (fallback: HYBRIDQ_WORKERS, then the config)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--track", o.track, "number of levels to report")->check(CLI::PositiveNumber);
}

bool task_matches(const std::string& sub, hybridq::Task t) {
    using hybridq::Task;
    if (sub == "solve") return t == Task::solve;
    if (sub == "stabilize") return t == Task::stabilize;
    if (sub == "sweep") return t == Task::sweep_bsl || t == Task::sweep_w0 || t == Task::sweep_B0;
    if (sub == "quartic") return t == Task::quartic_gap;
    if (sub == "contour") return t == Task::contour_fit;
    return false;
}

hybridq::Task implied_task(const std::string& sub) {
    using hybridq::Task;
    if (sub == "stabilize") return Task::stabilize;
    if (sub == "sweep") return Task::sweep_bsl;
    if (sub == "quartic") return Task::quartic_gap;
    if (sub == "contour") return Task::contour_fit;
    return Task::solve;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ritz solver for a spin-charge qubit in a double quantum dot"};
    app.require_subcommand(1);
    Options opts;
    for (const char* name : {"solve", "stabilize", "sweep", "quartic", "contour"}) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " task");
        add_common(sub, opts);
    }
    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        hybridq::RunConfig cfg = hybridq::load_config(opts.config, implied_task(sub));
        if (!task_matches(sub, cfg.task)) {
            std::cerr << "error: config task " << hybridq::to_string(cfg.task) << " does not belong to subcommand "
                      << sub << "\n";
            return 2;
        }
        if (opts.out) cfg.out = *opts.out;
        if (opts.workers) cfg.workers = *opts.workers;
        else if (std::getenv("HYBRIDQ_WORKERS")) cfg.workers = hybridq::workers_from_env();
        if (opts.track) cfg.levels = *opts.track;
        hybridq::validate(cfg);
        const auto outcome = hybridq::run(cfg, &std::cout);
        std::cout << "wrote " << outcome.csv.string() << ", " << outcome.plot.string() << ", "
                  << outcome.summary.string() << "\n";
        return outcome.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
