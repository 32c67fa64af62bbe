// su11: scenario files in, deterministic CSV tables out.
//
//   su11 run       --config sui_port1.json --out run.csv
//   su11 sweep     --config g2_sweep.json --out sweep.csv --threads 4
//   su11 jsf       --config jsf_binomial.json --out jsf.csv
//   su11 fringe    --config fringe_sui.json --out fringe.csv
//   su11 selfcheck --config selfcheck.json
//
// Exit codes: 0 success, 2 config/validation error, 3 physics/runtime failure
// (oracle mismatch beyond tolerance, compute failure).

#include <CLI11.hpp>

#include "su11/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"SU(1,1) interferometer simulation front end"};
    app.require_subcommand(1);

    su11::CliOptions options;
    double tolerance = 0.0;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* cfg = cmd->add_option("--config", options.config_path, "scenario JSON file");
        if (config_required) cfg->required();
        cmd->add_option("--out", options.out, "output file (default: config 'out' or stdout)");
        cmd->add_option("--tolerance", tolerance, "enforce |snr - oracle|/oracle <= tolerance")
            ->check(CLI::PositiveNumber)
            ->each([&](const std::string&) { options.tolerance = tolerance; });
        cmd->add_option("--seed", seed, "seed for randomized property sweeps")
            ->each([&](const std::string&) { options.seed = seed; });
        cmd->add_option("--threads", options.threads,
                        "worker threads (default: SU11_NUM_THREADS, then 1)")
            ->check(CLI::PositiveNumber);
    };

    for (const char* name : {"run", "sweep", "jsf", "fringe", "selfcheck"}) {
        auto* cmd = app.add_subcommand(name);
        add_common(cmd, true);
        cmd->callback([&, name] { options.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    return su11::run_cli(options);
}
