#include "commands.hpp"

#include "dmlab/errors.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace dmlab;

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-moments of Z_alpha against mollified measures"};
    app.require_subcommand(1);

    cli::RunConfig flags;
    std::string config_path, format, output;
    std::vector<std::string> alpha_flags;
    auto* opt_T = app.add_option("--T", flags.T, "Heights T (comma separated)")->delimiter(',');
    auto* opt_alpha = app.add_option("--alpha", alpha_flags, "alpha values, e.g. 1,3/2")->delimiter(',');
    auto* opt_k = app.add_option("--k", flags.k_max, "Largest moment order");
    auto* opt_gk = app.add_option("--grid-k", flags.grid_k, "Order the quadrature grid resolves");
    auto* opt_moll = app.add_option(
        "--mollifier", flags.mollifiers,
        "unit|lambda|lambda2|lambdaK=k|flip=b1,b2|lambda-dr=r[,eta]|general=b1,b2,r,eta (repeatable)");
    auto* opt_eps = app.add_option("--tail-eps", flags.tail_eps, "Gaussian tail cut of the t window");
    auto* opt_cache = app.add_option("--cache-dir", flags.cache_dir, "Directory for sieve caches");
    auto* opt_fmt = app.add_option("--format", format, "csv or json");
    auto* opt_seed = app.add_option("--seed", flags.seed, "Monte Carlo seed");
    auto* opt_thr = app.add_option("--threads", flags.threads, "Thread budget (0: OpenMP default)");
    auto* opt_zeros = app.add_option("--zeros-file", flags.zeros_file, "Zero table, one height per line");
    auto* opt_samples = app.add_option("--samples", flags.samples, "Monte Carlo sample count");
    auto* opt_d = app.add_option("--d", flags.d, "Shifts for the zero-average profile")->delimiter(',');
    auto* opt_limit = app.add_option("--limit", flags.table_limit, "Sieve size for the tables command");
    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_option("-o,--output", output, "Write the report here instead of stdout");

    const std::vector<std::pair<std::string, std::string>> commands{
        {"tables", "Build or refresh cached sieve tables"},
        {"moments", "Closed-form moment tables"},
        {"verify", "Closed form vs diagonal oracle vs quadrature across the T ladder"},
        {"bounds", "Inequality chains as replayable reports"},
        {"zeros", "Zero-table statistics and profiles"},
        {"rv", "Random-variable models by Monte Carlo"}};
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kExitValidation;
    }

    try {
        cli::RunConfig config;
        if (!config_path.empty()) config = cli::load_config_file(config_path);
        if (opt_T->count()) config.T = flags.T;
        if (opt_alpha->count()) config.alpha = alpha_flags;
        if (opt_k->count()) config.k_max = flags.k_max;
        if (opt_gk->count()) config.grid_k = flags.grid_k;
        if (opt_moll->count()) config.mollifiers = flags.mollifiers;
        if (opt_eps->count()) config.tail_eps = flags.tail_eps;
        if (opt_cache->count()) config.cache_dir = flags.cache_dir;
        if (opt_fmt->count()) config.format = parse_format(format);
        if (opt_seed->count()) config.seed = flags.seed;
        if (opt_thr->count()) config.threads = flags.threads;
        if (opt_zeros->count()) config.zeros_file = flags.zeros_file;
        if (opt_samples->count()) config.samples = flags.samples;
        if (opt_d->count()) config.d = flags.d;
        if (opt_limit->count()) config.table_limit = flags.table_limit;

        const std::string command = app.get_subcommands().front()->get_name();
        const cli::CommandResult result = cli::run_command(command, config);
        if (output.empty()) {
            result.report.write(std::cout, config.format);
        } else {
            std::ofstream out(output);
            if (!out) throw ValidationError("cannot write " + output);
            result.report.write(out, config.format);
        }
        if (result.exit_code == cli::kExitTolerance)
            std::cerr << "dmlab: some checks fell outside tolerance\n";
        return result.exit_code;
    } catch (const ParseError& e) {
        std::cerr << "dmlab: " << e.what() << '\n';
        return cli::kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "dmlab: " << e.what() << '\n';
        return cli::kExitValidation;
    } catch (const CapacityError& e) {
        std::cerr << "dmlab: " << e.what() << '\n';
        return cli::kExitCapacity;
    } catch (const std::exception& e) {
        std::cerr << "dmlab: " << e.what() << '\n';
        return 1;
    }
}
