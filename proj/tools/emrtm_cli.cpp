#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "emrtm/experiment.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"emrtm: 2D electromagnetic reverse time migration"};
    app.require_subcommand(1);

    emrtm::RunOptions opts;
    int threads = 0;
    std::uint64_t seed = 0;
    std::string output;
    std::string path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "noise seed (overrides the config)");
        sub->add_option("--output", output, "output directory (overrides the config)");
    };

    auto* run = app.add_subcommand("run", "forward solve, image and write artifacts");
    run->add_option("config", path, "experiment config")->required();
    add_common(run);

    auto* verify = app.add_subcommand("verify", "run the identity checks");
    verify->add_option("config", path, "experiment config")->required();
    add_common(verify);

    auto* info = app.add_subcommand("info", "summarise an artifact and check its checksum");
    info->add_option("artifact", path, "dataset, image or manifest")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : emrtm::kExitConfig;
    }

    for (auto* sub : {run, verify}) {
        if (sub->parsed()) {
            if (sub->count("--threads")) opts.threads = threads;
            if (sub->count("--seed")) opts.seed = seed;
            if (sub->count("--output")) opts.output = output;
        }
    }

    if (run->parsed()) {
        return emrtm::run_command(path, opts, std::cout, std::cerr);
    }
    if (verify->parsed()) {
        return emrtm::verify_command(path, opts, std::cout, std::cerr);
    }
    return emrtm::info_command(path, std::cout, std::cerr);
}
