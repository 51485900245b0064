#include "nifs/error.hpp"
#include "nifs/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw nifs::Error(nifs::ErrorKind::config, "cannot read config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

unsigned env_threads()
{
    const char* v = std::getenv("NIFS_ATLAS_THREADS");
    if (!v || !*v)
        return 0;
    try {
        return static_cast<unsigned>(std::stoul(v));
    } catch (const std::exception&) {
        throw nifs::Error(nifs::ErrorKind::config, std::string("NIFS_ATLAS_THREADS is not a number: ") + v);
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"nifs-atlas: non-autonomous iterated function systems, certificates and Julia sets"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;

    for (const auto& action : nifs::runner::kActions) {
        auto* sub = app.add_subcommand(action, "run the '" + action + "' action of a config");
        sub->add_option("--config", config_path, "JSON run config")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_option("--threads", threads, "worker threads (default: NIFS_ATLAS_THREADS or all cores)");
    }
    std::string preset;
    auto* examples = app.add_subcommand("examples", "list the built-in presets, or run one");
    examples->add_option("name", preset, "preset to run");
    examples->add_option("--out", out_dir, "output directory");
    examples->add_option("--threads", threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        nifs::runner::RunOptions opt;
        opt.out_dir = out_dir;
        opt.seed = seed;
        opt.threads = threads ? *threads : env_threads();

        if (examples->parsed()) {
            if (preset.empty()) {
                for (const auto& p : nifs::runner::presets())
                    std::cout << p.name << "\t" << p.description << "\n";
                return 0;
            }
            std::cout << nifs::runner::run_preset(preset, opt).summary << "\n";
            return 0;
        }
        const auto* sub = app.get_subcommands().front();
        std::cout << nifs::runner::run_config(read_file(config_path), sub->get_name(), opt).summary << "\n";
        return 0;
    } catch (const nifs::Error& e) {
        std::cerr << "nifs-atlas: " << nifs::to_string(e.kind()) << " error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "nifs-atlas: internal error: " << e.what() << "\n";
        return 1;
    }
}
