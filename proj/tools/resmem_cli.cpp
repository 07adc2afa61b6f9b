// Scenario runner. Exit codes: 0 ok, 2 config, 3 numeric guard or failed
// validation, 4 I/O.
#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "resmem/errors.hpp"
#include "resmem/log.hpp"
#include "resmem/scenario.hpp"

namespace {

std::optional<std::string> env(const char *name) {
    const char *v = std::getenv(name);
    if (v == nullptr || *v == '\0') {
        return std::nullopt;
    }
    return std::string(v);
}

template <typename T>
T parse_env(const std::string &name, const std::string &text) {
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(text, &used);
        if (used != text.size() || text.front() == '-') {
            throw std::invalid_argument(text);
        }
        return static_cast<T>(v);
    } catch (const std::exception &) {
        throw resmem::ConfigError(name + " must be a non-negative integer, got '" + text + "'");
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"resmem: resonator memory and breeding simulations"};
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 0;
    bool quiet = false;
    auto *opt_config = app.add_option("--config", config_path, "JSON scenario file (env RESMEM_CONFIG)");
    auto *opt_out = app.add_option("--out", out_dir, "output directory (env RESMEM_OUT)");
    auto *opt_seed = app.add_option("--seed", seed, "RNG seed (env RESMEM_SEED)");
    auto *opt_threads = app.add_option("--threads", threads, "worker threads (env RESMEM_THREADS)")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", quiet, "suppress warnings");
    app.set_version_flag("--version", resmem::kVersion);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (quiet) {
        resmem::set_log_level(resmem::LogLevel::Silent);
    }

    try {
        // Flags win over environment variables, which win over the file.
        if (!*opt_config) {
            if (auto v = env("RESMEM_CONFIG")) {
                config_path = *v;
            }
        }
        if (config_path.empty()) {
            throw resmem::ConfigError("no config given (--config or RESMEM_CONFIG)");
        }
        resmem::ScenarioConfig cfg = resmem::ScenarioConfig::from_file(config_path);
        if (*opt_out) {
            cfg.output_dir = out_dir;
        } else if (auto v = env("RESMEM_OUT")) {
            cfg.output_dir = *v;
        }
        if (*opt_seed) {
            cfg.seed = seed;
        } else if (auto v = env("RESMEM_SEED")) {
            cfg.seed = parse_env<std::uint64_t>("RESMEM_SEED", *v);
        }
        if (*opt_threads) {
            cfg.threads = threads;
        } else if (auto v = env("RESMEM_THREADS")) {
            cfg.threads = parse_env<int>("RESMEM_THREADS", *v);
            if (cfg.threads < 1) {
                throw resmem::ConfigError("RESMEM_THREADS must be positive");
            }
        }

        resmem::ScenarioResult r = resmem::run_scenario(cfg);
        for (const auto &f : r.files) {
            std::cout << cfg.output_dir << "/" << f << "\n";
        }
        if (!r.passed) {
            std::cerr << "resmem: validation failed, see manifest.json\n";
            return 3;
        }
        return 0;
    } catch (const resmem::ConfigError &e) {
        std::cerr << "resmem: config error: " << e.what() << "\n";
        return 2;
    } catch (const resmem::NumericGuardError &e) {
        std::cerr << "resmem: numeric guard: " << e.what() << "\n";
        return 3;
    } catch (const resmem::IoError &e) {
        std::cerr << "resmem: I/O error: " << e.what() << "\n";
        return 4;
    }
}
