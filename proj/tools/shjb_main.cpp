// Command line front end: validate configs, run campaigns, re-render reports.
//
//   shjb validate --config run.json
//   shjb run      --config run.json [--seed N] [--out DIR] [--workers W]
//   shjb report   --out DIR
//
// Exit codes: 0 pass, 1 check failure, 2 config error.

#include "shjb/campaign.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral simulation suite for transported HJB dynamics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int workers = 1;
    std::optional<std::uint64_t> seed_override;
    std::uint64_t seed_value = 0;

    auto* validate = app.add_subcommand("validate", "check a config file against the schema");
    validate->add_option("--config", config_path, "config JSON path")->required();

    auto* run = app.add_subcommand("run", "execute the configured campaign");
    run->add_option("--config", config_path, "config JSON path")->required();
    auto* seed_opt = run->add_option("--seed", seed_value, "override the config seed");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--workers", workers, "worker pool size")->check(CLI::PositiveNumber);

    auto* report = app.add_subcommand("report", "re-render summary from an artifact tree");
    report->add_option("--out", out_dir, "artifact directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (report->parsed()) return shjb::render_report(out_dir);

    auto outcome = shjb::parse_config_file(config_path);
    if (!outcome.config) {
        std::fprintf(stderr, "config rejected:\n");
        for (const auto& err : outcome.errors) std::fprintf(stderr, "  %s\n", err.c_str());
        return 2;
    }
    if (validate->parsed()) {
        std::printf("config ok, hash %016llx\n",
                    static_cast<unsigned long long>(outcome.config->hash));
        return 0;
    }
    if (seed_opt->count() > 0) seed_override = seed_value;
    return shjb::run_campaign(*outcome.config, out_dir, workers, seed_override);
}
