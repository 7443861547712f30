// Command-line front end; drives the simulator exclusively through the
// shared library's C interface.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sana/sana.h"

namespace {

int fail(sana_status status) {
    std::fprintf(stderr, "error (%d): %s\n", static_cast<int>(status), sana_last_error());
    return static_cast<int>(status);
}

void print_and_free(char* text) {
    if (text) {
        std::fputs(text, stdout);
        std::fputc('\n', stdout);
        sana_string_free(text);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic immune-network protection simulator"};
    app.set_version_flag("--version", std::string(sana_version()));
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    std::string trace_level = "full";
    std::string mode_override;
    std::int64_t seed_override = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
        cmd->add_option("--out", out_dir, "output directory for report and traces");
        cmd->add_option("--trace-level", trace_level, "none|summary|full")
            ->check(CLI::IsMember({"none", "summary", "full"}));
    };

    CLI::App* run = app.add_subcommand("run", "run one scenario");
    add_common(run);
    run->add_option("--mode", mode_override, "override protection mode")
        ->check(CLI::IsMember({"none", "baseline", "sana", "hybrid"}));
    run->add_option("--seed", seed_override, "override scenario seed");

    CLI::App* compare = app.add_subcommand("compare", "run several modes side by side");
    add_common(compare);
    std::vector<std::string> modes;
    compare->add_option("--modes", modes, "modes to compare")->required()->delimiter(',');

    CLI::App* sweep = app.add_subcommand("sweep", "run one scenario over several seeds");
    add_common(sweep);
    std::vector<std::uint64_t> seeds;
    sweep->add_option("--seeds", seeds, "seed list")->required()->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    const char* out_arg = out_dir.empty() ? nullptr : out_dir.c_str();

    if (run->parsed()) {
        char* report = nullptr;
        sana_status status = sana_run_file(
            scenario_path.c_str(), mode_override.empty() ? nullptr : mode_override.c_str(),
            seed_override, trace_level.c_str(), out_arg, &report);
        if (status != SANA_OK) return fail(status);
        print_and_free(report);
        return 0;
    }

    if (compare->parsed()) {
        std::vector<const char*> mode_ptrs;
        mode_ptrs.reserve(modes.size());
        for (const auto& m : modes) mode_ptrs.push_back(m.c_str());
        char* table = nullptr;
        sana_status status = sana_compare_file(scenario_path.c_str(), mode_ptrs.data(),
                                               mode_ptrs.size(), trace_level.c_str(), out_arg,
                                               &table);
        if (status != SANA_OK) return fail(status);
        print_and_free(table);
        return 0;
    }

    if (sweep->parsed()) {
        char* agg = nullptr;
        sana_status status = sana_sweep_file(scenario_path.c_str(), seeds.data(), seeds.size(),
                                             trace_level.c_str(), out_arg, &agg);
        if (status != SANA_OK) return fail(status);
        print_and_free(agg);
        return 0;
    }

    return 0;
}
