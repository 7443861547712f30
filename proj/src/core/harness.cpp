#include "core/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/sim.hpp"

namespace sana {

using nlohmann::json;

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw SimError("IoError", "cannot write " + path.string());
    }
    out << text;
}

// Numeric leaves worth aggregating across seeds.
const std::vector<std::pair<std::string, std::vector<std::string>>> kSweepMetrics = {
    {"final_infected", {"infection", "final_infected"}},
    {"peak_infected", {"infection", "peak_infected"}},
    {"quarantines", {"infection", "quarantines"}},
    {"packets_sent", {"traffic", "sent"}},
    {"alerts_total", {"alerts", "total"}},
    {"population_final", {"population", "final"}},
};

double leaf(const json& j, const std::vector<std::string>& path) {
    const json* cur = &j;
    for (const auto& key : path) {
        cur = &cur->at(key);
    }
    return cur->get<double>();
}

} // namespace

RunOutput run_scenario(const Scenario& scenario, std::optional<Mode> mode_override,
                       std::optional<std::uint64_t> seed_override, TraceLevel level,
                       const std::string& out_dir) {
    Simulation sim(scenario, mode_override, seed_override, level);
    sim.run();
    RunOutput out{sim.report_json()};
    if (!out_dir.empty()) {
        std::filesystem::path base(out_dir);
        std::filesystem::create_directories(base);
        write_text(base / "report.json", out.report_json);
        write_text(base / "scenario.json", sim.scenario().to_json_text());
        sim.trace().write(base.string());
    }
    return out;
}

std::string compare_modes(const Scenario& scenario, const std::vector<Mode>& modes,
                          TraceLevel level, const std::string& out_dir) {
    if (modes.size() < 2) {
        throw SimError("BadArguments", "compare needs at least two modes");
    }
    json table;
    table["scenario"] = scenario.name;
    table["seed"] = scenario.seed;
    json rows = json::object();
    for (Mode mode : modes) {
        std::string sub = out_dir.empty()
                              ? std::string{}
                              : (std::filesystem::path(out_dir) / to_string(mode)).string();
        RunOutput run = run_scenario(scenario, mode, std::nullopt, level, sub);
        rows[to_string(mode)] = json::parse(run.report_json);
    }
    table["modes"] = rows;

    // headline deltas relative to the first mode
    json deltas = json::object();
    const std::string base_name = to_string(modes.front());
    for (std::size_t i = 1; i < modes.size(); ++i) {
        const std::string name = to_string(modes[i]);
        json d;
        for (const auto& [metric, path] : kSweepMetrics) {
            d[metric] = leaf(rows[name], path) - leaf(rows[base_name], path);
        }
        deltas[name + "-vs-" + base_name] = d;
    }
    table["deltas"] = deltas;

    std::string text = table.dump(2);
    if (!out_dir.empty()) {
        write_text(std::filesystem::path(out_dir) / "comparison.json", text);
    }
    return text;
}

std::string seed_sweep(const Scenario& scenario, const std::vector<std::uint64_t>& seeds,
                       TraceLevel level, const std::string& out_dir) {
    if (seeds.empty()) {
        throw SimError("BadArguments", "sweep needs at least one seed");
    }
    json sweep;
    sweep["scenario"] = scenario.name;
    sweep["mode"] = to_string(scenario.mode);
    json runs = json::object();
    std::map<std::string, std::vector<double>> samples;
    for (std::uint64_t seed : seeds) {
        std::string sub = out_dir.empty()
                              ? std::string{}
                              : (std::filesystem::path(out_dir) / ("seed" + std::to_string(seed)))
                                    .string();
        RunOutput run = run_scenario(scenario, std::nullopt, seed, level, sub);
        json report = json::parse(run.report_json);
        runs["seed" + std::to_string(seed)] = report;
        for (const auto& [metric, path] : kSweepMetrics) {
            samples[metric].push_back(leaf(report, path));
        }
    }
    sweep["runs"] = runs;

    json agg = json::object();
    for (const auto& [metric, values] : samples) {
        double mean = 0, lo = values.front(), hi = values.front();
        for (double v : values) {
            mean += v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        mean /= values.size();
        double var = 0;
        for (double v : values) {
            var += (v - mean) * (v - mean);
        }
        var /= values.size();
        agg[metric] = json{{"mean", mean}, {"min", lo}, {"max", hi}, {"stddev", std::sqrt(var)}};
    }
    sweep["aggregate"] = agg;

    std::string text = sweep.dump(2);
    if (!out_dir.empty()) {
        write_text(std::filesystem::path(out_dir) / "sweep.json", text);
    }
    return text;
}

} // namespace sana
