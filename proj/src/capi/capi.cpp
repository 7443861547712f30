// extern-C facade over the simulator core: opaque handles, status codes,
// thread-local error text.

#include "sana/sana.h"

#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "core/errors.hpp"
#include "core/harness.hpp"
#include "core/scenario.hpp"
#include "core/sim.hpp"
#include "core/version.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) {
        std::memcpy(out, s.c_str(), s.size() + 1);
    }
    return out;
}

sana_status classify(const std::exception& e) {
    g_last_error = e.what();
    if (dynamic_cast<const sana::InvalidScenario*>(&e)) {
        return SANA_ERR_INVALID_SCENARIO;
    }
    if (const auto* sim_err = dynamic_cast<const sana::SimError*>(&e)) {
        if (sim_err->code() == "IoError") return SANA_ERR_IO;
        if (sim_err->code() == "BadArguments" || sim_err->code() == "BadTraceLevel") {
            return SANA_ERR_BAD_ARGUMENT;
        }
        return SANA_ERR_RUNTIME;
    }
    return SANA_ERR_RUNTIME;
}

std::optional<sana::Mode> parse_mode(const char* mode) {
    if (!mode || !*mode) return std::nullopt;
    return sana::mode_from_string(mode);
}

std::optional<std::uint64_t> parse_seed(int64_t seed) {
    if (seed < 0) return std::nullopt;
    return static_cast<std::uint64_t>(seed);
}

sana::TraceLevel parse_level(const char* level) {
    if (!level || !*level) return sana::TraceLevel::full;
    return sana::trace_level_from_string(level);
}

} // namespace

struct sana_sim {
    sana::Simulation impl;
    sana_sim(sana::Scenario scenario, std::optional<sana::Mode> mode,
             std::optional<std::uint64_t> seed)
        : impl(std::move(scenario), mode, seed, sana::TraceLevel::full) {}
};

extern "C" {

const char* sana_version(void) {
    return sana::kVersion;
}

const char* sana_last_error(void) {
    return g_last_error.c_str();
}

void sana_string_free(char* s) {
    std::free(s);
}

static sana_status run_common(sana::Scenario scenario, const char* mode_override,
                              int64_t seed_override, const char* trace_level,
                              const char* out_dir, char** report_json) {
    auto out = sana::run_scenario(scenario, parse_mode(mode_override),
                                  parse_seed(seed_override), parse_level(trace_level),
                                  out_dir ? out_dir : "");
    if (report_json) {
        *report_json = dup_string(out.report_json);
        if (!*report_json) return SANA_ERR_RUNTIME;
    }
    return SANA_OK;
}

sana_status sana_run_file(const char* scenario_path, const char* mode_override,
                          int64_t seed_override, const char* trace_level, const char* out_dir,
                          char** report_json) {
    if (!scenario_path) {
        g_last_error = "scenario_path is NULL";
        return SANA_ERR_BAD_ARGUMENT;
    }
    try {
        return run_common(sana::Scenario::from_file(scenario_path), mode_override,
                          seed_override, trace_level, out_dir, report_json);
    } catch (const std::exception& e) {
        return classify(e);
    }
}

sana_status sana_run_json(const char* scenario_json, const char* mode_override,
                          int64_t seed_override, const char* trace_level, const char* out_dir,
                          char** report_json) {
    if (!scenario_json) {
        g_last_error = "scenario_json is NULL";
        return SANA_ERR_BAD_ARGUMENT;
    }
    try {
        return run_common(sana::Scenario::from_json_text(scenario_json), mode_override,
                          seed_override, trace_level, out_dir, report_json);
    } catch (const std::exception& e) {
        return classify(e);
    }
}

sana_status sana_compare_file(const char* scenario_path, const char* const* modes,
                              size_t n_modes, const char* trace_level, const char* out_dir,
                              char** table_json) {
    if (!scenario_path || !modes) {
        g_last_error = "scenario_path/modes is NULL";
        return SANA_ERR_BAD_ARGUMENT;
    }
    try {
        std::vector<sana::Mode> parsed;
        for (size_t i = 0; i < n_modes; ++i) {
            parsed.push_back(sana::mode_from_string(modes[i]));
        }
        auto scenario = sana::Scenario::from_file(scenario_path);
        std::string table = sana::compare_modes(scenario, parsed, parse_level(trace_level),
                                                out_dir ? out_dir : "");
        if (table_json) {
            *table_json = dup_string(table);
            if (!*table_json) return SANA_ERR_RUNTIME;
        }
        return SANA_OK;
    } catch (const std::exception& e) {
        return classify(e);
    }
}

sana_status sana_sweep_file(const char* scenario_path, const uint64_t* seeds, size_t n_seeds,
                            const char* trace_level, const char* out_dir,
                            char** aggregate_json) {
    if (!scenario_path || !seeds) {
        g_last_error = "scenario_path/seeds is NULL";
        return SANA_ERR_BAD_ARGUMENT;
    }
    try {
        std::vector<std::uint64_t> list(seeds, seeds + n_seeds);
        auto scenario = sana::Scenario::from_file(scenario_path);
        std::string agg =
            sana::seed_sweep(scenario, list, parse_level(trace_level), out_dir ? out_dir : "");
        if (aggregate_json) {
            *aggregate_json = dup_string(agg);
            if (!*aggregate_json) return SANA_ERR_RUNTIME;
        }
        return SANA_OK;
    } catch (const std::exception& e) {
        return classify(e);
    }
}

sana_status sana_sim_create_from_file(const char* scenario_path, const char* mode_override,
                                      int64_t seed_override, sana_sim** out) {
    if (!scenario_path || !out) {
        g_last_error = "scenario_path/out is NULL";
        return SANA_ERR_BAD_ARGUMENT;
    }
    try {
        auto scenario = sana::Scenario::from_file(scenario_path);
        *out = new sana_sim(std::move(scenario), parse_mode(mode_override),
                            parse_seed(seed_override));
        return SANA_OK;
    } catch (const std::exception& e) {
        return classify(e);
    }
}

sana_status sana_sim_create_from_json(const char* scenario_json, const char* mode_override,
                                      int64_t seed_override, sana_sim** out) {
    if (!scenario_json || !out) {
        g_last_error = "scenario_json/out is NULL";
        return SANA_ERR_BAD_ARGUMENT;
    }
    try {
        auto scenario = sana::Scenario::from_json_text(scenario_json);
        *out = new sana_sim(std::move(scenario), parse_mode(mode_override),
                            parse_seed(seed_override));
        return SANA_OK;
    } catch (const std::exception& e) {
        return classify(e);
    }
}

sana_status sana_sim_step(sana_sim* sim, uint64_t ticks) {
    if (!sim) {
        g_last_error = "sim is NULL";
        return SANA_ERR_BAD_ARGUMENT;
    }
    try {
        for (uint64_t i = 0; i < ticks; ++i) {
            sim->impl.step();
        }
        return SANA_OK;
    } catch (const std::exception& e) {
        return classify(e);
    }
}

uint64_t sana_sim_tick(const sana_sim* sim) {
    return sim ? sim->impl.now() : 0;
}

sana_status sana_sim_metric(const sana_sim* sim, const char* name, double* out) {
    if (!sim || !name || !out) {
        g_last_error = "sim/name/out is NULL";
        return SANA_ERR_BAD_ARGUMENT;
    }
    const std::string key(name);
    const auto& m = sim->impl.metrics();
    if (key == "infected_now") {
        *out = sim->impl.infection().infected_count();
    } else if (key == "quarantined_now") {
        *out = sim->impl.infection().quarantined_count();
    } else if (key == "peak_infected") {
        *out = m.peak_infected;
    } else if (key == "population") {
        *out = static_cast<double>(sim->impl.population());
    } else if (key == "roaming") {
        *out = static_cast<double>(sim->impl.roaming_count());
    } else if (key == "alerts_total") {
        *out = static_cast<double>(m.alerts_total);
    } else if (key == "packets_sent") {
        *out = static_cast<double>(m.packets_sent);
    } else if (key == "packets_dropped") {
        *out = static_cast<double>(m.packets_dropped);
    } else if (key == "min_level") {
        *out = m.min_level_series.empty() ? 0.0 : m.min_level_series.back();
    } else {
        g_last_error = "unknown metric '" + key + "'";
        return SANA_ERR_BAD_ARGUMENT;
    }
    return SANA_OK;
}

sana_status sana_sim_report_json(sana_sim* sim, char** report_json) {
    if (!sim || !report_json) {
        g_last_error = "sim/report_json is NULL";
        return SANA_ERR_BAD_ARGUMENT;
    }
    try {
        *report_json = dup_string(sim->impl.report_json());
        return *report_json ? SANA_OK : SANA_ERR_RUNTIME;
    } catch (const std::exception& e) {
        return classify(e);
    }
}

sana_status sana_sim_write_traces(sana_sim* sim, const char* out_dir) {
    if (!sim || !out_dir) {
        g_last_error = "sim/out_dir is NULL";
        return SANA_ERR_BAD_ARGUMENT;
    }
    try {
        sim->impl.trace().write(out_dir);
        return SANA_OK;
    } catch (const std::exception& e) {
        return classify(e);
    }
}

void sana_sim_destroy(sana_sim* sim) {
    delete sim;
}

} // extern "C"
