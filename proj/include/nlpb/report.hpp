// SPDX-License-Identifier: Apache-2.0
//
// Run configuration, suite execution and the JSON report.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nlpb/coherent.hpp"
#include "nlpb/model_zoo.hpp"

namespace nlpb::cli {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchemaVersion = "nlpb-report/1";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Suite { Battery, Roundtrip, Riesz, Coherent, Moments };

inline constexpr Suite kSuiteOrder[] = {Suite::Battery, Suite::Roundtrip, Suite::Riesz,
                                        Suite::Coherent, Suite::Moments};

std::string_view to_string(Suite s) noexcept;
std::optional<Suite> parse_suite(std::string_view name) noexcept;

struct MomentOptions {
    std::size_t k_max = 6;
    std::optional<double> support_cap;  // default_support_cap when unset
    std::size_t nodes = 400;
    std::size_t n_theta = 64;
};

struct RunConfig {
    zoo::ModelSpec model;  // carries dim, depth and margin
    Tolerances tolerances;
    std::vector<Suite> suites{std::begin(kSuiteOrder), std::end(kSuiteOrder)};
    std::vector<Complex> coherent_grid{Complex(0.5, 0.0)};
    MomentOptions moments;
    std::string output_path = "report.json";
};

/// Sets a named field of Tolerances. Throws ConfigError on an unknown name or
/// a non-positive, non-finite value.
void set_tolerance(Tolerances& tol, std::string_view name, double value);
std::vector<std::pair<std::string, double>> tolerance_entries(const Tolerances& tol);

/// Applies one model parameter ("q", "beta", "f", ...). Throws ConfigError.
void set_model_param(zoo::ModelSpec& spec, const std::string& key, const Json& value);
/// Same, from a command-line string: JSON literal, comma list or bare word.
void set_model_param(zoo::ModelSpec& spec, const std::string& key, const std::string& text);

/// Parses and validates a config document. Throws ConfigError.
RunConfig parse_config(const Json& doc);
RunConfig load_config(const std::string& path);

/// depth + margin <= dim, depth < dim, margin <= depth, positive tolerances,
/// nonempty suites. Throws ConfigError.
void validate(const RunConfig& config);

Json config_to_json(const RunConfig& config);
Json model_to_json(const zoo::ModelSpec& spec);

Json check_to_json(const Check& c);
Json measure_to_json(const RadialMeasure& m);

struct RunOutcome {
    Json report;
    bool all_pass = false;
};

/// Runs the requested suites in canonical order. Numerical failures become
/// failed checks; only ConfigError escapes.
RunOutcome execute(const RunConfig& config);

/// Deterministic serialization: insertion-ordered keys, two-space indent,
/// shortest round-trip scientific floats, non-finite floats as null.
std::string serialize(const Json& doc);

/// One line per check.
void print_summary(const Json& report, std::ostream& out);

/// execute + write report to output_path ("-" for stdout). 0 when every
/// check passes, 1 otherwise.
int run(const RunConfig& config, std::ostream& table);

}  // namespace nlpb::cli
