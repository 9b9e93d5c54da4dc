// SPDX-License-Identifier: Apache-2.0
#include <charconv>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nlpb/report.hpp"

namespace {

using namespace nlpb;
using cli::Json;

std::pair<std::string, std::string> split_pair(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorCode::ConfigError, "expected name=value, got '" + text + "'");
    }
    return {text.substr(0, eq), text.substr(eq + 1)};
}

Complex parse_z(const std::string& text) {
    const auto comma = text.find(',');
    const std::string parts[2] = {text.substr(0, comma),
                                  comma == std::string::npos ? "0" : text.substr(comma + 1)};
    double v[2] = {0.0, 0.0};
    for (int i = 0; i < 2; ++i) {
        const char* first = parts[i].data();
        const char* last = first + parts[i].size();
        const auto res = std::from_chars(first, last, v[i]);
        if (res.ec != std::errc() || res.ptr != last) {
            throw Error(ErrorCode::ConfigError, "z must be 're' or 're,im', got '" + text + "'");
        }
    }
    return {v[0], v[1]};
}

std::string kind_names() {
    std::string out;
    for (auto k : zoo::kAllKinds) {
        if (!out.empty()) out += ", ";
        out += zoo::to_string(k);
    }
    return out;
}

void select_model(zoo::ModelSpec& spec, const std::string& name) {
    const auto kind = zoo::parse_kind(name);
    if (!kind) {
        throw Error(ErrorCode::ConfigError,
                    "unknown model '" + name + "' (available: " + kind_names() + ")");
    }
    spec.kind = *kind;
    if (*kind == zoo::ModelKind::TwoByTwo) {
        spec.dim = 2;
        spec.depth = 1;
        spec.margin = 0;
    }
}

struct ModelFlags {
    std::string model;
    std::optional<long> dim;
    std::optional<long> depth;
    std::optional<long> margin;
    std::vector<std::string> params;

    void attach(CLI::App* app) {
        app->add_option("--model", model, "model kind");
        app->add_option("--dim", dim, "truncation dimension D");
        app->add_option("--depth", depth, "ladder depth L");
        app->add_option("--margin", margin, "boundary margin m");
        app->add_option("--param", params, "model parameter key=value (repeatable)");
    }

    void apply(zoo::ModelSpec& spec) const {
        if (!model.empty()) select_model(spec, model);
        auto count = [](long v, const char* name) {
            if (v < 0) throw Error(ErrorCode::ConfigError, std::string(name) + " must be >= 0");
            return static_cast<std::size_t>(v);
        };
        if (dim) spec.dim = static_cast<Index>(count(*dim, "dim"));
        if (depth) spec.depth = count(*depth, "depth");
        if (margin) spec.margin = count(*margin, "margin");
        for (const auto& p : params) {
            const auto [key, value] = split_pair(p);
            cli::set_model_param(spec, key, value);
        }
    }
};

void print_catalog(bool as_json, const std::vector<zoo::ModelInfo>& rows) {
    if (as_json) {
        Json out = Json::array();
        for (const auto& r : rows) {
            out.push_back(Json{{"kind", std::string(zoo::to_string(r.kind))},
                               {"parameters", r.parameters},
                               {"ranges", r.ranges},
                               {"description", r.description}});
        }
        std::cout << cli::serialize(out);
        return;
    }
    for (const auto& r : rows) {
        std::cout << std::left << std::setw(21) << zoo::to_string(r.kind) << r.description << "\n"
                  << std::setw(21) << "" << "params: " << r.parameters << "\n"
                  << std::setw(21) << "" << "ranges: " << r.ranges << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-linear pseudo-boson verification harness"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "run verification suites and write a JSON report");
    std::string config_path;
    ModelFlags verify_model;
    std::vector<std::string> suites;
    std::vector<std::string> tolerances;
    std::string out_path;
    verify->add_option("--config", config_path, "config JSON file");
    verify_model.attach(verify);
    verify->add_option("--suite", suites, "suite to run (repeatable; replaces the config list)");
    verify->add_option("--tolerance", tolerances, "tolerance override name=value (repeatable)");
    verify->add_option("--out", out_path, "report path, '-' for stdout");

    // list-models
    auto* list = app.add_subcommand("list-models", "describe the available model kinds");
    bool list_json = false;
    std::string list_kind;
    list->add_flag("--json", list_json, "machine-readable output");
    list->add_option("--kind", list_kind, "show a single kind");

    // coherent
    auto* coherent = app.add_subcommand("coherent", "build coherent states and check them");
    ModelFlags coherent_model;
    std::vector<std::string> zs;
    bool coherent_json = false;
    coherent_model.attach(coherent);
    coherent->add_option("--z", zs, "label re,im (repeatable)")->required();
    coherent->add_flag("--json", coherent_json, "machine-readable output");

    // moments
    auto* moments = app.add_subcommand("moments", "solve the radial moment problem");
    ModelFlags moments_model;
    std::size_t k_max = 6;
    std::optional<double> cap;
    std::size_t nodes = 400;
    bool moments_json = false;
    moments_model.attach(moments);
    moments->add_option("--K", k_max, "highest moment index");
    moments->add_option("--R", cap, "support cap");
    moments->add_option("--nodes", nodes, "grid size M");
    moments->add_flag("--json", moments_json, "machine-readable output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify) {
            cli::RunConfig cfg = config_path.empty() ? cli::RunConfig{} : cli::load_config(config_path);
            verify_model.apply(cfg.model);
            if (!suites.empty()) {
                cfg.suites.clear();
                for (const auto& s : suites) {
                    const auto suite = cli::parse_suite(s);
                    if (!suite) throw Error(ErrorCode::ConfigError, "unknown suite '" + s + "'");
                    cfg.suites.push_back(*suite);
                }
            }
            for (const auto& t : tolerances) {
                const auto [name, value] = split_pair(t);
                double x = 0.0;
                try {
                    x = std::stod(value);
                } catch (const std::exception&) {
                    throw Error(ErrorCode::ConfigError, "bad tolerance value '" + value + "'");
                }
                cli::set_tolerance(cfg.tolerances, name, x);
            }
            if (!out_path.empty()) cfg.output_path = out_path;
            cli::validate(cfg);
            return cli::run(cfg, cfg.output_path == "-" ? std::cerr : std::cout);
        }

        if (*list) {
            auto rows = zoo::model_catalog();
            if (!list_kind.empty()) {
                const auto kind = zoo::parse_kind(list_kind);
                if (!kind) {
                    std::cerr << "unknown kind '" << list_kind << "'; available: " << kind_names()
                              << "\n";
                    return 2;
                }
                std::erase_if(rows, [&](const zoo::ModelInfo& r) { return r.kind != *kind; });
            }
            print_catalog(list_json, rows);
            return 0;
        }

        if (*coherent) {
            zoo::ModelSpec spec;
            coherent_model.apply(spec);
            const EpsilonSequence eps = zoo::model_epsilon(spec);
            const FockOperator a = lowering(eps, spec.dim);
            Json out = Json::array();
            bool ok = true;
            for (const auto& text : zs) {
                const Complex z = parse_z(text);
                Json entry{{"z", Json::array({z.real(), z.imag()})}};
                try {
                    const CoherentState xi = build_xi(eps, z, spec.dim);
                    const HeisenbergProduct h = heisenberg_product(xi, a);
                    entry["norm_N"] = xi.norm_n;
                    entry["tail"] = xi.tail;
                    entry["radius_estimate"] = xi.radius_estimate;
                    entry["norm_residual"] = std::abs(xi.coeffs.norm() - 1.0);
                    entry["eigen_residual"] = check_eigenproperty(xi, a);
                    entry["heisenberg"] = Json{{"lhs", h.lhs}, {"rhs", h.rhs}};
                } catch (const Error& e) {
                    if (e.code() == ErrorCode::ConfigError) throw;
                    entry["error"] = Json{{"code", std::string(to_string(e.code()))},
                                          {"message", e.what()}};
                    ok = false;
                }
                out.push_back(std::move(entry));
            }
            if (coherent_json) {
                std::cout << cli::serialize(out);
            } else {
                for (const auto& e : out) {
                    std::cout << "z = " << e["z"][0].get<double>() << (e["z"][1].get<double>() < 0 ? "" : "+")
                              << e["z"][1].get<double>() << "i\n";
                    if (e.contains("error")) {
                        std::cout << "  " << e["error"]["message"].get<std::string>() << "\n";
                        continue;
                    }
                    std::cout << std::scientific << std::setprecision(6)
                              << "  N(|z|^2)         " << e["norm_N"].get<double>() << "\n"
                              << "  tail             " << e["tail"].get<double>() << "\n"
                              << "  radius estimate  " << e["radius_estimate"].get<double>() << "\n"
                              << "  | ||Xi|| - 1 |   " << e["norm_residual"].get<double>() << "\n"
                              << "  ||A Xi - z Xi||  " << e["eigen_residual"].get<double>() << "\n"
                              << "  dQ dP            " << e["heisenberg"]["lhs"].get<double>() << "\n"
                              << "  |<AA^H>-|z|^2|/2 " << e["heisenberg"]["rhs"].get<double>() << "\n"
                              << std::defaultfloat;
                }
            }
            return ok ? 0 : 1;
        }

        if (*moments) {
            zoo::ModelSpec spec;
            moments_model.apply(spec);
            const EpsilonSequence eps = zoo::model_epsilon(spec);
            const double r = cap.value_or(default_support_cap(eps, k_max));
            const MomentSolution sol = solve_moment_problem(eps, k_max, r, nodes);
            const Tolerances tol;
            if (moments_json) {
                Json out{{"K", k_max},
                         {"R", r},
                         {"nodes", nodes},
                         {"feasibility", sol.feasibility},
                         {"measure", cli::measure_to_json(sol.measure)}};
                std::cout << cli::serialize(out);
            } else {
                std::cout << "K = " << k_max << ", R = " << r << ", M = " << nodes << "\n"
                          << "feasibility " << std::scientific << std::setprecision(3)
                          << sol.feasibility << "\n"
                          << "support (" << sol.measure.nodes.size() << " atoms):\n";
                for (std::size_t j = 0; j < sol.measure.nodes.size(); ++j) {
                    std::cout << "  r = " << std::setw(10) << sol.measure.nodes[j]
                              << "  w = " << sol.measure.weights[j] << "\n";
                }
            }
            return sol.feasibility <= tol.moments ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::ConfigError ? 2 : 1;
    }
    return 0;
}
