// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <fstream>
#include <sstream>

#include "nlpb/report.hpp"

namespace nlpb::cli {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

struct TolField {
    const char* name;
    double Tolerances::*field;
};

constexpr TolField kTolFields[] = {
    {"herm_rel", &Tolerances::herm_rel},
    {"residual_rel", &Tolerances::residual_rel},
    {"vacuum_rel", &Tolerances::vacuum_rel},
    {"battery", &Tolerances::battery},
    {"gram", &Tolerances::gram},
    {"roundtrip", &Tolerances::roundtrip},
    {"intertwining", &Tolerances::intertwining},
    {"riesz_stability", &Tolerances::riesz_stability},
    {"tail", &Tolerances::tail},
    {"coherent", &Tolerances::coherent},
    {"moments", &Tolerances::moments},
    {"cond_cap", &Tolerances::cond_cap},
};

double as_number(const Json& v, const std::string& key) {
    if (!v.is_number()) config_error("'" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) config_error("'" + key + "' must be finite");
    return x;
}

std::size_t as_count(const Json& v, const std::string& key) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        config_error("'" + key + "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

std::vector<double> as_list(const Json& v, const std::string& key) {
    if (!v.is_array()) config_error("'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(as_number(x, key));
    return out;
}

Complex as_complex(const Json& v) {
    if (v.is_number()) return {as_number(v, "coherent_grid"), 0.0};
    if (v.is_array() && v.size() == 2) {
        return {as_number(v[0], "coherent_grid"), as_number(v[1], "coherent_grid")};
    }
    config_error("coherent_grid entries must be numbers or [re, im] pairs");
}

}  // namespace

std::string_view to_string(Suite s) noexcept {
    switch (s) {
        case Suite::Battery: return "battery";
        case Suite::Roundtrip: return "roundtrip";
        case Suite::Riesz: return "riesz";
        case Suite::Coherent: return "coherent";
        case Suite::Moments: return "moments";
    }
    return "unknown";
}

std::optional<Suite> parse_suite(std::string_view name) noexcept {
    for (Suite s : kSuiteOrder) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

void set_tolerance(Tolerances& tol, std::string_view name, double value) {
    for (const auto& f : kTolFields) {
        if (name == f.name) {
            if (!(value > 0.0) || !std::isfinite(value)) {
                config_error("tolerance '" + std::string(name) + "' must be positive and finite");
            }
            tol.*f.field = value;
            return;
        }
    }
    config_error("unknown tolerance '" + std::string(name) + "'");
}

std::vector<std::pair<std::string, double>> tolerance_entries(const Tolerances& tol) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& f : kTolFields) out.emplace_back(f.name, tol.*f.field);
    return out;
}

void set_model_param(zoo::ModelSpec& spec, const std::string& key, const Json& value) {
    using EpsKind = zoo::ModelSpec::EpsKind;
    if (key == "kind") {
        if (!value.is_string()) config_error("'kind' must be a string");
        const auto kind = zoo::parse_kind(value.get<std::string>());
        if (!kind) config_error("unknown model kind '" + value.get<std::string>() + "'");
        spec.kind = *kind;
    } else if (key == "f" || key == "h" || key == "poly") {
        spec.poly = as_list(value, key);
    } else if (key == "beta") {
        spec.beta = as_number(value, key);
    } else if (key == "delta") {
        spec.delta = as_number(value, key);
    } else if (key == "q") {
        spec.q = as_number(value, key);
    } else if (key == "use_N0_similarity") {
        if (!value.is_boolean()) config_error("'use_N0_similarity' must be a boolean");
        spec.use_n0_similarity = value.get<bool>();
    } else if (key == "s") {
        spec.s = as_list(value, key);
    } else if (key == "s_alpha") {
        spec.s_alpha = as_number(value, key);
    } else if (key == "s_beta") {
        spec.s_beta = as_number(value, key);
    } else if (key == "eps") {
        const std::string name = value.is_string() ? value.get<std::string>() : "";
        if (name == "linear") {
            spec.eps_kind = EpsKind::Linear;
        } else if (name == "quon") {
            spec.eps_kind = EpsKind::Quon;
        } else if (name == "explicit") {
            spec.eps_kind = EpsKind::Explicit;
        } else {
            config_error("'eps' must be one of linear, quon, explicit");
        }
    } else if (key == "eps_q") {
        spec.eps_q = as_number(value, key);
    } else if (key == "eps_values") {
        spec.eps_values = as_list(value, key);
        spec.eps_kind = EpsKind::Explicit;
    } else if (key == "dim") {
        spec.dim = static_cast<Index>(as_count(value, key));
    } else if (key == "depth") {
        spec.depth = as_count(value, key);
    } else if (key == "margin") {
        spec.margin = as_count(value, key);
    } else {
        config_error("unknown model parameter '" + key + "'");
    }
}

void set_model_param(zoo::ModelSpec& spec, const std::string& key, const std::string& text) {
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) {
        if (text.find(',') != std::string::npos) {
            value = Json::parse("[" + text + "]", nullptr, false);
        }
        if (value.is_discarded()) value = text;
    }
    set_model_param(spec, key, value);
}

RunConfig parse_config(const Json& doc) {
    if (!doc.is_object()) config_error("config must be a JSON object");
    RunConfig cfg;

    // The 2x2 model lives on a complete two-dimensional space.
    if (doc.contains("model")) {
        const Json& m = doc["model"];
        if (m.is_string()) {
            set_model_param(cfg.model, "kind", m);
        } else if (m.is_object()) {
            if (m.contains("kind")) set_model_param(cfg.model, "kind", m["kind"]);
            for (const auto& [key, value] : m.items()) {
                if (key != "kind") set_model_param(cfg.model, key, value);
            }
        } else {
            config_error("'model' must be a kind name or an object");
        }
    }
    if (cfg.model.kind == zoo::ModelKind::TwoByTwo) {
        cfg.model.dim = 2;
        cfg.model.depth = 1;
        cfg.model.margin = 0;
    }

    for (const auto& [key, value] : doc.items()) {
        if (key == "model") continue;
        if (key == "dim" || key == "depth" || key == "margin") {
            set_model_param(cfg.model, key, value);
        } else if (key == "tolerances") {
            if (!value.is_object()) config_error("'tolerances' must be an object");
            for (const auto& [name, v] : value.items()) {
                set_tolerance(cfg.tolerances, name, as_number(v, name));
            }
        } else if (key == "suites") {
            if (!value.is_array()) config_error("'suites' must be an array");
            cfg.suites.clear();
            for (const auto& s : value) {
                const auto suite = s.is_string() ? parse_suite(s.get<std::string>()) : std::nullopt;
                if (!suite) config_error("unknown suite " + s.dump());
                cfg.suites.push_back(*suite);
            }
        } else if (key == "coherent_grid") {
            if (!value.is_array()) config_error("'coherent_grid' must be an array");
            cfg.coherent_grid.clear();
            for (const auto& z : value) cfg.coherent_grid.push_back(as_complex(z));
        } else if (key == "moments") {
            if (!value.is_object()) config_error("'moments' must be an object");
            for (const auto& [name, v] : value.items()) {
                if (name == "K") {
                    cfg.moments.k_max = as_count(v, name);
                } else if (name == "R") {
                    if (v.is_null()) {
                        cfg.moments.support_cap.reset();
                    } else {
                        cfg.moments.support_cap = as_number(v, name);
                    }
                } else if (name == "nodes") {
                    cfg.moments.nodes = as_count(v, name);
                } else if (name == "n_theta") {
                    cfg.moments.n_theta = as_count(v, name);
                } else {
                    config_error("unknown moments option '" + name + "'");
                }
            }
        } else if (key == "output_path") {
            if (!value.is_string()) config_error("'output_path' must be a string");
            cfg.output_path = value.get<std::string>();
        } else {
            config_error("unknown config field '" + key + "'");
        }
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const Json doc = Json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded()) config_error("config '" + path + "' is not valid JSON");
    return parse_config(doc);
}

void validate(const RunConfig& config) {
    const auto& m = config.model;
    if (m.dim < 2) config_error("dim must be at least 2");
    const auto dim = static_cast<std::size_t>(m.dim);
    if (m.depth + m.margin > dim) config_error("depth + margin must not exceed dim");
    if (m.depth >= dim) config_error("depth must be below dim");
    if (m.margin > m.depth) config_error("margin must not exceed depth");
    if (m.kind == zoo::ModelKind::TwoByTwo && (m.dim != 2 || m.depth != 1 || m.margin != 0)) {
        config_error("two_by_two requires dim 2, depth 1, margin 0");
    }
    for (const auto& [name, value] : tolerance_entries(config.tolerances)) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            config_error("tolerance '" + name + "' must be positive and finite");
        }
    }
    if (config.suites.empty()) config_error("suites must be nonempty");
    if (config.moments.support_cap && !(*config.moments.support_cap > 0.0)) {
        config_error("moments.R must be positive");
    }
    if (config.moments.n_theta == 0) config_error("moments.n_theta must be positive");
}

}  // namespace nlpb::cli
