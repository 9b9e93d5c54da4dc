// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "nlpb/report.hpp"

namespace nlpb::cli {

namespace {

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json list_to_json(const std::vector<double>& xs) {
    Json out = Json::array();
    for (double x : xs) out.push_back(number_or_null(x));
    return out;
}

Json report_checks(const VerificationReport& r) {
    Json out = Json::array();
    for (const auto& c : r.checks) out.push_back(check_to_json(c));
    return out;
}

Json error_to_json(const Error& e) {
    return Json{{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
}

// Relative distance of computed ladder vectors to their closed forms.
double closed_form_residual(const std::vector<StateVector>& got, const std::vector<Vector>& want) {
    double worst = 0.0;
    for (std::size_t n = 0; n < std::min(got.size(), want.size()); ++n) {
        const double ref = std::max(want[n].norm(), std::numeric_limits<double>::min());
        worst = std::max(worst, (got[n].coeffs() - want[n]).norm() / ref);
    }
    return worst;
}

struct SuiteResult {
    VerificationReport report;
    Json extras = Json::object();
    std::optional<Error> error;
};

SuiteResult battery_suite(const zoo::ZooModel& model, const RunConfig& cfg) {
    const Tolerances& tol = cfg.tolerances;
    const NlpbFamily& fam = model.family;
    SuiteResult out;
    out.report = verify_family(fam, tol);
    const std::size_t top = fam.interior_top();
    const IndexRange all{0, fam.depth()};

    const FramePair frames = frame_operators(fam);
    out.report.add("metric-duality", check_metric_duality(frames.s_phi, frames.s_eta, top),
                   tol.battery, {0, top});
    if (!model.expected_phi.empty()) {
        out.report.add("closed-form-phi", closed_form_residual(fam.phi(), model.expected_phi),
                       tol.battery, all);
        out.report.add("closed-form-eta", closed_form_residual(fam.eta(), model.expected_eta),
                       tol.battery, all);
    }
    if (cfg.model.kind == zoo::ModelKind::Quon && model.base_ladder) {
        out.report.add("q-mutator", zoo::q_mutator_residual(*model.base_ladder, cfg.model.q),
                       tol.battery, {0, static_cast<std::size_t>(fam.dim()) - 2});
    }
    out.extras["raw_normalization"] = complex_to_json(fam.raw_normalization());
    out.extras["eps"] = list_to_json({fam.eps().values().begin(), fam.eps().values().end()});
    return out;
}

SuiteResult roundtrip_suite(const zoo::ZooModel& model, const RunConfig& cfg) {
    const Tolerances& tol = cfg.tolerances;
    const NlpbFamily& fam = model.family;
    SuiteResult out;
    RoundtripResult rt = similarity_roundtrip(fam, tol);
    out.report = std::move(rt.report);
    const IntertwiningResiduals iw = check_intertwining(fam, tol);
    const IndexRange range{0, fam.interior_top()};
    out.report.add("intertwining-number-root", iw.number_root, tol.intertwining, range);
    out.report.add("intertwining-dual-root", iw.dual_root, tol.intertwining, range);
    out.report.add("intertwining-number-frame", iw.number_frame, tol.intertwining, range);

    const auto& sv = rt.decomposition.singular_values;
    out.extras["singular_value_max"] = number_or_null(sv(0));
    out.extras["singular_value_min"] = number_or_null(sv(sv.size() - 1));
    return out;
}

SuiteResult riesz_suite(const zoo::ZooModel& model, const RunConfig& cfg) {
    const RieszDiagnostic d = riesz_diagnostic(model.family, cfg.tolerances);
    SuiteResult out;
    out.report.riesz_lower = d.lower.back();
    out.report.riesz_upper = d.upper.back();
    out.report.regular_verdict = d.verdict;

    // Growth of the bounds over the last depth step; the verdict decides.
    double growth = 0.0;
    if (d.depths.size() >= 2) {
        const std::size_t i = d.depths.size() - 1;
        growth = std::max(d.upper[i] / d.upper[i - 1], d.lower[i - 1] / d.lower[i]) - 1.0;
    } else if (d.verdict == RegularVerdict::Inconclusive) {
        growth = std::numeric_limits<double>::quiet_NaN();
    }
    out.report.add("riesz-regular", growth, cfg.tolerances.riesz_stability,
                   {0, d.depths.back()});
    out.report.checks.back().pass = d.verdict == RegularVerdict::Regular;

    Json depths = Json::array();
    for (std::size_t x : d.depths) depths.push_back(x);
    out.extras["depths"] = depths;
    out.extras["lower"] = list_to_json(d.lower);
    out.extras["upper"] = list_to_json(d.upper);
    out.extras["witness"] = list_to_json(d.witness);
    out.extras["verdict"] = std::string(to_string(d.verdict));
    return out;
}

SuiteResult coherent_suite(const zoo::ZooModel* model, const EpsilonSequence& eps,
                           const RunConfig& cfg) {
    const Tolerances& tol = cfg.tolerances;
    const Index dim = cfg.model.dim;
    const FockOperator a = lowering(eps, dim);
    SuiteResult out;
    Json states = Json::array();
    const IndexRange rows{0, static_cast<std::size_t>(dim) - 2};

    for (std::size_t i = 0; i < cfg.coherent_grid.size(); ++i) {
        const Complex z = cfg.coherent_grid[i];
        const std::string tag = "#" + std::to_string(i);
        Json entry{{"z", complex_to_json(z)}};
        try {
            const CoherentState xi = build_xi(eps, z, dim, tol);
            const HeisenbergProduct h = heisenberg_product(xi, a);
            out.report.add("xi-tail" + tag, xi.tail, tol.tail, {0, static_cast<std::size_t>(dim) - 1});
            out.report.add("xi-norm" + tag, std::abs(xi.coeffs.norm() - 1.0), tol.coherent,
                           {0, static_cast<std::size_t>(dim) - 1});
            out.report.add("xi-eigen" + tag, check_eigenproperty(xi, a), tol.coherent, rows);
            if (model) {
                out.report.add("xi-eigen-family" + tag, check_eigenproperty(xi, model->family),
                               tol.coherent, {0, model->family.interior_top()});
            }
            out.report.add("heisenberg" + tag, std::abs(h.lhs - h.rhs), tol.coherent, rows);
            entry["norm_N"] = number_or_null(xi.norm_n);
            entry["tail"] = number_or_null(xi.tail);
            entry["radius_estimate"] = number_or_null(xi.radius_estimate);
            entry["heisenberg"] = Json{{"lhs", number_or_null(h.lhs)}, {"rhs", number_or_null(h.rhs)}};
        } catch (const Error& e) {
            out.report.add("xi-tail" + tag, std::numeric_limits<double>::infinity(), tol.tail,
                           {0, static_cast<std::size_t>(dim) - 1});
            entry["error"] = error_to_json(e);
        }
        states.push_back(std::move(entry));
    }
    out.extras["states"] = std::move(states);
    return out;
}

SuiteResult moments_suite(const EpsilonSequence& eps, const RunConfig& cfg) {
    const Tolerances& tol = cfg.tolerances;
    const auto& m = cfg.model;
    const std::size_t k_max = std::min(cfg.moments.k_max, static_cast<std::size_t>(m.dim) - 1);
    const double cap = cfg.moments.support_cap.value_or(default_support_cap(eps, k_max));
    const std::size_t nodes = std::max(cfg.moments.nodes, k_max + 1);
    const MomentSolution sol = solve_moment_problem(eps, k_max, cap, nodes);
    const std::size_t block = std::min(k_max + 1, m.depth - m.margin + 1);

    SuiteResult out;
    out.report.add("moment-feasibility", sol.feasibility, tol.moments, {0, k_max});
    out.report.add("identity-resolution",
                   check_identity_resolution(eps, sol.measure, block, cfg.moments.n_theta),
                   tol.moments, {0, block - 1});
    out.extras["K"] = k_max;
    out.extras["R"] = cap;
    out.extras["nodes"] = nodes;
    out.extras["n_theta"] = cfg.moments.n_theta;
    out.extras["residuals"] = list_to_json(check_moment_measure(eps, sol.measure, k_max));
    out.extras["measure"] = measure_to_json(sol.measure);
    return out;
}

Json suite_to_json(const SuiteResult& r) {
    Json out;
    out["checks"] = report_checks(r.report);
    if (r.error) out["error"] = error_to_json(*r.error);
    out["extras"] = r.extras;
    out["pass"] = !r.error && !r.report.checks.empty() && r.report.all_pass();
    return out;
}

SuiteResult failed_suite(const Error& e) {
    SuiteResult out;
    out.error = e;
    out.report.add("error", std::numeric_limits<double>::quiet_NaN(), 0.0, {0, 0});
    return out;
}

// ---------------------------------------------------------------------------
// Writer

void write_double(std::string& out, double x) {
    if (!std::isfinite(x)) {
        out += "null";
        return;
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
    out.append(buf, res.ptr);
}

void write_value(std::string& out, const Json& v, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, item] : v.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                out += Json(key).dump();
                out += ": ";
                write_value(out, item, indent + 2);
            }
            out += "\n" + close + "}";
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            const bool flat = std::all_of(v.begin(), v.end(), [](const Json& x) {
                return x.is_primitive();
            });
            if (flat) {
                out += "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) out += ", ";
                    write_value(out, v[i], indent);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                write_value(out, v[i], indent + 2);
            }
            out += "\n" + close + "]";
            return;
        }
        case Json::value_t::number_float:
            write_double(out, v.get<double>());
            return;
        default:
            out += v.dump();
            return;
    }
}

}  // namespace

Json check_to_json(const Check& c) {
    return Json{{"id", c.id},
                {"residual", number_or_null(c.residual)},
                {"tol", c.tolerance},
                {"pass", c.pass},
                {"index_range", Json::array({c.range.lo, c.range.hi})}};
}

Json measure_to_json(const RadialMeasure& m) {
    Json out = Json::array();
    for (std::size_t j = 0; j < m.nodes.size(); ++j) {
        out.push_back(Json::array({m.nodes[j], m.weights[j]}));
    }
    return out;
}

Json model_to_json(const zoo::ModelSpec& spec) {
    using zoo::ModelKind;
    Json out{{"kind", std::string(zoo::to_string(spec.kind))}};
    switch (spec.kind) {
        case ModelKind::FDeformed: out["f"] = spec.poly; break;
        case ModelKind::HDeformed: out["h"] = spec.poly; break;
        case ModelKind::TwoByTwo:
            out["beta"] = spec.beta;
            out["delta"] = spec.delta;
            break;
        case ModelKind::Quon:
            out["q"] = spec.q;
            out["use_N0_similarity"] = spec.use_n0_similarity;
            break;
        case ModelKind::SimilarityDiagonal:
            if (spec.s.empty()) {
                out["s_alpha"] = spec.s_alpha;
                out["s_beta"] = spec.s_beta;
            } else {
                out["s"] = spec.s;
            }
            switch (spec.eps_kind) {
                case zoo::ModelSpec::EpsKind::Linear: out["eps"] = "linear"; break;
                case zoo::ModelSpec::EpsKind::Quon:
                    out["eps"] = "quon";
                    out["eps_q"] = spec.eps_q;
                    break;
                case zoo::ModelSpec::EpsKind::Explicit:
                    out["eps"] = "explicit";
                    out["eps_values"] = spec.eps_values;
                    break;
            }
            break;
    }
    return out;
}

Json config_to_json(const RunConfig& config) {
    Json tol = Json::object();
    for (const auto& [name, value] : tolerance_entries(config.tolerances)) tol[name] = value;
    Json suites = Json::array();
    for (Suite s : config.suites) suites.push_back(std::string(to_string(s)));
    Json grid = Json::array();
    for (Complex z : config.coherent_grid) grid.push_back(complex_to_json(z));
    Json moments{{"K", config.moments.k_max}};
    moments["R"] = config.moments.support_cap ? Json(*config.moments.support_cap) : Json(nullptr);
    moments["nodes"] = config.moments.nodes;
    moments["n_theta"] = config.moments.n_theta;
    return Json{{"model", model_to_json(config.model)},
                {"dim", config.model.dim},
                {"depth", config.model.depth},
                {"margin", config.model.margin},
                {"tolerances", tol},
                {"suites", suites},
                {"coherent_grid", grid},
                {"moments", moments},
                {"output_path", config.output_path}};
}

RunOutcome execute(const RunConfig& config) {
    validate(config);

    Json report;
    report["version"] = std::string(kSchemaVersion);
    report["tool"] = Json{{"name", "nlpb"}, {"version", std::string(kToolVersion)}};
    report["config"] = config_to_json(config);

    std::optional<zoo::ZooModel> model;
    std::optional<Error> model_error;
    try {
        model.emplace(zoo::instantiate(config.model, config.tolerances));
    } catch (const Error& e) {
        model_error = e;
    }
    Json model_json{{"kind", std::string(zoo::to_string(config.model.kind))}};
    if (model) {
        Json warnings = Json::array();
        for (const auto& w : model->warnings) warnings.push_back(w);
        model_json["warnings"] = warnings;
    } else {
        model_json["error"] = error_to_json(*model_error);
    }
    report["model"] = model_json;

    std::optional<EpsilonSequence> eps;
    std::optional<Error> eps_error;
    try {
        eps.emplace(zoo::model_epsilon(config.model));
    } catch (const Error& e) {
        eps_error = e;
    }

    Json suites = Json::object();
    Json verdicts = Json::object();
    bool all_pass = true;
    for (Suite s : kSuiteOrder) {
        if (std::find(config.suites.begin(), config.suites.end(), s) == config.suites.end()) {
            continue;
        }
        SuiteResult r;
        try {
            switch (s) {
                case Suite::Battery:
                    if (!model) throw *model_error;
                    r = battery_suite(*model, config);
                    break;
                case Suite::Roundtrip:
                    if (!model) throw *model_error;
                    r = roundtrip_suite(*model, config);
                    break;
                case Suite::Riesz:
                    if (!model) throw *model_error;
                    r = riesz_suite(*model, config);
                    break;
                case Suite::Coherent:
                    if (!eps) throw *eps_error;
                    r = coherent_suite(model ? &*model : nullptr, *eps, config);
                    break;
                case Suite::Moments:
                    if (!eps) throw *eps_error;
                    r = moments_suite(*eps, config);
                    break;
            }
        } catch (const Error& e) {
            r = failed_suite(e);
        }
        Json sj = suite_to_json(r);
        const bool pass = sj["pass"].get<bool>();
        all_pass = all_pass && pass;
        if (r.report.regular_verdict) {
            verdicts["regular"] = std::string(to_string(*r.report.regular_verdict));
        }
        verdicts[std::string(to_string(s))] = pass ? "pass" : "fail";
        suites[std::string(to_string(s))] = std::move(sj);
    }
    verdicts["overall"] = all_pass ? "pass" : "fail";
    report["suites"] = std::move(suites);
    report["verdicts"] = std::move(verdicts);
    return RunOutcome{std::move(report), all_pass};
}

std::string serialize(const Json& doc) {
    std::string out;
    write_value(out, doc, 0);
    out += "\n";
    return out;
}

void print_summary(const Json& report, std::ostream& out) {
    for (const auto& [name, suite] : report["suites"].items()) {
        out << "[" << name << "]\n";
        for (const auto& c : suite["checks"]) {
            std::string residual = "null";
            if (c["residual"].is_number()) {
                std::ostringstream s;
                s << std::scientific << std::setprecision(3) << c["residual"].get<double>();
                residual = s.str();
            }
            std::ostringstream tol;
            tol << std::scientific << std::setprecision(1) << c["tol"].get<double>();
            out << "  " << (c["pass"].get<bool>() ? "PASS" : "FAIL") << "  " << std::left
                << std::setw(28) << c["id"].get<std::string>() << std::right << std::setw(11)
                << residual << "  <= " << tol.str() << "\n";
        }
        if (suite.contains("error")) {
            out << "  error: " << suite["error"]["code"].get<std::string>() << ": "
                << suite["error"]["message"].get<std::string>() << "\n";
        }
    }
    if (report["verdicts"].contains("regular")) {
        out << "regularity: " << report["verdicts"]["regular"].get<std::string>() << "\n";
    }
    out << "overall: " << report["verdicts"]["overall"].get<std::string>() << "\n";
}

int run(const RunConfig& config, std::ostream& table) {
    const RunOutcome outcome = execute(config);
    const std::string text = serialize(outcome.report);
    if (config.output_path == "-") {
        std::cout << text;
    } else {
        std::ofstream f(config.output_path, std::ios::binary);
        if (!f) throw Error(ErrorCode::ConfigError, "cannot write '" + config.output_path + "'");
        f << text;
    }
    print_summary(outcome.report, table);
    return outcome.all_pass ? 0 : 1;
}

}  // namespace nlpb::cli
