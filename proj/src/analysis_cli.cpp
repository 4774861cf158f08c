#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "strongdamp/analysis.hpp"

namespace strongdamp::analysis {

namespace {

using json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    const size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || path.find('/', dot) != std::string::npos)
        return path + "_" + suffix;
    return path.substr(0, dot) + "_" + suffix + path.substr(dot);
}

void write_csv(const std::string& path, const SeriesWithBound& s) {
    if (path.empty()) return;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write CSV: " + path);
    os << "t,value,bound,ratio\n";
    for (size_t i = 0; i < s.t.size(); ++i) {
        const double bound = i < s.bound.size() ? s.bound[i] : 0.0;
        const double ratio = bound != 0.0 ? s.value[i] / bound : 0.0;
        os << fmt17(s.t[i]) << ',' << fmt17(s.value[i]) << ',' << fmt17(bound)
           << ',' << fmt17(ratio) << '\n';
    }
}

void write_multi_csv(const std::string& path,
                     const std::vector<const SeriesWithBound*>& series) {
    if (path.empty()) return;
    if (series.size() == 1) {
        write_csv(path, *series[0]);
        return;
    }
    for (const SeriesWithBound* s : series)
        write_csv(with_suffix(path, s->label), *s);
}

json fit_to_json(const FitResult& f) {
    return json{{"exponent", f.exponent},
                {"log_intercept", f.log_intercept},
                {"residual_rms", f.residual_rms},
                {"window", {f.window_lo, f.window_hi}}};
}

json checks_to_json(const std::vector<CheckResult>& checks) {
    json arr = json::array();
    for (const CheckResult& c : checks)
        arr.push_back(json{{"name", c.name},
                           {"value", c.value},
                           {"threshold", c.threshold},
                           {"pass", c.pass}});
    return arr;
}

void write_json(const std::string& path, const json& j) {
    if (path.empty()) return;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write JSON: " + path);
    os << j.dump(2) << "\n";
}

int report_checks(const std::vector<CheckResult>& checks) {
    bool ok = true;
    for (const CheckResult& c : checks) {
        if (c.pass) continue;
        ok = false;
        std::cerr << "CHECK FAILED: " << c.name << " = " << fmt17(c.value)
                  << " (threshold " << fmt17(c.threshold) << ")\n";
    }
    return ok ? 0 : 1;
}

int cmd_lemma21(const ExperimentConfig& cfg) {
    const Lemma21Result r = verify_lemma21(cfg);
    write_csv(cfg.out_csv, r.series);
    json j;
    j["experiment"] = "verify-lemma21";
    j["dimension"] = cfg.dimension;
    // No reference decay statement exists for n = 1; the fitted rates are
    // reported as measured and the thresholds only guard regressions.
    if (cfg.dimension == 1) j["informational"] = true;
    j["delta0"] = cfg.delta0;
    j["seed"] = cfg.seed;
    j["exponent"] = r.fit.exponent;
    j["fit"] = fit_to_json(r.fit);
    j["sup_ratio"] = r.bound_check.sup_ratio;
    j["trend_slope"] = r.bound_check.trend_slope;
    j["checks"] = checks_to_json(r.checks);
    j["pass"] = r.pass;
    write_json(cfg.out_json, j);
    return report_checks(r.checks);
}

int cmd_theorem11(const ExperimentConfig& cfg) {
    const Theorem11Result r = verify_theorem11(cfg);
    write_multi_csv(cfg.out_csv,
                    {&r.total, &r.hf_solution, &r.profile_tail});
    json j;
    j["experiment"] = "verify-theorem11";
    j["dimension"] = cfg.dimension;
    if (cfg.dimension == 1) j["informational"] = true;
    j["delta0"] = cfg.delta0;
    j["seed"] = cfg.seed;
    j["exponent"] = r.fit_total.exponent;
    j["fit_total"] = fit_to_json(r.fit_total);
    j["hf_rate"] = r.hf_rate;
    j["fit_tail"] = fit_to_json(r.fit_tail);
    j["split_consistency"] = r.split_consistency;
    if (r.parseval_rel_diff >= 0.0)
        j["parseval_rel_diff"] = r.parseval_rel_diff;
    j["checks"] = checks_to_json(r.checks);
    j["pass"] = r.pass;
    write_json(cfg.out_json, j);
    return report_checks(r.checks);
}

int cmd_profile_norms(const ExperimentConfig& cfg) {
    const ProfileNormsResult r =
        profile_norm_asymptotics(cfg.dimension, cfg);
    write_multi_csv(cfg.out_csv, {&r.isin, &r.icos});
    json j;
    j["experiment"] = "profile-norms";
    j["dimension"] = r.dimension;
    j["seed"] = cfg.seed;
    j["isin_exponent"] = r.fit_isin.exponent;
    j["icos_exponent"] = r.fit_icos.exponent;
    j["fit_isin"] = fit_to_json(r.fit_isin);
    j["fit_icos"] = fit_to_json(r.fit_icos);
    if (r.dimension == 2) {
        j["isin_over_t_max"] = r.isin_over_t_max;
        j["isin_over_logt_spread"] = r.isin_over_logt_spread;
    }
    j["checks"] = checks_to_json(r.checks);
    j["pass"] = r.pass;
    write_json(cfg.out_json, j);
    return report_checks(r.checks);
}

int cmd_hf_envelope(const ExperimentConfig& cfg) {
    const HfEnvelopeResult r = hf_envelope(cfg, cfg.hf_r_samples);
    SeriesWithBound s;
    s.label = "hf_envelope";
    s.t = r.r;
    s.value = r.alpha;
    s.bound.resize(r.r.size());
    for (size_t i = 0; i < r.r.size(); ++i)
        s.bound[i] = std::min(r.r[i] * r.r[i], 1.0);
    write_csv(cfg.out_csv, s);
    json j;
    j["experiment"] = "hf-envelope";
    j["dimension"] = cfg.dimension;
    j["seed"] = cfg.seed;
    j["r"] = r.r;
    j["alpha"] = r.alpha;
    j["epsilon"] = r.epsilon;
    j["checks"] = checks_to_json(r.checks);
    j["pass"] = r.pass;
    write_json(cfg.out_json, j);
    return report_checks(r.checks);
}

int cmd_identities(const ExperimentConfig& cfg) {
    const IdentitiesResult r =
        identities_experiment(cfg.seed, cfg.samples, cfg.delta0);
    write_csv(cfg.out_csv, r.buckets);
    json j;
    j["experiment"] = "identities";
    j["seed"] = cfg.seed;
    j["samples"] = r.samples;
    j["max_form_reldiff"] = r.max_form_reldiff;
    j["max_imag_rel"] = r.max_imag_rel;
    j["max_residual_rel"] = r.max_residual_rel;
    j["checks"] = checks_to_json(r.checks);
    j["pass"] = r.pass;
    write_json(cfg.out_json, j);
    return report_checks(r.checks);
}

int cmd_lemma22(const ExperimentConfig& cfg) {
    const Lemma22Result r = lemma22_experiment(cfg.seed, cfg.samples);
    write_csv(cfg.out_csv, r.per_family);
    json j;
    j["experiment"] = "lemma22";
    j["seed"] = cfg.seed;
    j["samples"] = r.samples;
    j["L"] = r.L;
    j["M"] = r.M;
    j["theta_star"] = r.theta_star;
    j["stationarity_residual"] = r.stationarity_residual;
    j["max_ratioA"] = r.max_ratioA;
    j["max_ratioB"] = r.max_ratioB;
    j["checks"] = checks_to_json(r.checks);
    j["pass"] = r.pass;
    write_json(cfg.out_json, j);
    return report_checks(r.checks);
}

int cmd_kirchhoff(const ExperimentConfig& cfg) {
    const KirchhoffResult r =
        kirchhoff_crosscheck(cfg.kirchhoff_t, cfg.kirchhoff_P0,
                             cfg.kirchhoff_P1, cfg.kirchhoff_N2,
                             cfg.kirchhoff_N3, cfg.kirchhoff_L);
    SeriesWithBound s;
    s.label = "kirchhoff_crosscheck";
    s.t = {2.0, 3.0, 0.0};
    s.value = {r.rel_l2_n2, r.rel_l2_n3, r.eigen_worst};
    s.bound = {1e-3, 1e-3, 1e-6};
    write_csv(cfg.out_csv, s);
    json j;
    j["experiment"] = "kirchhoff-crosscheck";
    j["t"] = cfg.kirchhoff_t;
    j["P0"] = cfg.kirchhoff_P0;
    j["P1"] = cfg.kirchhoff_P1;
    j["rel_l2_n2"] = r.rel_l2_n2;
    j["rel_l2_n3"] = r.rel_l2_n3;
    j["eigen_worst"] = r.eigen_worst;
    j["checks"] = checks_to_json(r.checks);
    j["pass"] = r.pass;
    write_json(cfg.out_json, j);
    return report_checks(r.checks);
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{
        "strongdamp: numerical verification of the low-frequency profile "
        "and decay estimates for u_tt - Lap u - Lap u_t = 0"};
    app.require_subcommand(1);

    struct Sub {
        std::string name;
        std::string help;
        int (*fn)(const ExperimentConfig&);
    };
    const Sub subs[] = {
        {"verify-lemma21",
         "low-frequency error vs the moment bound, with exponent fit",
         cmd_lemma21},
        {"verify-theorem11",
         "full-frequency error split, exponential high-frequency decay",
         cmd_theorem11},
        {"profile-norms", "profile norm decay I_sin, I_cos with fits",
         cmd_profile_norms},
        {"hf-envelope", "per-mode exponential decay rates above delta0",
         cmd_hf_envelope},
        {"lemma22", "moment-bound ratio sampling and the constant L",
         cmd_lemma22},
        {"kirchhoff-crosscheck",
         "spherical-mean/disk profile vs grid transform", cmd_kirchhoff},
        {"identities", "exact identity suites at machine precision",
         cmd_identities},
    };

    struct Opts {
        std::string config;
        std::string out_csv;
        std::string out_json;
    };
    std::vector<std::pair<CLI::App*, Opts>> wired;
    wired.reserve(std::size(subs));
    for (const Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        wired.emplace_back(sub, Opts{});
        Opts& o = wired.back().second;
        sub->add_option("--config", o.config, "experiment config file")
            ->required();
        sub->add_option("--out-csv", o.out_csv, "override output.csv");
        sub->add_option("--out-json", o.out_json, "override output.json");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            app.exit(e);
            return 0;
        }
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        for (size_t i = 0; i < std::size(subs); ++i) {
            if (!wired[i].first->parsed()) continue;
            ExperimentConfig cfg = load_config(wired[i].second.config);
            if (!wired[i].second.out_csv.empty())
                cfg.out_csv = wired[i].second.out_csv;
            if (!wired[i].second.out_json.empty())
                cfg.out_json = wired[i].second.out_json;
            return subs[i].fn(cfg);
        }
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace strongdamp::analysis
