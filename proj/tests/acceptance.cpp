// Acceptance suite: every quantitative claim the library is meant to
// verify, one line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "strongdamp/analysis.hpp"
#include "strongdamp/data_model.hpp"
#include "strongdamp/kirchhoff.hpp"
#include "strongdamp/oracle_solvers.hpp"
#include "strongdamp/quadrature.hpp"
#include "strongdamp/symbol_core.hpp"

using namespace strongdamp;
using cplx = std::complex<double>;

namespace {

int failures = 0;

void criterion(int id, const std::string& name,
               const std::function<bool(std::string&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
        ok = false;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %d: %s (%s) [%.1f s]\n", ok ? "PASS" : "FAIL",
                id, name.c_str(), detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
}

analysis::ExperimentConfig fixture(int n, double amp0, double amp1) {
    analysis::ExperimentConfig cfg;
    cfg.dimension = n;
    cfg.u0.dimension = n;
    cfg.u0.family = data::GaussianSpec{amp0, std::vector<double>(n, 0.0), 1.0};
    cfg.u1.dimension = n;
    cfg.u1.family = data::GaussianSpec{amp1, std::vector<double>(n, 0.0), 1.0};
    return cfg;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

bool identity_suite(std::string& detail) {
    const auto r = analysis::identities_experiment(20240901, 10000);
    detail = fmt("residual %.2e < 1e-10, forms %.2e < 1e-12",
                 r.max_residual_rel, r.max_form_reldiff);
    return r.max_residual_rel < 1e-10 && r.max_form_reldiff < 1e-12 &&
           r.max_imag_rel < 1e-13;
}

bool oracle_equivalence(std::string& detail) {
    std::mt19937_64 rng(512);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        double r, t;
        if (i % 5 == 0) { // confluent neighbourhood
            r = 1.99 + 0.02 * unif(rng);
            t = 1.0 + 29.0 * unif(rng);
        } else {
            r = 5.0 * unif(rng);
            t = 50.0 * unif(rng);
        }
        const cplx v0(2.0 * unif(rng) - 1.0, 2.0 * unif(rng) - 1.0);
        const cplx v1(2.0 * unif(rng) - 1.0, 2.0 * unif(rng) - 1.0);
        const double dt = std::min(5e-3, 1.0 / (4.0 * r * r + 1.0));
        const auto s = oracle::mode_ode_evolve(r, v0, v1, t, dt);
        const auto m = symbol::mode_multipliers(t, r);
        const cplx ev = m.m1 * v1 + m.m0 * v0;
        const cplx ew = m.dm1 * v1 + m.dm0 * v0;
        const double scale = std::abs(ev) + std::abs(ew) +
                             1e-6 * (std::abs(v0) + std::abs(v1));
        worst = std::max(worst, (std::abs(s.v - ev) + std::abs(s.vdot - ew)) /
                                    scale);
    }
    detail = fmt("max rel defect %.2e < 1e-7", worst);
    return worst < 1e-7;
}

bool moment_bound(std::string& detail) {
    const auto r = analysis::lemma22_experiment(20240902, 10000);
    detail = fmt("maxA %.6f <= L+1e-9 (L=%.6f), maxB %.6f <= 1+1e-9",
                 r.max_ratioA, r.L, r.max_ratioB);
    return r.max_ratioA <= r.L + 1e-9 && r.max_ratioB <= 1.0 + 1e-9 &&
           r.stationarity_residual <= 1e-10;
}

bool low_freq_rates(std::string& detail) {
    std::string parts;
    bool ok = true;
    for (int n = 1; n <= 3; ++n) {
        // Velocity-driven: exponent <= -n/2 + 0.1.
        auto cfg1 = fixture(n, 0.0, 1.0);
        const auto r1 = analysis::verify_lemma21(cfg1);
        const bool ok1 = r1.fit.exponent <= -0.5 * n + 0.1 &&
                         r1.bound_check.trend_slope <= 0.05;
        // Position-driven: exponent <= -n/2 - 1 + 0.1.
        auto cfg0 = fixture(n, 1.0, 0.0);
        const auto r0 = analysis::verify_lemma21(cfg0);
        const bool ok0 = r0.fit.exponent <= -0.5 * n - 1.0 + 0.1 &&
                         r0.bound_check.trend_slope <= 0.05;
        ok = ok && ok1 && ok0;
        parts += fmt("n=%.0f: u1 %.3f/u0 %.3f ", double(n), r1.fit.exponent,
                     r0.fit.exponent);
    }
    detail = parts + "(slopes <= 0.05)";
    return ok;
}

bool full_error(std::string& detail) {
    std::string parts;
    bool ok = true;
    for (int n = 1; n <= 3; ++n) {
        auto cfg = fixture(n, 0.7, 1.0);
        const auto r = analysis::verify_theorem11(cfg);
        const bool okn = r.fit_total.exponent <= -0.5 * n + 0.1 &&
                         r.hf_rate > 0.1;
        ok = ok && okn;
        parts += fmt("n=%.0f: exp %.3f rate %.2f ", double(n),
                     r.fit_total.exponent, r.hf_rate);
    }
    detail = parts;
    return ok;
}

bool profile_norms(std::string& detail) {
    analysis::ExperimentConfig cfg;
    bool ok = true;
    std::string parts;
    for (int n = 1; n <= 3; ++n) {
        const auto r = analysis::profile_norm_asymptotics(n, cfg);
        bool okn = std::abs(r.fit_icos.exponent + 0.5 * n) <= 0.05;
        if (n == 3) okn = okn && std::abs(r.fit_isin.exponent + 0.5) <= 0.05;
        if (n == 2)
            okn = okn && r.isin_over_t_max <= M_PI * (1.0 + 1e-9) &&
                  r.isin_over_logt_spread <= 0.05;
        ok = ok && okn;
        parts += fmt("n=%.0f cos %.3f ", double(n), r.fit_icos.exponent);
        if (n == 3) parts += fmt("sin %.3f ", r.fit_isin.exponent);
        if (n == 2) parts += fmt("log-spread %.3f ", r.isin_over_logt_spread);
    }
    detail = parts;
    return ok;
}

bool kirchhoff_check(std::string& detail) {
    const auto r = analysis::kirchhoff_crosscheck(20.0, 0.7, 1.0, 1024, 128,
                                                  128.0);
    detail = fmt("rel L2 n2 %.2e, n3 %.2e <= 1e-3; eigen %.2e <= 1e-6",
                 r.rel_l2_n2, r.rel_l2_n3, r.eigen_worst);
    return r.pass;
}

bool majorants(std::string& detail) {
    const auto& mc = data::lemma22_constants();
    const double d0 = symbol::kDefaultDelta0;
    bool ok = true;
    std::string parts;

    // Decay-rate fits of the closed-form bounds over [1e2, 1e4].
    for (int n = 1; n <= 3; ++n) {
        std::vector<double> ts;
        std::vector<double> b[6];
        for (int i = 0; i < 13; ++i) {
            const double t = 1e2 * std::pow(1e2, i / 12.0);
            const auto m =
                symbol::k_majorants(t, n, d0, 1.0, 1.0, 1.0, 1.0, mc.L, mc.M);
            ts.push_back(t);
            b[0].push_back(m.b1);
            b[1].push_back(m.b2);
            b[2].push_back(m.b3);
            b[3].push_back(m.b4);
            b[4].push_back(m.b5);
            b[5].push_back(m.b6);
        }
        auto expo = [&](int j) {
            return analysis::fit_power_law(ts, b[j], ts.front(), ts.back())
                .exponent;
        };
        const bool okn =
            std::abs(expo(1) + 0.5 * n) <= 0.05 &&
            std::abs(expo(3) + 0.5 * n) <= 0.05 &&
            expo(0) <= -0.5 * n - 1.0 + 0.05 &&
            expo(2) <= -0.5 * n - 1.0 + 0.05 &&
            expo(4) <= -0.5 * n - 1.0 + 0.05 &&
            expo(5) <= -0.5 * n - 1.0 + 0.05;
        ok = ok && okn;
        if (n == 2)
            parts += fmt("n=2: b2 %.3f b4 %.3f ", expo(1), expo(3));
    }

    // Validity of the explicit majorants against quadrature of |K_j|^2.
    // n = 1: shifted Gaussian (A and B both active).
    {
        const double amp = 1.2, center = 0.9, width = 0.8;
        data::InitialDatumSpec d{1, data::GaussianSpec{amp, {center}, width}};
        const auto mom = data::moments(d);
        double worst = 0.0;
        for (double t : {1.0, 10.0, 1e2, 1e3, 1e4}) {
            const auto bb = symbol::k_majorants(t, 1, d0, mom.P, mom.P,
                                                mom.l11, mom.l11, mc.L, mc.M);
            const double bounds[3] = {bb.b1, bb.b2, bb.b3};
            for (int which = 1; which <= 3; ++which) {
                quad::RadialIntegralSpec spec;
                spec.dimension = 1;
                spec.a = 0.0;
                spec.b = d0;
                spec.rel_tol = 1e-9;
                spec.f = [&, which](double r) {
                    const std::vector<double> xi = {r};
                    const auto ab = data::oscillatory_parts(d, xi);
                    symbol::LowFreqData lf{mom.P, mom.P, ab.A, ab.B, ab.A,
                                           ab.B};
                    const auto k = symbol::k_terms_explicit(t, r, lf);
                    const cplx v =
                        which == 1 ? k.k1 : which == 2 ? k.k2 : k.k3;
                    return std::norm(v);
                };
                const double val = quad::radial_integral(spec).value;
                worst = std::max(worst, val / bounds[which - 1]);
                ok = ok && val <= bounds[which - 1] * (1.0 + 1e-9);
            }
        }
        // n = 2, 3: centered Gaussian (radial, B = 0).
        for (int n = 2; n <= 3; ++n) {
            data::InitialDatumSpec dc{
                n, data::GaussianSpec{1.0, std::vector<double>(n, 0.0), 1.0}};
            const auto momc = data::moments(dc);
            for (double t : {1.0, 30.0, 1e3, 1e4}) {
                const auto bb =
                    symbol::k_majorants(t, n, d0, momc.P, momc.P, momc.l11,
                                        momc.l11, mc.L, mc.M);
                const double bounds[3] = {bb.b1, bb.b2, bb.b3};
                for (int which = 1; which <= 3; ++which) {
                    quad::RadialIntegralSpec spec;
                    spec.dimension = n;
                    spec.a = 0.0;
                    spec.b = d0;
                    spec.rel_tol = 1e-9;
                    spec.f = [&, which](double r) {
                        std::vector<double> xi(n, 0.0);
                        xi[0] = r;
                        const auto ab = data::oscillatory_parts(dc, xi);
                        symbol::LowFreqData lf{momc.P, momc.P, ab.A, ab.B,
                                               ab.A, ab.B};
                        const auto k = symbol::k_terms_explicit(t, r, lf);
                        const cplx v =
                            which == 1 ? k.k1 : which == 2 ? k.k2 : k.k3;
                        return std::norm(v);
                    };
                    const double val = quad::radial_integral(spec).value;
                    worst = std::max(worst, val / bounds[which - 1]);
                    ok = ok && val <= bounds[which - 1] * (1.0 + 1e-9);
                }
            }
        }
        parts += fmt("max |K|^2/bound %.3f <= 1", worst);
    }
    detail = parts;
    return ok;
}

bool parseval(std::string& detail) {
    auto cfg = fixture(1, 0.6, 1.0);
    cfg.u0.family = data::GaussianSpec{0.6, {0.0}, 1.1};
    cfg.grid_enabled = true;
    cfg.grid_N = 4096;
    cfg.grid_L = 128.0;
    cfg.grid_t = 20.0;
    const double rel = analysis::parseval_bridge_rel_diff(cfg);
    detail = fmt("rel diff %.2e <= 1e-4", rel);
    return rel <= 1e-4;
}

} // namespace

int main() {
    std::printf("strongdamp acceptance suite\n");
    criterion(1, "identity suite", identity_suite);
    criterion(2, "mode ODE oracle equivalence", oracle_equivalence);
    criterion(3, "moment bound (L, M) sampling", moment_bound);
    criterion(4, "low-frequency decay rates", low_freq_rates);
    criterion(5, "full-frequency error decay", full_error);
    criterion(6, "profile norm asymptotics", profile_norms);
    criterion(7, "kirchhoff cross-check", kirchhoff_check);
    criterion(8, "K-term majorant validity and rates", majorants);
    criterion(9, "parseval bridge", parseval);
    if (failures > 0) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
