#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "strongdamp/analysis.hpp"
#include "strongdamp/oracle_solvers.hpp"
#include "strongdamp/quadrature.hpp"
#include "strongdamp/symbol_core.hpp"

using namespace strongdamp;
namespace fs = std::filesystem;

namespace {

analysis::ExperimentConfig gaussian_fixture(int n) {
    analysis::ExperimentConfig cfg;
    cfg.dimension = n;
    cfg.u0.dimension = n;
    cfg.u0.family = data::GaussianSpec{0.0, std::vector<double>(n, 0.0), 1.0};
    cfg.u1.dimension = n;
    cfg.u1.family = data::GaussianSpec{1.0, std::vector<double>(n, 0.0), 1.0};
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("strongdamp_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("power-law fit") {
    std::vector<double> t, v;
    for (int i = 0; i < 30; ++i) {
        t.push_back(std::pow(10.0, 1.0 + 0.1 * i));
        v.push_back(5.0 * std::pow(t.back(), -1.5));
    }
    const auto fit = analysis::fit_power_law(t, v, t.front(), t.back());
    CHECK(fit.exponent == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(fit.log_intercept == doctest::Approx(std::log(5.0)).epsilon(1e-10));
    CHECK(fit.residual_rms < 1e-12);

    // Perturbed power law stays within 0.05 over two decades.
    std::vector<double> w;
    for (double x : t) w.push_back((1.0 + 0.1 * std::sin(std::log(x))) / x);
    const auto fit2 = analysis::fit_power_law(t, w, 10.0, 1000.0);
    CHECK(std::abs(fit2.exponent + 1.0) < 0.05);

    // Constant series fits exponent 0.
    std::vector<double> c(t.size(), 3.7);
    CHECK(analysis::fit_power_law(t, c, t.front(), t.back()).exponent ==
          doctest::Approx(0.0).epsilon(1e-12));

    // Nonpositive values in window are an error.
    std::vector<double> bad = v;
    bad[7] = 0.0;
    CHECK_THROWS_AS(analysis::fit_power_law(t, bad, t.front(), t.back()),
                    std::invalid_argument);
    // Too few points in window.
    CHECK_THROWS_AS(analysis::fit_power_law(t, v, t[0], t[2]),
                    std::invalid_argument);
}

TEST_CASE("time grid") {
    analysis::ExperimentConfig cfg;
    cfg.t_min = 1e2;
    cfg.t_max = 1e4;
    cfg.t_points = 25;
    const auto t = analysis::time_grid(cfg);
    REQUIRE(t.size() == 25);
    CHECK(t.front() == 1e2);
    CHECK(t.back() == 1e4);
    for (size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);

    cfg.t_min = -1.0;
    CHECK_THROWS_AS(analysis::time_grid(cfg), analysis::ConfigError);
}

TEST_CASE("config parsing") {
    TempDir tmp;
    const std::string path = (tmp.path / "c.cfg").string();
    {
        std::ofstream os(path);
        os << "# fixture\n"
           << "dimension = 2\n"
           << "delta0 = 0.4\n"
           << "t_min = 50\n"
           << "t_max = 5000\n"
           << "t_points = 12\n"
           << "seed = 99\n"
           << "u0.family = gaussian\n"
           << "u0.amplitude = 0.5\n"
           << "u0.center = 0.25, -1\n"
           << "u0.width = 1.25\n"
           << "u1.family = dipole\n"
           << "u1.offset = 1, 0\n"
           << "grid.enabled = true\n"
           << "grid.N = 256\n"
           << "check.exponent_max = -0.9\n";
    }
    const auto cfg = analysis::load_config(path);
    CHECK(cfg.dimension == 2);
    CHECK(cfg.delta0 == 0.4);
    CHECK(cfg.t_points == 12);
    CHECK(cfg.seed == 99);
    CHECK(cfg.grid_enabled);
    CHECK(cfg.grid_N == 256);
    REQUIRE(cfg.check_exponent_max.has_value());
    CHECK(*cfg.check_exponent_max == -0.9);
    const auto* g = std::get_if<data::GaussianSpec>(&cfg.u0.family);
    REQUIRE(g != nullptr);
    CHECK(g->amplitude == 0.5);
    CHECK(g->center == std::vector<double>{0.25, -1.0});
    CHECK(std::holds_alternative<data::DipoleSpec>(cfg.u1.family));

    {
        std::ofstream os(path);
        os << "dimension\n";
    }
    CHECK_THROWS_AS(analysis::load_config(path), analysis::ConfigError);
    {
        std::ofstream os(path);
        os << "u0.family = vortex\n";
    }
    CHECK_THROWS_AS(analysis::load_config(path), analysis::ConfigError);
    CHECK_THROWS_AS(analysis::load_config((tmp.path / "nope.cfg").string()),
                    analysis::ConfigError);
}

TEST_CASE("identity suites pass at machine tolerances") {
    const auto r = analysis::identities_experiment(4242, 3000);
    CHECK(r.pass);
    CHECK(r.max_form_reldiff < 1e-12);
    CHECK(r.max_imag_rel < 1e-13);
    CHECK(r.max_residual_rel < 1e-10);
}

TEST_CASE("moment-bound sampling passes") {
    const auto r = analysis::lemma22_experiment(77, 2000);
    CHECK(r.pass);
    CHECK(r.max_ratioA <= r.L + 1e-9);
    CHECK(r.max_ratioB <= r.M + 1e-9);
    CHECK(r.stationarity_residual <= 1e-10);
    CHECK(r.max_ratioA > 0.2); // the sampling actually probes the bound
}

TEST_CASE("low-frequency distance experiment, n = 1 velocity datum") {
    auto cfg = gaussian_fixture(1);
    cfg.t_points = 12;
    const auto r = analysis::verify_lemma21(cfg);
    CHECK(r.pass);
    CHECK(r.fit.exponent <= -0.4);
    CHECK(r.fit.exponent > -0.75);
    CHECK(r.bound_check.trend_slope <= 0.05);
    // Deterministic reruns.
    const auto r2 = analysis::verify_lemma21(cfg);
    REQUIRE(r.series.value.size() == r2.series.value.size());
    for (size_t i = 0; i < r.series.value.size(); ++i)
        CHECK(r.series.value[i] == r2.series.value[i]);
}

TEST_CASE("low-frequency distance: shifted pair equals the radial path") {
    // The angular-average route for shifted Gaussians must agree with the
    // centered radial route when the shift is zero.
    auto cfg = gaussian_fixture(2);
    cfg.t_points = 6;
    cfg.t_min = 10.0;
    cfg.t_max = 100.0;
    auto shifted = cfg;
    shifted.u1.family =
        data::GaussianSpec{1.0, std::vector<double>{1e-13, 0.0}, 1.0};
    const auto a = analysis::verify_lemma21(cfg);
    const auto b = analysis::verify_lemma21(shifted);
    for (size_t i = 0; i < a.series.value.size(); ++i)
        CHECK(a.series.value[i] ==
              doctest::Approx(b.series.value[i]).epsilon(1e-8));
}

TEST_CASE("results do not depend on the worker-thread count") {
    auto cfg = gaussian_fixture(2);
    cfg.t_points = 8;
    cfg.t_min = 10.0;
    cfg.t_max = 1000.0;
    ::setenv("STRONGDAMP_THREADS", "1", 1);
    const auto serial = analysis::verify_lemma21(cfg);
    ::setenv("STRONGDAMP_THREADS", "4", 1);
    const auto parallel = analysis::verify_lemma21(cfg);
    ::unsetenv("STRONGDAMP_THREADS");
    REQUIRE(serial.series.value.size() == parallel.series.value.size());
    for (size_t i = 0; i < serial.series.value.size(); ++i)
        CHECK(serial.series.value[i] == parallel.series.value[i]);
    CHECK(serial.fit.exponent == parallel.fit.exponent);
}

TEST_CASE("shifted-gaussian angular average vs 2-D tensor quadrature") {
    // Independent oracle for the closed angular-average kernel: integrate
    // |m1 u1_hat - P1 p_sin|^2 over the disk |xi| <= delta0 directly.
    auto cfg = gaussian_fixture(2);
    cfg.u1.family = data::GaussianSpec{1.0, {1.2, -0.5}, 0.9};
    cfg.t_points = 5;
    cfg.t_min = 5.0;
    cfg.t_max = 50.0;
    const auto r = analysis::verify_lemma21(cfg);

    const double P1 = data::moments(cfg.u1).P;
    for (size_t i : {size_t(0), r.series.t.size() - 1}) {
        const double t = r.series.t[i];
        auto inner = [&](double x0) {
            const double half =
                std::sqrt(std::max(cfg.delta0 * cfg.delta0 - x0 * x0, 0.0));
            if (half == 0.0) return 0.0;
            auto f = [&](double x1) {
                const double rad = std::sqrt(x0 * x0 + x1 * x1);
                const std::vector<double> xi = {x0, x1};
                const auto m = symbol::mode_multipliers(t, rad);
                const auto p = symbol::profile_multipliers(t, rad);
                const std::complex<double> s =
                    m.m1 * data::spectrum(cfg.u1, xi) - P1 * p.p_sin;
                return std::norm(s);
            };
            return quad::integrate(f, -half, half, 1e-10).value;
        };
        const double brute =
            quad::integrate(inner, -cfg.delta0, cfg.delta0, 1e-9).value;
        CHECK(r.series.value[i] == doctest::Approx(brute).epsilon(1e-6));
    }
}

TEST_CASE("full-frequency error experiment, n = 1") {
    auto cfg = gaussian_fixture(1);
    cfg.u0.family = data::GaussianSpec{0.5, {0.0}, 0.8};
    cfg.t_points = 10;
    const auto r = analysis::verify_theorem11(cfg);
    CHECK(r.pass);
    CHECK(r.fit_total.exponent <= -0.4);
    CHECK(r.hf_rate > 0.1);
    CHECK(r.fit_tail.exponent <= -0.5);
    CHECK(r.split_consistency <= 1e-6);
}

TEST_CASE("profile norm asymptotics, n = 1 and n = 3") {
    analysis::ExperimentConfig cfg;
    cfg.t_points = 13;
    {
        const auto r = analysis::profile_norm_asymptotics(1, cfg);
        CHECK(std::abs(r.fit_icos.exponent + 0.5) <= 0.05);
        CHECK(r.pass);
        // Bounds hold pointwise.
        for (size_t i = 0; i < r.icos.t.size(); ++i) {
            CHECK(r.icos.value[i] <= r.icos.bound[i] * (1.0 + 1e-9));
            CHECK(r.isin.value[i] <= r.isin.bound[i] * (1.0 + 1e-9));
        }
    }
    {
        const auto r = analysis::profile_norm_asymptotics(3, cfg);
        CHECK(std::abs(r.fit_isin.exponent + 0.5) <= 0.05);
        CHECK(std::abs(r.fit_icos.exponent + 1.5) <= 0.05);
        CHECK(r.pass);
    }
}

TEST_CASE("high-frequency envelope rates") {
    auto cfg = gaussian_fixture(1);
    cfg.u0.family = data::GaussianSpec{1.0, {0.0}, 1.0};
    const auto r = analysis::hf_envelope(cfg, {0.6, 0.8, 1.0, 2.0, 3.0, 5.0,
                                               10.0});
    CHECK(r.pass);
    CHECK(r.epsilon > 0.0);
    // r = 0.8: rate = r^2; r = 3: rate = 2 |sigma1(3)|.
    const double a08 = r.alpha[1];
    CHECK(std::abs(a08 - 0.64) / 0.64 < 0.05);
    const double a3 = r.alpha[4];
    const double expect3 = 2.0 * 1.1458980337503155;
    CHECK(std::abs(a3 - expect3) / expect3 < 0.05);
}

TEST_CASE("parseval bridge at the acceptance fixture") {
    auto cfg = gaussian_fixture(1);
    cfg.u0.family = data::GaussianSpec{0.6, {0.0}, 1.1};
    cfg.grid_enabled = true;
    cfg.grid_N = 4096;
    cfg.grid_L = 128.0;
    cfg.grid_t = 20.0;
    CHECK(analysis::parseval_bridge_rel_diff(cfg) <= 1e-4);

    // Horizons beyond the wrap-around guard are refused.
    cfg.grid_t = 100.0;
    CHECK_THROWS_AS(analysis::parseval_bridge_rel_diff(cfg),
                    analysis::ConfigError);
}

TEST_CASE("cli runs, reports, and is byte-deterministic") {
    TempDir tmp;
    const std::string cfg_path = (tmp.path / "ident.cfg").string();
    const std::string csv1 = (tmp.path / "a.csv").string();
    const std::string json1 = (tmp.path / "a.json").string();
    const std::string csv2 = (tmp.path / "b.csv").string();
    const std::string json2 = (tmp.path / "b.json").string();
    {
        std::ofstream os(cfg_path);
        os << "samples = 500\nseed = 7\n";
    }
    {
        const char* argv[] = {"strongdamp", "identities",
                              "--config", cfg_path.c_str(),
                              "--out-csv", csv1.c_str(),
                              "--out-json", json1.c_str()};
        CHECK(analysis::run_cli(8, argv) == 0);
    }
    {
        const char* argv[] = {"strongdamp", "identities",
                              "--config", cfg_path.c_str(),
                              "--out-csv", csv2.c_str(),
                              "--out-json", json2.c_str()};
        CHECK(analysis::run_cli(8, argv) == 0);
    }
    CHECK(slurp(csv1) == slurp(csv2));
    CHECK(slurp(json1) == slurp(json2));
    CHECK(slurp(csv1).substr(0, 19) == "t,value,bound,ratio");
    CHECK(slurp(json1).find("\"pass\": true") != std::string::npos);
}

TEST_CASE("cli lemma21 fixture exits 0 with exponent below -0.4") {
    TempDir tmp;
    const std::string cfg_path = (tmp.path / "l21.cfg").string();
    const std::string json = (tmp.path / "r.json").string();
    {
        std::ofstream os(cfg_path);
        os << "dimension = 1\n"
           << "u0.family = zero\n"
           << "u1.family = gaussian\n"
           << "u1.amplitude = 1\n"
           << "u1.width = 1\n"
           << "t_points = 10\n"
           << "check.exponent_max = -0.4\n";
    }
    const char* argv[] = {"strongdamp", "verify-lemma21",
                          "--config", cfg_path.c_str(),
                          "--out-json", json.c_str()};
    CHECK(analysis::run_cli(6, argv) == 0);
    const std::string body = slurp(json);
    CHECK(body.find("\"exponent\"") != std::string::npos);
    CHECK(body.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("config accepts grid-sample data from a field file") {
    TempDir tmp;
    oracle::GridSpec grid{1, 256, 32.0};
    data::InitialDatumSpec d;
    d.dimension = 1;
    d.family = data::GaussianSpec{1.0, {0.0}, 1.0};
    const auto f = oracle::sample_datum(d, grid);
    const std::string field_path = (tmp.path / "u1.bin").string();
    oracle::save_field(f, field_path);

    const std::string cfg_path = (tmp.path / "s.cfg").string();
    {
        std::ofstream os(cfg_path);
        os << "dimension = 1\n"
           << "u0.family = zero\n"
           << "u1.family = samples\n"
           << "u1.file = " << field_path << "\n";
    }
    const auto cfg = analysis::load_config(cfg_path);
    const auto* g = std::get_if<data::GridSamplesSpec>(&cfg.u1.family);
    REQUIRE(g != nullptr);
    CHECK(g->N == 256);
    CHECK(g->L == 32.0);
    // Riemann moments of the sampled Gaussian match the analytic family.
    const auto m = data::moments(cfg.u1);
    CHECK(m.P == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-6));
}

TEST_CASE("cli exit codes for bad usage") {
    {
        const char* argv[] = {"strongdamp", "no-such-thing"};
        CHECK(analysis::run_cli(2, argv) == 2);
    }
    {
        const char* argv[] = {"strongdamp"};
        CHECK(analysis::run_cli(1, argv) == 2);
    }
    {
        TempDir tmp;
        const std::string cfg_path = (tmp.path / "bad.cfg").string();
        {
            std::ofstream os(cfg_path);
            os << "delta0 = 3.5\n";
        }
        const char* argv[] = {"strongdamp", "identities", "--config",
                              cfg_path.c_str()};
        CHECK(analysis::run_cli(4, argv) == 2);
    }
}
