#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "strongdamp/analysis.hpp"

namespace strongdamp::analysis {

std::vector<double> time_grid(const ExperimentConfig& cfg) {
    if (!(cfg.t_min > 0.0) || !(cfg.t_max > cfg.t_min) || cfg.t_points < 2)
        throw ConfigError("time grid: need 0 < t_min < t_max, points >= 2");
    std::vector<double> t(cfg.t_points);
    const double la = std::log(cfg.t_min), lb = std::log(cfg.t_max);
    for (int i = 0; i < cfg.t_points; ++i)
        t[i] = std::exp(la + (lb - la) * i / (cfg.t_points - 1));
    t.front() = cfg.t_min;
    t.back() = cfg.t_max;
    for (size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1]))
            throw ConfigError("time grid: not strictly increasing");
    return t;
}

FitResult fit_power_law(const std::vector<double>& t,
                        const std::vector<double>& value, double window_lo,
                        double window_hi) {
    if (t.size() != value.size())
        throw std::invalid_argument("fit_power_law: size mismatch");
    std::vector<double> x, y;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < window_lo || t[i] > window_hi) continue;
        if (!(value[i] > 0.0))
            throw std::invalid_argument(
                "fit_power_law: nonpositive value in window at t=" +
                std::to_string(t[i]));
        x.push_back(std::log(t[i]));
        y.push_back(std::log(value[i]));
    }
    if (x.size() < 5)
        throw std::invalid_argument(
            "fit_power_law: need at least 5 points in window");

    const size_t m = x.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < m; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = m * sxx - sx * sx;
    const double slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / m;
    double rss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double e = y[i] - (intercept + slope * x[i]);
        rss += e * e;
    }
    return {slope, intercept, std::sqrt(rss / m), window_lo, window_hi};
}

double fit_exponential_rate(const std::vector<double>& t,
                            const std::vector<double>& value) {
    if (t.size() != value.size() || t.size() < 5)
        throw std::invalid_argument("fit_exponential_rate: need >= 5 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (!(value[i] > 0.0))
            throw std::invalid_argument(
                "fit_exponential_rate: nonpositive value");
        const double y = std::log(value[i]);
        sx += t[i];
        sy += y;
        sxx += t[i] * t[i];
        sxy += t[i] * y;
    }
    const double m = static_cast<double>(t.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return -slope;
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn) {
    unsigned threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    if (const char* env = std::getenv("STRONGDAMP_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) threads = std::min<unsigned>(threads, cap);
    }
    threads = std::min<unsigned>(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex err_mu;
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace strongdamp::analysis
