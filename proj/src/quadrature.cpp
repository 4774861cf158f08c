#include "strongdamp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace strongdamp::quad {

namespace {

// QUADPACK 15-point Kronrod rule with embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double k15;
    double err;
    double resabs;
};

PanelResult gk15(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);

    double fv[7][2];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv[j][0] = f(center - dx);
        fv[j][1] = f(center + dx);
        const double fsum = fv[j][0] + fv[j][1];
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::abs(fv[j][0]) + std::abs(fv[j][1]));
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }

    // Scaled error estimate as in QUADPACK: compare against the deviation
    // of the integrand from its mean to avoid over-trusting near-cancelling
    // panels.
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] *
                  (std::abs(fv[j][0] - reskh) + std::abs(fv[j][1] - reskh));

    const double result = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);

    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / eps50)
        err = std::max(err, eps50 * resabs);
    return {result, err, resabs};
}

struct Interval {
    double a, b, value, err, resabs;
};

} // namespace

IntegralResult integrate(const Integrand& f, double a, double b,
                         double rel_tol, double abs_floor,
                         int max_intervals) {
    if (!(b > a)) return {0.0, 0.0, 0};

    std::vector<Interval> heap;
    heap.reserve(256);
    auto worse = [](const Interval& x, const Interval& y) {
        return x.err < y.err;
    };

    PanelResult first = gk15(f, a, b);
    heap.push_back({a, b, first.k15, first.err, first.resabs});

    double total = first.k15;
    double total_err = first.err;
    double total_resabs = first.resabs;
    const double eps100 = 100.0 * std::numeric_limits<double>::epsilon();

    while (static_cast<int>(heap.size()) < max_intervals) {
        // Converged when the requested tolerance is met, or the summed
        // error has reached the roundoff floor eps * int |f| and further
        // splitting cannot improve it (oscillatory cancellation).
        const double target =
            std::max({rel_tol * std::abs(total), abs_floor,
                      eps100 * total_resabs});
        if (total_err <= target) break;

        std::pop_heap(heap.begin(), heap.end(), worse);
        Interval top = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (top.a + top.b);
        if (mid <= top.a || mid >= top.b) {
            // Interval at floating-point resolution; keep it as-is.
            heap.push_back(top);
            std::push_heap(heap.begin(), heap.end(), worse);
            break;
        }
        PanelResult left = gk15(f, top.a, mid);
        PanelResult right = gk15(f, mid, top.b);
        total += left.k15 + right.k15 - top.value;
        total_err += left.err + right.err - top.err;
        total_resabs += left.resabs + right.resabs - top.resabs;
        heap.push_back({top.a, mid, left.k15, left.err, left.resabs});
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back({mid, top.b, right.k15, right.err, right.resabs});
        std::push_heap(heap.begin(), heap.end(), worse);
    }

    // Recompute the totals in a deterministic order (heap arithmetic above
    // accumulates rounding from incremental updates).
    std::sort(heap.begin(), heap.end(),
              [](const Interval& x, const Interval& y) { return x.a < y.a; });
    total = 0.0;
    total_err = 0.0;
    total_resabs = 0.0;
    for (const Interval& iv : heap) {
        total += iv.value;
        total_err += iv.err;
        total_resabs += iv.resabs;
    }

    IntegralResult res{total, total_err, static_cast<int>(heap.size())};
    const double target = std::max(
        {rel_tol * std::abs(total), abs_floor, eps100 * total_resabs});
    if (total_err > target && static_cast<int>(heap.size()) >= max_intervals)
        throw QuadratureError(
            "adaptive quadrature did not converge: err=" +
                std::to_string(total_err) + " target=" +
                std::to_string(target) + " intervals=" +
                std::to_string(heap.size()),
            res);
    return res;
}

double sphere_area(int n) {
    if (n <= 0) throw std::invalid_argument("sphere_area: n must be >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

const GaussLegendre& gauss_legendre(int n) {
    if (n <= 0) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    static std::map<int, GaussLegendre> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    // Newton iteration on P_n with the Chebyshev-like initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.nodes[i] = -x;
        gl.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.weights[i] = w;
        gl.weights[n - 1 - i] = w;
    }
    auto [pos, inserted] = cache.emplace(n, std::move(gl));
    (void)inserted;
    return pos->second;
}

double gaussian_tail_bound(double R, int m, double rate) {
    if (!(rate > 0.0) || !(R > 0.0))
        return std::numeric_limits<double>::infinity();
    const double q = (m - 1) / (2.0 * rate * R * R);
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    // Repeated integration by parts gives a geometric-series majorant.
    return std::pow(R, m - 1) * std::exp(-rate * R * R) /
           (2.0 * rate * (1.0 - q));
}

IntegralResult radial_integral(const RadialIntegralSpec& spec) {
    const int n = spec.dimension;
    if (n < 1) throw std::invalid_argument("radial_integral: dimension >= 1");
    if (spec.a < 0.0) throw std::invalid_argument("radial_integral: a >= 0");
    const double area = sphere_area(n);
    auto weighted = [&](double r) {
        return std::pow(r, n - 1) * spec.f(r);
    };

    if (!spec.semi_infinite) {
        if (!(spec.b > spec.a))
            throw std::invalid_argument("radial_integral: need b > a");
        IntegralResult inner =
            integrate(weighted, spec.a, spec.b, spec.rel_tol);
        return {area * inner.value, area * inner.error, inner.subdivisions};
    }

    if (!(spec.gauss_rate > 0.0))
        throw std::invalid_argument(
            "radial_integral: semi-infinite integral needs a Gaussian "
            "decay certificate");

    // Pick a truncation radius. Starting from the radius where the
    // certificate's exponential alone reaches the tolerance, probe the
    // integrand to calibrate the amplitude, then grow R until the
    // certified tail bound is negligible next to the current estimate.
    const int m = spec.poly_degree + n - 1;
    double R = std::sqrt(
        std::max((std::log(1.0 / std::min(spec.rel_tol, 1e-3)) +
                  0.5 * (m + 1) * std::log(2.0 + m)) /
                     spec.gauss_rate,
                 1.0 / spec.gauss_rate));
    R = 1.5 * std::max(R, spec.a + 1.0);

    IntegralResult body;
    for (int attempt = 0;; ++attempt) {
        body = integrate(weighted, spec.a, R, spec.rel_tol);
        // Calibrate the certificate amplitude on a spread of probe points;
        // irregular spacing so an oscillatory factor cannot zero them all.
        double amp = 0.0;
        for (int j = 0; j <= 24; ++j) {
            const double probe = R * (1.0 + 0.25 * j * j / (24.0 * 24.0) +
                                      0.013 * (j % 5));
            const double cert = std::pow(probe, spec.poly_degree) *
                                std::exp(-spec.gauss_rate * probe * probe);
            if (cert > 0.0)
                amp = std::max(amp, std::abs(spec.f(probe)) / cert);
        }
        const double tail =
            4.0 * amp * gaussian_tail_bound(R, m, spec.gauss_rate);
        const double scale =
            std::max(std::abs(body.value), std::abs(body.error));
        if (tail <= std::max(spec.rel_tol * scale, 1e-300) || attempt >= 6) {
            if (attempt >= 6 && tail > spec.rel_tol * scale &&
                !(scale == 0.0 && amp == 0.0))
                throw QuadratureError(
                    "radial_integral: could not certify the tail at R=" +
                        std::to_string(R),
                    {area * body.value, area * (body.error + tail),
                     body.subdivisions});
            body.error += tail;
            break;
        }
        R *= 1.4;
    }
    return {area * body.value, area * body.error, body.subdivisions};
}

double gaussian_moment(int k, double t, int n, double upper, double rel_tol) {
    if (k < 0) throw std::invalid_argument("gaussian_moment: k >= 0");
    if (!(t > 0.0)) throw std::invalid_argument("gaussian_moment: t > 0");
    if (n < 1) throw std::invalid_argument("gaussian_moment: n >= 1");
    if (std::isinf(upper)) {
        return std::tgamma(0.5 * (n + 2 * k)) / std::tgamma(0.5 * n) *
               std::pow(t, -k) * std::pow(M_PI / t, 0.5 * n);
    }
    if (!(upper > 0.0)) throw std::invalid_argument("gaussian_moment: upper > 0");
    RadialIntegralSpec spec;
    spec.dimension = n;
    spec.f = [k, t](double r) {
        return std::pow(r, 2 * k) * std::exp(-t * r * r);
    };
    spec.a = 0.0;
    spec.b = upper;
    spec.rel_tol = rel_tol;
    return radial_integral(spec).value;
}

} // namespace strongdamp::quad
