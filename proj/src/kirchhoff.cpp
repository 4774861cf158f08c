#include "strongdamp/kirchhoff.hpp"

#include <cmath>
#include <stdexcept>

#include "strongdamp/quadrature.hpp"

namespace strongdamp::kirchhoff {

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

// Rule sizes grow with the exponential scale |x| of the integrand
// G(t, x + t z) over the sphere/disk.
int polar_count(double t, double xnorm) {
    return 48 + static_cast<int>(std::ceil(1.5 * xnorm + 2.0 * std::sqrt(t)));
}
int azimuth_count(double /*t*/, double xnorm) {
    return 64 + 2 * static_cast<int>(std::ceil(1.6 * xnorm));
}

template <int N>
SmoothField<N> gaussian_field(double t) {
    SmoothField<N> h;
    h.value = [t](const std::array<double, N>& y) {
        return gaussian_kernel_eval(t, std::span<const double>(y.data(), N), N);
    };
    h.grad = [t](const std::array<double, N>& y) {
        const double g =
            gaussian_kernel_eval(t, std::span<const double>(y.data(), N), N);
        std::array<double, N> out;
        for (int i = 0; i < N; ++i) out[i] = -y[i] / t * g;
        return out;
    };
    return h;
}

void eigencheck_or_throw(int n);

} // namespace

double gaussian_kernel_eval(double t, std::span<const double> x, int n) {
    if (!(t > 0.0)) throw std::invalid_argument("gaussian_kernel: t > 0");
    if (x.size() != static_cast<size_t>(n))
        throw std::invalid_argument("gaussian_kernel: point size != n");
    const double r = norm2(x);
    return std::pow(2.0 * M_PI * t, -0.5 * n) * std::exp(-0.5 * r * r / t);
}

SphereRule make_sphere_rule(int n_polar, int n_azimuth) {
    const auto& gl = quad::gauss_legendre(n_polar);
    SphereRule rule;
    rule.nodes.reserve(static_cast<size_t>(n_polar) * n_azimuth);
    rule.weights.reserve(rule.nodes.capacity());
    const double dphi = 2.0 * M_PI / n_azimuth;
    for (int i = 0; i < n_polar; ++i) {
        const double mu = gl.nodes[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int j = 0; j < n_azimuth; ++j) {
            const double phi = dphi * j;
            rule.nodes.push_back({s * std::cos(phi), s * std::sin(phi), mu});
            rule.weights.push_back(gl.weights[i] * dphi);
        }
    }
    return rule;
}

DiskRule make_disk_rule(int n_radial, int n_azimuth) {
    // rho = sin(psi) absorbs the (1 - rho^2)^{-1/2} boundary weight:
    // int f(z)/sqrt(1-|z|^2) dz = int_0^{pi/2} int_0^{2pi} f(sin psi w)
    //                             sin(psi) dphi dpsi.
    const auto& gl = quad::gauss_legendre(n_radial);
    DiskRule rule;
    rule.nodes.reserve(static_cast<size_t>(n_radial) * n_azimuth);
    rule.weights.reserve(rule.nodes.capacity());
    const double dphi = 2.0 * M_PI / n_azimuth;
    for (int i = 0; i < n_radial; ++i) {
        const double psi = 0.25 * M_PI * (gl.nodes[i] + 1.0);
        const double rho = std::sin(psi);
        const double w = gl.weights[i] * 0.25 * M_PI * rho * dphi;
        for (int j = 0; j < n_azimuth; ++j) {
            const double phi = dphi * j;
            rule.nodes.push_back({rho * std::cos(phi), rho * std::sin(phi)});
            rule.weights.push_back(w);
        }
    }
    return rule;
}

double wave_convolution(double t, const std::array<double, 3>& x,
                        const SmoothField<3>& h, const SphereRule& rule) {
    double acc = 0.0;
    std::array<double, 3> y;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        for (int a = 0; a < 3; ++a) y[a] = x[a] + t * rule.nodes[i][a];
        acc += rule.weights[i] * h.value(y);
    }
    return t / (4.0 * M_PI) * acc;
}

double wave_convolution(double t, const std::array<double, 2>& x,
                        const SmoothField<2>& h, const DiskRule& rule) {
    double acc = 0.0;
    std::array<double, 2> y;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        for (int a = 0; a < 2; ++a) y[a] = x[a] + t * rule.nodes[i][a];
        acc += rule.weights[i] * h.value(y);
    }
    return t / (2.0 * M_PI) * acc;
}

double wave_dt_convolution(double t, const std::array<double, 3>& x,
                           const SmoothField<3>& h, const SphereRule& rule) {
    double acc = 0.0;
    std::array<double, 3> y;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const auto& z = rule.nodes[i];
        for (int a = 0; a < 3; ++a) y[a] = x[a] + t * z[a];
        const auto g = h.grad(y);
        acc +=
            rule.weights[i] *
            (h.value(y) + t * (z[0] * g[0] + z[1] * g[1] + z[2] * g[2]));
    }
    return acc / (4.0 * M_PI);
}

double wave_dt_convolution(double t, const std::array<double, 2>& x,
                           const SmoothField<2>& h, const DiskRule& rule) {
    double acc = 0.0;
    std::array<double, 2> y;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const auto& z = rule.nodes[i];
        for (int a = 0; a < 2; ++a) y[a] = x[a] + t * z[a];
        const auto g = h.grad(y);
        acc += rule.weights[i] *
               (h.value(y) + t * (z[0] * g[0] + z[1] * g[1]));
    }
    return acc / (2.0 * M_PI);
}

double profile_n3(double t, const std::array<double, 3>& x, double P0,
                  double P1) {
    if (!(t > 0.0)) throw std::invalid_argument("profile_n3: t > 0");
    if (P0 == 0.0 && P1 == 0.0) return 0.0;
    const double xn = norm2(x);
    const SphereRule rule =
        make_sphere_rule(polar_count(t, xn), azimuth_count(t, xn));
    const SmoothField<3> g = gaussian_field<3>(t);
    double out = 0.0;
    if (P1 != 0.0) out += P1 * wave_convolution(t, x, g, rule);
    if (P0 != 0.0) out += P0 * wave_dt_convolution(t, x, g, rule);
    return out;
}

double profile_n2(double t, const std::array<double, 2>& x, double P0,
                  double P1) {
    if (!(t > 0.0)) throw std::invalid_argument("profile_n2: t > 0");
    if (P0 == 0.0 && P1 == 0.0) return 0.0;
    const double xn = norm2(x);
    const DiskRule rule =
        make_disk_rule(polar_count(t, xn), azimuth_count(t, xn));
    const SmoothField<2> g = gaussian_field<2>(t);
    double out = 0.0;
    if (P1 != 0.0) out += P1 * wave_convolution(t, x, g, rule);
    if (P0 != 0.0) out += P0 * wave_dt_convolution(t, x, g, rule);
    return out;
}

namespace {

// Plane-wave eigenchecks pin the formula constants: the propagator must
// act on cos(k.x) as multiplication by sin(t|k|)/|k| (and its time
// derivative as cos(t|k|)).
template <int N>
double run_eigencheck(double knorm) {
    std::array<double, N> k{};
    k[0] = knorm * 0.6;
    k[N - 1] = knorm * 0.8;
    SmoothField<N> h;
    h.value = [k](const std::array<double, N>& y) {
        double p = 0.0;
        for (int i = 0; i < N; ++i) p += k[i] * y[i];
        return std::cos(p);
    };
    h.grad = [k](const std::array<double, N>& y) {
        double p = 0.0;
        for (int i = 0; i < N; ++i) p += k[i] * y[i];
        std::array<double, N> g;
        for (int i = 0; i < N; ++i) g[i] = -k[i] * std::sin(p);
        return g;
    };
    const double t = 1.3;
    std::array<double, N> x{};
    x[0] = 0.4;
    if (N >= 2) x[1] = -0.7;

    double conv, dconv;
    if constexpr (N == 3) {
        const SphereRule rule = make_sphere_rule(48, 96);
        conv = wave_convolution(t, x, h, rule);
        dconv = wave_dt_convolution(t, x, h, rule);
    } else {
        const DiskRule rule = make_disk_rule(48, 96);
        conv = wave_convolution(t, x, h, rule);
        dconv = wave_dt_convolution(t, x, h, rule);
    }
    const double expect_conv = std::sin(t * knorm) / knorm * h.value(x);
    const double expect_dconv = std::cos(t * knorm) * h.value(x);
    return std::max(std::abs(conv - expect_conv),
                    std::abs(dconv - expect_dconv));
}

void eigencheck_or_throw(int n) {
    for (double knorm : {0.5, 1.0, 2.0})
        if (eigencheck_residual(n, knorm) > 1e-6)
            throw std::runtime_error(
                "kirchhoff coefficients failed the plane-wave eigencheck");
}

} // namespace

double eigencheck_residual(int n, double knorm) {
    if (n == 3) return run_eigencheck<3>(knorm);
    if (n == 2) return run_eigencheck<2>(knorm);
    throw std::invalid_argument("eigencheck_residual: unsupported dimension " +
                                std::to_string(n));
}

const KirchhoffCoefficients& kirchhoff_coefficients(int n) {
    if (n != 2 && n != 3)
        throw std::invalid_argument(
            "kirchhoff_coefficients: unsupported dimension " +
            std::to_string(n));
    static const KirchhoffCoefficients c2 = [] {
        eigencheck_or_throw(2);
        const double c = 1.0 / (2.0 * M_PI);
        return KirchhoffCoefficients{2, c, c, c};
    }();
    static const KirchhoffCoefficients c3 = [] {
        eigencheck_or_throw(3);
        const double c = 1.0 / (4.0 * M_PI);
        return KirchhoffCoefficients{3, c, c, c};
    }();
    return n == 2 ? c2 : c3;
}

oracle::GridField profile_field(double t, double P0, double P1,
                                const oracle::GridSpec& grid) {
    if (grid.n != 2 && grid.n != 3)
        throw std::invalid_argument("profile_field: dimension must be 2 or 3");
    const double h = grid.L / grid.N;
    const double dr = 0.25 * h;
    // Beyond the wave cone plus diffusive spread the profile is far below
    // any tolerance used here.
    const double r_cut = t + 12.0 * std::sqrt(t) + 4.0;
    const double r_max =
        std::min(r_cut, 0.5 * grid.L * std::sqrt(double(grid.n)) + h);
    const int table_size = static_cast<int>(std::ceil(r_max / dr)) + 3;

    std::vector<double> table(table_size);
    for (int i = 0; i < table_size; ++i) {
        const double r = i * dr;
        if (grid.n == 2)
            table[i] = profile_n2(t, {r, 0.0}, P0, P1);
        else
            table[i] = profile_n3(t, {r, 0.0, 0.0}, P0, P1);
    }

    auto interp = [&](double r) -> double {
        if (r >= r_max) return 0.0;
        const double u = r / dr;
        const int i = std::min(static_cast<int>(u), table_size - 2);
        const double f = u - i;
        // Catmull-Rom with reflection at the origin (profile is even in r).
        const double p0 = (i == 0) ? table[1] : table[i - 1];
        const double p1 = table[i];
        const double p2 = table[i + 1];
        const double p3 = (i + 2 < table_size) ? table[i + 2] : table[i + 1];
        return p1 +
               0.5 * f *
                   (p2 - p0 +
                    f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                         f * (3.0 * (p1 - p2) + p3 - p0)));
    };

    size_t total = 1;
    for (int i = 0; i < grid.n; ++i) total *= static_cast<size_t>(grid.N);
    oracle::GridField out{grid.n, grid.N, grid.L, std::vector<double>(total)};
    for (size_t idx = 0; idx < total; ++idx) {
        size_t rem = idx;
        double r2 = 0.0;
        for (int axis = grid.n - 1; axis >= 0; --axis) {
            const double x = -0.5 * grid.L + (rem % grid.N) * h;
            r2 += x * x;
            rem /= grid.N;
        }
        out.values[idx] = interp(std::sqrt(r2));
    }
    return out;
}

} // namespace strongdamp::kirchhoff
