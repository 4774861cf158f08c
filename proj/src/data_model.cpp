#include "strongdamp/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "strongdamp/quadrature.hpp"

namespace strongdamp::data {

namespace {

using cplx = std::complex<double>;

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// Average of |d e1 + rho omega| over the unit sphere in R^n.
double sphere_mean_abs(int n, double rho, double d) {
    rho = std::abs(rho);
    d = std::abs(d);
    switch (n) {
        case 1:
            return std::max(rho, d);
        case 2: {
            if (rho == 0.0 || d == 0.0) return std::max(rho, d);
            const auto& gl = quad::gauss_legendre(96);
            double acc = 0.0;
            for (size_t i = 0; i < gl.nodes.size(); ++i) {
                const double theta = 0.5 * M_PI * (gl.nodes[i] + 1.0);
                acc += gl.weights[i] *
                       std::sqrt(d * d + rho * rho +
                                 2.0 * d * rho * std::cos(theta));
            }
            return acc * 0.5; // (pi/2) * acc / pi
        }
        case 3: {
            const double lo = std::min(rho, d);
            const double hi = std::max(rho, d);
            if (hi == 0.0) return 0.0;
            return hi + lo * lo / (3.0 * hi);
        }
        default:
            throw std::invalid_argument("sphere_mean_abs: n in {1,2,3}");
    }
}

// E|c + s Z_n| with |c| = d, Z_n standard normal in R^n.
double mean_abs_shifted_gaussian(int n, double d, double s) {
    if (d == 0.0)
        return s * std::sqrt(2.0) * std::tgamma(0.5 * (n + 1)) /
               std::tgamma(0.5 * n);
    if (n == 1)
        return s * std::sqrt(2.0 / M_PI) * std::exp(-d * d / (2.0 * s * s)) +
               d * std::erf(d / (s * std::sqrt(2.0)));
    const double chi_norm = std::pow(2.0, 1.0 - 0.5 * n) / std::tgamma(0.5 * n);
    auto integrand = [&](double rho) {
        return chi_norm * std::pow(rho, n - 1) * std::exp(-0.5 * rho * rho) *
               sphere_mean_abs(n, s * rho, d);
    };
    return quad::integrate(integrand, 0.0, 14.0 + std::sqrt(2.0 * n), 1e-12)
        .value;
}

// int_{axis < 0} |x| exp(-|x - c|^2/(2 s^2)) dx for a center at distance
// d > 0 on the positive axis ("wrong side" first absolute moment).
double wrong_side_abs_moment(int n, double d, double s) {
    // Inner integral over the n-1 transverse directions.
    auto transverse = [&](double a) {
        const double aa = std::abs(a);
        switch (n) {
            case 1:
                return aa;
            case 2: {
                auto f = [&](double y) {
                    return std::sqrt(aa * aa + y * y) *
                           std::exp(-0.5 * y * y / (s * s));
                };
                return 2.0 *
                       quad::integrate(f, 0.0, 12.0 * s, 1e-11).value;
            }
            case 3: {
                auto f = [&](double rho) {
                    return std::sqrt(aa * aa + rho * rho) * rho *
                           std::exp(-0.5 * rho * rho / (s * s));
                };
                return 2.0 * M_PI *
                       quad::integrate(f, 0.0, 12.0 * s, 1e-11).value;
            }
            default:
                throw std::invalid_argument("wrong_side_abs_moment: n in {1,2,3}");
        }
    };
    auto outer = [&](double u) { // u = -a >= 0
        return std::exp(-0.5 * (u + d) * (u + d) / (s * s)) * transverse(-u);
    };
    return quad::integrate(outer, 0.0, 12.0 * s, 1e-10).value;
}

double bump_profile(double rho, double radius) {
    if (rho >= radius) return 0.0;
    const double q = 1.0 - (rho / radius) * (rho / radius);
    return q * q;
}

Moments gaussian_moments(int n, const GaussianSpec& g) {
    const double mass = std::pow(2.0 * M_PI * g.width * g.width, 0.5 * n);
    const double d = norm2(g.center);
    Moments m;
    m.P = g.amplitude * mass;
    m.l1 = std::abs(g.amplitude) * mass;
    m.l11 = m.l1 * (1.0 + mean_abs_shifted_gaussian(n, d, g.width));
    return m;
}

Moments dipole_moments(int n, const DipoleSpec& dp) {
    const double d = norm2(dp.offset);
    if (d == 0.0)
        throw std::invalid_argument("dipole: offset must be nonzero");
    const double s = dp.width;
    const double mass = std::pow(2.0 * M_PI * s * s, 0.5 * n);
    const double a = std::abs(dp.amplitude);
    Moments m;
    m.P = 0.0;
    m.l1 = 2.0 * a * mass * std::erf(d / (s * std::sqrt(2.0)));
    const double i_plus = mass * mean_abs_shifted_gaussian(n, d, s);
    const double f_wrong = wrong_side_abs_moment(n, d, s);
    m.l11 = m.l1 + 2.0 * a * (i_plus - 2.0 * f_wrong);
    return m;
}

Moments bump_moments(int n, const BumpSpec& b) {
    const double area = quad::sphere_area(n);
    const double d = norm2(b.center);
    auto plain = [&](double rho) {
        return std::pow(rho, n - 1) * bump_profile(rho, b.radius);
    };
    auto weighted = [&](double rho) {
        return plain(rho) * sphere_mean_abs(n, rho, d);
    };
    const double base =
        area * quad::integrate(plain, 0.0, b.radius, 1e-12).value;
    const double first =
        area * quad::integrate(weighted, 0.0, b.radius, 1e-12).value;
    Moments m;
    m.P = b.amplitude * base;
    m.l1 = std::abs(b.amplitude) * base;
    m.l11 = m.l1 + std::abs(b.amplitude) * first;
    return m;
}

Moments gridsamples_moments(int n, const GridSamplesSpec& g) {
    const double h = g.L / g.N;
    const double cell = std::pow(h, n);
    Moments m;
    std::vector<double> x(n);
    const size_t total = g.values.size();
    for (size_t idx = 0; idx < total; ++idx) {
        const double v = g.values[idx];
        if (!std::isfinite(v))
            throw std::invalid_argument(
                "grid samples contain a non-finite entry");
        size_t rem = idx;
        for (int axis = n - 1; axis >= 0; --axis) {
            x[axis] = -0.5 * g.L + (rem % g.N) * h;
            rem /= g.N;
        }
        const double r = norm2(x);
        m.P += v;
        m.l1 += std::abs(v);
        m.l11 += (1.0 + r) * std::abs(v);
    }
    m.P *= cell;
    m.l1 *= cell;
    m.l11 *= cell;
    return m;
}

void check_spec(const InitialDatumSpec& datum) {
    const int n = datum.dimension;
    if (n < 1) throw std::invalid_argument("datum: dimension >= 1 required");
    std::visit(
        [&](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, GaussianSpec>) {
                if (!(fam.width > 0.0))
                    throw std::invalid_argument("gaussian: width > 0");
                if (fam.center.size() != static_cast<size_t>(n))
                    throw std::invalid_argument("gaussian: center size != n");
            } else if constexpr (std::is_same_v<T, DipoleSpec>) {
                if (!(fam.width > 0.0))
                    throw std::invalid_argument("dipole: width > 0");
                if (fam.offset.size() != static_cast<size_t>(n))
                    throw std::invalid_argument("dipole: offset size != n");
            } else if constexpr (std::is_same_v<T, BumpSpec>) {
                if (!(fam.radius > 0.0))
                    throw std::invalid_argument("bump: radius > 0");
                if (fam.center.size() != static_cast<size_t>(n))
                    throw std::invalid_argument("bump: center size != n");
            } else if constexpr (std::is_same_v<T, GridSamplesSpec>) {
                if (fam.N < 1 || !(fam.L > 0.0))
                    throw std::invalid_argument("grid samples: need N >= 1, L > 0");
                size_t expect = 1;
                for (int i = 0; i < n; ++i) expect *= fam.N;
                if (fam.values.size() != expect)
                    throw std::invalid_argument(
                        "grid samples: values size != N^n");
            }
        },
        datum.family);
}

} // namespace

double evaluate(const InitialDatumSpec& datum, std::span<const double> x) {
    check_spec(datum);
    const int n = datum.dimension;
    if (x.size() != static_cast<size_t>(n))
        throw std::invalid_argument("evaluate: point size != n");
    return std::visit(
        [&](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, GaussianSpec>) {
                double q = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double dxi = x[i] - fam.center[i];
                    q += dxi * dxi;
                }
                return fam.amplitude *
                       std::exp(-0.5 * q / (fam.width * fam.width));
            } else if constexpr (std::is_same_v<T, DipoleSpec>) {
                double qp = 0.0, qm = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double dp = x[i] - fam.offset[i];
                    const double dm = x[i] + fam.offset[i];
                    qp += dp * dp;
                    qm += dm * dm;
                }
                const double inv = 0.5 / (fam.width * fam.width);
                return fam.amplitude *
                       (std::exp(-qp * inv) - std::exp(-qm * inv));
            } else if constexpr (std::is_same_v<T, BumpSpec>) {
                double q = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double dxi = x[i] - fam.center[i];
                    q += dxi * dxi;
                }
                return fam.amplitude *
                       bump_profile(std::sqrt(q), fam.radius);
            } else {
                // Nearest-cell lookup; sufficient for the verification uses.
                const GridSamplesSpec& g = fam;
                const double h = g.L / g.N;
                size_t idx = 0;
                for (int i = 0; i < n; ++i) {
                    double u = (x[i] + 0.5 * g.L) / h;
                    long j = std::lround(u);
                    if (j < 0 || j >= g.N) return 0.0;
                    idx = idx * g.N + static_cast<size_t>(j);
                }
                return g.values[idx];
            }
        },
        datum.family);
}

double support_radius(const InitialDatumSpec& datum) {
    check_spec(datum);
    return std::visit(
        [&](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, GaussianSpec>) {
                if (fam.amplitude == 0.0) return 0.0;
                return norm2(fam.center) + 6.0 * fam.width;
            } else if constexpr (std::is_same_v<T, DipoleSpec>) {
                return norm2(fam.offset) + 6.0 * fam.width;
            } else if constexpr (std::is_same_v<T, BumpSpec>) {
                if (fam.amplitude == 0.0) return 0.0;
                return norm2(fam.center) + fam.radius;
            } else {
                return 0.5 * fam.L * std::sqrt(double(datum.dimension));
            }
        },
        datum.family);
}

Moments moments(const InitialDatumSpec& datum) {
    check_spec(datum);
    const int n = datum.dimension;
    return std::visit(
        [&](const auto& fam) -> Moments {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, GaussianSpec>) {
                if (fam.amplitude == 0.0) return {};
                return gaussian_moments(n, fam);
            } else if constexpr (std::is_same_v<T, DipoleSpec>)
                return dipole_moments(n, fam);
            else if constexpr (std::is_same_v<T, BumpSpec>) {
                if (fam.amplitude == 0.0) return {};
                return bump_moments(n, fam);
            } else
                return gridsamples_moments(n, fam);
        },
        datum.family);
}

std::complex<double> spectrum(const InitialDatumSpec& datum,
                              std::span<const double> xi) {
    check_spec(datum);
    const int n = datum.dimension;
    if (xi.size() != static_cast<size_t>(n))
        throw std::invalid_argument("spectrum: xi size != n");
    return std::visit(
        [&](const auto& fam) -> cplx {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, GaussianSpec>) {
                const double r2 = dot(xi, xi);
                const double mass =
                    std::pow(2.0 * M_PI * fam.width * fam.width, 0.5 * n);
                const double phase = dot(fam.center, xi);
                return fam.amplitude * mass *
                       std::exp(-0.5 * fam.width * fam.width * r2) *
                       std::exp(cplx(0.0, -phase));
            } else if constexpr (std::is_same_v<T, DipoleSpec>) {
                const double r2 = dot(xi, xi);
                const double mass =
                    std::pow(2.0 * M_PI * fam.width * fam.width, 0.5 * n);
                const double phase = dot(fam.offset, xi);
                return cplx(0.0, -2.0) * fam.amplitude * mass *
                       std::exp(-0.5 * fam.width * fam.width * r2) *
                       std::sin(phase);
            } else if constexpr (std::is_same_v<T, BumpSpec>) {
                const double r = norm2(xi);
                const double R = fam.radius;
                auto radial = [&](double rho) -> double {
                    switch (n) {
                        case 1:
                            return 2.0 * std::cos(r * rho) *
                                   bump_profile(rho, R);
                        case 2:
                            return 2.0 * M_PI * std::cyl_bessel_j(0.0, r * rho) *
                                   rho * bump_profile(rho, R);
                        case 3:
                            return 4.0 * M_PI * sinc(r * rho) * rho * rho *
                                   bump_profile(rho, R);
                        default:
                            throw std::invalid_argument("bump spectrum: n in {1,2,3}");
                    }
                };
                const double value =
                    quad::integrate(radial, 0.0, R, 1e-12).value;
                const double phase = dot(fam.center, xi);
                return fam.amplitude * value * std::exp(cplx(0.0, -phase));
            } else {
                const GridSamplesSpec& g = fam;
                const double h = g.L / g.N;
                const double cell = std::pow(h, n);
                cplx acc = 0.0;
                std::vector<double> x(n);
                for (size_t idx = 0; idx < g.values.size(); ++idx) {
                    size_t rem = idx;
                    for (int axis = n - 1; axis >= 0; --axis) {
                        x[axis] = -0.5 * g.L + (rem % g.N) * h;
                        rem /= g.N;
                    }
                    const double phase = dot(x, xi);
                    acc += g.values[idx] * std::exp(cplx(0.0, -phase));
                }
                return acc * cell;
            }
        },
        datum.family);
}

OscillatoryParts oscillatory_parts(const InitialDatumSpec& datum,
                                   std::span<const double> xi) {
    const cplx u_hat = spectrum(datum, xi);
    const double P = moments(datum).P;
    return {u_hat.real() - P, -u_hat.imag()};
}

OscillatoryParts oscillatory_parts_quadrature(const InitialDatumSpec& datum,
                                              std::span<const double> xi,
                                              double rel_tol) {
    const int n = datum.dimension;
    if (n > 2)
        throw std::invalid_argument(
            "oscillatory_parts_quadrature: supported for n <= 2");
    const double R = std::max(support_radius(datum), 1.0) + 4.0;
    if (n == 1) {
        auto fa = [&](double x) {
            const double p[1] = {x};
            return (std::cos(x * xi[0]) - 1.0) * evaluate(datum, p);
        };
        auto fb = [&](double x) {
            const double p[1] = {x};
            return std::sin(x * xi[0]) * evaluate(datum, p);
        };
        return {quad::integrate(fa, -R, R, rel_tol).value,
                quad::integrate(fb, -R, R, rel_tol).value};
    }
    auto inner = [&](double x0, bool cos_part) {
        auto f = [&](double x1) {
            const double p[2] = {x0, x1};
            const double phase = x0 * xi[0] + x1 * xi[1];
            const double u = evaluate(datum, p);
            return cos_part ? (std::cos(phase) - 1.0) * u
                            : std::sin(phase) * u;
        };
        return quad::integrate(f, -R, R, rel_tol).value;
    };
    auto fa = [&](double x0) { return inner(x0, true); };
    auto fb = [&](double x0) { return inner(x0, false); };
    return {quad::integrate(fa, -R, R, rel_tol).value,
            quad::integrate(fb, -R, R, rel_tol).value};
}

const MomentConstants& lemma22_constants() {
    static const MomentConstants consts = [] {
        // (1 - cos h)/h falls below its peak value for h > 2/L, so the
        // supremum lives in (0, 4]. Dense scan plus golden-section polish.
        auto f = [](double h) { return (1.0 - std::cos(h)) / h; };
        double best_h = 1.0;
        double best_v = f(1.0);
        const int scan = 400000;
        for (int i = 1; i <= scan; ++i) {
            const double h = 4.0 * i / scan;
            const double v = f(h);
            if (v > best_v) {
                best_v = v;
                best_h = h;
            }
        }
        double a = best_h - 4.0 / scan;
        double b = best_h + 4.0 / scan;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - gr * (b - a);
        double d = a + gr * (b - a);
        for (int iter = 0; iter < 200 && (b - a) > 1e-12; ++iter) {
            if (f(c) > f(d)) {
                b = d;
            } else {
                a = c;
            }
            c = b - gr * (b - a);
            d = a + gr * (b - a);
        }
        // The maximizer solves tan(h/2) = h; a golden-section bracket only
        // locates a flat maximum to ~sqrt(eps), so polish with Newton on
        // the stationarity equation.
        double theta = 0.5 * (a + b);
        for (int iter = 0; iter < 50; ++iter) {
            const double half = 0.5 * theta;
            const double g = std::tan(half) - theta;
            const double sec = 1.0 / std::cos(half);
            const double dg = 0.5 * sec * sec - 1.0;
            const double step = g / dg;
            theta -= step;
            if (std::abs(step) < 1e-15 * theta) break;
        }
        return MomentConstants{f(theta), 1.0, theta};
    }();
    return consts;
}

MomentRatios lemma22_check(const InitialDatumSpec& datum,
                           std::span<const double> xi) {
    return lemma22_check(datum, xi, moments(datum));
}

MomentRatios lemma22_check(const InitialDatumSpec& datum,
                           std::span<const double> xi, const Moments& m) {
    const double r = norm2(xi);
    if (r == 0.0) return {0.0, 0.0};
    const OscillatoryParts ab = oscillatory_parts(datum, xi);
    const double denom = r * m.l11;
    return {std::abs(ab.A) / denom, std::abs(ab.B) / denom};
}

} // namespace strongdamp::data
