#include "strongdamp/symbol_core.hpp"

#include <cmath>
#include <stdexcept>

#include "strongdamp/quadrature.hpp"

namespace strongdamp::symbol {

namespace {

using cplx = std::complex<double>;

// sinh(sqrt(w))/sqrt(w) continued through w <= 0, where it equals
// sin(sqrt(-w))/sqrt(-w). Series near w = 0 avoids the 0/0.
double sinch_sq(double w) {
    if (std::abs(w) < 0.1) {
        return 1.0 +
               w * (1.0 / 6.0 +
                    w * (1.0 / 120.0 +
                         w * (1.0 / 5040.0 +
                              w * (1.0 / 362880.0 + w / 39916800.0))));
    }
    if (w > 0.0) {
        const double x = std::sqrt(w);
        return std::sinh(x) / x;
    }
    const double x = std::sqrt(-w);
    return std::sin(x) / x;
}

// cosh(sqrt(w)) continued through w <= 0 (= cos(sqrt(-w))).
double cosh_sq(double w) {
    if (std::abs(w) < 0.1) {
        return 1.0 +
               w * (0.5 +
                    w * (1.0 / 24.0 +
                         w * (1.0 / 720.0 +
                              w * (1.0 / 40320.0 + w / 3628800.0))));
    }
    if (w > 0.0) return std::cosh(std::sqrt(w));
    return std::cos(std::sqrt(-w));
}

// sin(x)/x with the short series branch below the cancellation threshold.
double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// Slow real root -2r/(r + sqrt(r^2-4)) for r > 2; no cancellation at
// large r where the naive (-r^2 + r sqrt(r^2-4))/2 loses digits.
double slow_root_overdamped(double r) {
    return -2.0 * r / (r + std::sqrt(r * r - 4.0));
}

} // namespace

DispersionRoots dispersion_roots(double r, double eta) {
    if (!(r >= 0.0) || !std::isfinite(r))
        throw std::invalid_argument("dispersion_roots: r must be finite, >= 0");
    DispersionRoots out{};
    if (r < 2.0 - eta) {
        const double re = -0.5 * r * r;
        const double im = 0.5 * r * std::sqrt((2.0 - r) * (2.0 + r));
        out.sigma1 = {re, im};
        out.sigma2 = {re, -im};
        out.regime = Regime::Oscillatory;
    } else if (r <= 2.0 + eta) {
        out.regime = Regime::Confluent;
        if (r <= 2.0) {
            const double re = -0.5 * r * r;
            const double im = 0.5 * r * std::sqrt(std::max(0.0, (2.0 - r) * (2.0 + r)));
            out.sigma1 = {re, im};
            out.sigma2 = {re, -im};
        } else {
            const double s1 = slow_root_overdamped(r);
            out.sigma1 = {s1, 0.0};
            out.sigma2 = {-r * r - s1, 0.0};
        }
    } else {
        const double s1 = slow_root_overdamped(r);
        out.sigma1 = {s1, 0.0};
        out.sigma2 = {-r * r - s1, 0.0};
        out.regime = Regime::Overdamped;
    }
    return out;
}

ModeMultipliers mode_multipliers(double t, double r) {
    if (!(t >= 0.0) || !(r >= 0.0))
        throw std::invalid_argument("mode_multipliers: need t >= 0, r >= 0");

    if (r == 0.0) return {t, 1.0, 1.0, 0.0};

    const double r2 = r * r;

    if (r > 2.0 + kConfluenceEta) {
        // Overdamped: plain exponentials; the two rates are far apart, so
        // the differences below carry no cancellation risk.
        const double s1 = slow_root_overdamped(r);
        const double s2 = -r2 - s1;
        const double gap = s1 - s2;
        const double e1 = std::exp(s1 * t);
        const double e2 = std::exp(s2 * t);
        const double m1 = (e1 - e2) / gap;
        return {m1, (s1 * e2 - s2 * e1) / gap, (s1 * e1 - s2 * e2) / gap,
                -r2 * m1};
    }

    if (r >= 2.0 - kConfluenceEta) {
        // Double-root neighbourhood: everything in terms of
        // w = (t (sigma1-sigma2)/2)^2 = t^2 r^2 (r^2-4)/4, which changes
        // sign smoothly across r = 2.
        const double z = 0.25 * r2 * (r2 - 4.0);
        const double w = z * t * t;
        if (w > 250000.0) {
            // exp(-r^2 t/2) * cosh(sqrt(w)) would pair an underflow with
            // an overflow; fall back to the explicit exponentials.
            const double s1 = slow_root_overdamped(r);
            const double s2 = -r2 - s1;
            const double gap = s1 - s2;
            const double e1 = std::exp(s1 * t);
            const double e2 = std::exp(s2 * t);
            const double m1 = (e1 - e2) / gap;
            return {m1, (s1 * e2 - s2 * e1) / gap,
                    (s1 * e1 - s2 * e2) / gap, -r2 * m1};
        }
        const double env = std::exp(-0.5 * r2 * t);
        const double S = t * sinch_sq(w); // e^{(r^2/2) t} * m1
        const double C = cosh_sq(w);
        const double m1 = env * S;
        return {m1, env * (C + 0.5 * r2 * S), env * (C - 0.5 * r2 * S),
                -r2 * m1};
    }

    // Oscillatory regime: the trig forms.
    const double w = std::sqrt((2.0 - r) * (2.0 + r));
    const double phi = 0.5 * t * r * w;
    const double env = std::exp(-0.5 * r2 * t);
    const double sphi = std::sin(phi);
    const double cphi = std::cos(phi);
    const double m1 = env * t * sinc(phi);
    const double rsw = r * sphi / w;
    return {m1, env * (rsw + cphi), env * (cphi - rsw), -r2 * m1};
}

ModeMultipliersC mode_multipliers_exp(double t, double r) {
    if (!(t >= 0.0) || !(r >= 0.0))
        throw std::invalid_argument("mode_multipliers_exp: need t >= 0, r >= 0");
    const DispersionRoots roots = dispersion_roots(r, 0.0);
    const cplx s1 = roots.sigma1;
    const cplx s2 = roots.sigma2;
    const cplx gap = s1 - s2;
    if (std::abs(gap) == 0.0) {
        // Exact double root (r = 2): confluent limits of the quotients.
        const double e = std::exp(-2.0 * t);
        return {cplx(t * e), cplx((1.0 + 2.0 * t) * e),
                cplx((1.0 - 2.0 * t) * e), cplx(-4.0 * t * e)};
    }
    const cplx e1 = std::exp(s1 * t);
    const cplx e2 = std::exp(s2 * t);
    const cplx m1 = (e1 - e2) / gap;
    return {m1, (s1 * e2 - s2 * e1) / gap, (s1 * e1 - s2 * e2) / gap,
            -r * r * m1};
}

ProfileMultipliers profile_multipliers(double t, double r) {
    if (!(t >= 0.0) || !(r >= 0.0))
        throw std::invalid_argument("profile_multipliers: need t >= 0, r >= 0");
    const double env = std::exp(-0.5 * t * r * r);
    const double x = t * r;
    return {env * t * sinc(x), env * std::cos(x)};
}

KTermsExplicit k_terms_explicit(double t, double r, const LowFreqData& d) {
    if (!(r < 2.0))
        throw std::domain_error(
            "k_terms_explicit: the decomposition is only defined for r < 2");
    if (!(t >= 0.0) || !(r >= 0.0))
        throw std::invalid_argument("k_terms_explicit: need t >= 0, r >= 0");
    const double w = std::sqrt((2.0 - r) * (2.0 + r));
    const double phi = 0.5 * t * r * w;
    const double env = std::exp(-0.5 * t * r * r);
    const ModeMultipliers m = mode_multipliers(t, r);
    KTermsExplicit out;
    out.k1 = d.P0 * r * env * std::sin(phi) / w;
    out.k2 = cplx(d.A1, -d.B1) * m.m1;
    out.k3 = cplx(d.A0, -d.B0) * m.m0;
    return out;
}

std::complex<double> decomposition_residual(double t, double r,
                                            std::complex<double> u0_hat,
                                            std::complex<double> u1_hat,
                                            const LowFreqData& d) {
    if (!(r > 0.0 && r < 2.0))
        throw std::domain_error(
            "decomposition_residual: requires 0 < r < 2");
    // Left side through the exponential route so the two sides of the
    // identity do not share an evaluation path.
    const ModeMultipliersC mc = mode_multipliers_exp(t, r);
    const cplx u_hat = mc.m1 * u1_hat + mc.m0 * u0_hat;

    const double w = std::sqrt((2.0 - r) * (2.0 + r));
    const double phi = 0.5 * t * r * w;
    const double env = std::exp(-0.5 * t * r * r);
    const KTermsExplicit k = k_terms_explicit(t, r, d);
    const cplx lead = 2.0 * d.P1 * env * std::sin(phi) / (r * w) +
                      d.P0 * env * std::cos(phi);
    return u_hat - (lead + k.k1 + k.k2 + k.k3);
}

double low_freq_error_integrand(double t, double r,
                                std::complex<double> u0_hat,
                                std::complex<double> u1_hat, double P0,
                                double P1) {
    const ModeMultipliers m = mode_multipliers(t, r);
    const ProfileMultipliers p = profile_multipliers(t, r);
    const cplx diff =
        m.m1 * u1_hat + m.m0 * u0_hat - cplx(P1 * p.p_sin + P0 * p.p_cos);
    return std::norm(diff);
}

double hf_energy(double t, double r, std::complex<double> u0_hat,
                 std::complex<double> u1_hat) {
    const ModeMultipliers m = mode_multipliers(t, r);
    const cplx u = m.m1 * u1_hat + m.m0 * u0_hat;
    const cplx ut = m.dm1 * u1_hat + m.dm0 * u0_hat;
    return std::norm(ut) + r * r * std::norm(u);
}

KTermMajorants k_majorants(double t, int n, double delta0, double P0,
                           double P1, double norm11_u0, double norm11_u1,
                           double L, double M) {
    if (!(delta0 > 0.0 && delta0 < 2.0))
        throw std::invalid_argument("k_majorants: need 0 < delta0 < 2");
    if (!(t > 0.0)) throw std::invalid_argument("k_majorants: need t > 0");
    const double J0 = quad::gaussian_moment(0, t, n, delta0);
    const double J2 = quad::gaussian_moment(1, t, n, delta0);
    const double J4 = quad::gaussian_moment(2, t, n, delta0);
    const double J6 = quad::gaussian_moment(3, t, n, delta0);
    const double q = 4.0 - delta0 * delta0;
    const double LM = L * L + M * M;
    // Constants per bound, sharpest the displayed chains support:
    //  b1: |sin| <= 1 and 4 - r^2 >= q on the ball.
    //  b2: |m1|^2 <= 4 e^{-t r^2} / (r^2 q), the r^2 cancels against |A-iB|^2.
    //  b3: r sin(phi)/w + cos(phi) has amplitude 2/w, and (2/w)^2 =
    //      1 + r^2/(4 - r^2) <= 1 + r^2/q pointwise; no 2(a^2+b^2) split.
    //  b4: |sqrt(4-r^2) - 2| <= r^2 and |cos| <= 1.
    //  b5: the same square-root bound with the explicit 1/4.
    //  b6: theta in (0,1) pushes the denominator to q^3; sin^2(t r) <= 1.
    KTermMajorants b;
    b.b1 = P0 * P0 / q * J2;
    b.b2 = LM * norm11_u1 * norm11_u1 * (4.0 / q) * J0;
    b.b3 = LM * norm11_u0 * norm11_u0 * (J4 / q + J2);
    b.b4 = t * t / q * J4;
    b.b5 = 0.25 * t * t * J6;
    b.b6 = 4.0 * P1 * P1 / (q * q * q) * J2;
    return b;
}

} // namespace strongdamp::symbol
