#pragma once

#include <complex>
#include <span>
#include <variant>
#include <vector>

namespace strongdamp::data {

/// u(x) = amplitude * exp(-|x - center|^2 / (2 width^2)).
struct GaussianSpec {
    double amplitude = 1.0;
    std::vector<double> center;
    double width = 1.0;
};

/// Two opposite-sign Gaussians at +offset and -offset; total mass zero by
/// construction.
struct DipoleSpec {
    double amplitude = 1.0;
    std::vector<double> offset;
    double width = 1.0;
};

/// Compactly supported radial C^1 bump
/// u(x) = amplitude * (1 - (|x-center|/radius)^2)^2 on |x-center| <= radius.
struct BumpSpec {
    double amplitude = 1.0;
    std::vector<double> center;
    double radius = 1.0;
};

/// Samples on a uniform grid over [-L/2, L/2)^n, row-major, N points per
/// axis with x_i = -L/2 + i L/N. Moments are Riemann sums, the spectrum a
/// scaled discrete transform.
struct GridSamplesSpec {
    int N = 0;
    double L = 0.0;
    std::vector<double> values;
};

struct InitialDatumSpec {
    int dimension = 1;
    std::variant<GaussianSpec, DipoleSpec, BumpSpec, GridSamplesSpec> family;
};

/// Mass and weighted L^1 norms: P = int u, l1 = int |u|,
/// l11 = int (1 + |x|) |u|.
struct Moments {
    double P = 0.0;
    double l1 = 0.0;
    double l11 = 0.0;
};

/// The oscillatory split of the spectrum at one xi:
/// u_hat(xi) = A - iB + P with A = int (cos(x.xi) - 1) u, B = int sin(x.xi) u.
struct OscillatoryParts {
    double A = 0.0;
    double B = 0.0;
};

/// L = sup (1 - cos h)/h over h > 0 (attained at theta_star, the root of
/// tan(h/2) = h), M = sup |sin h|/|h| = 1.
struct MomentConstants {
    double L;
    double M;
    double theta_star;
};

double evaluate(const InitialDatumSpec& datum, std::span<const double> x);

/// Radius of the ball (about the origin) that effectively supports the
/// datum; Gaussians count |center| + 6 width.
double support_radius(const InitialDatumSpec& datum);

Moments moments(const InitialDatumSpec& datum);

/// Unnormalized transform int e^{-i x.xi} u(x) dx, so spectrum(datum, 0)
/// equals the mass P.
std::complex<double> spectrum(const InitialDatumSpec& datum,
                              std::span<const double> xi);

/// A and B from the analytic spectrum (A = Re u_hat - P, B = -Im u_hat).
OscillatoryParts oscillatory_parts(const InitialDatumSpec& datum,
                                   std::span<const double> xi);

/// The same quantities by direct quadrature of their defining integrals.
/// Supported for dimensions 1 and 2; the independent cross-check path.
OscillatoryParts oscillatory_parts_quadrature(const InitialDatumSpec& datum,
                                              std::span<const double> xi,
                                              double rel_tol = 1e-10);

const MomentConstants& lemma22_constants();

struct MomentRatios {
    double ratioA = 0.0;
    double ratioB = 0.0;
};

/// ratioA = |A(xi)| / (|xi| l11), ratioB = |B(xi)| / (|xi| l11); the moment
/// bound asserts ratioA <= L and ratioB <= M. xi = 0 reports zeros.
MomentRatios lemma22_check(const InitialDatumSpec& datum,
                           std::span<const double> xi);
MomentRatios lemma22_check(const InitialDatumSpec& datum,
                           std::span<const double> xi, const Moments& m);

} // namespace strongdamp::data
