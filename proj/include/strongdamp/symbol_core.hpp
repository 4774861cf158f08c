#pragma once

#include <complex>

namespace strongdamp::symbol {

/// Default radius of the low-frequency ball. Keeps 4 - delta0^2 well away
/// from zero while leaving a nontrivial ball.
inline constexpr double kDefaultDelta0 = 0.5;

/// Half-width of the band around r = 2 where the characteristic roots
/// coalesce and the multiplier formulas switch to the double-root series.
inline constexpr double kConfluenceEta = 1e-4;

enum class Regime { Oscillatory, Confluent, Overdamped };

/// Roots of lambda^2 + r^2 lambda + r^2 = 0 at radial frequency r = |xi|.
/// sigma1 is the slow root (largest real part); the pair satisfies
/// sigma1 + sigma2 = -r^2 and sigma1 * sigma2 = r^2.
struct DispersionRoots {
    std::complex<double> sigma1;
    std::complex<double> sigma2;
    Regime regime;
};

DispersionRoots dispersion_roots(double r, double eta = kConfluenceEta);

/// Multipliers carrying the mode data forward in time:
///   u_hat(t) = m1 * u1_hat + m0 * u0_hat,  d/dt u_hat = dm1 u1_hat + dm0 u0_hat.
/// Real-valued for every r >= 0 (the complex parts of the root pair cancel).
struct ModeMultipliers {
    double m1;
    double m0;
    double dm1;
    double dm0;
};

ModeMultipliers mode_multipliers(double t, double r);

/// The same four multipliers evaluated through the complex exponential
/// route (e^{sigma t} differences). Less accurate when |sigma1 - sigma2| t
/// is tiny; exposed as the independent second path for identity checks.
struct ModeMultipliersC {
    std::complex<double> m1;
    std::complex<double> m0;
    std::complex<double> dm1;
    std::complex<double> dm0;
};

ModeMultipliersC mode_multipliers_exp(double t, double r);

/// The limit profile in Fourier variables:
///   p_sin = e^{-t r^2/2} sin(t r)/r   (value t at r = 0),
///   p_cos = e^{-t r^2/2} cos(t r).
struct ProfileMultipliers {
    double p_sin;
    double p_cos;
};

ProfileMultipliers profile_multipliers(double t, double r);

/// Data entering the low-frequency decomposition at one xi: masses P0, P1
/// and the oscillatory parts A_j, B_j of u_j_hat = A_j - i B_j + P_j.
struct LowFreqData {
    double P0 = 0.0;
    double P1 = 0.0;
    double A0 = 0.0;
    double B0 = 0.0;
    double A1 = 0.0;
    double B1 = 0.0;
};

/// The three explicitly constructible error terms of the low-frequency
/// decomposition (valid for 0 < r < 2):
///   k1 = P0 r e^{-t r^2/2} sin(phi)/w,  phi = t r w / 2,  w = sqrt(4 - r^2)
///   k2 = (A1 - i B1) m1
///   k3 = (A0 - i B0) m0
struct KTermsExplicit {
    std::complex<double> k1;
    std::complex<double> k2;
    std::complex<double> k3;
};

KTermsExplicit k_terms_explicit(double t, double r, const LowFreqData& d);

/// Machine-precision identity check: u_hat(t) computed through the
/// exponential route minus its reassembly
///   2 P1 e^{-t r^2/2} sin(phi)/(r w) + P0 e^{-t r^2/2} cos(phi) + k1 + k2 + k3.
/// Mathematically zero for 0 < r < 2.
std::complex<double> decomposition_residual(double t, double r,
                                            std::complex<double> u0_hat,
                                            std::complex<double> u1_hat,
                                            const LowFreqData& d);

/// |u_hat(t) - (P1 p_sin + P0 p_cos)|^2, the pointwise integrand of the
/// low-frequency error estimate.
double low_freq_error_integrand(double t, double r,
                                std::complex<double> u0_hat,
                                std::complex<double> u1_hat, double P0,
                                double P1);

/// Per-mode energy |u_hat_t|^2 + r^2 |u_hat|^2.
double hf_energy(double t, double r, std::complex<double> u0_hat,
                 std::complex<double> u1_hat);

/// Closed-form upper bounds on int_{|xi|<=delta0} |K_j|^2 dxi, with every
/// constant kept explicit. J(2k) denotes the truncated Gaussian moment
/// int_{|xi|<=delta0} |xi|^{2k} e^{-t|xi|^2} dxi.
///   b1 = P0^2 / (4 - d0^2) * J(2)
///   b2 = (L^2 + M^2) |u1|_{1,1}^2 * 4/(4 - d0^2) * J(0)
///   b3 = (L^2 + M^2) |u0|_{1,1}^2 * (J(4)/(4 - d0^2) + J(2))
///   b4 = t^2 / (4 - d0^2) * J(4)
///   b5 = t^2 / 4 * J(6)
///   b6 = 4 P1^2 / (4 - d0^2)^3 * J(2)
struct KTermMajorants {
    double b1, b2, b3, b4, b5, b6;
};

KTermMajorants k_majorants(double t, int n, double delta0, double P0,
                           double P1, double norm11_u0, double norm11_u1,
                           double L, double M);

} // namespace strongdamp::symbol
