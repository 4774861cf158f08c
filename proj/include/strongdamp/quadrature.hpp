#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace strongdamp::quad {

/// Result of an adaptive quadrature: value plus an a-posteriori error
/// estimate and the number of subintervals the adaptive pass settled on.
struct IntegralResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
};

/// Thrown when the adaptive scheme cannot meet the requested tolerance
/// within the subdivision budget. Carries the best estimate obtained so
/// callers can decide whether to propagate or degrade gracefully.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& msg, IntegralResult best)
        : std::runtime_error(msg), best_estimate(best) {}
    IntegralResult best_estimate;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss7/Kronrod15 on [a, b]. The local error indicator is the
/// usual |G7 - K15| comparison; intervals are bisected until the summed
/// indicator meets tol (relative to the running value, with an absolute
/// floor). Deterministic: intervals are processed in a fixed order.
IntegralResult integrate(const Integrand& f, double a, double b,
                         double rel_tol = 1e-10, double abs_floor = 1e-300,
                         int max_intervals = 200000);

/// Surface measure of the unit sphere in R^n: 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

/// Specification of omega_{n-1} * int r^{n-1} f(r) dr over [a, b] or
/// [a, inf). Semi-infinite integrals require a Gaussian decay certificate
/// f(r) <= amp * r^poly_degree * exp(-gauss_rate r^2) used to pick and
/// certify the truncation radius; amp is probed from f itself.
struct RadialIntegralSpec {
    int dimension = 1;
    Integrand f;
    double a = 0.0;
    double b = 0.0;          // ignored when semi_infinite
    bool semi_infinite = false;
    double rel_tol = 1e-10;
    double gauss_rate = 0.0; // required when semi_infinite
    int poly_degree = 0;     // r-power in the tail certificate
};

IntegralResult radial_integral(const RadialIntegralSpec& spec);

/// int_{|xi| <= upper} |xi|^{2k} e^{-t |xi|^2} dxi in R^n. upper = inf
/// (pass infinity) uses the closed form
/// Gamma((n+2k)/2)/Gamma(n/2) * t^{-k} (pi/t)^{n/2}; finite upper goes
/// through radial_integral.
double gaussian_moment(int k, double t, int n, double upper,
                       double rel_tol = 1e-11);

/// Certified bound on int_R^inf r^m e^{-rate r^2} dr via integration by
/// parts; valid (and finite) when 2*rate*R^2 > m - 1.
double gaussian_tail_bound(double R, int m, double rate);

} // namespace strongdamp::quad
