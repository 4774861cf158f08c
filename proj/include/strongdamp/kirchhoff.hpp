#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "strongdamp/oracle_solvers.hpp"

namespace strongdamp::kirchhoff {

/// Heat kernel G(t, x) = (2 pi)^{-n/2} t^{-n/2} exp(-|x|^2/(2t)); with the
/// unnormalized transform convention its transform is exp(-t |xi|^2 / 2)
/// and its mass is 1 for every t.
double gaussian_kernel_eval(double t, std::span<const double> x, int n);

/// Smooth test field with an analytic gradient, the input of the
/// convolution operators below.
template <int N>
struct SmoothField {
    std::function<double(const std::array<double, N>&)> value;
    std::function<std::array<double, N>(const std::array<double, N>&)> grad;
};

/// Quadrature rule nodes z_i with weights w_i. For n = 3 the pairs
/// discretize the surface measure on S^2 (sum w = 4 pi); for n = 2 they
/// discretize the weighted disk measure dz / sqrt(1 - |z|^2) (sum w = 2 pi)
/// through the rho = sin(psi) substitution that removes the boundary
/// singularity.
struct SphereRule {
    std::vector<std::array<double, 3>> nodes;
    std::vector<double> weights;
};
struct DiskRule {
    std::vector<std::array<double, 2>> nodes;
    std::vector<double> weights;
};

SphereRule make_sphere_rule(int n_polar, int n_azimuth);
DiskRule make_disk_rule(int n_radial, int n_azimuth);

/// Action of the free-wave propagator (data (0, delta)) convolved with h:
///   n = 3:  t/(4 pi) * int_{|z|=1} h(x + t z) dS_z
///   n = 2:  t/(2 pi) * int_{|z|<=1} h(x + t z)/sqrt(1-|z|^2) dz
double wave_convolution(double t, const std::array<double, 3>& x,
                        const SmoothField<3>& h, const SphereRule& rule);
double wave_convolution(double t, const std::array<double, 2>& x,
                        const SmoothField<2>& h, const DiskRule& rule);

/// Time derivative of the operator above (the propagator applied to data
/// (delta, 0)); expands into the zeroth plus first-order directional term.
double wave_dt_convolution(double t, const std::array<double, 3>& x,
                           const SmoothField<3>& h, const SphereRule& rule);
double wave_dt_convolution(double t, const std::array<double, 2>& x,
                           const SmoothField<2>& h, const DiskRule& rule);

/// Physical-space profile P1 (w * G) + P0 (w_t * G) at a point, with rule
/// sizes chosen from (t, |x|). These reproduce the inverse transform of
/// e^{-t|xi|^2/2} (P1 sin(t|xi|)/|xi| + P0 cos(t|xi|)).
double profile_n3(double t, const std::array<double, 3>& x, double P0,
                  double P1);
double profile_n2(double t, const std::array<double, 2>& x, double P0,
                  double P1);

/// The constants in front of the spherical-mean / weighted-disk formulas.
/// Validated at construction by plane-wave eigenchecks: applying the
/// operators to cos(k.x) must return sin(t|k|)/|k| cos(k.x) and
/// cos(t|k|) cos(k.x).
struct KirchhoffCoefficients {
    int n;
    double a0; // zeroth-order coefficient of w * h
    double b0; // zeroth-order coefficient of w_t * h
    double b1; // first-order (|alpha| = 1) coefficient of w_t * h
};

const KirchhoffCoefficients& kirchhoff_coefficients(int n);

/// Worst absolute defect of the two eigenchecks at wavenumber |k| = knorm.
double eigencheck_residual(int n, double knorm);

/// Profile evaluated over a whole grid through a dense radial table with
/// cubic interpolation (the profile is radial for point-mass data).
oracle::GridField profile_field(double t, double P0, double P1,
                                const oracle::GridSpec& grid);

} // namespace strongdamp::kirchhoff
