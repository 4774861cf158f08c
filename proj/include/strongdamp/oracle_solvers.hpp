#pragma once

#include <complex>
#include <string>
#include <vector>

#include "strongdamp/data_model.hpp"

namespace strongdamp::oracle {

/// One Fourier mode: v = u_hat at a single xi, vdot its time derivative.
struct ModeState {
    std::complex<double> v;
    std::complex<double> vdot;
};

/// Classical 4th-order one-step integration of
///   v'' + r^2 v' + r^2 v = 0,  v(0) = v0, v'(0) = v1,
/// up to time t. Requires dt <= min(0.1, 1/r^2); growth beyond the
/// analytic envelope aborts with an error naming r and dt.
ModeState mode_ode_evolve(double r, std::complex<double> v0,
                          std::complex<double> v1, double t, double dt);

struct GridSpec {
    int n = 1;       // spatial dimension, 1..3
    int N = 0;       // points per axis, power of two, >= 8
    double L = 0.0;  // box edge length, grid on [-L/2, L/2)
};

struct GridField {
    int n = 1;
    int N = 0;
    double L = 0.0;
    std::vector<double> values; // row-major, N^n entries
};

GridField sample_datum(const data::InitialDatumSpec& datum,
                       const GridSpec& grid);

/// Evolve the pair (u0, u1) to time t by applying the exact per-mode
/// multipliers in the discrete Fourier basis. No time stepping: the only
/// error is spatial discretization.
GridField grid_evolve(const GridField& u0, const GridField& u1, double t);

struct GridState {
    GridField u;
    GridField ut;
};
GridState grid_evolve_state(const GridField& u0, const GridField& u1,
                            double t);

/// Inverse transform of the profile multipliers combined with P0, P1.
GridField grid_profile(double t, double P0, double P1, const GridSpec& grid);

struct GuardResult {
    bool pass = false;
    double needed = 0.0; // minimal box edge for this horizon
    double margin = 0.0; // L - needed
};

/// Periodic wrap-around guard: the profile rides the unit-speed cone and
/// spreads diffusively, so the box must satisfy
/// L >= 2 (t + data_radius + 6 sqrt(t)).
GuardResult wraparound_guard(double t, double data_radius, double L);

/// sqrt( h^n sum u_j^2 ), the discrete L^2 norm.
double field_l2(const GridField& f);

/// Discrete energy ||ut||^2 + ||grad u||^2 with the spectral gradient.
double grid_energy(const GridField& u, const GridField& ut);

/// Scaled discrete transform of the samples: approximates the continuous
/// unnormalized u_hat at the grid frequencies 2 pi k / L, row-major over
/// wrapped indices.
std::vector<std::complex<double>> discrete_spectrum(const GridField& f);

/// Flat binary layout: three little-endian 64-bit header values n, N, L
/// followed by N^n doubles, plus a one-line JSON sidecar at path + ".json".
void save_field(const GridField& f, const std::string& path);
GridField load_field(const std::string& path);

} // namespace strongdamp::oracle
