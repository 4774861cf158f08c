#include "strongdamp/oracle_solvers.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include <json.hpp>

#include "strongdamp/symbol_core.hpp"

namespace strongdamp::oracle {

namespace {

using cplx = std::complex<double>;

std::mutex& fftw_mutex() {
    static std::mutex mu;
    return mu;
}

struct FftBuffer {
    fftw_complex* data = nullptr;
    size_t size = 0;
    explicit FftBuffer(size_t n) : size(n) {
        data = fftw_alloc_complex(n);
        if (!data) throw std::bad_alloc();
    }
    ~FftBuffer() { fftw_free(data); }
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;
    cplx& at(size_t i) { return reinterpret_cast<cplx*>(data)[i]; }
};

void run_fft(int n, int N, fftw_complex* buf, int sign) {
    int dims[3] = {N, N, N};
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_dft(n, dims, buf, buf, sign, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("fftw plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
}

size_t total_points(const GridSpec& g) {
    size_t total = 1;
    for (int i = 0; i < g.n; ++i) total *= static_cast<size_t>(g.N);
    return total;
}

void check_grid(int n, int N, double L) {
    if (n < 1 || n > 3)
        throw std::invalid_argument("grid: dimension must be 1, 2 or 3");
    if (N < 8 || (N & (N - 1)) != 0)
        throw std::invalid_argument("grid: N must be a power of two >= 8");
    if (!(L > 0.0)) throw std::invalid_argument("grid: L > 0 required");
}

// Radial frequency |xi| and the (-1)^{sum k} offset phase for each
// row-major mode index.
void mode_tables(int n, int N, double L, std::vector<double>& radius,
                 std::vector<signed char>& parity) {
    const double dxi = 2.0 * M_PI / L;
    size_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<size_t>(N);
    radius.resize(total);
    parity.resize(total);
    for (size_t idx = 0; idx < total; ++idx) {
        size_t rem = idx;
        double r2 = 0.0;
        int ksum = 0;
        for (int axis = 0; axis < n; ++axis) {
            size_t stride = 1;
            for (int a = axis + 1; a < n; ++a) stride *= N;
            const int k = static_cast<int>((rem / stride) % N);
            rem %= stride;
            const int kw = (k < N / 2) ? k : k - N;
            r2 += double(kw) * double(kw);
            ksum += k;
        }
        radius[idx] = dxi * std::sqrt(r2);
        parity[idx] = (ksum % 2 == 0) ? 1 : -1;
    }
}

GridField real_part_checked(int n, int N, double L, FftBuffer& buf,
                            double scale) {
    const size_t total = buf.size;
    GridField out{n, N, L, std::vector<double>(total)};
    double norm2 = 0.0, imag2 = 0.0;
    for (size_t i = 0; i < total; ++i) {
        const cplx z = buf.at(i) * scale;
        out.values[i] = z.real();
        norm2 += z.real() * z.real();
        imag2 += z.imag() * z.imag();
    }
    if (!(std::sqrt(imag2) <= 1e-10 * std::sqrt(norm2) + 1e-14))
        throw std::runtime_error(
            "grid transform produced a non-negligible imaginary part");
    for (double v : out.values)
        if (!std::isfinite(v))
            throw std::runtime_error("grid transform produced NaN/Inf");
    return out;
}

void write_le_u64(std::ofstream& os, uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
    os.write(reinterpret_cast<const char*>(b), 8);
}

uint64_t read_le_u64(std::ifstream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(b[i]) << (8 * i);
    return v;
}

} // namespace

ModeState mode_ode_evolve(double r, cplx v0, cplx v1, double t, double dt) {
    if (!(dt > 0.0) || !(t >= 0.0))
        throw std::invalid_argument("mode_ode_evolve: need dt > 0, t >= 0");
    const double dt_max = std::min(0.1, r > 0.0 ? 1.0 / (r * r) : 0.1);
    if (dt > dt_max * (1.0 + 1e-12))
        throw std::invalid_argument(
            "mode_ode_evolve: dt=" + std::to_string(dt) +
            " violates the stability rule dt <= min(0.1, 1/r^2) at r=" +
            std::to_string(r));
    if (t == 0.0) return {v0, v1};

    const long steps = static_cast<long>(std::ceil(t / dt - 1e-12));
    const double h = t / steps;
    const double r2 = r * r;
    const double envelope =
        10.0 * (std::abs(v0) + std::abs(v1)) * (1.0 + t) * (1.0 + t) + 1e-300;

    cplx v = v0, w = v1;
    auto acc = [r2](cplx vv, cplx ww) { return -r2 * (vv + ww); };
    for (long s = 0; s < steps; ++s) {
        const cplx k1v = w, k1w = acc(v, w);
        const cplx k2v = w + 0.5 * h * k1w,
                   k2w = acc(v + 0.5 * h * k1v, w + 0.5 * h * k1w);
        const cplx k3v = w + 0.5 * h * k2w,
                   k3w = acc(v + 0.5 * h * k2v, w + 0.5 * h * k2w);
        const cplx k4v = w + h * k3w, k4w = acc(v + h * k3v, w + h * k3w);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        if (!(std::abs(v) <= envelope) || !(std::abs(w) <= envelope))
            throw std::runtime_error(
                "mode_ode_evolve: instability at r=" + std::to_string(r) +
                ", dt=" + std::to_string(h));
    }
    return {v, w};
}

GridField sample_datum(const data::InitialDatumSpec& datum,
                       const GridSpec& grid) {
    check_grid(grid.n, grid.N, grid.L);
    if (datum.dimension != grid.n)
        throw std::invalid_argument("sample_datum: dimension mismatch");
    const size_t total = total_points(grid);
    GridField out{grid.n, grid.N, grid.L, std::vector<double>(total)};
    const double h = grid.L / grid.N;
    std::vector<double> x(grid.n);
    for (size_t idx = 0; idx < total; ++idx) {
        size_t rem = idx;
        for (int axis = grid.n - 1; axis >= 0; --axis) {
            x[axis] = -0.5 * grid.L + (rem % grid.N) * h;
            rem /= grid.N;
        }
        out.values[idx] = data::evaluate(datum, x);
    }
    return out;
}

GridState grid_evolve_state(const GridField& u0, const GridField& u1,
                            double t) {
    check_grid(u0.n, u0.N, u0.L);
    if (u0.n != u1.n || u0.N != u1.N || u0.L != u1.L)
        throw std::invalid_argument("grid_evolve: grids must match");
    if (!(t >= 0.0)) throw std::invalid_argument("grid_evolve: t >= 0");
    const size_t total = u0.values.size();

    FftBuffer f0(total), f1(total);
    for (size_t i = 0; i < total; ++i) {
        f0.at(i) = u0.values[i];
        f1.at(i) = u1.values[i];
    }
    run_fft(u0.n, u0.N, f0.data, FFTW_FORWARD);
    run_fft(u0.n, u0.N, f1.data, FFTW_FORWARD);

    std::vector<double> radius;
    std::vector<signed char> parity;
    mode_tables(u0.n, u0.N, u0.L, radius, parity);

    FftBuffer fu(total), fut(total);
    for (size_t i = 0; i < total; ++i) {
        const symbol::ModeMultipliers m = symbol::mode_multipliers(t, radius[i]);
        const cplx a = f0.at(i), b = f1.at(i);
        fu.at(i) = m.m1 * b + m.m0 * a;
        fut.at(i) = m.dm1 * b + m.dm0 * a;
    }
    run_fft(u0.n, u0.N, fu.data, FFTW_BACKWARD);
    run_fft(u0.n, u0.N, fut.data, FFTW_BACKWARD);

    const double scale = 1.0 / static_cast<double>(total);
    GridState out;
    out.u = real_part_checked(u0.n, u0.N, u0.L, fu, scale);
    out.ut = real_part_checked(u0.n, u0.N, u0.L, fut, scale);
    return out;
}

GridField grid_evolve(const GridField& u0, const GridField& u1, double t) {
    return grid_evolve_state(u0, u1, t).u;
}

GridField grid_profile(double t, double P0, double P1, const GridSpec& grid) {
    check_grid(grid.n, grid.N, grid.L);
    if (!(t >= 0.0)) throw std::invalid_argument("grid_profile: t >= 0");
    const size_t total = total_points(grid);
    std::vector<double> radius;
    std::vector<signed char> parity;
    mode_tables(grid.n, grid.N, grid.L, radius, parity);

    FftBuffer buf(total);
    for (size_t i = 0; i < total; ++i) {
        const symbol::ProfileMultipliers p =
            symbol::profile_multipliers(t, radius[i]);
        buf.at(i) = double(parity[i]) * (P1 * p.p_sin + P0 * p.p_cos);
    }
    run_fft(grid.n, grid.N, buf.data, FFTW_BACKWARD);
    const double scale = 1.0 / std::pow(grid.L, grid.n);
    return real_part_checked(grid.n, grid.N, grid.L, buf, scale);
}

GuardResult wraparound_guard(double t, double data_radius, double L) {
    GuardResult g;
    g.needed = 2.0 * (t + data_radius + 6.0 * std::sqrt(std::max(t, 0.0)));
    g.margin = L - g.needed;
    g.pass = g.margin >= 0.0;
    return g;
}

double field_l2(const GridField& f) {
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(s * std::pow(f.L / f.N, f.n));
}

double grid_energy(const GridField& u, const GridField& ut) {
    if (u.n != ut.n || u.N != ut.N || u.L != ut.L)
        throw std::invalid_argument("grid_energy: grids must match");
    double e = 0.0;
    for (double v : ut.values) e += v * v;
    e *= std::pow(u.L / u.N, u.n);

    const size_t total = u.values.size();
    FftBuffer buf(total);
    for (size_t i = 0; i < total; ++i) buf.at(i) = u.values[i];
    run_fft(u.n, u.N, buf.data, FFTW_FORWARD);
    std::vector<double> radius;
    std::vector<signed char> parity;
    mode_tables(u.n, u.N, u.L, radius, parity);
    double grad = 0.0;
    for (size_t i = 0; i < total; ++i)
        grad += radius[i] * radius[i] * std::norm(buf.at(i));
    grad *= std::pow(u.L / u.N, u.n) / static_cast<double>(total);
    return e + grad;
}

std::vector<cplx> discrete_spectrum(const GridField& f) {
    check_grid(f.n, f.N, f.L);
    const size_t total = f.values.size();
    FftBuffer buf(total);
    for (size_t i = 0; i < total; ++i) buf.at(i) = f.values[i];
    run_fft(f.n, f.N, buf.data, FFTW_FORWARD);
    std::vector<double> radius;
    std::vector<signed char> parity;
    mode_tables(f.n, f.N, f.L, radius, parity);
    const double cell = std::pow(f.L / f.N, f.n);
    std::vector<cplx> out(total);
    for (size_t i = 0; i < total; ++i)
        out[i] = cell * double(parity[i]) * buf.at(i);
    return out;
}

void save_field(const GridField& f, const std::string& path) {
    check_grid(f.n, f.N, f.L);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_field: cannot open " + path);
    write_le_u64(os, static_cast<uint64_t>(f.n));
    write_le_u64(os, static_cast<uint64_t>(f.N));
    write_le_u64(os, std::bit_cast<uint64_t>(f.L));
    for (double v : f.values) write_le_u64(os, std::bit_cast<uint64_t>(v));
    if (!os) throw std::runtime_error("save_field: write failed: " + path);

    nlohmann::ordered_json meta;
    meta["format"] = "strongdamp-grid-v1";
    meta["n"] = f.n;
    meta["N"] = f.N;
    meta["L"] = f.L;
    meta["count"] = f.values.size();
    std::ofstream js(path + ".json");
    js << meta.dump() << "\n";
}

GridField load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_field: cannot open " + path);
    GridField f;
    f.n = static_cast<int>(read_le_u64(is));
    f.N = static_cast<int>(read_le_u64(is));
    f.L = std::bit_cast<double>(read_le_u64(is));
    check_grid(f.n, f.N, f.L);
    size_t total = 1;
    for (int i = 0; i < f.n; ++i) total *= static_cast<size_t>(f.N);
    f.values.resize(total);
    for (size_t i = 0; i < total; ++i)
        f.values[i] = std::bit_cast<double>(read_le_u64(is));
    if (!is) throw std::runtime_error("load_field: truncated file: " + path);
    return f;
}

} // namespace strongdamp::oracle
