#pragma once

// Thin FFTW wrapper with continuum normalization: forward transforms return
// samples of (2pi)^{-d/2} int w(x) e^{-i xi x} dx on the discrete frequency
// lattice, so weighted l2 sums approximate weighted L2 frequency integrals
// and Parseval holds exactly against the Riemann sum in x.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace hlab {

struct Spectrum {
    std::vector<std::size_t> shape;   // N per axis
    std::vector<double> length;       // spatial period L per axis
    std::vector<std::complex<double>> data;  // row-major, FFTW frequency order

    std::size_t size() const {
        std::size_t n = 1;
        for (auto s : shape) n *= s;
        return n;
    }

    // Signed integer mode number on an axis from the FFTW storage index.
    long mode(std::size_t axis, std::size_t idx) const {
        long N = long(shape[axis]);
        long n = long(idx);
        return (n <= N / 2) ? n : n - N;
    }

    double xi(std::size_t axis, std::size_t idx) const {
        return 2.0 * M_PI * double(mode(axis, idx)) / length[axis];
    }

    // Frequency cell volume prod 2pi/L.
    double dxi() const {
        double v = 1.0;
        for (auto L : length) v *= 2.0 * M_PI / L;
        return v;
    }
};

namespace detail {

inline std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

inline void run_dft(std::vector<std::complex<double>>& buf,
                    const std::vector<std::size_t>& shape, int sign) {
    std::vector<int> dims(shape.begin(), shape.end());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_dft(int(dims.size()), dims.data(),
                             reinterpret_cast<fftw_complex*>(buf.data()),
                             reinterpret_cast<fftw_complex*>(buf.data()),
                             sign, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("fftw plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
}

}  // namespace detail

// Forward transform of samples taken at x_j = -L/2 + j L/N per axis.
inline Spectrum fft_forward(const std::vector<std::size_t>& shape,
                            const std::vector<double>& length,
                            std::vector<std::complex<double>> samples) {
    if (shape.empty() || shape.size() != length.size())
        throw std::invalid_argument("fft_forward: shape/length mismatch");
    std::size_t total = 1;
    for (auto n : shape) {
        if (n < 2) throw std::invalid_argument("fft_forward: axis needs at least 2 samples");
        total *= n;
    }
    if (samples.size() != total)
        throw std::invalid_argument("fft_forward: sample count mismatch");
    for (double L : length)
        if (!(L > 0.0)) throw std::invalid_argument("fft_forward: period must be positive");

    detail::run_dft(samples, shape, FFTW_FORWARD);

    const std::size_t d = shape.size();
    double cell = 1.0;
    for (std::size_t a = 0; a < d; ++a) cell *= length[a] / double(shape[a]);
    double norm = cell * std::pow(2.0 * M_PI, -0.5 * double(d));

    Spectrum spec;
    spec.shape = shape;
    spec.length = length;
    spec.data = std::move(samples);

    // The sample origin at -L/2 contributes a (-1)^{sum n_i} phase per mode.
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        long parity = 0;
        for (std::size_t a = 0; a < d; ++a) parity += spec.mode(a, idx[a]);
        double sgn = (parity & 1L) ? -1.0 : 1.0;
        spec.data[flat] *= sgn * norm;
        for (std::size_t a = d; a-- > 0;) {
            if (++idx[a] < shape[a]) break;
            idx[a] = 0;
        }
    }
    return spec;
}

// Inverse of fft_forward, returning samples at x_j = -L/2 + j L/N.
inline std::vector<std::complex<double>> fft_inverse(Spectrum spec) {
    const std::size_t d = spec.shape.size();
    const std::size_t total = spec.size();
    if (spec.data.size() != total)
        throw std::invalid_argument("fft_inverse: data size mismatch");

    double cell = 1.0;
    for (std::size_t a = 0; a < d; ++a) cell *= spec.length[a] / double(spec.shape[a]);
    double norm = spec.dxi() * std::pow(2.0 * M_PI, -0.5 * double(d));

    std::vector<std::size_t> idx(d, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        long parity = 0;
        for (std::size_t a = 0; a < d; ++a) parity += spec.mode(a, idx[a]);
        double sgn = (parity & 1L) ? -1.0 : 1.0;
        spec.data[flat] *= sgn * norm;
        for (std::size_t a = d; a-- > 0;) {
            if (++idx[a] < spec.shape[a]) break;
            idx[a] = 0;
        }
    }
    detail::run_dft(spec.data, spec.shape, FFTW_BACKWARD);
    return std::move(spec.data);
}

}  // namespace hlab
