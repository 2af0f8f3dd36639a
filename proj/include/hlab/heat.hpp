#pragma once

// Heat equation solver on a space-time box and the norm experiments built on
// it. The solver lifts inhomogeneous edge data, expands the remainder in the
// eigenbasis of the second derivative (sine modes for Dirichlet edges, cosine
// modes for Neumann edges), and advances each mode with the trapezoidal rule.
// Space is treated spectrally through the exact mode eigenvalues, so smooth
// band-limited solutions show the pure second order behaviour in time.

#include <hlab/compatibility.hpp>
#include <hlab/fft.hpp>
#include <hlab/spaces.hpp>
#include <hlab/symbols.hpp>

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hlab {

struct HeatProblemSpec {
    double l = 1.0;
    double tau = 1.0;
    bool neumann = false;
    std::function<double(double, double)> f;  // forcing f(x, t)
    std::function<double(double)> g0, g1;     // edge data at x = 0 and x = l
    std::function<double(double)> h;          // initial data

    void validate() const {
        if (!(l > 0.0) || !(tau > 0.0))
            throw std::invalid_argument("heat problem: l and tau must be positive");
    }
};

namespace detail {

inline double eval_or_zero(const std::function<double(double, double)>& f, double x, double t) {
    return f ? f(x, t) : 0.0;
}
inline double eval_or_zero(const std::function<double(double)>& f, double t) {
    return f ? f(t) : 0.0;
}

// centered difference; edge data callables must admit evaluation slightly
// outside [0, tau]
inline double time_derivative(const std::function<double(double)>& f, double t, double tau) {
    if (!f) return 0.0;
    double h = 1e-5 * std::max(1.0, tau);
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

struct R2RPlan {
    fftw_plan plan = nullptr;
    std::vector<double> buf;

    R2RPlan(int n, fftw_r2r_kind kind) : buf(std::size_t(n)) {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_r2r_1d(n, buf.data(), buf.data(), kind, FFTW_ESTIMATE);
        if (!plan) throw std::runtime_error("fftw r2r plan creation failed");
    }
    ~R2RPlan() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
    R2RPlan(const R2RPlan&) = delete;
    R2RPlan& operator=(const R2RPlan&) = delete;

    void run() { fftw_execute(plan); }
};

}  // namespace detail

// Crank-Nicolson in time, eigenmodes in space. Returns the solution on the
// inclusive (Nx + 1) x (Nt + 1) grid with time as the second axis.
inline BoxField solve_heat(const HeatProblemSpec& spec, std::size_t Nx, std::size_t Nt) {
    spec.validate();
    if (Nx < 4 || Nt < 2) throw std::invalid_argument("solve_heat: grid too small");
    const double l = spec.l, tau = spec.tau;
    const double dx = l / double(Nx), dt = tau / double(Nt);

    BoxField out;
    out.shape = {Nx + 1, Nt + 1};
    out.lower = {0.0, 0.0};
    out.upper = {l, tau};
    out.data.assign((Nx + 1) * (Nt + 1), 0.0);

    // lift carrying the edge data; w = u - lift has homogeneous edges
    auto lift = [&](double x, double t) {
        double a = detail::eval_or_zero(spec.g0, t), b = detail::eval_or_zero(spec.g1, t);
        if (spec.neumann) return a * (x - x * x / (2.0 * l)) + b * (x * x / (2.0 * l));
        return a * (1.0 - x / l) + b * (x / l);
    };
    auto lift_t = [&](double x, double t) {
        double a = detail::time_derivative(spec.g0, t, tau);
        double b = detail::time_derivative(spec.g1, t, tau);
        if (spec.neumann) return a * (x - x * x / (2.0 * l)) + b * (x * x / (2.0 * l));
        return a * (1.0 - x / l) + b * (x / l);
    };
    // w_t - w_xx = f - lift_t + lift_xx
    auto forcing = [&](double x, double t) {
        double v = detail::eval_or_zero(spec.f, x, t) - lift_t(x, t);
        if (spec.neumann)
            v += (detail::eval_or_zero(spec.g1, t) - detail::eval_or_zero(spec.g0, t)) / l;
        return v;
    };

    const int nmode = spec.neumann ? int(Nx) + 1 : int(Nx) - 1;
    detail::R2RPlan plan(nmode, spec.neumann ? FFTW_REDFT00 : FFTW_RODFT00);

    // analysis: node values -> coefficients of cos/sin(k pi x / l)
    auto analyze = [&](const std::function<double(double)>& fn, std::vector<double>& coef) {
        if (spec.neumann) {
            for (int j = 0; j <= int(Nx); ++j) plan.buf[j] = fn(double(j) * dx);
            plan.run();
            coef.assign(Nx + 1, 0.0);
            for (int k = 0; k <= int(Nx); ++k) {
                double scale = (k == 0 || k == int(Nx)) ? 2.0 * double(Nx) : double(Nx);
                coef[k] = plan.buf[k] / scale;
            }
        } else {
            for (int j = 1; j < int(Nx); ++j) plan.buf[j - 1] = fn(double(j) * dx);
            plan.run();
            coef.assign(Nx - 1, 0.0);
            for (int k = 1; k < int(Nx); ++k) coef[k - 1] = plan.buf[k - 1] / double(Nx);
        }
    };
    // synthesis back to node values, written into the output column
    auto synthesize = [&](const std::vector<double>& coef, std::size_t it) {
        if (spec.neumann) {
            for (int k = 0; k <= int(Nx); ++k) plan.buf[k] = coef[k] * 0.5;
            plan.buf[0] *= 2.0;
            plan.buf[Nx] *= 2.0;
            plan.run();
            for (std::size_t j = 0; j <= Nx; ++j) out.data[j * (Nt + 1) + it] = plan.buf[j];
        } else {
            for (int k = 0; k < nmode; ++k) plan.buf[k] = coef[k] * 0.5;
            plan.run();
            for (std::size_t j = 1; j < Nx; ++j) out.data[j * (Nt + 1) + it] = plan.buf[j - 1];
        }
    };

    std::vector<double> w, fprev, fnext;
    analyze([&](double x) {
        return detail::eval_or_zero(spec.h, x) - lift(x, 0.0);
    }, w);
    synthesize(w, 0);
    analyze([&](double x) { return forcing(x, 0.0); }, fprev);

    std::vector<double> lambda(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        double mode = spec.neumann ? double(k) : double(k + 1);
        lambda[k] = (mode * M_PI / l) * (mode * M_PI / l);
    }

    for (std::size_t n = 0; n < Nt; ++n) {
        double tn1 = double(n + 1) * dt;
        analyze([&](double x) { return forcing(x, tn1); }, fnext);
        for (std::size_t k = 0; k < w.size(); ++k) {
            double r = 0.5 * dt * lambda[k];
            w[k] = (w[k] * (1.0 - r) + 0.5 * dt * (fprev[k] + fnext[k])) / (1.0 + r);
        }
        synthesize(w, n + 1);
        fprev.swap(fnext);
    }

    // overlay the lift (also fills the Dirichlet edge rows exactly)
    for (std::size_t j = 0; j <= Nx; ++j) {
        double x = double(j) * dx;
        for (std::size_t it = 0; it <= Nt; ++it)
            out.data[j * (Nt + 1) + it] += lift(x, double(it) * dt);
    }
    return out;
}

inline double relative_l2_error(const BoxField& u,
                                const std::function<double(double, double)>& exact) {
    u.validate();
    if (u.shape.size() != 2) throw std::invalid_argument("relative_l2_error: expected a 2-d field");
    BoxField diff = u, ref = u;
    for (std::size_t j = 0; j < u.shape[0]; ++j) {
        double x = u.coord(0, j);
        for (std::size_t it = 0; it < u.shape[1]; ++it) {
            double e = exact(x, u.coord(1, it));
            diff.data[j * u.shape[1] + it] -= e;
            ref.data[j * u.shape[1] + it] = e;
        }
    }
    double denom = trapezoid_l2(ref);
    return trapezoid_l2(diff) / std::max(denom, 1e-300);
}

// Right-hand side bundle of the initial-boundary value problem: the interior
// forcing u_t - u_xx together with the two edge traces and the initial trace.
// Edge traces are values for Dirichlet problems and normal derivatives for
// Neumann problems.
struct LambdaBundle {
    BoxField f;       // interior forcing on the space-time box
    BoxField g0, g1;  // edge traces at x = 0 and x = l, over [0, tau]
    BoxField h;       // initial trace over [0, l]
};

// Applies the forward map u -> (u_t - u_xx, edge traces, initial trace) by
// second order finite differences: centered stencils inside, one-sided
// three and four point stencils on the first and last grid lines. Exact for
// solutions quadratic in x and linear in t, and O(dx^2 + dt^2) otherwise.
inline LambdaBundle apply_lambda(const HeatProblemSpec& spec, const BoxField& u) {
    spec.validate();
    u.validate();
    if (u.shape.size() != 2) throw std::invalid_argument("apply_lambda: expected a 2-d field");
    const std::size_t nx = u.shape[0], nt = u.shape[1];
    if (nx < 4 || nt < 3)
        throw std::invalid_argument("apply_lambda: need at least 4 x 3 grid points");
    const double dx = (u.upper[0] - u.lower[0]) / double(nx - 1);
    const double dt = (u.upper[1] - u.lower[1]) / double(nt - 1);
    auto at = [&](std::size_t j, std::size_t it) { return u.data[j * nt + it]; };

    LambdaBundle out;
    out.f.shape = u.shape;
    out.f.lower = u.lower;
    out.f.upper = u.upper;
    out.f.data.assign(nx * nt, 0.0);
    for (std::size_t j = 0; j < nx; ++j) {
        for (std::size_t it = 0; it < nt; ++it) {
            std::complex<double> ut;
            if (it == 0)
                ut = (-3.0 * at(j, 0) + 4.0 * at(j, 1) - at(j, 2)) / (2.0 * dt);
            else if (it == nt - 1)
                ut = (3.0 * at(j, nt - 1) - 4.0 * at(j, nt - 2) + at(j, nt - 3)) / (2.0 * dt);
            else
                ut = (at(j, it + 1) - at(j, it - 1)) / (2.0 * dt);
            std::complex<double> uxx;
            if (j == 0)
                uxx = (2.0 * at(0, it) - 5.0 * at(1, it) + 4.0 * at(2, it) - at(3, it)) /
                      (dx * dx);
            else if (j == nx - 1)
                uxx = (2.0 * at(nx - 1, it) - 5.0 * at(nx - 2, it) + 4.0 * at(nx - 3, it) -
                       at(nx - 4, it)) /
                      (dx * dx);
            else
                uxx = (at(j - 1, it) - 2.0 * at(j, it) + at(j + 1, it)) / (dx * dx);
            out.f.data[j * nt + it] = ut - uxx;
        }
    }

    auto edge_field = [&]() {
        BoxField e;
        e.shape = {nt};
        e.lower = {u.lower[1]};
        e.upper = {u.upper[1]};
        e.data.assign(nt, 0.0);
        return e;
    };
    out.g0 = edge_field();
    out.g1 = edge_field();
    for (std::size_t it = 0; it < nt; ++it) {
        if (spec.neumann) {
            out.g0.data[it] = (-3.0 * at(0, it) + 4.0 * at(1, it) - at(2, it)) / (2.0 * dx);
            out.g1.data[it] =
                (3.0 * at(nx - 1, it) - 4.0 * at(nx - 2, it) + at(nx - 3, it)) / (2.0 * dx);
        } else {
            out.g0.data[it] = at(0, it);
            out.g1.data[it] = at(nx - 1, it);
        }
    }

    out.h.shape = {nx};
    out.h.lower = {u.lower[0]};
    out.h.upper = {u.upper[0]};
    out.h.data.assign(nx, 0.0);
    for (std::size_t j = 0; j < nx; ++j) out.h.data[j] = at(j, 0);
    return out;
}

// Norm of a right-hand side bundle in the data space matched to solutions of
// anisotropic order (s, s/2): the interior forcing carries order s - 2, the
// edge traces s/2 - 1/4 (Dirichlet) or s/2 - 3/4 (Neumann), the initial trace
// s - 1, combined in root sum of squares. Requires s > 2 so every component
// order stays positive.
inline double q_space_norm(const HeatProblemSpec& spec, const LambdaBundle& bundle, double s,
                           const KaramataFunction& phi,
                           ExtensionStrategy strategy = ExtensionStrategy::ZeroPadTaper,
                           const WarningSink& sink = {}) {
    spec.validate();
    if (!(s > 2.0)) throw std::invalid_argument("q_space_norm: requires s > 2");
    RegularityIndex forcing_idx{s - 2.0, 0.5, phi, 1};
    double fnorm = norm_box(bundle.f, forcing_idx, strategy, sink);
    double edge_order = spec.neumann ? 0.5 * s - 0.75 : 0.5 * s - 0.25;
    RegularityIndex edge_idx{edge_order, 1.0, phi};
    double gnorm0 = norm_box(bundle.g0, edge_idx, strategy, sink);
    double gnorm1 = norm_box(bundle.g1, edge_idx, strategy, sink);
    RegularityIndex initial_idx{s - 1.0, 1.0, phi};
    double hnorm = norm_box(bundle.h, initial_idx, strategy, sink);
    return std::sqrt(fnorm * fnorm + gnorm0 * gnorm0 + gnorm1 * gnorm1 + hnorm * hnorm);
}

// Samples the prescribed problem data onto the grid as a right-hand side
// bundle, ready for q_space_norm.
inline LambdaBundle data_bundle(const HeatProblemSpec& spec, std::size_t Nx, std::size_t Nt) {
    spec.validate();
    LambdaBundle out;
    out.f.shape = {Nx + 1, Nt + 1};
    out.f.lower = {0.0, 0.0};
    out.f.upper = {spec.l, spec.tau};
    out.f.data.assign((Nx + 1) * (Nt + 1), 0.0);
    for (std::size_t j = 0; j <= Nx; ++j)
        for (std::size_t it = 0; it <= Nt; ++it)
            out.f.data[j * (Nt + 1) + it] =
                detail::eval_or_zero(spec.f, out.f.coord(0, j), out.f.coord(1, it));

    auto edge_field = [&](const std::function<double(double)>& g) {
        BoxField e;
        e.shape = {Nt + 1};
        e.lower = {0.0};
        e.upper = {spec.tau};
        e.data.assign(Nt + 1, 0.0);
        for (std::size_t it = 0; it <= Nt; ++it)
            e.data[it] = detail::eval_or_zero(g, e.coord(0, it));
        return e;
    };
    out.g0 = edge_field(spec.g0);
    out.g1 = edge_field(spec.g1);

    out.h.shape = {Nx + 1};
    out.h.lower = {0.0};
    out.h.upper = {spec.l};
    out.h.data.assign(Nx + 1, 0.0);
    for (std::size_t j = 0; j <= Nx; ++j)
        out.h.data[j] = detail::eval_or_zero(spec.h, out.h.coord(0, j));
    return out;
}

// Solution-side and data-side norms of one problem instance, measuring the
// two-sided estimate behind well-posedness: the map u -> (f, edge data, h).
// The solution norm is anisotropic of order (s, s/2); the data norm is the
// q_space_norm of the prescribed data. The ratio is data over solution, so a
// well-posed problem keeps it inside a fixed band as the family and the grid
// vary.
struct IsoSample {
    double solution_norm = 0.0;
    double data_norm = 0.0;
    double ratio = 0.0;
};

// Defaults to the tapered extension: even reflection of a Dirichlet mode has
// a derivative jump at the fold, so above s = 3/2 its spectral sums grow with
// the grid instead of converging; the taper window keeps every norm here a
// convergent quantity and the ratio stable under refinement.
inline IsoSample isomorphism_sample(const HeatProblemSpec& spec, const KaramataFunction& phi,
                                    double s, std::size_t Nx, std::size_t Nt,
                                    ExtensionStrategy strategy = ExtensionStrategy::ZeroPadTaper,
                                    const WarningSink& sink = {}) {
    spec.validate();
    auto u = solve_heat(spec, Nx, Nt);

    RegularityIndex solution_idx{s, 0.5, phi, 1};
    IsoSample out;
    out.solution_norm = norm_box(u, solution_idx, strategy, sink);
    out.data_norm = q_space_norm(spec, data_bundle(spec, Nx, Nt), s, phi, strategy, sink);
    out.ratio = out.data_norm / std::max(out.solution_norm, 1e-300);
    return out;
}

struct IsoReport {
    std::vector<IsoSample> samples;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
};

inline IsoReport summarize_iso(const std::vector<IsoSample>& samples) {
    if (samples.empty()) throw std::invalid_argument("summarize_iso: no samples");
    IsoReport rep;
    rep.samples = samples;
    rep.ratio_min = samples.front().ratio;
    rep.ratio_max = samples.front().ratio;
    for (const auto& s : samples) {
        rep.ratio_min = std::min(rep.ratio_min, s.ratio);
        rep.ratio_max = std::max(rep.ratio_max, s.ratio);
    }
    return rep;
}

// Norm of a solution cut off away from the closed boundary. The cutoff is a
// smooth plateau in both variables, so the product periodizes cleanly and the
// norm can be taken on the torus without extension artifacts.
struct RegularityRow {
    double s = 0.0;
    double norm = 0.0;
};

inline std::vector<RegularityRow> interior_regularity_scan(const HeatProblemSpec& spec,
                                                           const KaramataFunction& phi,
                                                           const std::vector<double>& s_list,
                                                           std::size_t Nx, std::size_t Nt,
                                                           const WarningSink& sink = {}) {
    spec.validate();
    auto u = solve_heat(spec, Nx, Nt);

    auto plateau = [](double q) {  // 0 below 1/8, 1 above 3/8, smooth between
        // smooth_step falls from 1 to 0, so feed it the reversed coordinate
        return smooth_step(std::clamp((0.375 - q) / 0.25, 0.0, 1.0));
    };
    auto cutoff = [&](double q) { return plateau(q) * plateau(1.0 - q); };

    TorusField field;
    field.shape = {Nx, Nt};
    field.length = {spec.l, spec.tau};
    field.data.assign(Nx * Nt, 0.0);
    for (std::size_t j = 0; j < Nx; ++j) {
        double x = double(j) * spec.l / double(Nx);
        for (std::size_t it = 0; it < Nt; ++it) {
            double t = double(it) * spec.tau / double(Nt);
            field.data[j * Nt + it] =
                u.data[j * (Nt + 1) + it] * cutoff(x / spec.l) * cutoff(t / spec.tau);
        }
    }

    std::vector<RegularityRow> rows;
    auto spectrum = fft_forward(field.shape, field.length, field.data);
    for (double s : s_list) {
        RegularityIndex idx{s, 0.5, phi, 1};
        idx.validate();
        double acc = detail::weighted_spectral_norm(
            spectrum, [&](std::span<const double> xi) { return mu_aniso(xi, idx); }, sink);
        rows.push_back({s, acc});
    }
    return rows;
}

}  // namespace hlab
