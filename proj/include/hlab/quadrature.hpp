#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>

namespace hlab {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;    // accumulated local error estimate
    int segments = 0;      // leaf intervals accepted
};

namespace detail {

// Gauss 7 / Kronrod 15 abscissae and weights on [-1, 1].
inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15(F&& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * gk_x[i]);
        fv[14 - i] = f(c + h * gk_x[i]);
    }
    fv[7] = f(c);
    double resk = gk_wk[7] * fv[7];
    double resg = gk_wg[3] * fv[7];
    for (int i = 0; i < 7; ++i) resk += gk_wk[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) resg += gk_wg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    kronrod = resk * h;
    const double diff = std::fabs(resk - resg) * std::fabs(h);
    // Standard rescaled error estimate; sharper than |K-G| on smooth integrands.
    err = diff;
    double resabs = 0.0;
    for (int i = 0; i < 15; ++i) resabs += std::fabs(fv[i]);
    resabs *= std::fabs(h) / 15.0;
    if (resabs > 0.0 && diff > 0.0) {
        double scaled = std::pow(200.0 * diff / (resabs * 15.0), 1.5) * resabs * 15.0;
        if (scaled < diff) err = scaled;
    }
}

template <class F>
void adapt_rec(F&& f, double a, double b, double abstol, double reltol,
               int depth, QuadResult& acc, double scale) {
    double v, e;
    gk15(f, a, b, v, e);
    double tol = std::max(abstol, reltol * std::max(scale, std::fabs(v)));
    if (e <= tol || depth >= 48 || !(b - a > std::numeric_limits<double>::epsilon() * (std::fabs(a) + std::fabs(b)))) {
        acc.value += v;
        acc.error += e;
        acc.segments += 1;
        return;
    }
    const double m = 0.5 * (a + b);
    adapt_rec(f, a, m, abstol * 0.5, reltol, depth + 1, acc, scale);
    adapt_rec(f, m, b, abstol * 0.5, reltol, depth + 1, acc, scale);
}

}  // namespace detail

// Adaptive Gauss-Kronrod on a finite interval.
template <class F>
QuadResult integrate(F&& f, double a, double b,
                     double abstol = 1e-12, double reltol = 1e-10) {
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw std::invalid_argument("integrate: endpoints must be finite");
    QuadResult acc;
    if (a == b) return acc;
    // First pass to set the relative-error scale, then refine.
    double v0, e0;
    detail::gk15(f, a, b, v0, e0);
    detail::adapt_rec(f, a, b, abstol, reltol, 0, acc, std::fabs(v0));
    return acc;
}

// Integral over [a, inf) through r = a + u/(1-u), u in (0,1).
// Assumes f decays fast enough for the mapped integrand to vanish at u -> 1.
template <class F>
QuadResult integrate_semiinf(F&& f, double a,
                             double abstol = 1e-12, double reltol = 1e-10) {
    auto mapped = [&f, a](double u) {
        const double om = 1.0 - u;
        if (om <= 0.0) return 0.0;
        const double r = a + u / om;
        const double jac = 1.0 / (om * om);
        double v = f(r) * jac;
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate(mapped, 0.0, 1.0, abstol, reltol);
}

}  // namespace hlab
