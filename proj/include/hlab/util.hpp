#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hlab {

// Fixed formatting so emitted tables are byte-stable across runs and hosts.
inline std::string fmt_g(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline std::string fmt_g(long double x) { return fmt_g(static_cast<double>(x)); }

using WarningSink = std::function<void(const std::string&)>;

inline void emit_warning(const WarningSink& sink, const std::string& msg) {
    if (sink) sink(msg);
}

// Index-sharded loop. Results must be written by index so the schedule cannot
// change the output; jobs <= 1 runs inline.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& body) {
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    unsigned workers = std::min<std::size_t>(jobs, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw std::invalid_argument("log_spaced: need 0 < lo < hi and n >= 2");
    std::vector<double> out(n);
    double la = std::log(lo), lb = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(la + (lb - la) * double(i) / double(n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

inline std::vector<double> lin_spaced(double lo, double hi, std::size_t n) {
    if (n < 2) throw std::invalid_argument("lin_spaced: n >= 2");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * double(i) / double(n - 1);
    out.back() = hi;
    return out;
}

}  // namespace hlab
