#pragma once

// Deterministic test-function and test-symbol families. Band-limited
// families have exact lattice support inside the declared band and keep a
// 20% safety margin from the Nyquist bound.

#include <functional>
#include <stdexcept>
#include <vector>

#include "alphamod/grid.hpp"
#include "alphamod/util.hpp"

namespace alphamod {

inline void check_band_margin(const GridSpec& g, double max_freq) {
    if (max_freq > 0.8 * g.nyquist() + 1e-12)
        throw std::invalid_argument("synthesize: family parameters exceed the safety band");
}

inline SampledFunction synth_gaussian(const GridSpec& g, double width) {
    // spectral content ~ 3/width; require it inside the safety band
    if (!(width > 0)) throw std::invalid_argument("synth_gaussian: width must be positive");
    check_band_margin(g, 3.0 / width);
    SampledFunction f(g, Domain::Space);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        auto p = g.x_point(i);
        double r2 = p[0] * p[0] + (g.dim == 2 ? p[1] * p[1] : 0.0);
        f.values[i] = std::exp(-r2 / (2.0 * width * width));
    }
    return f;
}

// plane wave e^{i xi_0 . x} with xi_0 = (k0, k1) on the frequency lattice
inline SampledFunction synth_plane_wave(const GridSpec& g, long k0, long k1 = 0) {
    double f0 = std::abs(double(k0)) * g.dxi();
    double f1 = std::abs(double(k1)) * g.dxi();
    check_band_margin(g, std::max(f0, f1));
    SampledFunction f(g, Domain::Space);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        auto p = g.x_point(i);
        double phase = k0 * g.dxi() * p[0] + (g.dim == 2 ? k1 * g.dxi() * p[1] : 0.0);
        f.values[i] = cdouble{std::cos(phase), std::sin(phase)};
    }
    return f;
}

// random coefficients on every lattice point whose cell sits inside the band;
// bit-identical for a fixed seed (coefficients drawn in storage order)
inline SampledFunction synth_band_limited_random(const GridSpec& g, const BandSupport& band,
                                                 std::uint64_t seed) {
    double bmax = 0;
    for (const auto& b : band.boxes)
        for (int d = 0; d < g.dim; ++d)
            bmax = std::max({bmax, std::abs(b.lo[std::size_t(d)]), std::abs(b.hi[std::size_t(d)])});
    for (const auto& b : band.balls)
        for (int d = 0; d < g.dim; ++d)
            bmax = std::max(bmax, std::abs(b.center[std::size_t(d)]) + b.radius);
    check_band_margin(g, bmax);

    SampledFunction F(g, Domain::Frequency);
    Rng rng(seed);
    const double h = 0.5 * g.dxi();
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        if (band.contains_cell(g.xi_point(i), h, g.dim))
            F.values[i] = cdouble{rng.uniform_symm(), rng.uniform_symm()};
    }
    return inverse_ft(F);
}

inline SampledFunction synth_band_limited_random(const GridSpec& g, double band_halfwidth,
                                                 std::uint64_t seed) {
    return synth_band_limited_random(g, BandSupport::box(-band_halfwidth, band_halfwidth, g.dim),
                                     seed);
}

// a(x) = amp (c cos(xi_a.x) + s sin(xi_a.x)), real, with known gradient sup
inline SampledFunction synth_lipschitz_sine(const GridSpec& g, double amplitude, long k0,
                                            long k1 = 0, double mix = 0.0) {
    double f0 = std::hypot(double(k0) * g.dxi(), g.dim == 2 ? double(k1) * g.dxi() : 0.0);
    check_band_margin(g, f0);
    SampledFunction f(g, Domain::Space);
    const double c = std::cos(mix), s = std::sin(mix);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        auto p = g.x_point(i);
        double phase = k0 * g.dxi() * p[0] + (g.dim == 2 ? k1 * g.dxi() * p[1] : 0.0);
        f.values[i] = amplitude * (c * std::cos(phase) + s * std::sin(phase));
    }
    return f;
}

// sigma(x,xi) = m(xi): multiplier symbol from frequency-lattice samples
inline SampledSymbol synth_multiplier_symbol(const GridSpec& g,
                                             const std::function<cdouble(std::array<double, 2>)>& m) {
    SampledSymbol s(g);
    const std::size_t nn = g.size();
    for (std::size_t k = 0; k < nn; ++k) {
        cdouble v = m(g.xi_point(k));
        for (std::size_t j = 0; j < nn; ++j) s.at(j, k) = v;
    }
    return s;
}

inline SampledSymbol synth_multiplier_symbol(const GridSpec& g, const SampledFunction& m_on_xi) {
    detail::require(m_on_xi.domain == Domain::Frequency && m_on_xi.grid == g,
                    "synth_multiplier_symbol: m must be frequency-domain samples on the grid");
    SampledSymbol s(g);
    const std::size_t nn = g.size();
    for (std::size_t k = 0; k < nn; ++k)
        for (std::size_t j = 0; j < nn; ++j) s.at(j, k) = m_on_xi.values[k];
    return s;
}

// sigma(x,xi) = a(x): multiplication symbol
inline SampledSymbol synth_multiplication_symbol(const GridSpec& g, const SampledFunction& a) {
    detail::require(a.domain == Domain::Space && a.grid == g,
                    "synth_multiplication_symbol: a must be space-domain samples on the grid");
    SampledSymbol s(g);
    const std::size_t nn = g.size();
    for (std::size_t j = 0; j < nn; ++j)
        for (std::size_t k = 0; k < nn; ++k) s.at(j, k) = a.values[j];
    return s;
}

// S^0_{0,0}-style tensor trigonometric polynomial
//   sigma(x,xi) = sum_{p,q} c_{pq} e^{i x . xi_p} e^{i xi . y_q}
// with xi_p on the frequency lattice (|index| <= x_modes) and y_q = q dy
// (|q| <= xi_modes) with dy a multiple of the spatial step, so both partial
// transforms have exact lattice support. dy = 0 means the grid's own step;
// passing the base grid's step keeps the symbol identical under refinement.
// Coefficients decay like 1/(1+|p|^2+|q|^2).
inline SampledSymbol synth_smooth_s000_symbol(const GridSpec& g, int x_modes, int xi_modes,
                                              std::uint64_t seed, double dy = 0.0) {
    if (dy == 0.0) dy = g.dx();
    double steps = dy / g.dx();
    if (std::abs(steps - std::round(steps)) > 1e-9 || steps < 1.0 - 1e-9)
        throw std::invalid_argument(
            "synth_smooth_s000_symbol: dy must be a positive multiple of the spatial step");
    check_band_margin(g, x_modes * g.dxi());
    check_band_margin(g, xi_modes * dy);  // y_q lives on the x-lattice
    Rng rng(seed);
    struct Mode {
        std::array<long, 2> p;
        std::array<long, 2> q;
        cdouble c;
    };
    std::vector<Mode> modes;
    auto each_index = [&](int bound, auto&& fn) {
        if (g.dim == 1) {
            for (long a = -bound; a <= bound; ++a) fn(std::array<long, 2>{a, 0});
        } else {
            for (long a = -bound; a <= bound; ++a)
                for (long b = -bound; b <= bound; ++b) fn(std::array<long, 2>{a, b});
        }
    };
    each_index(x_modes, [&](std::array<long, 2> p) {
        each_index(xi_modes, [&](std::array<long, 2> q) {
            double p2 = double(p[0] * p[0] + p[1] * p[1]);
            double q2 = double(q[0] * q[0] + q[1] * q[1]);
            cdouble c{rng.uniform_symm(), rng.uniform_symm()};
            modes.push_back({p, q, c / (1.0 + p2 + q2)});
        });
    });

    SampledSymbol s(g);
    const std::size_t nn = g.size();
    std::vector<cdouble> ex(nn), exi(nn);
    for (const auto& m : modes) {
        for (std::size_t j = 0; j < nn; ++j) {
            auto x = g.x_point(j);
            double ph = m.p[0] * g.dxi() * x[0] + (g.dim == 2 ? m.p[1] * g.dxi() * x[1] : 0.0);
            ex[j] = cdouble{std::cos(ph), std::sin(ph)};
        }
        for (std::size_t k = 0; k < nn; ++k) {
            auto xi = g.xi_point(k);
            double ph = m.q[0] * dy * xi[0] + (g.dim == 2 ? m.q[1] * dy * xi[1] : 0.0);
            exi[k] = cdouble{std::cos(ph), std::sin(ph)};
        }
        for (std::size_t j = 0; j < nn; ++j) {
            const cdouble cj = m.c * ex[j];
            cdouble* row = s.values.data() + j * nn;
            for (std::size_t k = 0; k < nn; ++k) row[k] += cj * exi[k];
        }
    }
    return s;
}

}  // namespace alphamod
