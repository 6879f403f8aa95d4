#pragma once

// Discretized periodic model of R^n (n = 1,2).
//
// Conventions (fixed, nonunitary, 2 pi in the inverse):
//   F f(xi)    = int e^{-i xi.x} f(x) dx      ~ (L/N)^n sum_j e^{-i xi_k.x_j} f(x_j)
//   F^-1 F(x)  = (2 pi)^-n int e^{i x.xi} F(xi) dxi
//                                             ~ (1/L)^n sum_k e^{i xi_k.x_j} F(xi_k)
// Spatial nodes x_j = -L/2 + jL/N, frequency nodes xi_k = 2 pi k / L with
// k in {-N/2,...,N/2-1} stored in natural DFT order (index i <-> k = i or i-N).
// With these weights the discrete Plancherel identity reads
// ||Ff||_2^2 = (2 pi)^n ||f||_2^2.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "alphamod/fft.hpp"
#include "alphamod/util.hpp"

namespace alphamod {

struct GridSpec {
    int dim = 1;        // n, 1 or 2
    int n = 0;          // points per axis N (power of two, >= 16)
    double period = 0;  // L; spatial box [-L/2, L/2)^n

    double dx() const { return period / n; }
    double dxi() const { return kTwoPi / period; }
    double nyquist() const { return kPi * n / period; }

    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < dim; ++d) s *= std::size_t(n);
        return s;
    }

    // storage index on one axis -> signed lattice integer k
    int signed_index(int i) const { return i < n / 2 ? i : i - n; }
    // signed k -> storage index, or -1 when out of range
    int storage_index(long k) const {
        if (k < -long(n) / 2 || k >= long(n) / 2) return -1;
        return int(k < 0 ? k + n : k);
    }

    double x(int j) const { return -period / 2 + j * dx(); }
    double xi(int i) const { return signed_index(i) * dxi(); }
    // eta lattice: conjugate of the xi variable, natural DFT order, no offset
    double eta(int i) const { return signed_index(i) * dx(); }

    // decompose a flat index into per-axis storage indices
    std::array<int, 2> unflatten(std::size_t flat) const {
        if (dim == 1) return {int(flat), 0};
        return {int(flat / std::size_t(n)), int(flat % std::size_t(n))};
    }
    std::size_t flatten(int i0, int i1) const {
        return dim == 1 ? std::size_t(i0) : std::size_t(i0) * std::size_t(n) + std::size_t(i1);
    }

    std::array<double, 2> x_point(std::size_t flat) const {
        auto ix = unflatten(flat);
        return {x(ix[0]), dim == 2 ? x(ix[1]) : 0.0};
    }
    std::array<double, 2> xi_point(std::size_t flat) const {
        auto ix = unflatten(flat);
        return {xi(ix[0]), dim == 2 ? xi(ix[1]) : 0.0};
    }
    std::array<double, 2> eta_point(std::size_t flat) const {
        auto ix = unflatten(flat);
        return {eta(ix[0]), dim == 2 ? eta(ix[1]) : 0.0};
    }

    // parity (-1)^(k_1+...+k_n) of a flat frequency index; exact because N is even
    double parity_sign(std::size_t flat) const {
        auto ix = unflatten(flat);
        int p = ix[0] & 1;
        if (dim == 2) p ^= ix[1] & 1;
        return p ? -1.0 : 1.0;
    }

    bool operator==(const GridSpec& o) const {
        return dim == o.dim && n == o.n && period == o.period;
    }
};

inline GridSpec make_grid(int dim, int points_per_axis, double period) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("make_grid: dim must be 1 or 2");
    if (points_per_axis < 16) throw std::invalid_argument("make_grid: N must be >= 16");
    if (points_per_axis % 2 != 0) throw std::invalid_argument("make_grid: N must be even");
    if ((points_per_axis & (points_per_axis - 1)) != 0)
        throw std::invalid_argument("make_grid: N must be a power of two");
    if (!(period > 0)) throw std::invalid_argument("make_grid: period must be positive");
    return GridSpec{dim, points_per_axis, period};
}

enum class Domain { Space, Frequency };

struct SampledFunction {
    GridSpec grid;
    Domain domain = Domain::Space;
    std::vector<cdouble> values;

    SampledFunction() = default;
    SampledFunction(const GridSpec& g, Domain d) : grid(g), domain(d), values(g.size()) {}
};

// Symbols sigma(x,xi) sampled on the N^n x N^n product lattice, stored
// row-major with the x block leading. The domain tag tracks which partial
// transforms have been applied: x->y (first variable), xi->eta (second).
enum class SymbolDomain { XXi, YXi, XEta, YEta };

struct SampledSymbol {
    GridSpec grid;
    SymbolDomain domain = SymbolDomain::XXi;
    std::vector<cdouble> values;

    SampledSymbol() = default;
    explicit SampledSymbol(const GridSpec& g, SymbolDomain d = SymbolDomain::XXi)
        : grid(g), domain(d), values(g.size() * g.size()) {}

    cdouble& at(std::size_t xflat, std::size_t xiflat) {
        return values[xflat * grid.size() + xiflat];
    }
    const cdouble& at(std::size_t xflat, std::size_t xiflat) const {
        return values[xflat * grid.size() + xiflat];
    }
};

namespace detail {
inline void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}
inline double pow_n(double base, int n) { return n == 1 ? base : base * base; }
}  // namespace detail

// ---- full transforms on functions ------------------------------------------

inline SampledFunction forward_ft(const SampledFunction& f) {
    detail::require(f.domain == Domain::Space, "forward_ft: input must be in space domain");
    SampledFunction out = f;
    detail::raw_dft(out.values.data(), f.grid.dim, f.grid.n, FFTW_FORWARD);
    const double scale = detail::pow_n(f.grid.period / f.grid.n, f.grid.dim);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] *= scale * f.grid.parity_sign(i);
    out.domain = Domain::Frequency;
    return out;
}

inline SampledFunction inverse_ft(const SampledFunction& F) {
    detail::require(F.domain == Domain::Frequency,
                    "inverse_ft: input must be in frequency domain");
    SampledFunction out = F;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] *= F.grid.parity_sign(i);
    detail::raw_dft(out.values.data(), F.grid.dim, F.grid.n, FFTW_BACKWARD);
    const double scale = detail::pow_n(1.0 / F.grid.period, F.grid.dim);
    for (auto& v : out.values) v *= scale;
    out.domain = Domain::Space;
    return out;
}

// ---- partial transforms on symbols ------------------------------------------
// F1 maps x -> y with y on the xi-lattice (same phase fixups as forward_ft);
// F2 maps xi -> eta with eta on the x-lattice (plain DFT, no phase since the
// xi-lattice has no origin offset).

inline SampledSymbol partial_ft_x(const SampledSymbol& s) {
    detail::require(s.domain == SymbolDomain::XXi || s.domain == SymbolDomain::XEta,
                    "partial_ft_x: x variable already transformed");
    SampledSymbol out = s;
    detail::raw_dft_block(out.values.data(), s.grid.dim, s.grid.n, FFTW_FORWARD, 0);
    const double scale = detail::pow_n(s.grid.period / s.grid.n, s.grid.dim);
    const std::size_t nn = s.grid.size();
    for (std::size_t m = 0; m < nn; ++m) {
        const double ph = scale * s.grid.parity_sign(m);
        cdouble* row = out.values.data() + m * nn;
        for (std::size_t k = 0; k < nn; ++k) row[k] *= ph;
    }
    out.domain = (s.domain == SymbolDomain::XXi) ? SymbolDomain::YXi : SymbolDomain::YEta;
    return out;
}

inline SampledSymbol partial_ift_x(const SampledSymbol& s) {
    detail::require(s.domain == SymbolDomain::YXi || s.domain == SymbolDomain::YEta,
                    "partial_ift_x: x variable not transformed");
    SampledSymbol out = s;
    const std::size_t nn = s.grid.size();
    for (std::size_t m = 0; m < nn; ++m) {
        const double ph = s.grid.parity_sign(m);
        cdouble* row = out.values.data() + m * nn;
        for (std::size_t k = 0; k < nn; ++k) row[k] *= ph;
    }
    detail::raw_dft_block(out.values.data(), s.grid.dim, s.grid.n, FFTW_BACKWARD, 0);
    const double scale = detail::pow_n(1.0 / s.grid.period, s.grid.dim);
    for (auto& v : out.values) v *= scale;
    out.domain = (s.domain == SymbolDomain::YXi) ? SymbolDomain::XXi : SymbolDomain::XEta;
    return out;
}

inline SampledSymbol partial_ft_xi(const SampledSymbol& s) {
    detail::require(s.domain == SymbolDomain::XXi || s.domain == SymbolDomain::YXi,
                    "partial_ft_xi: xi variable already transformed");
    SampledSymbol out = s;
    detail::raw_dft_block(out.values.data(), s.grid.dim, s.grid.n, FFTW_FORWARD, 1);
    const double scale = detail::pow_n(s.grid.dxi(), s.grid.dim);
    for (auto& v : out.values) v *= scale;
    out.domain = (s.domain == SymbolDomain::XXi) ? SymbolDomain::XEta : SymbolDomain::YEta;
    return out;
}

inline SampledSymbol partial_ift_xi(const SampledSymbol& s) {
    detail::require(s.domain == SymbolDomain::XEta || s.domain == SymbolDomain::YEta,
                    "partial_ift_xi: xi variable not transformed");
    SampledSymbol out = s;
    detail::raw_dft_block(out.values.data(), s.grid.dim, s.grid.n, FFTW_BACKWARD, 1);
    const double scale = detail::pow_n(1.0 / (s.grid.dxi() * s.grid.n), s.grid.dim);
    for (auto& v : out.values) v *= scale;
    out.domain = (s.domain == SymbolDomain::XEta) ? SymbolDomain::XXi : SymbolDomain::YXi;
    return out;
}

// ---- quadrature norms --------------------------------------------------------

inline double quadrature_weight(const SampledFunction& f) {
    return f.domain == Domain::Space ? detail::pow_n(f.grid.dx(), f.grid.dim)
                                     : detail::pow_n(f.grid.dxi(), f.grid.dim);
}

inline double lp_norm(const SampledFunction& f, double p) {
    const double w = quadrature_weight(f);
    if (p == 1.0) {
        double s = 0;
        for (const auto& v : f.values) s += std::abs(v);
        return w * s;
    }
    if (p == 2.0) {
        double s = 0;
        for (const auto& v : f.values) s += std::norm(v);
        return std::sqrt(w * s);
    }
    if (std::isinf(p)) {
        double m = 0;
        for (const auto& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    throw std::invalid_argument("lp_norm: p must be 1, 2 or inf");
}

inline cdouble inner_product(const SampledFunction& f, const SampledFunction& g) {
    detail::require(f.domain == g.domain && f.grid == g.grid,
                    "inner_product: mismatched operands");
    cdouble s = 0;
    for (std::size_t i = 0; i < f.values.size(); ++i) s += f.values[i] * std::conj(g.values[i]);
    return quadrature_weight(f) * s;
}

// largest |xi| (per-axis storage index magnitude) carried by coefficients
// above rel_tol * max; -1 when empty
inline int max_active_index(const SampledFunction& F, double rel_tol = 1e-13) {
    detail::require(F.domain == Domain::Frequency, "max_active_index: frequency domain input");
    double m = 0;
    for (const auto& v : F.values) m = std::max(m, std::abs(v));
    if (m == 0) return -1;
    int worst = -1;
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        if (std::abs(F.values[i]) > rel_tol * m) {
            auto ix = F.grid.unflatten(i);
            int a = std::abs(F.grid.signed_index(ix[0]));
            if (F.grid.dim == 2) a = std::max(a, std::abs(F.grid.signed_index(ix[1])));
            worst = std::max(worst, a);
        }
    }
    return worst;
}

// ---- compact frequency sets --------------------------------------------------

// Finite union of boxes and balls; measure refers to the continuum set.
// Rasterization for construction is *inner* (a lattice cell is included only
// when the cell fits in the set) so discrete measures never exceed |Omega|.
struct BandSupport {
    struct Box {
        std::array<double, 2> lo{};
        std::array<double, 2> hi{};
    };
    struct Ball {
        std::array<double, 2> center{};
        double radius = 0;
    };
    std::vector<Box> boxes;
    std::vector<Ball> balls;

    static BandSupport box(double lo, double hi, int dim) {
        BandSupport b;
        Box bx;
        for (int d = 0; d < dim; ++d) {
            bx.lo[std::size_t(d)] = lo;
            bx.hi[std::size_t(d)] = hi;
        }
        b.boxes.push_back(bx);
        return b;
    }

    bool contains(const std::array<double, 2>& p, int dim) const {
        for (const auto& b : boxes) {
            bool in = true;
            for (int d = 0; d < dim; ++d)
                if (p[std::size_t(d)] < b.lo[std::size_t(d)] || p[std::size_t(d)] > b.hi[std::size_t(d)]) in = false;
            if (in) return true;
        }
        for (const auto& b : balls) {
            double r2 = 0;
            for (int d = 0; d < dim; ++d) {
                double t = p[std::size_t(d)] - b.center[std::size_t(d)];
                r2 += t * t;
            }
            if (r2 <= b.radius * b.radius) return true;
        }
        return false;
    }

    // whole closed cell of half-width h around p inside the set?
    bool contains_cell(const std::array<double, 2>& p, double h, int dim) const {
        for (const auto& b : boxes) {
            bool in = true;
            for (int d = 0; d < dim; ++d)
                if (p[std::size_t(d)] - h < b.lo[std::size_t(d)] || p[std::size_t(d)] + h > b.hi[std::size_t(d)]) in = false;
            if (in) return true;
        }
        for (const auto& b : balls) {
            double r2 = 0;
            for (int d = 0; d < dim; ++d) {
                double t = p[std::size_t(d)] - b.center[std::size_t(d)];
                r2 += t * t;
            }
            if (std::sqrt(r2) + h * std::sqrt(double(dim)) <= b.radius) return true;
        }
        return false;
    }

    double measure(int dim) const {
        double m = 0;
        for (const auto& b : boxes) {
            double v = 1;
            for (int d = 0; d < dim; ++d) v *= (b.hi[std::size_t(d)] - b.lo[std::size_t(d)]);
            m += v;
        }
        for (const auto& b : balls)
            m += (dim == 1) ? 2.0 * b.radius : kPi * b.radius * b.radius;
        if (!boxes.empty() || !balls.empty())
            detail::require(m > 0, "BandSupport: nonempty set must have positive measure");
        return m;
    }
};

}  // namespace alphamod
