#pragma once

// Pseudo-differential machinery:
//   sigma(X,D) f(x_j) = (1/L)^n sum_k e^{i xi_k . x_j} sigma(x_j, xi_k) Ff(xi_k)
// plus the commutator [sigma(X,D), a], its oscillatory-integral twin, the
// Lemma 3.4 mollifier, the Lemma 4.1 Lipschitz regularizer and power-iteration
// operator-norm estimates. The adjoint used by the norm estimator is the
// conjugate transpose of the discrete quadrature operator.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "alphamod/grid.hpp"
#include "alphamod/synthesize.hpp"
#include "alphamod/windows.hpp"

namespace alphamod {

struct LipschitzFunction {
    SampledFunction samples;  // real-valued, space domain
    double grad_sup = 0;      // ||grad a||_inf by spectral differentiation
    double lipschitz_A = 0;   // the (4.1) constant, set equal to grad_sup
};

inline LipschitzFunction make_lipschitz(const SampledFunction& a) {
    detail::require(a.domain == Domain::Space, "make_lipschitz: a must be in space domain");
    double imag_max = 0;
    for (const auto& v : a.values) imag_max = std::max(imag_max, std::abs(v.imag()));
    double scale = lp_norm(a, std::numeric_limits<double>::infinity());
    detail::require(imag_max <= 1e-10 * std::max(scale, 1.0),
                    "make_lipschitz: a must be real-valued");

    SampledFunction A = forward_ft(a);
    std::vector<double> grad2(a.values.size(), 0.0);
    for (int d = 0; d < a.grid.dim; ++d) {
        SampledFunction D = A;
        for (std::size_t i = 0; i < D.values.size(); ++i) {
            auto xi = a.grid.xi_point(i);
            D.values[i] *= cdouble{0.0, xi[std::size_t(d)]};
        }
        SampledFunction dd = inverse_ft(D);
        for (std::size_t i = 0; i < dd.values.size(); ++i) {
            double re = dd.values[i].real();
            grad2[i] += re * re;
        }
    }
    LipschitzFunction out;
    out.samples = a;
    for (double g2 : grad2) out.grad_sup = std::max(out.grad_sup, std::sqrt(g2));
    out.lipschitz_A = out.grad_sup;
    return out;
}

namespace detail {

// phase(j,k) = e^{i xi_k . x_j} = prod_axes (-1)^{k_d} e^{2 pi i j_d k_d / N}
struct PhaseTable {
    const GridSpec* grid;
    std::vector<cdouble> w;  // N-th roots of unity

    explicit PhaseTable(const GridSpec& g) : grid(&g), w(std::size_t(g.n)) {
        for (int t = 0; t < g.n; ++t)
            w[std::size_t(t)] = cdouble{std::cos(kTwoPi * t / g.n), std::sin(kTwoPi * t / g.n)};
    }
    cdouble axis(int j, int k) const {
        cdouble ph = w[std::size_t(j) * std::size_t(k) % std::size_t(grid->n)];
        return (k & 1) ? -ph : ph;
    }
    cdouble operator()(std::size_t jflat, std::size_t kflat) const {
        auto jm = grid->unflatten(jflat);
        auto km = grid->unflatten(kflat);
        cdouble ph = axis(jm[0], km[0]);
        if (grid->dim == 2) ph *= axis(jm[1], km[1]);
        return ph;
    }
};

}  // namespace detail

inline SampledFunction quantize_apply_with(const detail::PhaseTable& table,
                                           const SampledSymbol& sigma,
                                           const SampledFunction& fhat_freq) {
    const GridSpec& g = sigma.grid;
    const std::size_t nn = g.size();
    SampledFunction out(g, Domain::Space);
    const double scale = detail::pow_n(1.0 / g.period, g.dim);
    for (std::size_t j = 0; j < nn; ++j) {
        cdouble acc{0, 0};
        const cdouble* row = sigma.values.data() + j * nn;
        for (std::size_t k = 0; k < nn; ++k) acc += table(j, k) * row[k] * fhat_freq.values[k];
        out.values[j] = scale * acc;
    }
    return out;
}

inline SampledFunction quantize_apply(const SampledSymbol& sigma, const SampledFunction& f) {
    detail::require(sigma.grid == f.grid, "quantize_apply: grid mismatch");
    detail::require(f.domain == Domain::Space, "quantize_apply: f must be in space domain");
    detail::require(sigma.domain == SymbolDomain::XXi,
                    "quantize_apply: sigma must be in (x,xi) domain");
    detail::PhaseTable table(f.grid);
    return quantize_apply_with(table, sigma, forward_ft(f));
}

// (sigma(X,D))^H g, conjugate transpose of the quadrature operator:
// u_k = sum_j conj(phase(j,k) sigma(j,k)) g_j; out = (1/N)^n sum_k phase(j',k) u_k
inline SampledFunction quantize_adjoint_with(const detail::PhaseTable& table,
                                             const SampledSymbol& sigma,
                                             const SampledFunction& gfun) {
    const GridSpec& g = sigma.grid;
    const std::size_t nn = g.size();
    std::vector<cdouble> u(nn, cdouble{0, 0});
    for (std::size_t j = 0; j < nn; ++j) {
        const cdouble* row = sigma.values.data() + j * nn;
        const cdouble gv = gfun.values[j];
        for (std::size_t k = 0; k < nn; ++k) u[k] += std::conj(table(j, k) * row[k]) * gv;
    }
    SampledFunction out(g, Domain::Space);
    const double scale = detail::pow_n(1.0 / g.n, g.dim);
    for (std::size_t j = 0; j < nn; ++j) {
        cdouble acc{0, 0};
        for (std::size_t k = 0; k < nn; ++k) acc += table(j, k) * u[k];
        out.values[j] = scale * acc;
    }
    return out;
}

inline SampledFunction quantize_adjoint(const SampledSymbol& sigma, const SampledFunction& g) {
    detail::require(sigma.grid == g.grid, "quantize_adjoint: grid mismatch");
    detail::require(g.domain == Domain::Space, "quantize_adjoint: g must be in space domain");
    detail::PhaseTable table(g.grid);
    return quantize_adjoint_with(table, sigma, g);
}

struct OperatorNormEstimate {
    double norm = 0;
    int iterations = 0;
    bool converged = false;
};

// largest singular value via power iteration on adjoint o operator
inline OperatorNormEstimate operator_norm_estimate(const SampledSymbol& sigma, double tol = 1e-6,
                                                   int max_iter = 500,
                                                   std::uint64_t seed = 0x5eed5eedull) {
    const GridSpec& g = sigma.grid;
    if ((g.dim == 1 && g.n > 512) || (g.dim == 2 && g.n > 64))
        throw std::invalid_argument("operator_norm_estimate: grid too large for power iteration");
    detail::PhaseTable table(g);
    const std::size_t nn = g.size();

    SampledFunction v(g, Domain::Space);
    Rng rng(seed);
    for (auto& x : v.values) x = cdouble{rng.uniform_symm(), rng.uniform_symm()};
    double vn = lp_norm(v, 2.0);
    for (auto& x : v.values) x /= vn;

    OperatorNormEstimate est;
    // The Rayleigh sequence s_k converges linearly from below with a ratio
    // set by the subdominant singular value; for smooth symbols that gap is
    // tiny, so accelerate with Aitken extrapolation and stop on the
    // extrapolated increment instead of the raw one.
    double prev = 0, dprev = 0, extrap_prev = 0;
    for (int it = 1; it <= max_iter; ++it) {
        SampledFunction w = quantize_apply_with(table, sigma, forward_ft(v));
        double s = lp_norm(w, 2.0);
        est.norm = s;
        est.iterations = it;
        if (s == 0) {
            est.converged = true;
            return est;
        }
        double d = s - prev;
        if (it > 2 && dprev != 0) {
            double rho = d / dprev;
            double extrap = (rho > 0 && rho < 1) ? s + d * rho / (1.0 - rho) : s;
            est.norm = std::max(s, extrap);
            if (std::abs(extrap - extrap_prev) <= tol * extrap ||
                std::abs(d) <= std::max(tol * tol, 1e-15) * s) {
                est.converged = true;
                return est;
            }
            extrap_prev = extrap;
        }
        prev = s;
        dprev = d;
        SampledFunction u = quantize_adjoint_with(table, sigma, w);
        double un = lp_norm(u, 2.0);
        if (un == 0) {
            est.converged = true;
            return est;
        }
        for (auto& x : u.values) x /= un;
        v = std::move(u);
    }
    est.converged = false;  // caller sees the last iterate with a warning flag
    return est;
}

// ---- commutators ---------------------------------------------------------------

inline void check_product_band(const SampledFunction& a, const SampledFunction& f) {
    SampledFunction ahat = forward_ft(a);
    SampledFunction fhat = forward_ft(f);
    // sub-1e-10 spectral dust (gaussian tails and FFT noise) may alias freely
    int ba = max_active_index(ahat, 1e-10);
    int bf = max_active_index(fhat, 1e-10);
    if (ba < 0 || bf < 0) return;
    if (ba + bf > a.grid.n / 2 - 1)
        throw std::invalid_argument(
            "commutator: spectrum of a*f would alias; shrink the bands of a or f");
}

// [sigma(X,D), a] f = sigma(X,D)(a f) - a sigma(X,D) f
inline SampledFunction commutator_apply(const SampledSymbol& sigma, const LipschitzFunction& a,
                                        const SampledFunction& f) {
    detail::require(sigma.grid == f.grid && a.samples.grid == f.grid,
                    "commutator_apply: grid mismatch");
    check_product_band(a.samples, f);
    SampledFunction af(f.grid, Domain::Space);
    for (std::size_t i = 0; i < af.values.size(); ++i)
        af.values[i] = a.samples.values[i] * f.values[i];
    detail::PhaseTable table(f.grid);
    SampledFunction t1 = quantize_apply_with(table, sigma, forward_ft(af));
    SampledFunction t2 = quantize_apply_with(table, sigma, forward_ft(f));
    SampledFunction out(f.grid, Domain::Space);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = t1.values[i] - a.samples.values[i] * t2.values[i];
    return out;
}

// the (4.2) route: C_n int int e^{ix.xi} e^{ix.eta}
//   (sigma(x, xi+eta) - sigma(x, xi)) Fa(eta) Ff(xi) deta dxi,  C_n = (2 pi)^{-2n},
// with eta on the frequency lattice and out-of-band shifts zero-filled
inline SampledFunction commutator_twisted(const SampledSymbol& sigma, const LipschitzFunction& a,
                                          const SampledFunction& f) {
    detail::require(sigma.grid == f.grid && a.samples.grid == f.grid,
                    "commutator_twisted: grid mismatch");
    check_product_band(a.samples, f);
    const GridSpec& g = f.grid;
    const std::size_t nn = g.size();
    SampledFunction ahat = forward_ft(a.samples);
    SampledFunction fhat = forward_ft(f);
    double amax = 0;
    for (const auto& v : ahat.values) amax = std::max(amax, std::abs(v));
    std::vector<std::size_t> modes;
    for (std::size_t m = 0; m < nn; ++m)
        if (std::abs(ahat.values[m]) > 1e-14 * amax) modes.push_back(m);

    detail::PhaseTable table(g);
    // shifted storage index of xi_k + eta_m, or npos when off the lattice
    auto shift_index = [&](std::size_t kflat, std::size_t mflat) -> std::size_t {
        auto km = g.unflatten(kflat);
        auto mm = g.unflatten(mflat);
        long s0 = long(g.signed_index(km[0])) + long(g.signed_index(mm[0]));
        int i0 = g.storage_index(s0);
        if (i0 < 0) return std::size_t(-1);
        if (g.dim == 1) return std::size_t(i0);
        long s1 = long(g.signed_index(km[1])) + long(g.signed_index(mm[1]));
        int i1 = g.storage_index(s1);
        if (i1 < 0) return std::size_t(-1);
        return g.flatten(i0, i1);
    };

    SampledFunction out(g, Domain::Space);
    // (1/L)^{2n}: quadrature weight (2pi/L)^n per integral times C_n = (2pi)^{-2n}
    const double scale = std::pow(1.0 / g.period, 2.0 * g.dim);
    for (std::size_t j = 0; j < nn; ++j) {
        const cdouble* row = sigma.values.data() + j * nn;
        cdouble acc{0, 0};
        for (std::size_t m : modes) {
            const cdouble am = ahat.values[m] * table(j, m);
            cdouble inner{0, 0};
            for (std::size_t k = 0; k < nn; ++k) {
                const cdouble fv = fhat.values[k];
                if (fv == cdouble{0, 0}) continue;
                std::size_t sh = shift_index(k, m);
                cdouble diff = (sh == std::size_t(-1) ? cdouble{0, 0} : row[sh]) - row[k];
                inner += table(j, k) * diff * fv;
            }
            acc += am * inner;
        }
        out.values[j] = scale * acc;
    }
    return out;
}

// ---- Lemma 3.4 mollifier --------------------------------------------------------

// Per-axis Phi_eps taper, one value per storage index of the x lattice
// (on_x = true) or the xi lattice. Built as the trigonometric polynomial
//   phi_eps(t) = c sum_{|s_k| < eps} Bump(s_k / eps) e^{i s_k t}
// over the conjugate lattice {s_k}, normalized so phi_eps(0) = 1. Its
// transform is supported in B(0, eps) exactly on the lattice (the proof of
// the mollification bound needs supp F Phi_eps inside B(0,1)); once eps
// drops below the conjugate lattice step the taper degenerates to the
// constant 1, which is also its continuum limit.
inline std::vector<double> mollifier_taper(const GridSpec& g, double eps, bool on_x) {
    std::vector<double> coeff(std::size_t(g.n));
    double total = 0;
    for (int k = 0; k < g.n; ++k) {
        double s = on_x ? g.xi(k) : g.eta(k);
        coeff[std::size_t(k)] = bump01(s / eps);
        total += coeff[std::size_t(k)];
    }
    std::vector<double> out(std::size_t(g.n), 0.0);
    for (int j = 0; j < g.n; ++j) {
        double t = on_x ? g.x(j) : g.xi(j);
        double acc = 0;
        for (int k = 0; k < g.n; ++k) {
            if (coeff[std::size_t(k)] == 0.0) continue;
            double s = on_x ? g.xi(k) : g.eta(k);
            acc += coeff[std::size_t(k)] * std::cos(s * t);
        }
        out[std::size_t(j)] = acc / total;
    }
    return out;
}

// sigma_eps = Phi_eps (Psi_eps * sigma); convolution realized spectrally by the
// multiplier Fpsi(eps y) Fpsi(eps eta), so small eps stays resolved. The
// effective discrete kernel has quadrature mass Fpsi(0)^{2n} = 1 exactly.
inline SampledSymbol mollify_symbol(const SampledSymbol& sigma, double eps) {
    if (!(eps > 0 && eps < 1))
        throw std::invalid_argument("mollify_symbol: eps must lie in (0,1)");
    detail::require(sigma.domain == SymbolDomain::XXi,
                    "mollify_symbol: sigma must be in (x,xi) domain");
    const GridSpec& g = sigma.grid;
    const std::size_t nn = g.size();

    SampledSymbol G = partial_ft_xi(partial_ft_x(sigma));
    std::vector<double> psihat_y(nn), psihat_eta(nn);
    {
        // per-axis tables to avoid recomputing the window transform
        std::vector<double> ay(std::size_t(g.n)), ae(std::size_t(g.n));
        for (int i = 0; i < g.n; ++i) {
            ay[std::size_t(i)] = mollifier_psi_hat(eps * g.xi(i));
            ae[std::size_t(i)] = mollifier_psi_hat(eps * g.eta(i));
        }
        for (std::size_t m = 0; m < nn; ++m) {
            auto im = g.unflatten(m);
            psihat_y[m] = ay[std::size_t(im[0])] * (g.dim == 2 ? ay[std::size_t(im[1])] : 1.0);
        }
        for (std::size_t l = 0; l < nn; ++l) {
            auto il = g.unflatten(l);
            psihat_eta[l] = ae[std::size_t(il[0])] * (g.dim == 2 ? ae[std::size_t(il[1])] : 1.0);
        }
    }
    for (std::size_t m = 0; m < nn; ++m) {
        cdouble* row = G.values.data() + m * nn;
        for (std::size_t l = 0; l < nn; ++l) row[l] *= psihat_y[m] * psihat_eta[l];
    }
    SampledSymbol smoothed = partial_ift_x(partial_ift_xi(G));

    std::vector<double> tx = mollifier_taper(g, eps, true);
    std::vector<double> txi = mollifier_taper(g, eps, false);
    std::vector<double> phix(nn), phixi(nn);
    for (std::size_t j = 0; j < nn; ++j) {
        auto ij = g.unflatten(j);
        phix[j] = tx[std::size_t(ij[0])] * (g.dim == 2 ? tx[std::size_t(ij[1])] : 1.0);
    }
    for (std::size_t k = 0; k < nn; ++k) {
        auto ik = g.unflatten(k);
        phixi[k] = txi[std::size_t(ik[0])] * (g.dim == 2 ? txi[std::size_t(ik[1])] : 1.0);
    }
    for (std::size_t j = 0; j < nn; ++j) {
        cdouble* row = smoothed.values.data() + j * nn;
        for (std::size_t k = 0; k < nn; ++k) row[k] *= phix[j] * phixi[k];
    }
    return smoothed;
}

// ---- Lemma 4.1 regularizer -------------------------------------------------------

inline double regularize_eps_ceiling(const LipschitzFunction& a) {
    // eps(a) = min{ ||grad a||_inf / |a(0)|, 1 } when a(0) != 0, else 1
    const GridSpec& g = a.samples.grid;
    std::size_t origin = g.dim == 1 ? std::size_t(g.n / 2)
                                    : g.flatten(g.n / 2, g.n / 2);  // x_j = 0 at j = N/2
    double a0 = std::abs(a.samples.values[origin].real());
    if (a0 == 0.0) return 1.0;
    return std::min(a.grad_sup / a0, 1.0);
}

// a_eps(x) = w(eps x) (w_eps * a)(x) with the two-normalization library window
inline LipschitzFunction regularize_lipschitz(const LipschitzFunction& a, double eps) {
    const GridSpec& g = a.samples.grid;
    double ceiling = regularize_eps_ceiling(a);
    if (!(eps > 0 && eps < ceiling))
        throw std::invalid_argument("regularize_lipschitz: eps must lie in (0, eps(a))");

    SampledFunction ahat = forward_ft(a.samples);
    std::vector<double> mult(std::size_t(g.n));
    for (int i = 0; i < g.n; ++i) mult[std::size_t(i)] = reg_window_hat(eps * g.xi(i));
    for (std::size_t i = 0; i < ahat.values.size(); ++i) {
        auto im = g.unflatten(i);
        double m = mult[std::size_t(im[0])] * (g.dim == 2 ? mult[std::size_t(im[1])] : 1.0);
        ahat.values[i] *= m;
    }
    SampledFunction conv = inverse_ft(ahat);
    for (std::size_t i = 0; i < conv.values.size(); ++i) {
        auto x = g.x_point(i);
        double w = reg_window(eps * x[0]) * (g.dim == 2 ? reg_window(eps * x[1]) : 1.0);
        conv.values[i] = w * conv.values[i].real();
    }
    return make_lipschitz(conv);
}

// ---- Lemma 3.1 pair ---------------------------------------------------------------

struct Lemma31Pair {
    SampledFunction phi;  // compactly supported in B(0,1) on the sample lattice
    SampledFunction chi;  // band-limited: supp F(chi) in B(0,1)
};

inline Lemma31Pair make_lemma31_pair(const GridSpec& g) {
    if (2.0 / g.dx() < 8.0 || 2.0 / g.dxi() < 8.0)
        throw std::invalid_argument(
            "make_lemma31_pair: grid too coarse to resolve B(0,1) (need >= 8 points across)");
    Lemma31Pair pair;
    pair.phi = SampledFunction(g, Domain::Space);
    for (std::size_t i = 0; i < pair.phi.values.size(); ++i) {
        auto x = g.x_point(i);
        double r = std::sqrt(x[0] * x[0] + (g.dim == 2 ? x[1] * x[1] : 0.0));
        pair.phi.values[i] = bump01(r);
    }
    SampledFunction chihat(g, Domain::Frequency);
    for (std::size_t i = 0; i < chihat.values.size(); ++i) {
        auto xi = g.xi_point(i);
        double r = std::sqrt(xi[0] * xi[0] + (g.dim == 2 ? xi[1] * xi[1] : 0.0));
        chihat.values[i] = bump01(r);
    }
    pair.chi = inverse_ft(chihat);
    cdouble s = 0;
    for (std::size_t i = 0; i < pair.phi.values.size(); ++i)
        s += pair.phi.values[i] * pair.chi.values[i];
    s *= detail::pow_n(g.dx(), g.dim);
    if (std::abs(s) < 1e-12)
        throw std::runtime_error("make_lemma31_pair: degenerate normalization");
    for (auto& v : pair.chi.values) v /= s;
    return pair;
}

}  // namespace alphamod
