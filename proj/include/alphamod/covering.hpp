#pragma once

// alpha-coverings of frequency space with corresponding BAPUs, for all
// alpha in [0,1]:
//   alpha = 0    : unit cubes k + [-1,1]^n with translated windows
//                  psi(xi - k), sum_k psi(xi - k) = 1
//   alpha = 1    : dyadic ball {|xi|<=2} plus annuli {2^{j-1}<=|xi|<=2^{j+1}}
//                  with windows phi_0, phi(2^{-j} xi)
//   0 < alpha < 1: balls B(c_k, r |k|^{alpha/(1-alpha)}) centered at
//                  c_k = |k|^{alpha/(1-alpha)} k, k in Z^n \ {0}, windows
//                  g_k / sum g_m with g_k(xi) = Bump(|c_k|^{-alpha}(xi - c_k))
// The piece list is restricted to pieces meeting the truncation band
// [-0.8 Xi, 0.8 Xi]^n; the partition of unity is asserted there.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "alphamod/grid.hpp"
#include "alphamod/windows.hpp"

namespace alphamod {

enum class PieceShape { Cube, Ball, Annulus };

struct CoveringPiece {
    int id = 0;
    PieceShape shape = PieceShape::Cube;
    std::array<double, 2> center{};  // cube/ball center (annulus: origin)
    double half_width = 0;           // cube half-width
    double radius = 0;               // ball radius
    double annulus_lo = 0, annulus_hi = 0;
    int dyadic_j = -1;               // alpha = 1 scale index, ball piece = 0

    double inner_radius = 0;         // r_Q
    double outer_radius = 0;         // R_Q
    std::array<double, 2> rep{};     // xi_Q
    double weight = 1;               // <xi_Q>, or 2^j at alpha = 1
    double measure = 0;              // |Q| (continuum Lebesgue measure)
    std::array<long, 2> lattice_key{};
    std::size_t denom_index = 0;     // 0 < alpha < 1: slot in the denominator list

    std::vector<double> window_xi;   // psi_Q on the grid's xi-lattice
    std::vector<double> window_eta;  // psi_Q on the eta-lattice (= x-lattice)

    bool contains(const std::array<double, 2>& p, int dim) const {
        switch (shape) {
            case PieceShape::Cube:
                for (int d = 0; d < dim; ++d)
                    if (std::abs(p[std::size_t(d)] - center[std::size_t(d)]) > half_width) return false;
                return true;
            case PieceShape::Ball: {
                double r2 = 0;
                for (int d = 0; d < dim; ++d) {
                    double t = p[std::size_t(d)] - center[std::size_t(d)];
                    r2 += t * t;
                }
                return r2 <= radius * radius;
            }
            case PieceShape::Annulus: {
                double r2 = 0;
                for (int d = 0; d < dim; ++d) r2 += p[std::size_t(d)] * p[std::size_t(d)];
                double r = std::sqrt(r2);
                return r >= annulus_lo && r <= annulus_hi;
            }
        }
        return false;
    }
};

// Euclidean distance between two pieces of the same construction (0 when the
// closed sets intersect). Used for the Lemma 2.1 enlarged-overlap counts.
inline double piece_distance(const CoveringPiece& a, const CoveringPiece& b, int dim) {
    if (a.shape == PieceShape::Cube && b.shape == PieceShape::Cube) {
        double s = 0;
        for (int d = 0; d < dim; ++d) {
            double gap = std::abs(a.center[std::size_t(d)] - b.center[std::size_t(d)]) -
                         (a.half_width + b.half_width);
            if (gap > 0) s += gap * gap;
        }
        return std::sqrt(s);
    }
    if (a.shape == PieceShape::Ball && b.shape == PieceShape::Ball) {
        double c2 = 0;
        for (int d = 0; d < dim; ++d) {
            double t = a.center[std::size_t(d)] - b.center[std::size_t(d)];
            c2 += t * t;
        }
        return std::max(0.0, std::sqrt(c2) - a.radius - b.radius);
    }
    // radial shells (ball about the origin counts as [0, radius])
    auto shell = [dim](const CoveringPiece& p) -> std::array<double, 2> {
        if (p.shape == PieceShape::Annulus) return {p.annulus_lo, p.annulus_hi};
        double c = 0;
        for (int d = 0; d < dim; ++d) c += p.center[std::size_t(d)] * p.center[std::size_t(d)];
        double cc = std::sqrt(c);
        return {std::max(0.0, cc - p.radius), cc + p.radius};
    };
    auto sa = shell(a), sb = shell(b);
    return std::max(0.0, std::max(sa[0], sb[0]) - std::min(sa[1], sb[1]));
}

struct AdmissibilityReport {
    double alpha = 0;
    int grid_n = 0;
    int piece_count = 0;
    int n0 = 0;                       // max lattice-point multiplicity on the band
    int n0_enlarged_1 = 0;            // max #{Q' : (Q+B(0,1)) meets Q'}
    int n0_enlarged_2 = 0;
    double k_bound = 0;               // max R_Q / r_Q
    double measure_ratio_lo = 0;      // bounds of |Q| / <xi_Q>^{alpha n}
    double measure_ratio_hi = 0;
    double ratio24_r_lo = 0, ratio24_r_hi = 0;  // |Q| / r_Q^n
    double ratio24_R_lo = 0, ratio24_R_hi = 0;  // |Q| / R_Q^n
    double kappa_within = 0;          // max over Q of max_{xi in Q} <xi>/<xi_Q> (and inverse)
    double kappa_neighbor = 0;        // max over pairs with dist <= 1 of weight ratio
    double unit_ball_volume = 0;      // s_n
    double partition_residual = 0;    // max |sum psi_Q - 1| on the band
};

struct Covering {
    double alpha = 0;
    GridSpec grid;
    double band = 0;  // truncation half-width 0.8 Xi
    std::vector<CoveringPiece> pieces;
    AdmissibilityReport admissibility;

    // Lemma 4.3 construction state (0 < alpha < 1)
    double bump_r = 0;
    std::vector<std::array<double, 2>> denom_centers;
    std::vector<double> denom_scales;  // |c_k|^alpha per center

    double window_value(const CoveringPiece& piece, const std::array<double, 2>& p) const;
};

namespace detail {

inline double angle_bracket(const std::array<double, 2>& p, int dim) {
    double r2 = p[0] * p[0] + (dim == 2 ? p[1] * p[1] : 0.0);
    return std::sqrt(1.0 + r2);
}

// alpha = 0 1D window profile: bump01 normalized by its periodized sum
inline double lattice_window_1d(double t) {
    double num = bump01(t);
    if (num == 0) return 0.0;
    double den = 0;
    for (int d = -2; d <= 2; ++d) den += bump01(t - d);
    return num / den;
}

inline double dyadic_window(int j, double r) {
    if (j == 0) return dyadic_cutoff(r);
    return dyadic_cutoff(r / std::exp2(double(j))) - dyadic_cutoff(r / std::exp2(double(j - 1)));
}

inline std::array<double, 2> snap_to_lattice(const GridSpec& g, const CoveringPiece& piece,
                                             int dim) {
    // nearest xi-lattice point to the construction center, kept only when it
    // stays inside the piece and the lattice box; far pieces keep the true
    // center so weights reflect the actual frequency location
    std::array<double, 2> snapped{};
    for (int d = 0; d < dim; ++d) {
        double k = std::round(piece.center[std::size_t(d)] / g.dxi());
        snapped[std::size_t(d)] = k * g.dxi();
        if (std::abs(snapped[std::size_t(d)]) > g.nyquist()) return piece.center;
    }
    if (!piece.contains(snapped, dim)) return piece.center;
    return snapped;
}

}  // namespace detail

inline double Covering::window_value(const CoveringPiece& piece,
                                     const std::array<double, 2>& p) const {
    if (alpha == 0.0) {
        double v = 1;
        for (int d = 0; d < grid.dim; ++d)
            v *= detail::lattice_window_1d(p[std::size_t(d)] - piece.center[std::size_t(d)]);
        return v;
    }
    if (alpha == 1.0) {
        double r = std::sqrt(p[0] * p[0] + (grid.dim == 2 ? p[1] * p[1] : 0.0));
        return detail::dyadic_window(piece.dyadic_j, r);
    }
    // Lemma 4.3: g_k / sum g_m
    auto g_of = [&](std::size_t idx) {
        double s2 = 0;
        for (int d = 0; d < grid.dim; ++d) {
            double t = (p[std::size_t(d)] - denom_centers[idx][std::size_t(d)]) / denom_scales[idx];
            s2 += t * t;
        }
        return bump01(std::sqrt(s2) / bump_r);
    };
    double num = g_of(piece.denom_index);
    if (num == 0.0) return 0.0;
    double den = 0;
    for (std::size_t i = 0; i < denom_centers.size(); ++i) den += g_of(i);
    if (den < 1e-300) return 0.0;
    return num / den;
}

namespace detail {

inline void finalize_windows(Covering& cov) {
    const GridSpec& g = cov.grid;
    const std::size_t nn = g.size();
    if (cov.alpha > 0.0 && cov.alpha < 1.0) {
        // share the denominator sum across pieces lattice-by-lattice
        auto g_of = [&](std::size_t idx, const std::array<double, 2>& p) {
            double s2 = 0;
            for (int d = 0; d < g.dim; ++d) {
                double t = (p[std::size_t(d)] - cov.denom_centers[idx][std::size_t(d)]) /
                           cov.denom_scales[idx];
                s2 += t * t;
            }
            return bump01(std::sqrt(s2) / cov.bump_r);
        };
        auto fill = [&](bool xi_lattice) {
            std::vector<double> den(nn, 0.0);
            for (std::size_t i = 0; i < nn; ++i) {
                auto p = xi_lattice ? g.xi_point(i) : g.eta_point(i);
                for (std::size_t c = 0; c < cov.denom_centers.size(); ++c) den[i] += g_of(c, p);
            }
            for (auto& piece : cov.pieces) {
                auto& w = xi_lattice ? piece.window_xi : piece.window_eta;
                w.assign(nn, 0.0);
                for (std::size_t i = 0; i < nn; ++i) {
                    auto p = xi_lattice ? g.xi_point(i) : g.eta_point(i);
                    double num = g_of(piece.denom_index, p);
                    if (num != 0.0 && den[i] >= 1e-300) w[i] = num / den[i];
                }
            }
        };
        fill(true);
        fill(false);
        return;
    }
    for (auto& piece : cov.pieces) {
        piece.window_xi.assign(nn, 0.0);
        piece.window_eta.assign(nn, 0.0);
        for (std::size_t i = 0; i < nn; ++i)
            piece.window_xi[i] = cov.window_value(piece, g.xi_point(i));
        for (std::size_t i = 0; i < nn; ++i)
            piece.window_eta[i] = cov.window_value(piece, g.eta_point(i));
    }
}

inline void build_alpha0(Covering& cov) {
    const GridSpec& g = cov.grid;
    long kmax = long(std::floor(cov.band + 1.0));
    auto add_piece = [&](std::array<long, 2> k) {
        CoveringPiece p;
        p.shape = PieceShape::Cube;
        p.center = {double(k[0]), g.dim == 2 ? double(k[1]) : 0.0};
        p.half_width = 1.0;
        p.inner_radius = 1.0;
        p.outer_radius = std::sqrt(double(g.dim));
        p.measure = g.dim == 1 ? 2.0 : 4.0;
        p.lattice_key = k;
        cov.pieces.push_back(std::move(p));
    };
    if (g.dim == 1) {
        for (long k = -kmax; k <= kmax; ++k) add_piece({k, 0});
    } else {
        for (long k0 = -kmax; k0 <= kmax; ++k0)
            for (long k1 = -kmax; k1 <= kmax; ++k1) add_piece({k0, k1});
    }
}

inline void build_alpha1(Covering& cov) {
    const GridSpec& g = cov.grid;
    // partition must reach the band-box corner |xi| = band sqrt(n)
    int jmax = std::max(1, int(std::ceil(std::log2(cov.band * std::sqrt(double(g.dim))))));
    for (int j = 0; j <= jmax; ++j) {
        CoveringPiece p;
        p.dyadic_j = j;
        p.weight = std::exp2(double(j));
        if (j == 0) {
            p.shape = PieceShape::Ball;
            p.center = {0.0, 0.0};
            p.radius = 2.0;
            p.inner_radius = 2.0;
            p.outer_radius = 2.0;
            p.measure = g.dim == 1 ? 4.0 : kPi * 4.0;
        } else {
            p.shape = PieceShape::Annulus;
            p.annulus_lo = std::exp2(double(j - 1));
            p.annulus_hi = std::exp2(double(j + 1));
            p.inner_radius = 0.5 * (p.annulus_hi - p.annulus_lo);
            p.outer_radius = p.annulus_hi;
            p.measure = g.dim == 1 ? 2.0 * (p.annulus_hi - p.annulus_lo)
                                   : kPi * (p.annulus_hi * p.annulus_hi - p.annulus_lo * p.annulus_lo);
            p.center = {p.annulus_lo * 2.0, 0.0};  // representative seed (2^j, 0)
        }
        p.lattice_key = {j, 0};
        cov.pieces.push_back(std::move(p));
    }
}

inline void build_alpha_mid(Covering& cov) {
    const GridSpec& g = cov.grid;
    const double alpha = cov.alpha;
    const double expo = alpha / (1.0 - alpha);
    // denominator must stay sane on both lattices (xi and eta extents) and on
    // the padded lattice used by window_derivative_l1
    const double domain_half =
        std::max(4.0 * g.nyquist(), g.period / 2.0) * std::sqrt(double(g.dim));

    std::vector<std::array<long, 2>> denom_keys;
    double r = 2.0 * std::sqrt(double(g.dim));
    for (int attempt = 0;; ++attempt) {
        cov.denom_centers.clear();
        cov.denom_scales.clear();
        denom_keys.clear();
        long kmax = long(std::ceil(std::pow(2.0 * domain_half, 1.0 - alpha) + r)) + 2;
        auto consider = [&](std::array<long, 2> k) {
            double kn = std::sqrt(double(k[0] * k[0] + k[1] * k[1]));
            if (kn == 0) return;
            double scale = std::pow(kn, expo);
            std::array<double, 2> c{scale * k[0], scale * k[1]};
            double cn = std::sqrt(c[0] * c[0] + c[1] * c[1]);
            if (cn - r * scale > domain_half) return;  // ball misses the domain box
            cov.denom_centers.push_back(c);
            cov.denom_scales.push_back(scale);
            denom_keys.push_back(k);
        };
        if (g.dim == 1) {
            for (long k = -kmax; k <= kmax; ++k) consider({k, 0});
        } else {
            for (long k0 = -kmax; k0 <= kmax; ++k0)
                for (long k1 = -kmax; k1 <= kmax; ++k1) consider({k0, k1});
        }
        cov.bump_r = r;

        // denominator floor over the band lattice
        double dmin = 1e300;
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto p = g.xi_point(i);
            bool in_band = true;
            for (int d = 0; d < g.dim; ++d)
                if (std::abs(p[std::size_t(d)]) > cov.band) in_band = false;
            if (!in_band) continue;
            double den = 0;
            for (std::size_t c = 0; c < cov.denom_centers.size(); ++c) {
                double s2 = 0;
                for (int d = 0; d < g.dim; ++d) {
                    double t = (p[std::size_t(d)] - cov.denom_centers[c][std::size_t(d)]) / cov.denom_scales[c];
                    s2 += t * t;
                }
                den += bump01(std::sqrt(s2) / r);
            }
            dmin = std::min(dmin, den);
        }
        if (dmin >= 1e-6) break;
        if (attempt >= 6)
            throw std::runtime_error(
                "build_covering: denominator floor unreachable after 6 doublings of r");
        r *= 2.0;
    }

    // pieces: the denominator balls that meet the truncation band, in the
    // lexicographic k order of the enumeration above
    for (std::size_t idx = 0; idx < cov.denom_centers.size(); ++idx) {
        const auto& c = cov.denom_centers[idx];
        double radius = cov.bump_r * cov.denom_scales[idx];
        double dist = 0;
        for (int d = 0; d < g.dim; ++d) {
            double gap = std::abs(c[std::size_t(d)]) - cov.band;
            if (gap > 0) dist += gap * gap;
        }
        if (std::sqrt(dist) > radius) continue;
        CoveringPiece p;
        p.shape = PieceShape::Ball;
        p.center = {c[0], g.dim == 2 ? c[1] : 0.0};
        p.radius = radius;
        p.inner_radius = radius;
        p.outer_radius = radius;
        p.measure = g.dim == 1 ? 2.0 * radius : kPi * radius * radius;
        p.lattice_key = denom_keys[idx];
        p.denom_index = idx;
        cov.pieces.push_back(std::move(p));
    }
    if (cov.pieces.empty())
        throw std::runtime_error("build_covering: no pieces meet the truncation band");
}

}  // namespace detail

inline AdmissibilityReport validate_covering(const Covering& cov);

inline Covering build_covering(double alpha, const GridSpec& grid) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("build_covering: alpha must lie in [0,1]");
    Covering cov;
    cov.alpha = alpha;
    cov.grid = grid;
    cov.band = 0.8 * grid.nyquist();

    if (alpha == 0.0)
        detail::build_alpha0(cov);
    else if (alpha == 1.0)
        detail::build_alpha1(cov);
    else
        detail::build_alpha_mid(cov);

    for (std::size_t i = 0; i < cov.pieces.size(); ++i) {
        auto& p = cov.pieces[i];
        p.id = int(i);
        p.rep = detail::snap_to_lattice(grid, p, grid.dim);
        if (alpha != 1.0) p.weight = detail::angle_bracket(p.rep, grid.dim);
    }
    detail::finalize_windows(cov);
    cov.admissibility = validate_covering(cov);
    return cov;
}

inline AdmissibilityReport validate_covering(const Covering& cov) {
    const GridSpec& g = cov.grid;
    AdmissibilityReport rep;
    rep.alpha = cov.alpha;
    rep.grid_n = g.n;
    rep.piece_count = int(cov.pieces.size());
    rep.unit_ball_volume = g.dim == 1 ? 2.0 : kPi;

    const std::size_t nn = g.size();
    double residual = 0;
    int n0 = 0;
    double kappa_within = 1.0;
    for (std::size_t i = 0; i < nn; ++i) {
        auto p = g.xi_point(i);
        bool in_band = true;
        for (int d = 0; d < g.dim; ++d)
            if (std::abs(p[std::size_t(d)]) > cov.band) in_band = false;
        int mult = 0;
        double partition = 0;
        for (const auto& piece : cov.pieces) {
            if (piece.contains(p, g.dim)) {
                ++mult;
                if (in_band) {
                    double ratio = detail::angle_bracket(p, g.dim) /
                                   detail::angle_bracket(piece.rep, g.dim);
                    kappa_within = std::max({kappa_within, ratio, 1.0 / ratio});
                }
            }
            partition += piece.window_xi[i];
        }
        if (in_band) {
            n0 = std::max(n0, mult);
            residual = std::max(residual, std::abs(partition - 1.0));
        }
    }
    rep.n0 = n0;
    rep.partition_residual = residual;
    rep.kappa_within = kappa_within;

    auto enlarged_count = [&](double R) {
        int worst = 0;
        for (const auto& a : cov.pieces) {
            int count = 0;
            for (const auto& b : cov.pieces)
                if (piece_distance(a, b, g.dim) <= R) ++count;
            worst = std::max(worst, count);
        }
        return worst;
    };
    rep.n0_enlarged_1 = enlarged_count(1.0);
    rep.n0_enlarged_2 = enlarged_count(2.0);

    bool first = true;
    double kappa_nb = 1.0;
    for (const auto& piece : cov.pieces) {
        double mr = piece.measure / std::pow(detail::angle_bracket(piece.rep, g.dim),
                                             cov.alpha * g.dim);
        double rr = piece.measure / std::pow(piece.inner_radius, g.dim);
        double rR = piece.measure / std::pow(piece.outer_radius, g.dim);
        double K = piece.outer_radius / piece.inner_radius;
        if (first) {
            rep.measure_ratio_lo = rep.measure_ratio_hi = mr;
            rep.ratio24_r_lo = rep.ratio24_r_hi = rr;
            rep.ratio24_R_lo = rep.ratio24_R_hi = rR;
            rep.k_bound = K;
            first = false;
        } else {
            rep.measure_ratio_lo = std::min(rep.measure_ratio_lo, mr);
            rep.measure_ratio_hi = std::max(rep.measure_ratio_hi, mr);
            rep.ratio24_r_lo = std::min(rep.ratio24_r_lo, rr);
            rep.ratio24_r_hi = std::max(rep.ratio24_r_hi, rr);
            rep.ratio24_R_lo = std::min(rep.ratio24_R_lo, rR);
            rep.ratio24_R_hi = std::max(rep.ratio24_R_hi, rR);
            rep.k_bound = std::max(rep.k_bound, K);
        }
    }
    for (const auto& a : cov.pieces)
        for (const auto& b : cov.pieces)
            if (piece_distance(a, b, g.dim) <= 1.0) {
                double ratio = detail::angle_bracket(a.rep, g.dim) /
                               detail::angle_bracket(b.rep, g.dim);
                kappa_nb = std::max({kappa_nb, ratio, 1.0 / ratio});
            }
    rep.kappa_neighbor = kappa_nb;
    return rep;
}

// || d^beta (F^-1 psi_Q) ||_{L^1} per piece, computed as the spatial L^1 norm
// of F^-1[(i xi)^beta psi_Q], plus the ratio to w_Q^{|beta|}
struct WindowDerivativeL1 {
    std::vector<double> l1;
    std::vector<double> ratio;
};

inline WindowDerivativeL1 window_derivative_l1(const Covering& cov,
                                               const std::array<int, 2>& beta) {
    const GridSpec& g = cov.grid;
    int order = beta[0] + (g.dim == 2 ? beta[1] : 0);
    if (beta[0] < 0 || beta[1] < 0 || order > 2)
        throw std::invalid_argument("window_derivative_l1: |beta| must be <= 2");

    // near-band pieces can stick out past the lattice box; evaluate each
    // window on a padded lattice (same step, wider range) so the transform
    // sees the full compactly supported profile, not a truncated one
    double reach = g.nyquist();
    for (const auto& piece : cov.pieces) {
        double r = std::max(std::abs(piece.center[0]), std::abs(piece.center[1])) +
                   piece.outer_radius;
        if (piece.shape == PieceShape::Annulus) r = piece.annulus_hi;
        reach = std::max(reach, r);
    }
    int pad = 1;
    while (pad < 4 && g.nyquist() * pad < reach * 1.01) pad *= 2;
    GridSpec gp = make_grid(g.dim, g.n * pad, g.period);

    WindowDerivativeL1 out;
    const std::size_t nn = gp.size();
    for (const auto& piece : cov.pieces) {
        SampledFunction F(gp, Domain::Frequency);
        for (std::size_t i = 0; i < nn; ++i) {
            auto xi = gp.xi_point(i);
            cdouble v = cov.window_value(piece, xi);
            for (int b = 0; b < beta[0]; ++b) v *= cdouble{0.0, xi[0]};
            if (g.dim == 2)
                for (int b = 0; b < beta[1]; ++b) v *= cdouble{0.0, xi[1]};
            F.values[i] = v;
        }
        double l1 = lp_norm(inverse_ft(F), 1.0);
        out.l1.push_back(l1);
        out.ratio.push_back(l1 / std::pow(piece.weight, double(order)));
    }
    return out;
}

}  // namespace alphamod
