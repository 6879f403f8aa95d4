#pragma once

// Smooth compactly supported windows shared by the covering constructions,
// the mollifier and the Lipschitz regularizer.

#include <cmath>
#include <vector>

#include "alphamod/util.hpp"

namespace alphamod {

// exp(1 - 1/(1-t^2)) on |t|<1, zero outside; peak value 1 at t = 0
inline double bump01(double t) {
    double u = 1.0 - t * t;
    if (u <= 0) return 0.0;
    return std::exp(1.0 - 1.0 / u);
}

// C^inf step: 0 for t<=0, 1 for t>=1
inline double smooth_step(double t) {
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    double a = std::exp(-1.0 / t);
    double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

// radial cutoff: 1 on |s|<=1, 0 on |s|>=2
inline double dyadic_cutoff(double s) { return smooth_step(2.0 - std::abs(s)); }

namespace detail {

// midpoint rule on [-1,1]; spectrally accurate for smooth compactly
// supported integrands
template <class F>
double quad11(F&& f, int m = 4096) {
    double h = 2.0 / m;
    double s = 0;
    for (int i = 0; i < m; ++i) s += f(-1.0 + (i + 0.5) * h);
    return s * h;
}

inline double bump01_mass() {
    static const double v = quad11([](double t) { return bump01(t); });
    return v;
}
inline double bump01_second_moment() {
    static const double v = quad11([](double t) { return t * t * bump01(t); });
    return v;
}

}  // namespace detail

// 1D cosine transform int e^{-ist} w(t) dt of an even window on [-1,1]
template <class F>
double even_window_transform(F&& w, double s, int m = 4096) {
    return detail::quad11([&](double t) { return std::cos(s * t) * w(t); }, m);
}

// ---- mollifier windows (sigma_eps = Phi_eps (Psi_eps * sigma)) ---------------
// psi: unit-mass bump; only its transform is ever sampled, so small eps stays
// well resolved. phi: band-limited with phi(0)=1 and supp Fphi in B(0,1).

inline double mollifier_psi_hat(double s) {
    return even_window_transform([](double t) { return bump01(t); }, s) /
           detail::bump01_mass();
}

// ---- Lipschitz regularizer window --------------------------------------------
// One 1D profile with the two normalizations the construction needs:
// reg1(0) = 1 and int reg1 = 1.  reg1(t) = bump01(t) (1 + B t^2) with B solved
// from the mass constraint; n = 2 uses the tensor square.

inline double reg_window_b() {
    static const double b =
        (1.0 - detail::bump01_mass()) / detail::bump01_second_moment();
    return b;
}

inline double reg_window(double t) { return bump01(t) * (1.0 + reg_window_b() * t * t); }

inline double reg_window_deriv(double t) {
    // d/dt [bump01(t)(1+Bt^2)]; bump01'(t) = bump01(t) * (-2t/(1-t^2)^2)
    double u = 1.0 - t * t;
    if (u <= 0) return 0.0;
    double B = reg_window_b();
    double b = bump01(t);
    return b * (-2.0 * t / (u * u)) * (1.0 + B * t * t) + b * 2.0 * B * t;
}

inline double reg_window_hat(double s) {
    return even_window_transform([](double t) { return reg_window(t); }, s);
}

// Constants of the regularizer gradient bound, evaluated for the library
// window on a fine grid: C1 = sup (1+|x|)|grad w|, C2 = int (1+|y|)|w|,
// plus sup|grad w| and ||w||_1 ||w||_inf.  The bound on ||grad a_eps||_inf /
// ||grad a||_inf is C1 C2 + sup|grad w| + ||w||_1 ||w||_inf (tensorized for
// n = 2).
struct RegWindowConstants {
    double c1;
    double c2;
    double grad_sup;
    double l1;
    double linf;
    double gradient_bound() const { return c1 * c2 + grad_sup + l1 * linf; }
};

inline RegWindowConstants reg_window_constants(int dim) {
    static const RegWindowConstants base = [] {
        RegWindowConstants c{0, 0, 0, 0, 0};
        const int m = 8192;
        const double h = 2.0 / m;
        for (int i = 0; i < m; ++i) {
            double t = -1.0 + (i + 0.5) * h;
            double w = reg_window(t);
            double dw = reg_window_deriv(t);
            c.c1 = std::max(c.c1, (1.0 + std::abs(t)) * std::abs(dw));
            c.c2 += (1.0 + std::abs(t)) * std::abs(w) * h;
            c.grad_sup = std::max(c.grad_sup, std::abs(dw));
            c.l1 += std::abs(w) * h;
            c.linf = std::max(c.linf, std::abs(w));
        }
        return c;
    }();
    if (dim == 1) return base;
    // tensor window w(t1)w(t2); constants scanned on a fine 2D grid
    static const RegWindowConstants tensor = [] {
        RegWindowConstants c{0, 0, 0, 0, 0};
        const int m = 512;
        const double h = 2.0 / m;
        for (int i = 0; i < m; ++i) {
            double t1 = -1.0 + (i + 0.5) * h;
            for (int j = 0; j < m; ++j) {
                double t2 = -1.0 + (j + 0.5) * h;
                double w = reg_window(t1) * reg_window(t2);
                double g1 = reg_window_deriv(t1) * reg_window(t2);
                double g2 = reg_window(t1) * reg_window_deriv(t2);
                double gn = std::sqrt(g1 * g1 + g2 * g2);
                double r = std::sqrt(t1 * t1 + t2 * t2);
                c.c1 = std::max(c.c1, (1.0 + r) * gn);
                c.c2 += (1.0 + r) * std::abs(w) * h * h;
                c.grad_sup = std::max(c.grad_sup, gn);
                c.l1 += std::abs(w) * h * h;
                c.linf = std::max(c.linf, std::abs(w));
            }
        }
        return c;
    }();
    return tensor;
}

}  // namespace alphamod
