#include <catch2/catch_amalgamated.hpp>

#include "alphamod/grid.hpp"
#include "alphamod/synthesize.hpp"
#include "oracle_helpers.hpp"

using namespace alphamod;

TEST_CASE("make_grid populates lattices per the conventions") {
    GridSpec g = make_grid(1, 16, kTwoPi);
    CHECK(g.nyquist() == Catch::Approx(8.0));
    CHECK(g.xi(0) == 0.0);
    CHECK(g.xi(1) == Catch::Approx(1.0));
    CHECK(g.xi(8) == Catch::Approx(-8.0));   // natural order wraps to -N/2
    CHECK(g.xi(15) == Catch::Approx(-1.0));
    CHECK(g.x(0) == Catch::Approx(-kPi));
    CHECK(g.x(8) == Catch::Approx(0.0));

    GridSpec g2 = make_grid(2, 32, 2.0 * kTwoPi);
    CHECK(g2.dxi() == Catch::Approx(0.5));
    CHECK(g2.nyquist() == Catch::Approx(8.0));
    CHECK(g2.size() == 32u * 32u);
}

TEST_CASE("make_grid rejects bad parameters") {
    CHECK_THROWS_AS(make_grid(1, 15, kTwoPi), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 8, kTwoPi), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 48, kTwoPi), std::invalid_argument);  // not a power of two
    CHECK_THROWS_AS(make_grid(3, 16, kTwoPi), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 16, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 16, -1.0), std::invalid_argument);
}

TEST_CASE("forward transform of constants and characters") {
    GridSpec g = make_grid(1, 32, kTwoPi);
    SampledFunction one(g, Domain::Space);
    for (auto& v : one.values) v = 1.0;
    SampledFunction F = forward_ft(one);
    CHECK(std::abs(F.values[0] - cdouble{g.period, 0}) < 1e-12 * g.period);
    for (std::size_t i = 1; i < F.values.size(); ++i) CHECK(std::abs(F.values[i]) < 1e-12 * g.period);

    SampledFunction wave = synth_plane_wave(g, 3);
    SampledFunction W = forward_ft(wave);
    for (std::size_t i = 0; i < W.values.size(); ++i) {
        cdouble expect = (g.signed_index(int(i)) == 3) ? cdouble{g.period, 0} : cdouble{0, 0};
        CHECK(std::abs(W.values[i] - expect) < 1e-10);
    }
}

TEST_CASE("transforms match the direct-summation oracle") {
    for (int dim : {1, 2}) {
        GridSpec g = make_grid(dim, dim == 1 ? 32 : 16, 1.5 * kTwoPi);
        Rng rng(99 + std::uint64_t(dim));
        SampledFunction f(g, Domain::Space);
        for (auto& v : f.values) v = cdouble{rng.uniform_symm(), rng.uniform_symm()};

        SampledFunction F = forward_ft(f);
        auto Fo = oracle::direct_forward(g, f.values);
        CHECK(oracle::max_abs_diff(F.values, Fo) < 1e-10 * oracle::max_abs(Fo));

        SampledFunction back = inverse_ft(F);
        auto bo = oracle::direct_inverse(g, Fo);
        CHECK(oracle::max_abs_diff(back.values, bo) < 1e-10);
        CHECK(oracle::max_abs_diff(back.values, f.values) < 1e-12);
    }
}

TEST_CASE("inverse of the frequency delta is the constant") {
    GridSpec g = make_grid(1, 32, kTwoPi);
    SampledFunction F(g, Domain::Frequency);
    F.values[0] = g.period;
    SampledFunction f = inverse_ft(F);
    for (const auto& v : f.values) CHECK(std::abs(v - cdouble{1, 0}) < 1e-12);
}

TEST_CASE("domain tags are enforced") {
    GridSpec g = make_grid(1, 16, kTwoPi);
    SampledFunction f(g, Domain::Space);
    CHECK_THROWS_AS(inverse_ft(f), std::invalid_argument);
    CHECK_THROWS_AS(forward_ft(forward_ft(f)), std::invalid_argument);
}

TEST_CASE("transform linearity") {
    GridSpec g = make_grid(1, 64, kTwoPi);
    Rng rng(7);
    SampledFunction f(g, Domain::Space), h(g, Domain::Space), sum(g, Domain::Space);
    cdouble c{rng.uniform_symm(), rng.uniform_symm()};
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        f.values[i] = cdouble{rng.uniform_symm(), rng.uniform_symm()};
        h.values[i] = cdouble{rng.uniform_symm(), rng.uniform_symm()};
        sum.values[i] = c * f.values[i] + h.values[i];
    }
    SampledFunction lhs = forward_ft(sum);
    SampledFunction Ff = forward_ft(f), Fh = forward_ft(h);
    for (std::size_t i = 0; i < lhs.values.size(); ++i)
        CHECK(std::abs(lhs.values[i] - (c * Ff.values[i] + Fh.values[i])) < 1e-12 * g.period);
}

TEST_CASE("forward transform of a real even function is real (n = 1)") {
    GridSpec g = make_grid(1, 128, 8.0 * kTwoPi);
    SampledFunction f = synth_gaussian(g, 1.0);
    SampledFunction F = forward_ft(f);
    for (const auto& v : F.values) CHECK(std::abs(v.imag()) < 1e-12 * g.period);
}

TEST_CASE("quadrature norms") {
    GridSpec g = make_grid(1, 32, kTwoPi);
    SampledFunction one(g, Domain::Space);
    for (auto& v : one.values) v = 1.0;
    CHECK(lp_norm(one, 2.0) == Catch::Approx(std::sqrt(kTwoPi)).epsilon(1e-12));
    double base1 = lp_norm(one, 1.0);
    double base_inf = lp_norm(one, std::numeric_limits<double>::infinity());

    SampledFunction scaled = one;
    cdouble c{-2.5, 1.25};
    for (auto& v : scaled.values) v *= c;
    CHECK(lp_norm(scaled, 1.0) == Catch::Approx(std::abs(c) * base1));
    CHECK(lp_norm(scaled, 2.0) == Catch::Approx(std::abs(c) * std::sqrt(kTwoPi)));
    CHECK(lp_norm(scaled, std::numeric_limits<double>::infinity()) ==
          Catch::Approx(std::abs(c) * base_inf));
    CHECK_THROWS_AS(lp_norm(one, 3.0), std::invalid_argument);

    SampledFunction zero(g, Domain::Space);
    CHECK(lp_norm(zero, 2.0) == 0.0);
}

TEST_CASE("discrete Plancherel with the stated weights") {
    for (int dim : {1, 2}) {
        GridSpec g = make_grid(dim, dim == 1 ? 64 : 16, 1.5 * kTwoPi);
        Rng rng(5);
        SampledFunction f(g, Domain::Space);
        for (auto& v : f.values) v = cdouble{rng.uniform_symm(), rng.uniform_symm()};
        double lhs = std::pow(lp_norm(forward_ft(f), 2.0), 2);
        double rhs = std::pow(kTwoPi, dim) * std::pow(lp_norm(f, 2.0), 2);
        CHECK(lhs == Catch::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("partial transforms compose to the full 2n-dim transform") {
    GridSpec g = make_grid(1, 16, kTwoPi);
    const std::size_t nn = g.size();
    Rng rng(11);
    SampledSymbol s(g);
    for (auto& v : s.values) v = cdouble{rng.uniform_symm(), rng.uniform_symm()};

    SampledSymbol G = partial_ft_xi(partial_ft_x(s));
    CHECK(G.domain == SymbolDomain::YEta);
    // direct 2n-dim oracle: int int e^{-i(y x + eta xi)} sigma dx dxi
    for (std::size_t m = 0; m < nn; ++m) {
        for (std::size_t l = 0; l < nn; ++l) {
            auto y = g.xi_point(m);
            auto eta = g.eta_point(l);
            cdouble acc{0, 0};
            for (std::size_t j = 0; j < nn; ++j) {
                for (std::size_t k = 0; k < nn; ++k) {
                    auto x = g.x_point(j);
                    auto xi = g.xi_point(k);
                    acc += std::polar(1.0, -(y[0] * x[0] + eta[0] * xi[0])) * s.at(j, k);
                }
            }
            acc *= g.dx() * g.dxi();
            CHECK(std::abs(G.at(m, l) - acc) < 1e-9 * (1.0 + std::abs(acc)));
        }
    }
    SampledSymbol round = partial_ift_x(partial_ift_xi(G));
    CHECK(round.domain == SymbolDomain::XXi);
    CHECK(oracle::max_abs_diff(round.values, s.values) < 1e-12);

    // order of the two partial transforms is immaterial
    SampledSymbol G2 = partial_ft_x(partial_ft_xi(s));
    CHECK(oracle::max_abs_diff(G.values, G2.values) < 1e-12 * (1.0 + oracle::max_abs(G.values)));
}

TEST_CASE("synthesize: identity multiplier symbol") {
    GridSpec g = make_grid(1, 16, kTwoPi);
    SampledSymbol s = synth_multiplier_symbol(g, [](std::array<double, 2>) { return cdouble{1, 0}; });
    for (const auto& v : s.values) CHECK(v == cdouble{1, 0});
}

TEST_CASE("synthesize: plane wave has a single spectral line") {
    GridSpec g = make_grid(1, 32, kTwoPi);
    SampledFunction F = forward_ft(synth_plane_wave(g, 2));
    int nonzero = 0;
    for (std::size_t i = 0; i < F.values.size(); ++i)
        if (std::abs(F.values[i]) > 1e-9 * g.period) ++nonzero;
    CHECK(nonzero == 1);
}

TEST_CASE("synthesize: band-limited random has exact support and is reproducible") {
    GridSpec g = make_grid(1, 64, 4.0 * kTwoPi);
    BandSupport band = BandSupport::box(-4.0, 4.0, 1);
    SampledFunction f = synth_band_limited_random(g, band, 7);
    SampledFunction F = forward_ft(f);
    double m = oracle::max_abs(F.values);
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        auto xi = g.xi_point(i);
        if (std::abs(xi[0]) > 4.0) CHECK(std::abs(F.values[i]) < 1e-13 * m);
    }
    SampledFunction f2 = synth_band_limited_random(g, band, 7);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(f.values[i] == f2.values[i]);
    SampledFunction f3 = synth_band_limited_random(g, band, 8);
    CHECK(oracle::max_abs_diff(f.values, f3.values) > 1e-6);
}

TEST_CASE("synthesize rejects parameters beyond the safety band") {
    GridSpec g = make_grid(1, 32, kTwoPi);  // nyquist 16, safety 12.8
    CHECK_THROWS_AS(synth_plane_wave(g, 14), std::invalid_argument);
    CHECK_THROWS_AS(synth_band_limited_random(g, 14.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(synth_gaussian(g, 0.1), std::invalid_argument);
    CHECK_NOTHROW(synth_plane_wave(g, 12));
}

TEST_CASE("smooth tensor symbol: exact lattice support of both partial spectra") {
    GridSpec g = make_grid(1, 32, 4.0 * kTwoPi);
    SampledSymbol s = synth_smooth_s000_symbol(g, 2, 3, 13);
    SampledSymbol G = partial_ft_xi(partial_ft_x(s));
    const std::size_t nn = g.size();
    double m = oracle::max_abs(G.values);
    for (std::size_t mm = 0; mm < nn; ++mm) {
        for (std::size_t l = 0; l < nn; ++l) {
            auto y = g.xi_point(mm);
            auto eta = g.eta_point(l);
            bool in_support = std::abs(y[0]) <= 2 * g.dxi() + 1e-12 &&
                              std::abs(eta[0]) <= 3 * g.dx() + 1e-12;
            if (!in_support) CHECK(std::abs(G.at(mm, l)) < 1e-12 * m);
        }
    }
    CHECK_THROWS_AS(synth_smooth_s000_symbol(g, 2, 3, 13, 0.5 * g.dx()), std::invalid_argument);
}

TEST_CASE("band support geometry") {
    BandSupport b = BandSupport::box(-2.0, 2.0, 1);
    CHECK(b.measure(1) == Catch::Approx(4.0));
    CHECK(b.contains({1.5, 0}, 1));
    CHECK_FALSE(b.contains({2.5, 0}, 1));
    CHECK(b.contains_cell({1.0, 0}, 0.5, 1));
    CHECK_FALSE(b.contains_cell({1.8, 0}, 0.5, 1));
    BandSupport ball;
    ball.balls.push_back({{0, 0}, 2.0});
    CHECK(ball.measure(2) == Catch::Approx(4.0 * kPi));
    CHECK(ball.contains({1.0, 1.0}, 2));
}
