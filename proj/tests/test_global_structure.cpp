#include "doctest.h"

#include <cmath>
#include <numbers>

#include "laxo/errors.hpp"
#include "laxo/global_structure.hpp"

using namespace laxo;
using std::numbers::pi;

namespace {

InitialData minus_sin() { return InitialData::periodic_terms({Term::sine(-1.0, 1.0)}, 2 * pi, -pi); }

InitialData lopsided(double mean = 0.0)
{
    return InitialData::periodic_terms({Term::sine(-1.0, 1.0), Term::sine(0.3, 2.0), Term::constant(mean)}, 2 * pi, -pi);
}

// 0.5 plus a bump whose primitive (minus 0.5 x) bottoms out only at 0
InitialData bump()
{
    return InitialData({Piece{-1.0, 1.0, {Term::constant(0.5), Term::sine(0.8, pi)}}}, 0.5, 0.5);
}

InitialData wiggly_ramp()
{
    return InitialData({Piece{-2.0, 2.0, {Term::poly({0.0, 0.5}), Term::sine(0.7, 3.0)}}}, -1.0, 1.0);
}

} // namespace

TEST_CASE("hull of -sin is the level of the minima")
{
    Solver s(Flux::burgers(), minus_sin());
    GlobalStructure gs(s);
    const HullReport& h = gs.hull();
    CHECK(h.periodic);
    CHECK(h.N == doctest::Approx(4 * pi));
    for (double v : h.hull) CHECK(v == doctest::Approx(-2.0).epsilon(1e-9));
    REQUIRE(h.K0.size() == 4);
    const double odd[] = {-3 * pi, -pi, pi, 3 * pi};
    for (int i = 0; i < 4; ++i) {
        CHECK(h.K0[i].width() == 0.0);
        CHECK(std::fabs(h.K0[i].lo - odd[i]) < 1e-6);
    }
}

TEST_CASE("hull invariants on a wiggly ramp")
{
    Solver s(Flux::burgers(), wiggly_ramp());
    GlobalStructure gs(s);
    const HullReport& h = gs.hull();
    double pmax = 0;
    for (double p : h.phi) pmax = std::max(pmax, std::fabs(p));
    const double tol = 1e-9 * (1 + pmax);
    for (std::size_t i = 0; i < h.xs.size(); ++i) CHECK(h.hull[i] <= h.phi[i] + tol);
    for (std::size_t i = 1; i + 1 < h.xs.size(); ++i) {
        const double s1 = (h.hull[i] - h.hull[i - 1]) / (h.xs[i] - h.xs[i - 1]);
        const double s2 = (h.hull[i + 1] - h.hull[i]) / (h.xs[i + 1] - h.xs[i]);
        CHECK(s2 - s1 >= -1e-6);
    }
    for (const auto& c : h.K0) CHECK(std::fabs(s.data().primitive(c.lo) - h.value(c.lo)) <= 1e-6);
    CHECK(h.K0_left_unbounded);
    CHECK(h.K0_right_unbounded);
    CHECK(h.K0.size() >= 3);
}

TEST_CASE("hull idempotence")
{
    Solver s(Flux::burgers(), wiggly_ramp());
    GlobalStructure gs(s, 0, 2e-3);
    const HullReport& h = gs.hull();
    std::vector<double> edges, slopes;
    for (std::size_t i = 0; i < h.xs.size(); i += 5) edges.push_back(h.xs[i]);
    if (edges.back() != h.xs.back()) edges.push_back(h.xs.back());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        slopes.push_back((h.value(edges[i + 1]) - h.value(edges[i])) / (edges[i + 1] - edges[i]));
    InitialData bar = InitialData::cells(edges, slopes, h.slope_left, h.slope_right);
    Solver s2(Flux::burgers(), bar);
    GlobalStructure gs2(s2, h.N, 2e-3);
    const HullReport& h2 = gs2.hull();
    const double off = h.value(0.0) - h2.value(0.0);
    double worst = 0;
    for (double x = -h.N; x <= h.N; x += 0.05) worst = std::max(worst, std::fabs(h2.value(x) + off - h.value(x)));
    CHECK(worst < 1e-8);
}

TEST_CASE("hull of a rarefaction step is the primitive itself")
{
    Solver s(Flux::burgers(), InitialData::step(-1.0, 1.0));
    GlobalStructure gs(s);
    const HullReport& h = gs.hull();
    REQUIRE(h.K0.size() == 1);
    CHECK(h.K0_left_unbounded);
    CHECK(h.K0_right_unbounded);
    CHECK(h.K0[0].lo == doctest::Approx(-h.N));
    CHECK(h.K0[0].hi == doctest::Approx(h.N));
    const DivideFan d = gs.divide_fan(0.0);
    CHECK_FALSE(d.empty);
    CHECK(d.lo == doctest::Approx(-1.0));
    CHECK(d.hi == doctest::Approx(1.0));
    const DivideFan d2 = gs.divide_fan(2.0);
    CHECK(d2.lo == doctest::Approx(1.0));
    CHECK(d2.hi == doctest::Approx(1.0));
    CHECK(gs.partition().gaps.empty());
    CHECK_FALSE(gs.partition().has_minus_inf);
    CHECK_FALSE(gs.partition().has_plus_inf);
}

TEST_CASE("decreasing step has no hull")
{
    Solver s(Flux::burgers(), InitialData::step(1.0, 0.0));
    GlobalStructure gs(s);
    CHECK_THROWS_AS(gs.hull(), HullInfinite);
    CHECK_THROWS_AS(gs.partition(), NoDivides);
    CHECK(gs.divide_fan(0.0).empty);
}

TEST_CASE("divide fans for -sin")
{
    Solver s(Flux::burgers(), minus_sin());
    GlobalStructure gs(s);
    const DivideFan d = gs.divide_fan(pi);
    CHECK_FALSE(d.empty);
    CHECK(std::fabs(d.lo) < 1e-8);
    CHECK(std::fabs(d.hi) < 1e-8);
    CHECK(gs.divide_fan(0.0).empty);
    CHECK(gs.divide_fan(2.0).empty);
}

TEST_CASE("verify_divide")
{
    Solver s(Flux::burgers(), minus_sin());
    GlobalStructure gs(s);
    CHECK(gs.verify_divide(pi, 0.0, 10.0));
    CHECK_FALSE(gs.verify_divide(0.0, 0.0, 10.0));
    Solver r(Flux::burgers(), InitialData::step(-1.0, 1.0));
    GlobalStructure gr(r);
    CHECK(gr.verify_divide(0.0, 0.5, 10.0));
    CHECK_FALSE(gr.verify_divide(1.0, 0.5, 10.0));
}

TEST_CASE("partition of -sin")
{
    Solver s(Flux::burgers(), minus_sin());
    GlobalStructure gs(s);
    const Partition& p = gs.partition();
    REQUIRE(p.gaps.size() == 3);
    for (std::size_t n = 0; n < 3; ++n) {
        CHECK(std::fabs(p.gaps[n].e - (2.0 * n - 3) * pi) < 1e-6);
        CHECK(std::fabs(p.gaps[n].h - (2.0 * n - 1) * pi) < 1e-6);
        CHECK(std::fabs(p.gaps[n].c) < 1e-9);
    }
    CHECK_FALSE(p.has_minus_inf);
    CHECK_FALSE(p.has_plus_inf);
}

TEST_CASE("compact bump on a constant")
{
    Solver s(Flux::burgers(), bump());
    GlobalStructure gs(s);
    const Partition& p = gs.partition();
    REQUIRE(p.K0.size() == 1);
    CHECK(std::fabs(p.K0[0].lo) < 1e-6);
    CHECK(p.K0[0].width() == 0.0);
    CHECK(p.has_minus_inf);
    CHECK(p.has_plus_inf);
    CHECK(p.speed_minus == doctest::Approx(0.5));
    CHECK(p.speed_plus == doctest::Approx(0.5));
    CHECK(gs.u_tilde(20.0, 1.0) == doctest::Approx(0.5));
    CHECK(gs.u_tilde(-20.0, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("rarefaction-constant profile")
{
    Solver s(Flux::burgers(), minus_sin());
    GlobalStructure gs(s);
    CHECK(std::fabs(gs.u_tilde(0.3, 2.0)) < 1e-9);
    CHECK(std::fabs(gs.u_tilde(-2.0, 7.0)) < 1e-9);
    Solver r(Flux::burgers(), InitialData::step(-1.0, 1.0));
    GlobalStructure gr(r);
    CHECK(gr.u_tilde(0.5, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("N-wave evaluator")
{
    Solver s(Flux::burgers(), minus_sin());
    GlobalStructure gs(s);
    const auto& gaps = gs.partition().gaps;
    auto at_zero = [&](std::size_t n, double) { return 0.5 * (gaps[n].e + gaps[n].h); };
    CHECK(gs.nwave(-1.0, 2.0, at_zero) == doctest::Approx((-1.0 + pi) / 2.0));
    CHECK(gs.nwave(1.0, 2.0, at_zero) == doctest::Approx((1.0 - pi) / 2.0));
    CHECK(std::fabs(gs.nwave(pi, 2.0, at_zero)) < 1e-9);
    // tracked shock sits at the origin by symmetry
    CHECK(std::fabs(gs.gap_shock(1, 3.0)) < 1e-6);
    Solver r(Flux::burgers(), InitialData::step(-1.0, 1.0));
    GlobalStructure gr(r);
    for (double x : {-0.7, 0.0, 0.3, 0.9}) {
        const double u = r.solve(x, 1.0).u_plus;
        CHECK(gr.nwave(x, 1.0) == doctest::Approx(u).epsilon(1e-9));
        CHECK(gr.u_tilde(x, 1.0) == doctest::Approx(u).epsilon(1e-9));
    }
}

TEST_CASE("divide constancy")
{
    Solver s(Flux::burgers(), minus_sin());
    for (double t = 0.5; t <= 64.0; t *= 2) {
        const auto v = s.solve(pi, t);
        CHECK(std::fabs(v.u_minus) < 1e-9);
        CHECK(std::fabs(v.u_plus) < 1e-9);
    }
    Solver r(Flux::burgers(), InitialData::step(-1.0, 1.0));
    for (double t = 0.5; t <= 64.0; t *= 2) {
        const auto v = r.solve(0.3 + t, t);
        CHECK(v.u_minus == doctest::Approx(1.0));
        CHECK(v.u_plus == doctest::Approx(1.0));
    }
}

TEST_CASE("invariant constancy for periodic data")
{
    Solver s(Flux::burgers(), lopsided(0.2));
    const auto ti = s.data().tail_invariants();
    CHECK(ti.ubar_r == doctest::Approx(0.2));
    const double X = 60.0;
    const int n = 12001;
    for (double t : {1.0, 5.0, 25.0}) {
        for (double sign : {1.0, -1.0}) {
            std::vector<double> xs(n);
            for (int i = 0; i < n; ++i) xs[i] = sign * X * i / (n - 1);
            const auto us = s.solve_grid(xs, t);
            double acc = 0;
            for (int i = 0; i < n; ++i) acc += (i == 0 || i == n - 1 ? 0.5 : 1.0) * us[i].u_plus;
            const double mean = acc * (X / (n - 1)) / X;
            CHECK(std::fabs(mean - 0.2) <= 3.0 / X + 1e-3);
        }
    }
}

TEST_CASE("sup-norm decay for Burgers and a quartic flux")
{
    const std::vector<double> ts = {10, 20, 40, 80};
    Solver b(Flux::burgers(), minus_sin());
    GlobalStructure gb(b);
    const DecayFit fb = gb.measure_decay(DecayNorm::sup, 0, {-pi, pi}, ts);
    CHECK(std::fabs(fb.exponent + 1.0) <= 0.1);
    CHECK(fb.constant <= pi * 1.1);

    Solver q(Flux::power2n(2), minus_sin());
    GlobalStructure gq(q);
    const DecayFit fq = gq.measure_decay(DecayNorm::sup, 0, {-pi, pi}, ts);
    CHECK(std::fabs(fq.exponent + 1.0 / 3.0) <= 0.05);
}

TEST_CASE("L1 distance to the N-wave decays at least like 1/t")
{
    Solver b(Flux::burgers(), minus_sin());
    GlobalStructure gb(b);
    const DecayFit f = gb.measure_decay(DecayNorm::Lq, 1.0, {-pi, pi}, {10, 20, 40, 80}, DecayTarget::nwave);
    MESSAGE("exponent " << f.exponent);
    CHECK(f.exponent <= -1.0);
}

TEST_CASE("shock drifts to the gap midpoint")
{
    Solver s(Flux::burgers(), lopsided());
    GlobalStructure gs(s);
    const Partition& p = gs.partition();
    REQUIRE(p.gaps.size() >= 2);
    std::size_t n = 0;
    while (!(p.gaps[n].e < 0 && p.gaps[n].h > 0)) ++n;
    CHECK(std::fabs(p.gaps[n].e + pi) < 1e-6);
    CHECK(std::fabs(p.gaps[n].h - pi) < 1e-6);
    const double mid = 0.5 * (p.gaps[n].e + p.gaps[n].h);
    double prev = 1e300;
    for (double t : {10.0, 20.0, 50.0, 100.0}) {
        const double off = std::fabs(gs.gap_shock(n, t) - t * p.gaps[n].c - mid);
        CHECK(off <= prev + 1e-9);
        prev = off;
    }
    CHECK(prev < 0.05);
    CHECK(std::fabs(gs.theta(n, 100.0) - 0.5) <= 0.05);
}

TEST_CASE("off-grid minimum of a periodic primitive")
{
    Solver s(Flux::burgers(), InitialData::periodic_terms({Term::sine(-1.0, 1.0), Term::cosine(0.3, 2.0)}, 2 * pi, -pi));
    GlobalStructure gs(s);
    const HullReport& h = gs.hull();
    REQUIRE(h.K0.size() == 4);
    // minimiser of cos x + 0.15 sin 2x near pi: sin x = 0.3 cos 2x
    double x = pi;
    for (int k = 0; k < 50; ++k) x -= (-std::sin(x) + 0.3 * std::cos(2 * x)) / (-std::cos(x) - 0.6 * std::sin(2 * x));
    bool found = false;
    for (const auto& c : h.K0) found = found || std::fabs(c.lo - (x - 2 * pi)) < 1e-6;
    CHECK(found);
    for (std::size_t i = 1; i < h.K0.size(); ++i) CHECK(h.K0[i].lo - h.K0[i - 1].lo == doctest::Approx(2 * pi).epsilon(1e-7));
}

TEST_CASE("midpoint law without symmetry")
{
    Solver s(Flux::burgers(), InitialData::periodic_terms({Term::sine(-1.0, 1.0), Term::cosine(0.3, 2.0)}, 2 * pi, -pi));
    GlobalStructure gs(s);
    const Partition& p = gs.partition();
    std::size_t n = 0;
    while (!(p.gaps[n].e < 0 && p.gaps[n].h > 0)) ++n;
    const double mid = 0.5 * (p.gaps[n].e + p.gaps[n].h);
    CHECK(std::fabs(mid) > 0.1);
    double prev = 1e300;
    for (double t : {5.0, 10.0, 20.0, 50.0}) {
        const double off = std::fabs(gs.gap_shock(n, t) - mid);
        CHECK(off < prev);
        prev = off;
    }
    CHECK(prev < 1e-3);
    CHECK(gs.theta(n, 50.0) == doctest::Approx(0.5).epsilon(0.01));
}
