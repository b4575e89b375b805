#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "laxo/errors.hpp"
#include "laxo/initial_data.hpp"
#include "laxo/quadrature.hpp"

using namespace laxo;
using std::numbers::pi;

namespace {
InitialData minus_sin() { return InitialData::periodic_terms({Term::sine(-1.0, 1.0)}, 2 * pi, -pi); }
} // namespace

TEST_CASE("primitive examples")
{
    CHECK(minus_sin().primitive(pi) == doctest::Approx(-2.0).epsilon(1e-14));
    auto st = InitialData::step(1.0, 0.0);
    CHECK(st.primitive(-3.0) == doctest::Approx(-3.0));
    CHECK(st.primitive(3.0) == 0.0);
    CHECK(st.primitive(0.0) == 0.0);
    CHECK(minus_sin().primitive(0.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("periodic primitive matches cos x - 1 far away")
{
    auto d = minus_sin();
    for (double x : {-50.3, -7.0, 1.0, 3.0 * pi, 123.456})
        CHECK(d.primitive(x) == doctest::Approx(std::cos(x) - 1.0).epsilon(1e-11));
}

TEST_CASE("dini examples")
{
    auto a = InitialData::step(1.0, 0.0).dini(0.0);
    CHECK(a.upper_left == 1.0);
    CHECK(a.lower_right == 0.0);
    auto b = InitialData::step(0.0, 1.0).dini(0.0);
    CHECK(b.upper_left == 0.0);
    CHECK(b.lower_right == 1.0);
    auto c = minus_sin().dini(pi);
    CHECK(c.upper_left == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.lower_right == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("tail invariants")
{
    auto s = minus_sin().tail_invariants();
    CHECK(std::fabs(s.ubar_l) < 1e-12);
    CHECK(std::fabs(s.ulow_r) < 1e-12);
    auto st = InitialData::step(1.0, 0.0).tail_invariants();
    CHECK(st.ubar_l == 1.0);
    CHECK(st.ulow_l == 1.0);
    CHECK(st.ubar_r == 0.0);
    CHECK(st.ulow_r == 0.0);
    // m + compact bump
    InitialData bump({Piece{-1.0, 1.0, {Term::constant(0.5), Term::cosine(0.3, pi / 2)}}}, 0.5, 0.5);
    auto bt = bump.tail_invariants();
    CHECK(bt.ubar_l == 0.5);
    CHECK(bt.ulow_r == 0.5);
    InitialData notail({Piece{0.0, 1.0, {Term::constant(1.0)}}}, std::nullopt, std::nullopt);
    CHECK_THROWS_AS(notail.tail_invariants(), UnsupportedTail);
    // period mean for a shifted signal
    auto m = InitialData::periodic_terms({Term::constant(0.25), Term::sine(1.0, 2.0)}, pi);
    CHECK(m.tail_invariants().ubar_r == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("local expansion examples")
{
    auto e1 = minus_sin().local_expansion(0.0, 0.0, Side::right);
    CHECK(e1.gamma == 1.0);
    CHECK(e1.C_gamma == doctest::Approx(-1.0));
    auto e1l = minus_sin().local_expansion(0.0, 0.0, Side::left);
    CHECK(e1l.gamma == 1.0);
    CHECK(e1l.C_gamma == doctest::Approx(-1.0));

    InitialData cube({Piece{-1.0, 1.0, {Term::poly({0, 0, 0, -1})}}}, 1.0, -1.0);
    auto e2 = cube.local_expansion(0.0, 0.0, Side::right);
    CHECK(e2.gamma == 3.0);
    CHECK(e2.C_gamma == doctest::Approx(-1.0));
    auto e2l = cube.local_expansion(0.0, 0.0, Side::left);
    CHECK(e2l.gamma == 3.0);
    CHECK(e2l.C_gamma == doctest::Approx(-1.0));

    InitialData ramp({Piece{0.0, 1.0, {Term::poly({1, -1})}}}, 1.0, 0.0);
    auto e3 = ramp.local_expansion(0.0, 1.0, Side::right);
    CHECK(e3.gamma == 1.0);
    CHECK(e3.C_gamma == doctest::Approx(-1.0));
    CHECK_THROWS_AS(ramp.local_expansion(0.0, 1.0, Side::left), FitError);

    // -sgn(x)|x|^{1/3}: C = -1 on both sides
    InitialData root({Piece{-1.0, 0.0, {Term::power(1.0, 1.0 / 3)}}, Piece{0.0, 1.0, {Term::power(-1.0, 1.0 / 3)}}},
                     1.0, -1.0);
    for (Side s : {Side::left, Side::right}) {
        auto e = root.local_expansion(0.0, 0.0, s);
        CHECK(e.gamma == doctest::Approx(1.0 / 3));
        CHECK(e.C_gamma == doctest::Approx(-1.0));
    }
}

TEST_CASE("local expansion agrees with the defining limit")
{
    // independent check: (phi(x0+l)-c)/(sgn(l)|l|^gamma) at small l
    InitialData d({Piece{-2.0, 0.5, {Term::poly({0.2, 0.0, 0.7, -0.4}), Term::sine(0.1, 3.0, 0.2)}},
                   Piece{0.5, 2.0, {Term::cosine(0.8, 1.3)}}},
                  0.0, 0.0);
    for (double x0 : {-1.3, 0.2, 0.5, 1.1})
        for (Side s : {Side::left, Side::right}) {
            const double c = s == Side::left ? d.phi_left(x0) : d.phi_right(x0);
            auto e = d.local_expansion(x0, c, s);
            const double l = (s == Side::right ? 1.0 : -1.0) * 1e-5;
            const double est = (d.phi(x0 + l) - c) / ((l > 0 ? 1.0 : -1.0) * std::pow(std::fabs(l), e.gamma));
            CHECK(est == doctest::Approx(e.C_gamma).epsilon(1e-3));
        }
}

TEST_CASE("primitive continuity, Lipschitz bound and quadrature agreement")
{
    InitialData d({Piece{-2.0, -0.5, {Term::poly({0.3, 1.0, -0.5})}},
                   Piece{-0.5, 0.7, {Term::sine(0.9, 2.0, 0.4)}},
                   Piece{0.7, 1.5, {Term::power(-0.6, 0.5, 0.7), Term::constant(0.2)}}},
                  -0.4, 0.1);
    for (double b : d.breakpoints_in(-5, 5)) {
        CHECK(std::fabs(d.primitive(b + 1e-13) - d.primitive(b - 1e-13)) < 1e-12);
    }
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-4.0, 4.0);
    for (int i = 0; i < 1000; ++i) {
        const double x1 = U(rng), x2 = U(rng);
        CHECK(std::fabs(d.primitive(x2) - d.primitive(x1)) <= d.bound() * std::fabs(x2 - x1) + 1e-12);
        CHECK(std::fabs(d.phi(x1)) <= d.bound());
    }
    // independent quadrature of phi
    for (double x : {-3.0, -1.0, 0.3, 1.2, 2.5}) {
        double q = 0.0;
        std::vector<double> cuts{std::min(0.0, x)};
        for (double b : d.breakpoints_in(std::min(0.0, x), std::max(0.0, x))) cuts.push_back(b);
        cuts.push_back(std::max(0.0, x));
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
            q += adaptive_simpson([&](double y) { return d.phi(y); }, cuts[k], cuts[k + 1], 1e-13);
        if (x < 0) q = -q;
        CHECK(d.primitive(x) == doctest::Approx(q).epsilon(1e-9));
    }
}

TEST_CASE("dini at continuity points equals phi")
{
    auto d = minus_sin();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        const double x = U(rng);
        auto p = d.dini(x);
        CHECK(std::fabs(p.upper_left - d.phi(x)) < 1e-9);
        CHECK(std::fabs(p.lower_right - d.phi(x)) < 1e-9);
    }
}

TEST_CASE("pieces_on reproduces the data")
{
    auto d = minus_sin();
    InitialData r(d.pieces_on(-10.0, 10.0), std::nullopt, std::nullopt);
    for (double x : {-9.5, -3.0, 0.1, 4.4, 9.9}) CHECK(r.phi(x) == doctest::Approx(d.phi(x)).epsilon(1e-12));
    auto st = InitialData::step(2.0, -1.0, 0.5);
    InitialData r2(st.pieces_on(-3.0, 3.0), std::nullopt, std::nullopt);
    CHECK(r2.phi(0.0) == 2.0);
    CHECK(r2.phi(1.0) == -1.0);
}

TEST_CASE("cells data")
{
    auto c = InitialData::cells({0.0, 1.0, 3.0}, {2.0, -1.0});
    CHECK(c.phi(0.5) == 2.0);
    CHECK(c.phi(2.0) == -1.0);
    CHECK(c.phi(-5.0) == 2.0);
    CHECK(c.primitive(3.0) == doctest::Approx(0.0));
    CHECK(c.primitive(1.0) == doctest::Approx(2.0));
}
