#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "laxo/errors.hpp"
#include "laxo/shock_analysis.hpp"

using namespace laxo;
using std::numbers::pi;

namespace {

InitialData minus_sin() { return InitialData::periodic_terms({Term::sine(-1.0, 1.0)}, 2 * pi, -pi); }

// 1 on the left, 1 - x + x^2 on [0, 1/2], then flat
InitialData one_sided()
{
    return InitialData({Piece{-1.0, 0.0, {Term::constant(1.0)}}, Piece{0.0, 0.5, {Term::poly({1.0, -1.0, 1.0})}}},
                       1.0, 0.75);
}

// mirror image of one_sided under (x,u) -> (-x,-u)
InitialData one_sided_mirror()
{
    return InitialData({Piece{-0.5, 0.0, {Term::poly({-1.0, -1.0, -1.0})}}, Piece{0.0, 1.0, {Term::constant(-1.0)}}},
                       -0.75, -1.0);
}

// -x + A x^2 right of 0, -x - B x^2 left of 0, plus kappa |x|^3
InitialData cubic_split(double A, double B, double kappa, double h = 0.3)
{
    std::vector<Piece> ps = {Piece{-h, 0.0, {Term::poly({0.0, -1.0, -B, -kappa})}},
                             Piece{0.0, h, {Term::poly({0.0, -1.0, A, kappa})}}};
    InitialData tmp(ps, std::nullopt, std::nullopt);
    return InitialData(ps, tmp.phi(-h), tmp.phi_left(h));
}

InitialData two_steps()
{
    return InitialData({Piece{-1.0, 0.0, {Term::constant(1.0)}}}, 2.0, 0.0);
}

// slope fits on a log-log grid
struct Fit {
    double slope, coeff;
};
Fit loglog(const std::vector<double>& xs, const std::vector<double>& ys)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        const double a = std::log(xs[i]), b = std::log(ys[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, std::exp((sy - slope * sx) / n)};
}

// offset of the tracked curve from the generating characteristic
Fit offset_fit(const ShockAnalysis& sa, const Solver& s, const GenerationPoint& gp)
{
    std::vector<double> hs, ys;
    const double fc = s.flux().deriv(gp.speed_c);
    for (double h : {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1}) {
        const double t = gp.t_p + h;
        const double x = sa.locate(t, gp.source_x0, gp.x_p + h * fc, 2 * h * s.max_speed());
        hs.push_back(h);
        ys.push_back(std::fabs(x - gp.x_p - h * fc));
    }
    return loglog(hs, ys);
}

} // namespace

TEST_CASE("generation_point examples")
{
    Solver sn(Flux::burgers(), minus_sin());
    ShockAnalysis sa(sn);
    const auto gp = sa.generation_point(0.0, 0.0);
    REQUIRE(gp.has_value());
    CHECK(gp->x_p == doctest::Approx(0.0));
    CHECK(gp->t_p == doctest::Approx(1.0));
    CHECK(gp->type == GenerationType::case_I);
    const auto m = sn.maximize(gp->x_p, gp->t_p);
    CHECK(m.u_minus - m.u_plus <= 1e-6);

    Solver os(Flux::burgers(), one_sided());
    const auto g2 = ShockAnalysis(os).generation_point(0.0, 1.0);
    REQUIRE(g2.has_value());
    CHECK(g2->x_p == doctest::Approx(1.0));
    CHECK(g2->t_p == doctest::Approx(1.0));
    CHECK(std::isinf(g2->t_p_minus));
    CHECK(g2->type == GenerationType::case_II_a_eq_c);
    const auto m2 = os.maximize(g2->x_p, g2->t_p);
    CHECK(m2.u_plus == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m2.u_minus == doctest::Approx(1.0).epsilon(1e-6));

    Solver ms(Flux::burgers(), one_sided_mirror());
    const auto g3 = ShockAnalysis(ms).generation_point(0.0, -1.0);
    REQUIRE(g3.has_value());
    CHECK(g3->x_p == doctest::Approx(-1.0));
    CHECK(g3->type == GenerationType::case_III_b_eq_c);

    // linear data focuses a whole fan: no continuous generation
    InitialData lin({Piece{-1.0, 0.0, {Term::constant(1.0)}}, Piece{0.0, 1.0, {Term::poly({1.0, -1.0})}}}, 1.0, 0.0);
    Solver ls(Flux::burgers(), lin);
    CHECK_THROWS_AS(ShockAnalysis(ls).generation_point(0.0, 1.0), ConditionFailed);

    Solver fan(Flux::burgers(), InitialData::step(-1.0, 1.0));
    for (double c : {-0.5, 0.0, 0.7}) CHECK_FALSE(ShockAnalysis(fan).generation_point(0.0, c).has_value());
}

TEST_CASE("generation type with a jump below the compression")
{
    // a < c: data jumps up to 1 at 0 and compresses on the right
    InitialData d({Piece{-1.0, 0.0, {Term::constant(0.2)}}, Piece{0.0, 0.5, {Term::poly({1.0, -1.0, 1.0})}}}, 0.2, 0.75);
    Solver s(Flux::burgers(), d);
    const auto gp = ShockAnalysis(s).generation_point(0.0, 1.0);
    REQUIRE(gp.has_value());
    CHECK(gp->type == GenerationType::case_II_a_lt_c);
}

TEST_CASE("lambda equation and Q constants")
{
    for (double l0 : {0.3, 0.9, 2.0, 7.5})
        for (double g : {0.5, 1.0})
            for (double s : {1.0, 2.0}) {
                const double l = solve_lambda1(g, s, l0);
                const double lhs = g * s * (1 + l) * (l0 - std::pow(l, 1 + g + s));
                const double rhs = (1 + g + s) * l * (1 + std::pow(l, g)) * (std::pow(l, s) - l0);
                CHECK(std::fabs(lhs - rhs) <= 1e-10 * (1 + std::fabs(lhs)));
            }
    CHECK(solve_lambda1(1.0, 1.0, 1.0) == 1.0);
    CHECK_THROWS_AS(solve_lambda1(1.0, 1.0, -2.0), RootNotBracketed);

    Solver s(Flux::burgers(), cubic_split(2.0, 1.0, 0.0));
    ShockAnalysis sa(s);
    const auto gp = sa.generation_point(0.0, 0.0);
    REQUIRE(gp.has_value());
    DevelopmentInputs in;
    in.Cbar_sigma_plus = 2.0;
    in.Cbar_sigma_minus = 1.0;
    in.C_gamma_plus = in.C_gamma_minus = -1.0;
    const auto da = sa.development_asymptotics(*gp, in);
    CHECK(da.Q_minus < 1.0);
    CHECK(da.Q_plus > 1.0);
    CHECK(da.O1_plus == doctest::Approx(da.O1_minus).epsilon(1e-9));
    in.Cbar_sigma_plus = 0.5;
    const auto db = sa.development_asymptotics(*gp, in);
    CHECK(db.Q_plus < 1.0);
    CHECK(db.Q_minus > 1.0);
    CHECK(db.O1_plus == doctest::Approx(db.O1_minus).epsilon(1e-9));

    // degenerate ratio
    in.Cbar_sigma_plus = 1.0;
    const auto dc = sa.development_asymptotics(*gp, in);
    CHECK(dc.lambda1 == 1.0);
    CHECK(dc.Q_plus == doctest::Approx(1.0));
    CHECK(dc.Q_minus == doctest::Approx(1.0));
}

TEST_CASE("development asymptotics, one-sided compression")
{
    Solver s(Flux::burgers(), one_sided());
    ShockAnalysis sa(s);
    const auto gp = sa.generation_point(0.0, 1.0);
    REQUIRE(gp.has_value());
    DevelopmentInputs in;
    in.sigma_plus = 1.0;
    in.Cbar_sigma_plus = 1.0;
    in.gamma_plus = 1.0;
    in.C_gamma_plus = -1.0;
    const auto da = sa.development_asymptotics(*gp, in);
    CHECK(da.Q3 == doctest::Approx(0.75));
    CHECK(da.exponent_curve == doctest::Approx(2.0));
    CHECK(da.coeff_curve == doctest::Approx(-3.0 / 16));

    // tracked curve: x lies left of the generating line
    const double h = 1e-2;
    const double x = sa.locate(1.0 + h, 0.0, 1.0 + h, 2 * h * s.max_speed());
    CHECK(x - 1.0 - h < 0.0);
    const Fit fit = offset_fit(sa, s, *gp);
    CHECK(fit.slope == doctest::Approx(da.exponent_curve).epsilon(0.1));
    CHECK(fit.coeff == doctest::Approx(3.0 / 16).epsilon(0.2));

    Solver m(Flux::burgers(), one_sided_mirror());
    ShockAnalysis sm(m);
    const auto g3 = sm.generation_point(0.0, -1.0);
    REQUIRE(g3.has_value());
    DevelopmentInputs im;
    im.sigma_minus = 1.0;
    im.Cbar_sigma_minus = 1.0;
    im.gamma_minus = 1.0;
    im.C_gamma_minus = -1.0;
    const auto d3 = sm.development_asymptotics(*g3, im);
    CHECK(d3.coeff_curve == doctest::Approx(3.0 / 16));
    const double x3 = sm.locate(1.0 + h, 0.0, -1.0 - h, 2 * h * m.max_speed());
    CHECK(x3 - (-1.0 - h) > 0.0);
}

TEST_CASE("development asymptotics, two-sided compression")
{
    // unequal quadratic terms: exponent 2 with the O1 constant
    Solver s(Flux::burgers(), cubic_split(2.0, 1.0, 0.0));
    ShockAnalysis sa(s);
    const auto gp = sa.generation_point(0.0, 0.0);
    REQUIRE(gp.has_value());
    DevelopmentInputs in;
    in.Cbar_sigma_plus = 2.0;
    in.Cbar_sigma_minus = 1.0;
    const auto da = sa.development_asymptotics(*gp, in);
    CHECK(da.exponent_curve == doctest::Approx(2.0));
    CHECK(da.coeff_curve > 0.0);
    const Fit fit = offset_fit(sa, s, *gp);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.1));
    CHECK(fit.coeff == doctest::Approx(da.coeff_curve).epsilon(0.2));
    CHECK(sa.locate(1.05, 0.0, 0.0, 0.1) > 0.0);

    // equal quadratic terms, cubic asymmetry: exponent 3, coefficient kappa/3
    Solver r(Flux::burgers(), cubic_split(1.0, 1.0, 0.6));
    ShockAnalysis sr(r);
    const auto g2 = sr.generation_point(0.0, 0.0);
    REQUIRE(g2.has_value());
    DevelopmentInputs ir;
    ir.Cbar_sigma_plus = ir.Cbar_sigma_minus = 1.0;
    ir.rho = 1.0;
    ir.Cbar_rho = 0.6;
    const auto d2 = sr.development_asymptotics(*g2, ir);
    CHECK(d2.exponent_curve == doctest::Approx(3.0));
    CHECK(d2.coeff_curve == doctest::Approx(0.2));
    const Fit f2 = offset_fit(sr, r, *g2);
    CHECK(f2.slope == doctest::Approx(3.0).epsilon(0.1));
    CHECK(f2.coeff == doctest::Approx(0.2).epsilon(0.25));
}

TEST_CASE("Holder exponent of u at the generation time")
{
    // -sin: gamma = 1, sigma = 2 -> exponent 1/3
    Solver s(Flux::burgers(), minus_sin());
    std::vector<double> ds, us;
    for (double d : {1e-6, 1e-5, 1e-4, 1e-3}) {
        ds.push_back(d);
        us.push_back(std::fabs(s.solve(d, 1.0).u_plus));
    }
    CHECK(loglog(ds, us).slope == doctest::Approx(1.0 / 3).epsilon(0.1));
}

TEST_CASE("track_forward examples")
{
    Solver rp(Flux::burgers(), InitialData::step(1.0, 0.0));
    ShockAnalysis sa(rp);
    const auto c1 = sa.track_forward(0.0, 0.0, 2.0, 0.1);
    REQUIRE(c1.nodes.size() == 20);
    for (const auto& n : c1.nodes) {
        CHECK(n.x == doctest::Approx(n.t / 2).epsilon(1e-10));
        CHECK(n.u_minus == doctest::Approx(1.0));
        CHECK(n.u_plus == doctest::Approx(0.0));
        CHECK(n.speed_right == doctest::Approx(0.5));
    }

    Solver sn(Flux::burgers(), minus_sin());
    ShockAnalysis ss(sn);
    const auto c2 = ss.track_forward(0.0, 1.0, 10.0, 0.25);
    for (const auto& n : c2.nodes) {
        CHECK(std::fabs(n.x) < 1e-9);
        if (n.t > 1.1) CHECK(n.u_minus == doctest::Approx(-n.u_plus).epsilon(1e-6));
    }
    CHECK(c2.nodes.back().u_minus < c2.nodes[5].u_minus);

    std::ostringstream os;
    c1.write_csv(os);
    CHECK(os.str().rfind("t,x,u_minus,u_plus,speed_right,speed_left\n", 0) == 0);

    CHECK_THROWS_AS(sa.locate(1.0, 0.0, 5.0, 0.01), LostCurve);

    // inside a fan the curve is a plain characteristic
    Solver fan(Flux::burgers(), InitialData::step(-1.0, 1.0));
    for (const auto& n : ShockAnalysis(fan).track_forward(0.0, 0.0, 1.0, 0.1).nodes)
        CHECK(n.u_minus - n.u_plus <= 1e-6);
}

TEST_CASE("merging shocks")
{
    Solver s(Flux::burgers(), two_steps());
    ShockAnalysis sa(s);
    const auto a = sa.track_forward(-1.0, 0.0, 2.0, 0.125);
    const auto b = sa.track_forward(0.0, 0.0, 2.0, 0.125);
    REQUIRE(a.nodes.size() == b.nodes.size());
    for (size_t i = 0; i < a.nodes.size(); ++i) {
        const double t = a.nodes[i].t;
        const double xa = t < 1 ? -1 + 1.5 * t : 0.5 + (t - 1);
        const double xb = t < 1 ? 0.5 * t : 0.5 + (t - 1);
        CHECK(a.nodes[i].x == doctest::Approx(xa).epsilon(1e-9));
        CHECK(b.nodes[i].x == doctest::Approx(xb).epsilon(1e-9));
        if (t > 1) CHECK(std::fabs(a.nodes[i].x - b.nodes[i].x) < 1e-9);
        if (t == 1.0) {
            CHECK(a.nodes[i].speed_left == doctest::Approx(1.5));
            CHECK(b.nodes[i].speed_left == doctest::Approx(0.5));
            CHECK(a.nodes[i].speed_right == doctest::Approx(1.0));
            CHECK(b.nodes[i].speed_right == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("tracked curves satisfy Lax, Rankine-Hugoniot and nesting")
{
    std::vector<std::pair<Solver, std::pair<double, double>>> cases;
    cases.emplace_back(Solver(Flux::burgers(), minus_sin()), std::make_pair(0.0, 1.0));
    cases.emplace_back(Solver(Flux::burgers(), two_steps()), std::make_pair(-1.0, 0.0));
    cases.emplace_back(Solver(Flux::power2n(2), InitialData::step(1.0, 0.0)), std::make_pair(0.0, 0.0));
    for (auto& [s, o] : cases) {
        const auto& f = s.flux();
        const auto c = ShockAnalysis(s).track_forward(o.first, o.second, o.second + 3.0, 0.05);
        double ym_prev = 1e300, yp_prev = -1e300;
        for (size_t i = 0; i < c.nodes.size(); ++i) {
            const auto& n = c.nodes[i];
            if (n.u_minus - n.u_plus <= 1e-6) continue;
            CHECK(f.deriv(n.u_plus) <= n.speed_right + 1e-9);
            CHECK(n.speed_right <= f.deriv(n.u_minus) + 1e-9);
            CHECK(n.speed_right == doctest::Approx(f.chord(n.u_minus, n.u_plus)).epsilon(1e-6));
            const double ym = n.x - n.t * f.deriv(n.u_minus), yp = n.x - n.t * f.deriv(n.u_plus);
            CHECK(ym <= ym_prev + 1e-8);
            CHECK(yp >= yp_prev - 1e-8);
            ym_prev = ym;
            yp_prev = yp;
            if (i + 1 < c.nodes.size()) {
                const auto& m = c.nodes[i + 1];
                const double slope = (m.x - n.x) / (m.t - n.t);
                CHECK(std::fabs(slope - n.speed_right) <= 0.05 + 1e-6);
            }
        }
    }
}

TEST_CASE("backward_triangle examples")
{
    Solver rp(Flux::burgers(), InitialData::step(1.0, 0.0));
    ShockAnalysis sa(rp);
    const auto t1 = sa.backward_triangle(0.5, 1.0);
    CHECK(t1.I.lo == doctest::Approx(0.0));
    CHECK(t1.I.hi == doctest::Approx(1.0));
    REQUIRE(t1.gaps.size() == 1);
    CHECK(t1.gaps[0].lo == doctest::Approx(0.0));
    CHECK(t1.gaps[0].hi == doctest::Approx(1.0));
    CHECK(t1.rarefactions.empty());
    CHECK(t1.boundary.size() == 2);

    const auto t2 = sa.backward_triangle(0.25, 1.0);
    CHECK(t2.I.width() < 1e-9);
    CHECK(t2.gaps.empty());
    CHECK(t2.rarefactions.empty());

    const double eps = 0.5;
    InitialData cc({Piece{-eps, eps, {Term::poly({0.0, -1.0 / eps})}}}, 1.0, -1.0);
    Solver cs(Flux::burgers(), cc);
    const auto t3 = ShockAnalysis(cs).backward_triangle(0.0, eps);
    REQUIRE(t3.rarefactions.size() == 1);
    CHECK(t3.rarefactions[0].lo == doctest::Approx(-1.0));
    CHECK(t3.rarefactions[0].hi == doctest::Approx(1.0));
    CHECK(t3.gaps.empty());
    CHECK(t3.fan_verified);
}

TEST_CASE("directional_limits examples")
{
    Solver rp(Flux::burgers(), InitialData::step(1.0, 0.0));
    const auto d1 = ShockAnalysis(rp).directional_limits(0.5, 1.0);
    CHECK(d1.converged);
    CHECK(d1.from_left == doctest::Approx(1.0));
    CHECK(d1.from_right == doctest::Approx(0.0));

    Solver ts(Flux::burgers(), two_steps());
    const auto d2 = ShockAnalysis(ts).directional_limits(0.5, 1.0);
    CHECK(d2.converged);
    REQUIRE(d2.gaps.size() == 2);
    CHECK(d2.gaps[0].J.lo == doctest::Approx(0.0));
    CHECK(d2.gaps[0].left == doctest::Approx(1.0));
    CHECK(d2.gaps[0].right == doctest::Approx(0.0));
    CHECK(d2.gaps[1].left == doctest::Approx(2.0));
    CHECK(d2.gaps[1].right == doctest::Approx(1.0));

    Solver sn(Flux::burgers(), minus_sin());
    const auto d3 = ShockAnalysis(sn).directional_limits(0.3, 0.5);
    const double u = sn.solve(0.3, 0.5).u_plus;
    CHECK(d3.from_left == doctest::Approx(u));
    CHECK(d3.from_right == doctest::Approx(u));
}

TEST_CASE("classify_point examples")
{
    Solver rp(Flux::burgers(), InitialData::step(1.0, 0.0));
    ShockAnalysis sa(rp);
    CHECK(sa.classify_point(0.25, 1.0).kind == PointKind::interior_characteristic);
    const auto reg = sa.classify_point(0.5, 1.0);
    CHECK(reg.kind == PointKind::single_shock_point);
    CHECK(reg.regular);

    Solver sn(Flux::burgers(), minus_sin());
    ShockAnalysis ss(sn);
    CHECK(ss.classify_point(0.0, 1.0).kind == PointKind::continuous_shock_generation);
    CHECK(ss.classify_point(0.0, 0.9).kind == PointKind::interior_characteristic);
    CHECK(ss.classify_point(0.0, 2.0).kind == PointKind::single_shock_point);

    Solver ts(Flux::burgers(), two_steps());
    const auto mc = ShockAnalysis(ts).classify_point(0.5, 1.0);
    CHECK(mc.kind == PointKind::multi_shock_collision);
    CHECK(mc.count == 2);
    CHECK(to_string(mc) == "multi_shock_collision(2)");

    InitialData cc({Piece{-0.5, 0.5, {Term::poly({0.0, -2.0})}}}, 1.0, -1.0);
    Solver cs(Flux::burgers(), cc);
    CHECK(ShockAnalysis(cs).classify_point(0.0, 0.5).kind == PointKind::discontinuous_shock_generation);

    // compression fan [1,2] focusing on a standing 1|-1 shock at (0,1)
    InitialData irr({Piece{-2.0, -1.0, {Term::poly({0.0, -1.0})}}, Piece{-1.0, 0.0, {Term::constant(1.0)}}}, 2.0, -1.0);
    Solver is(Flux::burgers(), irr);
    const auto ip = ShockAnalysis(is).classify_point(0.0, 1.0);
    CHECK(ip.kind == PointKind::single_shock_point);
    CHECK_FALSE(ip.regular);
    CHECK(to_string(ip) == "single_shock_point(irregular)");
}
