#include "laxo/shock_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "laxo/errors.hpp"
#include "laxo/quadrature.hpp"

namespace laxo {

std::string to_string(GenerationType g)
{
    switch (g) {
    case GenerationType::case_I: return "I";
    case GenerationType::case_II_a_eq_c: return "II(a=c)";
    case GenerationType::case_II_a_lt_c: return "II(a<c)";
    case GenerationType::case_III_b_eq_c: return "III(c=b)";
    case GenerationType::case_III_c_lt_b: return "III(c<b)";
    }
    return "?";
}

std::string to_string(PointKind k)
{
    switch (k) {
    case PointKind::interior_characteristic: return "interior_characteristic";
    case PointKind::continuous_shock_generation: return "continuous_shock_generation";
    case PointKind::discontinuous_shock_generation: return "discontinuous_shock_generation";
    case PointKind::single_shock_point: return "single_shock_point";
    case PointKind::multi_shock_collision: return "multi_shock_collision";
    }
    return "?";
}

std::string to_string(const PointClass& p)
{
    if (p.kind == PointKind::single_shock_point)
        return std::string("single_shock_point(") + (p.regular ? "regular" : "irregular") + ")";
    if (p.kind == PointKind::multi_shock_collision)
        return "multi_shock_collision(" + std::to_string(p.count) + ")";
    return to_string(p.kind);
}

void ShockCurve::write_csv(std::ostream& os) const
{
    os << "t,x,u_minus,u_plus,speed_right,speed_left\n" << std::setprecision(17);
    for (const auto& n : nodes)
        os << n.t << ',' << n.x << ',' << n.u_minus << ',' << n.u_plus << ',' << n.speed_right << ','
           << n.speed_left << '\n';
}

double solve_lambda1(double gamma, double sigma, double lambda0)
{
    if (!(lambda0 > 0.0) || !(gamma > 0.0) || !(sigma > 0.0))
        throw RootNotBracketed("lambda equation needs positive gamma, sigma, lambda0");
    if (lambda0 == 1.0) return 1.0;
    const double g = gamma, s = sigma;
    auto h = [&](double l) {
        return g * s * (1 + l) * (lambda0 - std::pow(l, 1 + g + s)) -
               (1 + g + s) * l * (1 + std::pow(l, g)) * (std::pow(l, s) - lambda0);
    };
    double lo = std::pow(lambda0, 1.0 / (1 + g + s));
    double hi = std::pow(lambda0, 1.0 / s);
    if (lo > hi) std::swap(lo, hi);
    double hlo = h(lo), hhi = h(hi);
    if (hlo == 0.0) return lo;
    if (hhi == 0.0) return hi;
    if ((hlo > 0) == (hhi > 0)) throw RootNotBracketed("no sign change of the lambda equation on its bracket");
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double m = 0.5 * (lo + hi);
        const double hm = h(m);
        if ((hm > 0) == (hlo > 0)) { lo = m; hlo = hm; } else hi = m;
    }
    return 0.5 * (lo + hi);
}

std::optional<GenerationPoint> ShockAnalysis::generation_point(double x0, double c) const
{
    const Lifespans ls = ch_.lifespan_upper(x0, c);
    if (!std::isfinite(ls.t_p)) return std::nullopt;
    const double tp = ls.t_p;
    const auto& d = s_.data();

    // strict inequality Phi(l) > F(l; t_p, c) on a lattice of l
    double span = 1.0 + d.support_hi() - d.support_lo();
    if (d.period()) span = std::max(span, *d.period());
    const double L = 4.0 * span + 2.0 * tp * s_.max_speed();
    // below the floor the local expansion already decides; there the gap sinks into rounding
    const double floor = 1e-2 * std::min(1.0, d.feature_scale());
    std::vector<double> ls_lat;
    for (double l = L; l >= floor; l *= 0.75) ls_lat.push_back(l);
    for (int i = 1; i <= 400; ++i) ls_lat.push_back(L * i / 400.0);
    const double base = std::fabs(d.primitive(x0));
    for (double l0 : ls_lat)
        for (double l : {l0, -l0}) {
            double F;
            try {
                F = ch_.F_l(l, tp, c);
            } catch (const BracketError&) {
                continue; // no u reaches this l
            }
            const double P = ch_.phi_l(l, x0, c);
            if (P - F <= 1e-12 * (1.0 + base + std::fabs(c * l) + std::fabs(P) + std::fabs(F)))
                throw ConditionFailed("uniqueness condition fails at l=" + std::to_string(l) +
                                      ": not a continuous shock generation point");
        }

    GenerationPoint gp;
    gp.source_x0 = x0;
    gp.speed_c = c;
    gp.t_p = tp;
    gp.x_p = x0 + tp * s_.flux().deriv(c);
    gp.t_p_minus = ls.t_p_minus;
    gp.t_p_plus = ls.t_p_plus;
    const DiniPack dp = d.dini(x0);
    const double tol = 1e-12 * (1.0 + std::fabs(c));
    const bool equal = std::isfinite(ls.t_p_minus) && std::isfinite(ls.t_p_plus) &&
                       std::fabs(ls.t_p_minus - ls.t_p_plus) <= 1e-9 * tp;
    if (equal) gp.type = GenerationType::case_I;
    else if (ls.t_p_plus < ls.t_p_minus)
        gp.type = std::fabs(dp.upper_left - c) <= tol ? GenerationType::case_II_a_eq_c : GenerationType::case_II_a_lt_c;
    else
        gp.type = std::fabs(dp.lower_right - c) <= tol ? GenerationType::case_III_b_eq_c : GenerationType::case_III_c_lt_b;
    return gp;
}

DevelopmentAsymptotics ShockAnalysis::development_asymptotics(const GenerationPoint& gp,
                                                              const DevelopmentInputs& in) const
{
    DevelopmentAsymptotics out;
    const double Cg = 1.0 / gp.t_p;
    const auto fe = s_.flux().fit_degeneracy(gp.speed_c, Side::right);
    const double alpha = fe.alpha, N = fe.N;
    auto cbar = [&](double C) { return N * std::pow(std::fabs(C), 1 + alpha) / (1 + alpha); };

    if (gp.type == GenerationType::case_I) {
        const double g = in.gamma_plus, s = in.sigma_plus;
        if (!(in.Cbar_sigma_plus > 0) || !(in.Cbar_sigma_minus > 0))
            throw RootNotBracketed("Case I needs positive sigma coefficients on both sides");
        out.lambda0 = in.Cbar_sigma_plus / in.Cbar_sigma_minus;
        out.exponent_u = out.exponent_u_other = g / (1 + s);
        const double a = g * s / ((1 + g) * (1 + s));
        const double b = (1 + g + s) / ((1 + g) * (1 + s));
        if (std::fabs(out.lambda0 - 1.0) <= 1e-12) {
            out.lambda1 = 1.0;
            const double l = 1.0;
            out.Q_plus = a * std::pow(l, g) * (1 + l) / (1 + std::pow(l, g)) + b;
            out.Q_minus = a * (1 + l) / (l * (1 + std::pow(l, g))) + b;
            const double r = in.rho;
            const double O2 = ((1 + g) * (1 - g) + s) / ((1 + g) * (1 - g) + s * (2 + s)) * std::fabs(in.Cbar_rho) /
                              Cg * std::pow(Cg * Cg / in.Cbar_sigma_plus, (1 + s + r) / s);
            out.exponent_curve = (1 + s + r) / s;
            out.coeff_curve = (in.Cbar_rho > 0 ? 1.0 : (in.Cbar_rho < 0 ? -1.0 : 0.0)) * O2;
            return out;
        }
        const double l = solve_lambda1(g, s, out.lambda0);
        out.lambda1 = l;
        out.Q_plus = a * std::pow(l, g) * (1 + l) / (1 + std::pow(l, g)) + b;
        out.Q_minus = a * (1 + l) / (l * (1 + std::pow(l, g))) + b;
        out.O1_plus = Cg * std::pow(Cg * Cg * out.Q_plus / in.Cbar_sigma_plus, 1.0 / s) * std::fabs(out.Q_plus - 1);
        out.O1_minus = Cg * std::pow(Cg * Cg * out.Q_minus / in.Cbar_sigma_minus, 1.0 / s) * std::fabs(out.Q_minus - 1);
        out.exponent_curve = (1 + s) / s;
        out.coeff_curve = (in.Cbar_sigma_plus > in.Cbar_sigma_minus ? 1.0 : -1.0) * out.O1_plus;
        return out;
    }

    const bool two = gp.type == GenerationType::case_II_a_eq_c || gp.type == GenerationType::case_II_a_lt_c;
    const double g = two ? in.gamma_plus : in.gamma_minus;
    const double s = two ? in.sigma_plus : in.sigma_minus;
    const double Cs = two ? in.Cbar_sigma_plus : in.Cbar_sigma_minus;
    if (!(Cs > 0)) throw RootNotBracketed("compressive side needs a positive sigma coefficient");
    out.Q3 = (1 + g + s) / ((1 + g) * (1 + s));
    const double O3 = Cg * (1 - out.Q3) * std::pow(out.Q3, 1.0 / s) * std::pow(Cg * Cg / Cs, 1.0 / s);
    out.exponent_curve = (1 + s) / s;
    out.coeff_curve = two ? -O3 : O3;
    out.exponent_u = g / (1 + s);

    const bool continuous = gp.type == GenerationType::case_II_a_eq_c || gp.type == GenerationType::case_III_b_eq_c;
    const double go = two ? in.gamma_minus : in.gamma_plus; // the other side
    const double Co = two ? in.C_gamma_minus : in.C_gamma_plus;
    const double Cm = two ? in.C_gamma_plus : in.C_gamma_minus;
    if (continuous) {
        out.exponent_u_other = std::max(in.gamma_minus, in.gamma_plus);
        const double k = go * (1 + alpha);
        const double ratio = cbar(Co) / cbar(Cm);
        if (k < 1 - 1e-9) out.O4 = ratio;
        else if (k <= 1 + 1e-9) out.O4 = 1 + (Co > 0 ? 1.0 : -1.0) * ratio;
        else out.O4 = 1.0;
    } else {
        out.exponent_u_other = g;
    }
    return out;
}

SplitMax ShockAnalysis::split_max(double x, double t, double xi) const
{
    const auto& f = s_.flux();
    const Interval r = s_.scan_range();
    const double v = std::clamp((x - xi) / t, f.deriv(r.lo), f.deriv(r.hi));
    SplitMax sm;
    sm.u_xi = f.invert_deriv(v, r);
    const double ex = s_.eval_E(sm.u_xi, x, t);
    struct Part {
        double value, lo, hi;
    };
    std::vector<Part> left{{ex, sm.u_xi, sm.u_xi}}, right{{ex, sm.u_xi, sm.u_xi}};
    for (const auto& c : s_.candidates(x, t)) {
        if (c.lo <= sm.u_xi) left.push_back({c.value, c.lo, std::min(c.hi, sm.u_xi)});
        if (c.hi >= sm.u_xi) right.push_back({c.value, std::max(c.lo, sm.u_xi), c.hi});
    }
    const double vt = s_.tol().val_tol;
    sm.max_left = sm.max_right = -1e300;
    for (const auto& p : left) sm.max_left = std::max(sm.max_left, p.value);
    for (const auto& p : right) sm.max_right = std::max(sm.max_right, p.value);
    sm.u_plus = 1e300;
    sm.u_minus = -1e300;
    for (const auto& p : left)
        if (p.value >= sm.max_left - vt) sm.u_plus = std::min(sm.u_plus, p.lo);
    for (const auto& p : right)
        if (p.value >= sm.max_right - vt) sm.u_minus = std::max(sm.u_minus, p.hi);
    return sm;
}

double ShockAnalysis::locate(double t, double xi, double guess, double window) const
{
    // left of the curve the maximiser has its foot left of xi
    auto past = [&](double x) {
        const SplitMax sm = split_max(x, t, xi);
        return sm.max_left > sm.max_right;
    };
    double w = window;
    for (int k = 0; k < 4; ++k, w *= 4.0) {
        const double lo = guess - w, hi = guess + w;
        if (!past(lo) && past(hi)) return bisect_flip(past, lo, hi, s_.tol().x_tol * (1.0 + std::fabs(guess)));
    }
    throw LostCurve("no curve through the search window at t=" + std::to_string(t));
}

namespace {

// maximiser components recovered from candidates near the top value
std::vector<Interval> top_components(const Solver& s, double x, double t, double top)
{
    std::vector<Interval> comps;
    for (const auto& c : s.candidates(x, t))
        if (c.value >= top - s.tol().val_tol) comps.push_back({c.lo, c.hi});
    std::sort(comps.begin(), comps.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    return comps;
}

} // namespace

ShockCurve ShockAnalysis::track_forward(double x0, double t0, double t_end, double dt) const
{
    if (!(dt > 0) || !(t_end > t0)) throw ParseError("track_forward needs t_end > t0 and dt > 0");
    const auto& f = s_.flux();
    ShockCurve curve;
    curve.origin_x = x0;
    curve.origin_t = t0;
    double speed;
    if (t0 <= 0.0) {
        curve.xi = x0;
        speed = f.chord(s_.data().phi_left(x0), s_.data().phi_right(x0));
    } else {
        const auto smp = s_.solve(x0, t0);
        curve.xi = x0 - 0.5 * t0 * (f.deriv(smp.u_minus) + f.deriv(smp.u_plus));
        speed = f.chord(smp.u_minus, smp.u_plus);
    }
    std::vector<double> times;
    if (t0 > 0.0) times.push_back(t0);
    for (long k = 1;; ++k) {
        const double t = t0 + k * dt;
        if (t >= t_end - 1e-12 * t_end) break;
        times.push_back(t);
    }
    times.push_back(t_end);

    const double vmax = s_.max_speed();
    double x_prev = x0, t_prev = std::max(t0, 0.0);
    for (double t : times) {
        const double step = t - t_prev;
        const double guess = x_prev + step * speed;
        const double w = std::max(2.0 * step * vmax, 1e-7 * (1.0 + std::fabs(guess)));
        const double x = locate(t, curve.xi, guess, w);
        const SplitMax sm = split_max(x, t, curve.xi);
        ShockNode n;
        n.t = t;
        n.x = x;
        n.u_minus = sm.u_minus;
        n.u_plus = sm.u_plus;
        const bool jump = sm.u_minus - sm.u_plus > s_.tol().jump_tol;
        n.speed_right = jump ? f.chord(sm.u_minus, sm.u_plus) : f.deriv(0.5 * (sm.u_minus + sm.u_plus));
        n.speed_left = n.speed_right;
        if (jump) {
            const auto comps = top_components(s_, x, t, std::max(sm.max_left, sm.max_right));
            for (size_t i = 0; i + 1 < comps.size(); ++i) {
                const double c = comps[i].hi, d = comps[i + 1].lo;
                if (x - t * f.deriv(d) <= curve.xi && curve.xi <= x - t * f.deriv(c)) {
                    n.speed_left = f.chord(d, c);
                    break;
                }
            }
        }
        curve.nodes.push_back(n);
        speed = n.speed_right;
        x_prev = x;
        t_prev = t;
    }
    return curve;
}

TriangleDecomposition ShockAnalysis::backward_triangle(double x0, double t0) const
{
    const auto& f = s_.flux();
    TriangleDecomposition td;
    td.x0 = x0;
    td.t0 = t0;
    const MaximizerSet m = s_.maximize(x0, t0);
    td.I = {m.u_plus, m.u_minus};
    const double wtol = 10 * s_.tol().tol_u;
    for (size_t i = 0; i < m.components.size(); ++i) {
        const auto& c = m.components[i];
        td.boundary.push_back(c.lo);
        if (c.hi - c.lo > wtol) {
            td.boundary.push_back(c.hi);
            td.rarefactions.push_back(c);
        }
        if (i + 1 < m.components.size()) td.gaps.push_back({c.hi, m.components[i + 1].lo});
    }
    for (const auto& Im : td.rarefactions) {
        const double va = f.deriv(Im.lo), vb = f.deriv(Im.hi);
        for (double ft : {0.25, 0.5, 0.75})
            for (double eta : {0.25, 0.5, 0.75}) {
                const double t = ft * t0;
                const double v = va + eta * (vb - va);
                const double x = x0 + (t - t0) * v;
                const double expect = f.invert_deriv(v, {Im.lo, Im.hi});
                td.fan_error = std::max(td.fan_error, std::fabs(s_.solve(x, t).u_plus - expect));
            }
    }
    td.fan_verified = td.fan_error <= 1e-6;
    return td;
}

DirectionalLimits ShockAnalysis::directional_limits(double x0, double t0) const
{
    const auto& f = s_.flux();
    const MaximizerSet m = s_.maximize(x0, t0);
    DirectionalLimits dl;
    dl.u_minus = m.u_minus;
    dl.u_plus = m.u_plus;
    const double tol = s_.tol().dir_tol;
    if (m.u_minus - m.u_plus <= s_.tol().jump_tol) {
        dl.from_left = dl.from_right = m.u_plus;
        return dl;
    }
    const double fm = f.deriv(m.u_minus), fp = f.deriv(m.u_plus);
    const double sp = f.chord(m.u_minus, m.u_plus);
    const double scale = std::min(1.0, t0);
    auto u_at = [&](double x, double t) { return s_.solve(x, t).u_plus; };
    bool ok = true;
    for (double r0 : {1e-2, 1e-3, 1e-4}) {
        const double r = r0 * scale;
        // below along the outer edges, above between the edge characteristic and the shock
        const double lb = u_at(x0 - r * fm - r, t0 - r);
        const double la = u_at(x0 + r * (fp + 0.5 * (sp - fp)), t0 + r);
        const double rb = u_at(x0 - r * fp + r, t0 - r);
        const double ra = u_at(x0 + r * (sp + 0.5 * (fm - sp)), t0 + r);
        dl.from_left = 0.5 * (lb + la);
        dl.from_right = 0.5 * (rb + ra);
        ok = std::max({std::fabs(lb - m.u_minus), std::fabs(la - m.u_minus)}) <= tol &&
             std::max({std::fabs(rb - m.u_plus), std::fabs(ra - m.u_plus)}) <= tol;
    }
    for (size_t i = 0; i + 1 < m.components.size(); ++i) {
        DirectionalLimits::Gap g;
        g.J = {m.components[i].hi, m.components[i + 1].lo};
        const double vc = f.deriv(g.J.lo), vd = f.deriv(g.J.hi);
        bool gok = true;
        for (double r0 : {1e-2, 1e-3, 1e-4}) {
            const double r = r0 * scale;
            g.left = u_at(x0 - r * (vd - 0.01 * (vd - vc)), t0 - r);
            g.right = u_at(x0 - r * (vc + 0.01 * (vd - vc)), t0 - r);
            gok = std::fabs(g.left - g.J.hi) <= tol && std::fabs(g.right - g.J.lo) <= tol;
        }
        ok = ok && gok;
        dl.gaps.push_back(g);
    }
    dl.converged = ok;
    return dl;
}

PointClass ShockAnalysis::classify_point(double x, double t) const
{
    const auto& f = s_.flux();
    const MaximizerSet m = s_.maximize(x, t);
    PointClass pc;
    if (m.u_minus - m.u_plus <= s_.tol().jump_tol) {
        // does the forward characteristic carry a jump right away?
        const double u = m.u_plus;
        const double xi = x - t * f.deriv(u);
        const double vmax = s_.max_speed();
        bool all_jump = true;
        for (double d : {1e-2, 1e-3}) {
            const double dt = d * t;
            try {
                const double xs = locate(t + dt, xi, x + dt * f.deriv(u), 2 * dt * vmax + 1e-9);
                const SplitMax sm = split_max(xs, t + dt, xi);
                if (sm.u_minus - sm.u_plus <= s_.tol().jump_tol) all_jump = false;
            } catch (const LostCurve&) {
                all_jump = false;
            }
        }
        pc.kind = all_jump ? PointKind::continuous_shock_generation : PointKind::interior_characteristic;
        return pc;
    }
    if (m.components.size() == 1) {
        pc.kind = PointKind::discontinuous_shock_generation;
        return pc;
    }
    const int gaps = static_cast<int>(m.components.size()) - 1;
    if (gaps == 1) {
        pc.kind = PointKind::single_shock_point;
        const double wtol = 10 * s_.tol().tol_u;
        pc.regular = true;
        for (const auto& c : m.components)
            if (c.hi - c.lo > wtol) pc.regular = false;
        return pc;
    }
    pc.kind = PointKind::multi_shock_collision;
    pc.count = gaps;
    return pc;
}

} // namespace laxo
