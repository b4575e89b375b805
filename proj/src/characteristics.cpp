#include "laxo/characteristics.hpp"

#include <cmath>

#include "laxo/errors.hpp"

namespace laxo {

namespace {

constexpr double kCritTol = 1e-9; // gamma (1 + alpha) = 1 test

struct SideFit {
    bool flat = false; // phi equals c identically on this side
    double gamma = 0.0, C = 0.0;
};

SideFit side_fit(const InitialData& d, double x0, double c, Side side)
{
    SideFit s;
    try {
        const auto e = d.local_expansion(x0, c, side);
        s.gamma = e.gamma;
        s.C = e.C_gamma;
    } catch (const FitError&) {
        s.flat = true;
    }
    return s;
}

// left side of x0 pairs with the flux seen from above c, and vice versa
DegeneracyExpansion flux_fit(const Flux& f, double c, Side data_side)
{
    return f.fit_degeneracy(c, data_side == Side::left ? Side::right : Side::left);
}

bool endpoint_member(const SideFit& s, const DegeneracyExpansion& fe)
{
    if (s.flat) return true;
    return s.C > 0 || s.gamma * (1.0 + fe.alpha) >= 1.0 - kCritTol;
}

double side_tp(const SideFit& s, const DegeneracyExpansion& fe)
{
    if (s.flat || !(s.C < 0)) return kInf;
    const double k = s.gamma * (1.0 + fe.alpha);
    if (std::fabs(k - 1.0) > kCritTol) return kInf;
    return 1.0 / (s.gamma * fe.N * std::pow(std::fabs(s.C), 1.0 + fe.alpha));
}

} // namespace

bool CharSpectrum::contains(double c, double tol) const
{
    switch (kind) {
    case SpectrumKind::empty: return false;
    case SpectrumKind::singleton: return std::fabs(c - a) <= tol;
    default: break;
    }
    if (c > a + tol && c < b - tol) return true;
    if (std::fabs(c - a) <= tol) return a_in;
    if (std::fabs(c - b) <= tol) return b_in;
    return false;
}

std::string to_string(SpectrumKind k)
{
    switch (k) {
    case SpectrumKind::empty: return "empty";
    case SpectrumKind::singleton: return "singleton";
    case SpectrumKind::closed_interval: return "closed_interval";
    case SpectrumKind::half_open_left: return "half_open_left";
    case SpectrumKind::half_open_right: return "half_open_right";
    case SpectrumKind::open_interval: return "open_interval";
    }
    return "?";
}

std::string to_string(WaveClass w)
{
    switch (w) {
    case WaveClass::S: return "S";
    case WaveClass::characteristic: return "characteristic";
    case WaveClass::R: return "R";
    case WaveClass::SR: return "S+R";
    case WaveClass::RS: return "R+S";
    case WaveClass::SRS: return "S+R+S";
    }
    return "?";
}

std::string to_string(TerminationKind k)
{
    switch (k) {
    case TerminationKind::continuous_shock_generation: return "continuous_shock_generation";
    case TerminationKind::discontinuous_or_shock_point: return "discontinuous_or_shock_point";
    case TerminationKind::collision_with_shock: return "collision_with_shock";
    case TerminationKind::immortal: return "immortal";
    }
    return "?";
}

double Characteristics::phi_l(double l, double x0, double c) const
{
    const auto& d = s_.data();
    return d.primitive(x0 + l) - d.primitive(x0) - c * l;
}

double Characteristics::F_l(double l, double t, double c) const
{
    if (l == 0.0) return 0.0;
    const auto& f = s_.flux();
    const double u = f.invert_deriv(f.deriv(c) - l / t);
    return -t * ((u - c) * f.deriv(u) - f.eval(u) + f.eval(c));
}

CharSpectrum Characteristics::char_spectrum(double x0) const
{
    const auto& d = s_.data();
    const auto& f = s_.flux();
    const DiniPack dp = d.dini(x0);
    CharSpectrum cs;
    cs.x0 = x0;
    cs.a = dp.upper_left;
    cs.b = dp.lower_right;
    const double tol = 1e-12 * (1.0 + std::fabs(cs.a) + std::fabs(cs.b));
    if (cs.a > cs.b + tol) {
        cs.kind = SpectrumKind::empty;
        return cs;
    }
    try {
        if (std::fabs(cs.a - cs.b) <= tol) {
            const double c = cs.a;
            const SideFit L = side_fit(d, x0, c, Side::left);
            const SideFit R = side_fit(d, x0, c, Side::right);
            const bool lin = endpoint_member(L, flux_fit(f, c, Side::left));
            const bool rin = endpoint_member(R, flux_fit(f, c, Side::right));
            cs.b = cs.a;
            cs.a_in = cs.b_in = lin && rin;
            cs.kind = cs.a_in ? SpectrumKind::singleton : SpectrumKind::empty;
            return cs;
        }
        const SideFit L = side_fit(d, x0, cs.a, Side::left);
        const SideFit R = side_fit(d, x0, cs.b, Side::right);
        cs.a_in = endpoint_member(L, flux_fit(f, cs.a, Side::left));
        cs.b_in = endpoint_member(R, flux_fit(f, cs.b, Side::right));
    } catch (const FitError&) {
        // flux flat near an endpoint: membership not decidable from expansions
        cs.inconclusive = true;
    }
    if (cs.a_in && cs.b_in) cs.kind = SpectrumKind::closed_interval;
    else if (cs.b_in) cs.kind = SpectrumKind::half_open_left;
    else if (cs.a_in) cs.kind = SpectrumKind::half_open_right;
    else cs.kind = SpectrumKind::open_interval;
    return cs;
}

WaveClass Characteristics::classify_initial_wave(double x0) const
{
    const CharSpectrum cs = char_spectrum(x0);
    if (cs.inconclusive) throw CriterionInconclusive("power-law expansions unavailable at x0");
    switch (cs.kind) {
    case SpectrumKind::empty: return WaveClass::S;
    case SpectrumKind::singleton: return WaveClass::characteristic;
    case SpectrumKind::closed_interval: return WaveClass::R;
    case SpectrumKind::half_open_left: return WaveClass::SR;
    case SpectrumKind::half_open_right: return WaveClass::RS;
    case SpectrumKind::open_interval: return WaveClass::SRS;
    }
    return WaveClass::S;
}

Lifespans Characteristics::lifespan_upper(double x0, double c) const
{
    const auto& d = s_.data();
    const auto& f = s_.flux();
    const DiniPack dp = d.dini(x0);
    const double tol = 1e-12 * (1.0 + std::fabs(c));
    Lifespans ls;
    if (std::fabs(c - dp.upper_left) <= tol)
        ls.t_p_minus = side_tp(side_fit(d, x0, c, Side::left), flux_fit(f, c, Side::left));
    if (std::fabs(c - dp.lower_right) <= tol)
        ls.t_p_plus = side_tp(side_fit(d, x0, c, Side::right), flux_fit(f, c, Side::right));
    ls.t_p = std::min(ls.t_p_minus, ls.t_p_plus);
    return ls;
}

bool Characteristics::locally_alive(double x, double t, double c) const
{
    // a violation has to show at every rung, so one noisy sample cannot end the life
    const double base = 1e-8 * (1.0 + std::fabs(c));
    int bad = 0;
    for (double k : {1.0, 2.0, 4.0}) {
        const double h = base * k;
        if (s_.g(c + h, x, t) > 0.0 || s_.g(c - h, x, t) < 0.0) ++bad;
    }
    return bad < 3;
}

bool Characteristics::alive(double x0, double c, double t) const
{
    const double x = x0 + t * s_.flux().deriv(c);
    if (!locally_alive(x, t, c)) return false;
    const double ec = s_.eval_E(c, x, t);
    for (const auto& cd : s_.candidates(x, t)) {
        const double dist = c < cd.lo ? cd.lo - c : (c > cd.hi ? c - cd.hi : 0.0);
        if (dist > 1e-6 && cd.value - ec > s_.tol().val_tol) return false;
    }
    return true;
}

double Characteristics::lifespan_exact(double x0, double c) const
{
    const double cap = s_.tol().t_cap;
    double lo = 0.0, hi = 1.0;
    if (alive(x0, c, hi)) {
        lo = hi;
        while (true) {
            hi = std::min(2.0 * lo, cap);
            if (!alive(x0, c, hi)) break;
            if (hi >= cap) return kInf;
            lo = hi;
        }
    } else {
        while (hi > 1e-12) {
            const double mid = 0.5 * hi;
            if (alive(x0, c, mid)) { lo = mid; break; }
            hi = mid;
        }
        if (lo == 0.0) return 0.0;
    }
    const double tt = s_.tol().t_tol;
    while (hi - lo > tt * std::max(1.0, lo)) {
        const double mid = 0.5 * (lo + hi);
        if (alive(x0, c, mid)) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

TerminationClass Characteristics::classify_termination(double x0, double c) const
{
    TerminationClass tc;
    tc.t_p = lifespan_upper(x0, c).t_p;
    tc.t_star = lifespan_exact(x0, c);
    const double fc = s_.flux().deriv(c);
    if (!std::isfinite(tc.t_star)) {
        tc.kind = TerminationKind::immortal;
        return tc;
    }
    const bool at_tp = std::isfinite(tc.t_p) && tc.t_star >= tc.t_p - 1e-6 * std::max(1.0, tc.t_p);
    if (at_tp) {
        tc.t = tc.t_p;
        tc.x = x0 + tc.t_p * fc;
        const auto m = s_.maximize(tc.x, tc.t);
        tc.kind = (m.u_minus - m.u_plus <= s_.tol().jump_tol) ? TerminationKind::continuous_shock_generation
                                                              : TerminationKind::discontinuous_or_shock_point;
    } else {
        tc.t = tc.t_star;
        tc.x = x0 + tc.t_star * fc;
        tc.kind = TerminationKind::collision_with_shock;
    }
    return tc;
}

} // namespace laxo
