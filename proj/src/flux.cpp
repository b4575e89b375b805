#include "laxo/flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "laxo/errors.hpp"
#include "laxo/quadrature.hpp"

namespace laxo {

Flux Flux::burgers()
{
    Flux fl;
    fl.kind_ = FluxKind::burgers;
    fl.n_ = 1;
    return fl;
}

Flux Flux::power2n(int n)
{
    if (n < 1) throw ParseError("power2n needs n >= 1");
    Flux fl;
    fl.kind_ = n == 1 ? FluxKind::burgers : FluxKind::power2n;
    fl.n_ = n;
    return fl;
}

Flux Flux::exponential(double k)
{
    if (!(k > 0.0)) throw ParseError("exponential flux needs k > 0");
    Flux fl;
    fl.kind_ = FluxKind::exponential;
    fl.k_ = k;
    return fl;
}

Flux Flux::custom(Fn f, Fn df, Fn d2f, Interval hint)
{
    Flux fl;
    fl.kind_ = FluxKind::custom;
    fl.f_ = std::move(f);
    fl.df_ = std::move(df);
    fl.d2f_ = std::move(d2f);
    fl.hint_ = hint;
    fl.f0_ = fl.f_(0.0);
    return fl;
}

Flux Flux::table(std::vector<double> u, std::vector<double> dfdu)
{
    const std::size_t n = u.size();
    if (n < 2 || dfdu.size() != n) throw ParseError("flux table needs >= 2 matching knots");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(u[i] > u[i - 1])) throw ParseError("flux table knots must increase");
        if (!(dfdu[i] > dfdu[i - 1])) throw ParseError("flux table f' must increase strictly");
    }
    Flux fl;
    fl.kind_ = FluxKind::table;
    fl.tu_ = std::move(u);
    fl.td_ = std::move(dfdu);
    fl.hint_ = {fl.tu_.front(), fl.tu_.back()};

    // Fritsch-Carlson slopes
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = fl.tu_[i + 1] - fl.tu_[i];
        d[i] = (fl.td_[i + 1] - fl.td_[i]) / h[i];
    }
    fl.tm_.assign(n, 0.0);
    fl.tm_[0] = d[0];
    fl.tm_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
        fl.tm_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
    // prefix integrals of f' from the first knot
    fl.tF_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        fl.tF_[i + 1] = fl.tF_[i] + h[i] * (0.5 * (fl.td_[i] + fl.td_[i + 1]) +
                                           h[i] * (fl.tm_[i] - fl.tm_[i + 1]) / 12.0);
    fl.f0_ = 0.0;
    fl.f0_ = fl.table_f(0.0);
    return fl;
}

double Flux::table_df(double u) const
{
    const std::size_t n = tu_.size();
    if (u <= tu_.front()) return td_.front() + (td_[1] - td_[0]) / (tu_[1] - tu_[0]) * (u - tu_.front());
    if (u >= tu_.back())
        return td_.back() + (td_[n - 1] - td_[n - 2]) / (tu_[n - 1] - tu_[n - 2]) * (u - tu_.back());
    const std::size_t i = std::upper_bound(tu_.begin(), tu_.end(), u) - tu_.begin() - 1;
    const double h = tu_[i + 1] - tu_[i], s = (u - tu_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * td_[i] + (s3 - 2 * s2 + s) * h * tm_[i] +
           (-2 * s3 + 3 * s2) * td_[i + 1] + (s3 - s2) * h * tm_[i + 1];
}

double Flux::table_d2f(double u) const
{
    const std::size_t n = tu_.size();
    if (u <= tu_.front()) return (td_[1] - td_[0]) / (tu_[1] - tu_[0]);
    if (u >= tu_.back()) return (td_[n - 1] - td_[n - 2]) / (tu_[n - 1] - tu_[n - 2]);
    const std::size_t i = std::upper_bound(tu_.begin(), tu_.end(), u) - tu_.begin() - 1;
    const double h = tu_[i + 1] - tu_[i], s = (u - tu_[i]) / h;
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * td_[i] + h * (3 * s2 - 4 * s + 1) * tm_[i] +
            (-6 * s2 + 6 * s) * td_[i + 1] + h * (3 * s2 - 2 * s) * tm_[i + 1]) / h;
}

double Flux::table_f(double u) const
{
    const std::size_t n = tu_.size();
    if (u <= tu_.front()) {
        const double sl = (td_[1] - td_[0]) / (tu_[1] - tu_[0]);
        const double du = u - tu_.front();
        return td_.front() * du + 0.5 * sl * du * du - f0_;
    }
    if (u >= tu_.back()) {
        const double sl = (td_[n - 1] - td_[n - 2]) / (tu_[n - 1] - tu_[n - 2]);
        const double du = u - tu_.back();
        return tF_.back() + td_.back() * du + 0.5 * sl * du * du - f0_;
    }
    const std::size_t i = std::upper_bound(tu_.begin(), tu_.end(), u) - tu_.begin() - 1;
    const double h = tu_[i + 1] - tu_[i], s = (u - tu_[i]) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    const double acc = (0.5 * s4 - s3 + s) * td_[i] + (0.25 * s4 - 2.0 / 3.0 * s3 + 0.5 * s2) * h * tm_[i] +
                       (-0.5 * s4 + s3) * td_[i + 1] + (0.25 * s4 - s3 / 3.0) * h * tm_[i + 1];
    return tF_[i] + h * acc - f0_;
}

double Flux::eval(double u) const
{
    switch (kind_) {
    case FluxKind::burgers: return 0.5 * u * u;
    case FluxKind::power2n: return std::pow(u, 2 * n_) / (2 * n_);
    case FluxKind::exponential: return std::expm1(k_ * u) / k_;
    case FluxKind::custom: return f_(u) - f0_;
    case FluxKind::table: return table_f(u);
    }
    return 0.0;
}

double Flux::deriv(double u) const
{
    switch (kind_) {
    case FluxKind::burgers: return u;
    case FluxKind::power2n: return std::pow(u, 2 * n_ - 1);
    case FluxKind::exponential: return std::exp(k_ * u);
    case FluxKind::custom: return df_(u);
    case FluxKind::table: return table_df(u);
    }
    return 0.0;
}

double Flux::second(double u) const
{
    switch (kind_) {
    case FluxKind::burgers: return 1.0;
    case FluxKind::power2n: return (2 * n_ - 1) * std::pow(u, 2 * n_ - 2);
    case FluxKind::exponential: return k_ * std::exp(k_ * u);
    case FluxKind::custom: return d2f_(u);
    case FluxKind::table: return table_d2f(u);
    }
    return 0.0;
}

double Flux::chord(double u, double v) const
{
    if (std::fabs(u - v) <= 1e-12 * (1.0 + std::fabs(u) + std::fabs(v))) return deriv(0.5 * (u + v));
    return (eval(u) - eval(v)) / (u - v);
}

double Flux::max_speed(double lo, double hi) const
{
    return std::max(std::fabs(deriv(lo)), std::fabs(deriv(hi)));
}

double Flux::invert_deriv(double v, Interval br) const
{
    double lo = br.lo, hi = br.hi;
    const double dlo = deriv(lo), dhi = deriv(hi);
    const double tol_v = 1e-12 * (1.0 + std::fabs(v));
    if (v < dlo - tol_v || v > dhi + tol_v)
        throw BracketError("speed " + std::to_string(v) + " outside f' image of bracket");
    if (v <= dlo) return lo;
    if (v >= dhi) return hi;
    switch (kind_) {
    case FluxKind::burgers: return v;
    case FluxKind::power2n: {
        const double r = std::pow(std::fabs(v), 1.0 / (2 * n_ - 1));
        return std::clamp(v < 0 ? -r : r, lo, hi);
    }
    case FluxKind::exponential: return std::clamp(std::log(v) / k_, lo, hi);
    default: break;
    }
    for (int it = 0; it < 200 && hi - lo > tol_u; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (deriv(mid) < v) lo = mid; else hi = mid;
    }
    double u = 0.5 * (lo + hi);
    // one Newton polish, kept only if it stays in the final bracket
    const double d2 = second(u);
    if (d2 > 0.0) {
        const double un = u - (deriv(u) - v) / d2;
        if (un >= lo && un <= hi) u = un;
    }
    return u;
}

double Flux::invert_deriv(double v) const
{
    double lo = -1.0, hi = 1.0;
    for (int i = 0; i < 80 && deriv(hi) < v; ++i) hi *= 2.0;
    for (int i = 0; i < 80 && deriv(lo) > v; ++i) lo *= 2.0;
    return invert_deriv(v, {lo, hi});
}

double Flux::rho(double u, double v) const
{
    if (std::fabs(u - v) <= tol_u) return v;
    const double a = std::min(u, v), b = std::max(u, v);
    const double scale = (b - a) * (b - a);
    const double tol = 1e-10 * scale;
    const double den = adaptive_simpson([this](double s) { return second(s); }, a, b, tol * 1e-2);
    const double num = adaptive_simpson([this, a](double s) { return (s - a) * second(s); }, a, b, tol * 1e-2 * (b - a));
    if (!(den > 0.0)) return 0.5 * (a + b);
    return a + num / den;
}

DegeneracyExpansion Flux::fit_degeneracy(double c, Side side) const
{
    DegeneracyExpansion e;
    e.c = c;
    e.side = side;
    switch (kind_) {
    case FluxKind::burgers: e.alpha = 0.0; e.N = 1.0; return e;
    case FluxKind::power2n:
        if (c == 0.0) { e.alpha = 2.0 * n_ - 2.0; e.N = 2.0 * n_ - 1.0; }
        else { e.alpha = 0.0; e.N = second(c); }
        return e;
    case FluxKind::exponential: e.alpha = 0.0; e.N = second(c); return e;
    default: break;
    }
    const double sgn = side == Side::right ? 1.0 : -1.0;
    const double at_c = second(c);
    std::vector<double> lx, ly;
    double peak = 0.0;
    for (int j = 0; j <= 20; ++j) {
        const double h = 0.1 * std::ldexp(1.0, -j);
        const double s = second(c + sgn * h);
        peak = std::max(peak, s);
        if (s > 0.0) { lx.push_back(std::log(h)); ly.push_back(std::log(s)); }
    }
    if (peak <= 1e-14) throw FitError("f'' vanishes on the whole fit window");
    if (at_c > 1e-10) { e.alpha = 0.0; e.N = at_c; return e; }
    // least squares on the finest half of the ladder
    const std::size_t m = lx.size(), s0 = m / 2;
    if (m - s0 < 3) throw FitError("too few positive f'' samples near c");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double cnt = static_cast<double>(m - s0);
    for (std::size_t i = s0; i < m; ++i) {
        sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
    }
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    e.alpha = std::max(0.0, slope);
    e.N = std::exp((sy - slope * sx) / cnt);
    return e;
}

} // namespace laxo
