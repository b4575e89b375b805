#include "laxo/global_structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "laxo/errors.hpp"
#include "laxo/quadrature.hpp"

namespace laxo {

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x)
{
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return ys.front();
    if (it == xs.end()) return ys.back();
    const std::size_t i = it - xs.begin();
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

} // namespace

double HullReport::value(double x) const
{
    if (x < xs.front()) return hull.front() + slope_left * (x - xs.front());
    if (x > xs.back()) return hull.back() + slope_right * (x - xs.back());
    return interp(xs, hull, x);
}

DecayFit fit_power(const std::vector<double>& ts, const std::vector<double>& ys)
{
    DecayFit fit;
    fit.ts = ts;
    fit.values = ys;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double a = std::log(ts[i]), b = std::log(ys[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.constant = std::exp((sy - fit.exponent * sx) / n);
    return fit;
}

GlobalStructure::GlobalStructure(const Solver& s, double N, double grid_h) : s_(s), sa_(s), N_(N), h_(grid_h)
{
    const auto& d = s_.data();
    double need;
    if (d.period()) need = 2.0 * *d.period();
    else need = std::max(std::fabs(d.support_lo()), std::fabs(d.support_hi())) + 1.0;
    if (d.period()) {
        if (!(N_ > 0)) N_ = need;
    } else {
        N_ = std::max(N_, need); // the window has to hold every breakpoint
    }
    if (!(h_ > 0)) h_ = 1e-3 * 2.0 * N_;
}

const HullReport& GlobalStructure::hull() const
{
    if (hull_) return *hull_;
    const auto& d = s_.data();
    const TailInvariants ti = d.tail_invariants();
    if (ti.ubar_l > ti.ulow_r + 1e-12 * (1 + std::fabs(ti.ubar_l)))
        throw HullInfinite("left tail mean exceeds right tail mean: the convex hull is -infinity");

    HullReport r;
    r.N = N_;
    r.grid_h = h_;
    r.slope_left = ti.ubar_l;
    r.slope_right = ti.ulow_r;
    r.periodic = d.period().has_value();
    const int n = static_cast<int>(std::ceil(2 * N_ / h_));
    for (int i = 0; i <= n; ++i) r.xs.push_back(-N_ + 2 * N_ * i / n);
    for (double b : d.breakpoints_in(-N_, N_)) r.xs.push_back(b);
    std::sort(r.xs.begin(), r.xs.end());
    r.xs.erase(std::unique(r.xs.begin(), r.xs.end(), [](double a, double b) { return b - a < 1e-13; }),
               r.xs.end());
    for (double x : r.xs) r.phi.push_back(d.primitive(x));
    double pmax = 0.0;
    for (double p : r.phi) pmax = std::max(pmax, std::fabs(p));
    const double tol = s_.tol().hull_tol * (1.0 + pmax);

    std::vector<double> slope_at(r.xs.size(), 0.0); // supporting slope used for point refinement
    std::vector<double> refined; // periodic: golden-refined local minima of Phi - m x
    if (r.periodic) {
        const double m = ti.ubar_l;
        auto g = [&](double x) { return d.primitive(x) - m * x; };
        std::vector<double> gv(r.xs.size());
        for (std::size_t i = 0; i < r.xs.size(); ++i) gv[i] = r.phi[i] - m * r.xs[i];
        double gmin = *std::min_element(gv.begin(), gv.end());
        std::vector<std::pair<double, double>> mins;
        for (std::size_t i = 0; i < gv.size(); ++i) {
            const bool lmin = (i == 0 || gv[i] <= gv[i - 1]) && (i + 1 == gv.size() || gv[i] <= gv[i + 1]);
            if (!lmin) continue;
            const double a = r.xs[i > 0 ? i - 1 : i], b = r.xs[std::min(i + 1, r.xs.size() - 1)];
            const double xm = golden_min(g, a, b, 1e-13);
            mins.emplace_back(xm, g(xm));
            gmin = std::min(gmin, mins.back().second);
        }
        for (const auto& [xm, v] : mins)
            if (v - gmin <= tol) refined.push_back(xm);
        for (double x : r.xs) r.hull.push_back(m * x + gmin);
        std::fill(slope_at.begin(), slope_at.end(), m);
    } else {
        // far points sit on the tail lines so the chain bends into the asymptotic slopes
        const double R = 1e6 * (1.0 + N_);
        std::vector<std::pair<double, double>> pts;
        pts.emplace_back(-N_ - R, d.primitive(-N_ - R));
        for (std::size_t i = 0; i < r.xs.size(); ++i) pts.emplace_back(r.xs[i], r.phi[i]);
        pts.emplace_back(N_ + R, d.primitive(N_ + R));
        std::vector<std::pair<double, double>> H;
        for (const auto& p : pts) {
            while (H.size() >= 2) {
                const auto& o = H[H.size() - 2];
                const auto& a = H.back();
                const double cr = (a.first - o.first) * (p.second - o.second) - (a.second - o.second) * (p.first - o.first);
                if (cr <= 0) H.pop_back(); else break;
            }
            H.push_back(p);
        }
        std::vector<double> vx, vy;
        for (const auto& p : H) vx.push_back(p.first), vy.push_back(p.second);
        for (double x : r.xs) r.hull.push_back(std::min(interp(vx, vy, x), d.primitive(x)));
        for (std::size_t i = 0; i < r.xs.size(); ++i) {
            const std::size_t a = i > 0 ? i - 1 : i, b = std::min(i + 1, r.xs.size() - 1);
            slope_at[i] = b > a ? (interp(vx, vy, r.xs[b]) - interp(vx, vy, r.xs[a])) / (r.xs[b] - r.xs[a]) : 0.0;
        }
    }

    // contact runs
    std::size_t i = 0;
    while (i < r.xs.size()) {
        if (r.phi[i] - r.hull[i] > tol) { ++i; continue; }
        std::size_t j = i;
        while (j + 1 < r.xs.size() && r.phi[j + 1] - r.hull[j + 1] <= tol) ++j;
        if (j == i) {
            const double s = slope_at[i];
            auto g = [&](double x) { return d.primitive(x) - s * x; };
            const double a = r.xs[i > 0 ? i - 1 : i], b = r.xs[std::min(i + 1, r.xs.size() - 1)];
            const double xm = golden_min(g, a, b, 1e-13);
            r.K0.push_back({xm, xm});
        } else {
            r.K0.push_back({r.xs[i], r.xs[j]});
        }
        if (!r.periodic && i == 0) r.K0_left_unbounded = true;
        if (!r.periodic && j == r.xs.size() - 1) r.K0_right_unbounded = true;
        i = j + 1;
    }
    // minima that fall between grid nodes
    for (double xm : refined) {
        bool seen = false;
        for (const auto& c : r.K0) seen = seen || (xm >= c.lo - r.grid_h && xm <= c.hi + r.grid_h);
        if (!seen) r.K0.push_back({xm, xm});
    }
    std::sort(r.K0.begin(), r.K0.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    r.finite = true;
    hull_ = std::move(r);
    return *hull_;
}

DivideFan GlobalStructure::divide_fan(double x0) const
{
    const auto& d = s_.data();
    const TailInvariants ti = d.tail_invariants();
    DivideFan df;
    df.x0 = x0;
    if (ti.ubar_l > ti.ulow_r + 1e-12 * (1 + std::fabs(ti.ubar_l))) return df;
    const double P0 = d.primitive(x0);
    auto q = [&](double l) { return (d.primitive(x0 + l) - P0) / l; };
    double Lr, Ll;
    if (d.period()) Lr = Ll = *d.period();
    else {
        Lr = std::max(d.support_hi() - x0, 0.0) + 1.0;
        Ll = std::max(x0 - d.support_lo(), 0.0) + 1.0;
    }
    // inf over l>0 of the right quotient, sup over l<0 of the left one
    auto extreme = [&](double L, double sign) {
        std::vector<double> ls;
        for (double l = 1e-6; l < L; l *= 1.25) ls.push_back(l);
        for (int k = 1; k <= 4000; ++k) ls.push_back(L * k / 4000.0);
        std::sort(ls.begin(), ls.end());
        double best = 1e300;
        std::size_t ib = 0;
        for (std::size_t k = 0; k < ls.size(); ++k) {
            const double v = sign * q(sign * ls[k]);
            if (v < best) best = v, ib = k;
        }
        const double a = ls[ib > 0 ? ib - 1 : 0], b = ls[std::min(ib + 1, ls.size() - 1)];
        auto obj = [&](double l) { return sign * q(sign * l); };
        if (b > a) best = std::min(best, obj(golden_min(obj, a, b, 1e-14)));
        return best;
    };
    df.hi = std::min({extreme(Lr, 1.0), d.phi_right(x0), ti.ulow_r});
    df.lo = std::max({-extreme(Ll, -1.0), d.phi_left(x0), ti.ubar_l});
    df.empty = df.lo > df.hi + 1e-9 * (1.0 + std::fabs(df.lo) + std::fabs(df.hi));
    return df;
}

bool GlobalStructure::verify_divide(double x0, double c, double L) const
{
    const auto& d = s_.data();
    const double P0 = d.primitive(x0);
    auto g = [&](double l) { return d.primitive(x0 + l) - P0 - c * l; };
    const int n = 20000;
    double best = 1e300;
    int ib = 0;
    for (int k = 0; k <= n; ++k) {
        const double l = -L + 2 * L * k / n;
        const double v = g(l);
        if (v < best) best = v, ib = k;
    }
    const double a = -L + 2 * L * std::max(ib - 1, 0) / n, b = -L + 2 * L * std::min(ib + 1, n) / n;
    best = std::min(best, g(golden_min(g, a, b)));
    return best >= -s_.tol().check_tol * (1.0 + std::fabs(P0) + std::fabs(c) * L);
}

const Partition& GlobalStructure::partition() const
{
    if (part_) return *part_;
    const HullReport* hp = nullptr;
    try {
        hp = &hull();
    } catch (const HullInfinite&) {
        throw NoDivides("hull is -infinity: no divides");
    }
    const HullReport& h = *hp;
    if (h.K0.empty()) throw NoDivides("contact set is empty: no divides");
    const auto& d = s_.data();
    Partition p;
    p.K0 = h.K0;
    for (std::size_t i = 0; i + 1 < h.K0.size(); ++i) {
        const double e = h.K0[i].hi, hh = h.K0[i + 1].lo;
        p.gaps.push_back({e, hh, (d.primitive(hh) - d.primitive(e)) / (hh - e)});
    }
    if (!h.periodic) {
        p.has_minus_inf = !h.K0_left_unbounded;
        p.has_plus_inf = !h.K0_right_unbounded;
        p.x_minus = h.K0.front().lo;
        p.x_plus = h.K0.back().hi;
        p.speed_minus = h.slope_left;
        p.speed_plus = h.slope_right;
    }
    part_ = std::move(p);
    return *part_;
}

const Solver& GlobalStructure::tilde_solver() const
{
    if (tilde_) return *tilde_;
    const Partition& p = partition();
    const HullReport& h = hull();
    const auto& d = s_.data();
    std::vector<Piece> pieces;
    auto fill = [&](double from, double to, const std::vector<Interval>& comps) {
        double cur = from;
        for (const auto& c : comps) {
            if (c.hi < from || c.lo > to) continue;
            const double lo = std::max(c.lo, from), hi = std::min(c.hi, to);
            if (lo > cur + 1e-13) {
                const double cv = (d.primitive(lo) - d.primitive(cur)) / (lo - cur);
                pieces.push_back(Piece{cur, lo, {Term::constant(cv)}});
            }
            if (hi > lo + 1e-13)
                for (const auto& pc : d.pieces_on(lo, hi)) pieces.push_back(pc);
            cur = std::max(cur, hi);
        }
        if (to > cur + 1e-13) {
            const double cv = (d.primitive(to) - d.primitive(cur)) / (to - cur);
            pieces.push_back(Piece{cur, to, {Term::constant(cv)}});
        }
    };
    if (h.periodic) {
        const double P = *d.period();
        const double s0 = p.K0.front().lo;
        std::vector<Interval> comps;
        for (const auto& c : p.K0)
            if (c.lo >= s0 && c.lo < s0 + P - 1e-12) comps.push_back(c);
        fill(s0, s0 + P, comps);
        tilde_ = std::make_unique<Solver>(s_.flux(), InitialData::periodic(pieces, P), s_.tol());
    } else {
        const double a = h.K0_left_unbounded ? h.xs.front() : p.x_minus;
        const double b = h.K0_right_unbounded ? h.xs.back() : p.x_plus;
        if (b - a <= 1e-13) {
            tilde_ = std::make_unique<Solver>(s_.flux(), InitialData::step(h.slope_left, h.slope_right, a), s_.tol());
        } else {
            fill(a, b, p.K0);
            tilde_ = std::make_unique<Solver>(s_.flux(), InitialData(pieces, h.slope_left, h.slope_right), s_.tol());
        }
    }
    return *tilde_;
}

double GlobalStructure::u_tilde(double x, double t) const { return tilde_solver().solve(x, t).u_plus; }

std::optional<std::size_t> GlobalStructure::gap_of(double x, double t) const
{
    const Partition& p = partition();
    const auto& f = s_.flux();
    for (std::size_t n = 0; n < p.gaps.size(); ++n) {
        const auto& g = p.gaps[n];
        const double v = t * f.deriv(g.c);
        const double pad = 1e-7 * (1.0 + std::fabs(x)); // K0 points are only resolved to about this
        if (x > g.e + v + pad && x < g.h + v - pad) return n;
    }
    return std::nullopt;
}

double GlobalStructure::gap_shock(std::size_t n, double t) const
{
    const GapRegion& g = partition().gaps.at(n);
    const double xi = 0.5 * (g.e + g.h);
    return sa_.locate(t, xi, xi + t * s_.flux().deriv(g.c), 0.5 * (g.h - g.e));
}

double GlobalStructure::theta(std::size_t n, double t) const
{
    const GapRegion& g = partition().gaps.at(n);
    const auto& f = s_.flux();
    const double xi = 0.5 * (g.e + g.h);
    const SplitMax sm = sa_.split_max(gap_shock(n, t), t, xi);
    const double dm = f.deriv(sm.u_minus), dp = f.deriv(sm.u_plus);
    return (dm - f.deriv(g.c)) / (dm - dp);
}

double GlobalStructure::nwave(double x, double t, const ShockFn& shock_x) const
{
    const auto n = gap_of(x, t);
    if (!n) return u_tilde(x, t);
    const GapRegion& g = partition().gaps[*n];
    const double xs = shock_x ? shock_x(*n, t) : gap_shock(*n, t);
    const double xi = x < xs ? g.e : g.h;
    return s_.flux().invert_deriv((x - xi) / t);
}

double GlobalStructure::norm_at(DecayNorm norm, double q, Interval region, double t, DecayTarget target,
                                bool speeds, int n_samples) const
{
    const auto& f = s_.flux();
    std::vector<double> xs(n_samples);
    for (int i = 0; i < n_samples; ++i) xs[i] = region.lo + region.width() * i / (n_samples - 1);
    const auto us = s_.solve_grid(xs, t);
    std::vector<double> tg(n_samples);
    if (target == DecayTarget::u_tilde) {
        const auto ts = tilde_solver().solve_grid(xs, t);
        for (int i = 0; i < n_samples; ++i) tg[i] = ts[i].u_plus;
    } else {
        std::map<std::size_t, double> shocks;
        auto sx = [&](std::size_t n, double tt) {
            auto it = shocks.find(n);
            if (it == shocks.end()) it = shocks.emplace(n, gap_shock(n, tt)).first;
            return it->second;
        };
        for (int i = 0; i < n_samples; ++i) tg[i] = nwave(xs[i], t, sx);
    }
    auto diff = [&](double u, double w) { return speeds ? std::fabs(f.deriv(u) - f.deriv(w)) : std::fabs(u - w); };
    if (norm == DecayNorm::sup) {
        double m = 0.0;
        for (int i = 0; i < n_samples; ++i)
            m = std::max({m, diff(us[i].u_plus, tg[i]), diff(us[i].u_minus, tg[i])});
        return m;
    }
    double acc = 0.0;
    const double dx = region.width() / (n_samples - 1);
    for (int i = 0; i < n_samples; ++i) {
        const double w = (i == 0 || i == n_samples - 1) ? 0.5 : 1.0;
        acc += w * std::pow(diff(us[i].u_plus, tg[i]), q);
    }
    return std::pow(acc * dx, 1.0 / q);
}

DecayFit GlobalStructure::measure_decay(DecayNorm norm, double q, Interval region, const std::vector<double>& ts,
                                        DecayTarget target, bool speeds, int n_samples) const
{
    tilde_solver(); // build caches before any parallel work
    std::vector<double> ys;
    for (double t : ts) ys.push_back(norm_at(norm, q, region, t, target, speeds, n_samples));
    return fit_power(ts, ys);
}

} // namespace laxo
