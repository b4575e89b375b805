#include "laxo/reference_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "laxo/errors.hpp"

namespace laxo {

void FvGrid::validate() const
{
    if (n_cells < 4) throw ParseError("n_cells must be at least 4");
    if (!(cfl > 0.0 && cfl < 1.0)) throw ParseError("cfl must lie in (0,1)");
    if (!(x_hi > x_lo)) throw ParseError("empty finite-volume domain");
}

Godunov::Godunov(Flux f, FvGrid g) : f_(std::move(f)), g_(g)
{
    g_.validate();
    const double inf = std::numeric_limits<double>::infinity();
    try {
        sonic_ = f_.invert_deriv(0.0);
    } catch (const BracketError&) {
        sonic_ = f_.deriv(0.0) > 0 ? -inf : inf;
    }
}

std::vector<double> Godunov::initial(const InitialData& d) const
{
    std::vector<double> u(g_.n_cells);
    const double dx = g_.dx();
    double prev = d.primitive(g_.x_lo);
    for (int i = 0; i < g_.n_cells; ++i) {
        const double next = d.primitive(g_.x_lo + (i + 1) * dx);
        u[i] = (next - prev) / dx;
        prev = next;
    }
    return u;
}

double Godunov::numerical_flux(double uL, double uR) const
{
    if (uL <= uR) return f_.eval(std::clamp(sonic_, uL, uR));
    return std::max(f_.eval(uL), f_.eval(uR));
}

double Godunov::stable_dt(const std::vector<double>& state) const
{
    double m = 0.0;
    for (double u : state) m = std::max(m, std::fabs(f_.deriv(u)));
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return g_.cfl * g_.dx() / m;
}

void Godunov::step(std::vector<double>& state, double dt) const
{
    const int n = static_cast<int>(state.size());
    double m = 0.0;
    for (double u : state) m = std::max(m, std::fabs(f_.deriv(u)));
    if (dt * m > g_.cfl * g_.dx() * (1.0 + 1e-12)) throw CflViolation("time step exceeds the CFL bound");
    const bool per = g_.boundary == Boundary::periodic;
    auto at = [&](int i) {
        if (i < 0) return per ? state[n + i] : state[0];
        if (i >= n) return per ? state[i - n] : state[n - 1];
        return state[i];
    };
    std::vector<double> F(n + 1);
    for (int i = 0; i <= n; ++i) F[i] = numerical_flux(at(i - 1), at(i));
    if (per) F[n] = F[0];
    const double r = dt / g_.dx();
    for (int i = 0; i < n; ++i) state[i] -= r * (F[i + 1] - F[i]);
}

std::vector<double> Godunov::evolve(std::vector<double> state, double t) const
{
    double now = 0.0;
    while (now < t) {
        const double dt = std::min(stable_dt(state), t - now);
        step(state, dt);
        now = (t - now <= dt) ? t : now + dt;
    }
    return state;
}

double Godunov::mass(const std::vector<double>& state) const
{
    double s = 0.0;
    for (double u : state) s += u;
    return s * g_.dx();
}

void Godunov::write_csv(std::ostream& os, const std::vector<double>& state) const
{
    const auto old = os.precision(17);
    os << "x,u\n";
    for (int i = 0; i < static_cast<int>(state.size()); ++i) os << g_.center(i) << ',' << state[i] << '\n';
    os.precision(old);
}

Comparison compare(const Solver& s, double t, const FvGrid& g)
{
    Godunov gd(s.flux(), g);
    const auto fv = gd.evolve(s.data(), t);
    const int n = g.n_cells;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = g.center(i);
    const auto ex = s.solve_grid(xs, t);
    Comparison c;
    c.dx = g.dx();

    double lo = 1e300, hi = -1e300;
    for (const auto& e : ex) lo = std::min(lo, e.u_plus), hi = std::max(hi, e.u_plus);
    const double thr = std::max(0.05 * (hi - lo), 1e-8);

    // jumps of the formula, pinned by bisection on the midpoint level
    std::vector<double> jumps;
    for (int i = 0; i + 1 < n; ++i) {
        const double ul = ex[i].u_plus, ur = ex[i + 1].u_plus;
        if (ul - ur <= thr) continue;
        double a = xs[i], b = xs[i + 1];
        for (int k = 0; k < 60; ++k) {
            const double m = 0.5 * (a + b);
            const auto v = s.solve(m, t);
            if (v.u_minus - v.u_plus > 0.5 * thr) { a = b = m; break; }
            if (v.u_plus > 0.5 * (ul + ur)) a = m; else b = m;
        }
        const double xj = 0.5 * (a + b);
        // numerical crossing of the same level nearby
        const double level = 0.5 * (ul + ur);
        double best = std::numeric_limits<double>::infinity();
        for (int k = std::max(0, i - 10); k < std::min(n - 1, i + 11); ++k) {
            if ((fv[k] - level) * (fv[k + 1] - level) > 0 || fv[k] == fv[k + 1]) continue;
            const double xc = xs[k] + (level - fv[k]) / (fv[k + 1] - fv[k]) * c.dx;
            if (std::fabs(xc - xj) < std::fabs(best)) best = xc - xj;
        }
        if (!std::isfinite(best)) best = 10 * c.dx;
        c.shock_offset = std::max(c.shock_offset, std::fabs(best));
        jumps.push_back(xj);
    }
    c.n_jumps = static_cast<int>(jumps.size());

    for (int i = 0; i < n; ++i) {
        const double d = std::fabs(fv[i] - ex[i].u_plus);
        c.l1 += d * c.dx;
        bool near = false;
        for (double xj : jumps) near = near || std::fabs(xs[i] - xj) <= 3 * c.dx;
        if (!near) c.linf_smooth = std::max(c.linf_smooth, d);
    }
    return c;
}

} // namespace laxo
