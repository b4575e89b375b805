#include "laxo/variational_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "laxo/errors.hpp"
#include "laxo/quadrature.hpp"

namespace laxo {

namespace {

int sign3(double gv, double scale, double z)
{
    if (std::fabs(gv) <= z * scale) return 0;
    return gv > 0 ? 1 : -1;
}

class FluxObjective final : public Objective {
public:
    FluxObjective(const Solver& s, double x, double t) : s_(s), x_(x), t_(t) {}
    double value(double u) const override { return s_.eval_E(u, x_, t_); }
    double g(double u) const override { return s_.g(u, x_, t_); }

private:
    const Solver& s_;
    double x_, t_;
};

// integral of U(phi(y)) over [a,b], split at data breakpoints
double integrate_U_phi(const GeneralFluxPair::Fn& U, const InitialData& d, double a, double b,
                       double tol)
{
    if (a == b) return 0.0;
    double sgn = 1.0;
    if (a > b) { std::swap(a, b); sgn = -1.0; }
    std::vector<double> cuts{a};
    for (double x : d.breakpoints_in(a, b))
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        auto f = [&](double y) {
            if (y <= lo) return U(d.phi_right(lo));
            if (y >= hi) return U(d.phi_left(hi));
            return U(d.phi(y));
        };
        acc += adaptive_simpson(f, lo, hi, tol);
    }
    return sgn * acc;
}

class GeneralObjective final : public Objective {
public:
    GeneralObjective(const GeneralFluxPair& p, const InitialData& d, double x, double t,
                     const Tolerances& tol)
        : p_(p), d_(d), x_(x), t_(t), tol_(tol) {}
    double value(double u) const override { return eval_E_general(p_, d_, u, x_, t_, tol_); }
    double g(double u) const override { return p_.U(d_.phi(x_ - t_ * p_.H(u))) - p_.U(u); }
    double scale(double u) const override { return 1.0 + std::fabs(p_.U(u)); }

private:
    const GeneralFluxPair& p_;
    const InitialData& d_;
    double x_, t_;
    Tolerances tol_;
};

} // namespace

std::vector<Candidate> scan_candidates(const Objective& obj, double lo, double hi, int n,
                                       const Tolerances& tol)
{
    n = std::max(n, 8);
    const double h = (hi - lo) / (n - 1);
    std::vector<double> us(n);
    std::vector<int> sg(n);
    for (int i = 0; i < n; ++i) {
        us[i] = i + 1 == n ? hi : lo + h * i;
        sg[i] = sign3(obj.g(us[i]), obj.scale(us[i]), tol.zero_tol);
    }
    auto pos = [&](double u) { return sign3(obj.g(u), obj.scale(u), tol.zero_tol) > 0; };
    auto neg = [&](double u) { return sign3(obj.g(u), obj.scale(u), tol.zero_tol) < 0; };
    auto strict_neg = [&](double u) { return obj.g(u) < 0.0; };

    std::vector<Candidate> out;
    int i = 0;
    while (i < n) {
        if (sg[i] != 1) { ++i; continue; }
        int j = i + 1;
        while (j < n && sg[j] == 0) ++j;
        if (j >= n) break;
        if (sg[j] == -1) {
            const int zeros = j - i - 1;
            bool done = false;
            if (zeros >= 2) {
                const double L = bisect_flip([&](double u) { return !pos(u); }, us[i], us[i + 1], tol.tol_u);
                const double R = bisect_flip(neg, us[j - 1], us[j], tol.tol_u);
                // flat only if g is negligible well inside the run
                bool flat = R > L;
                for (int k = 1; flat && k < 16; ++k) {
                    const double u = L + (R - L) * k / 16.0;
                    if (std::fabs(obj.g(u)) > tol.flat_tol * obj.scale(u)) flat = false;
                }
                if (flat) {
                    const double v = std::max(obj.value(L), obj.value(R));
                    out.push_back({L, R, v});
                    done = true;
                }
            }
            if (!done) {
                const double u = bisect_flip(strict_neg, us[i], us[j], tol.tol_u);
                out.push_back({u, u, obj.value(u)});
            }
        }
        i = j;
    }
    return out;
}

MaximizerSet select_maximizers(const std::vector<Candidate>& cands, double val_tol)
{
    MaximizerSet m;
    if (cands.empty()) return m;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& c : cands) best = std::max(best, c.value);
    for (const auto& c : cands)
        if (c.value >= best - val_tol) m.components.push_back({c.lo, c.hi});
    std::sort(m.components.begin(), m.components.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    m.u_plus = m.components.front().lo;
    m.u_minus = m.components.back().hi;
    m.max_value = best;
    return m;
}

Solver::Solver(Flux flux, InitialData data, Tolerances tol)
    : flux_(std::move(flux)), data_(std::move(data)), tol_(tol) {}

double Solver::eval_E(double u, double x, double t) const
{
    // E = Phi(x - t f'(0)) - Phi(x - t f'(u)) - t (u f'(u) - f(u))
    const double fu = flux_.deriv(u);
    return data_.primitive(x - t * flux_.deriv(0.0)) - data_.primitive(x - t * fu) -
           t * (u * fu - flux_.eval(u));
}

double Solver::eval_E_quadrature(double u, double x, double t) const
{
    if (u == 0.0) return 0.0;
    const double a = std::min(0.0, u), b = std::max(0.0, u);
    // cut the s-range where the foot x - t f'(s) crosses a data breakpoint
    const double ya = x - t * flux_.deriv(b), yb = x - t * flux_.deriv(a);
    std::vector<double> cuts{a};
    for (double bp : data_.breakpoints_in(ya, yb)) {
        const double v = (x - bp) / t;
        if (v <= flux_.deriv(a) || v >= flux_.deriv(b)) continue;
        cuts.push_back(flux_.invert_deriv(v, {a, b}));
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (!(hi > lo)) continue;
        auto f = [&](double s) {
            const double y = x - t * flux_.deriv(s);
            // the foot decreases in s: at lo we sit right of the breakpoint
            const double ph = s <= lo ? data_.phi_left(y) : (s >= hi ? data_.phi_right(y) : data_.phi(y));
            return flux_.second(s) * (ph - s);
        };
        acc += adaptive_simpson(f, lo, hi, tol_.quad_tol / t);
    }
    return (u > 0 ? t : -t) * acc;
}

double Solver::g(double u, double x, double t) const
{
    return data_.phi(x - t * flux_.deriv(u)) - u;
}

Interval Solver::scan_range() const
{
    const double M = data_.bound();
    const double d = 0.01 * (1.0 + M);
    return {-M - d, M + d};
}

int Solver::scan_points(double t) const
{
    const Interval r = scan_range();
    const double spread = flux_.deriv(r.hi) - flux_.deriv(r.lo);
    const double feat = data_.feature_scale();
    double n = tol_.n_scan;
    if (std::isfinite(feat) && feat > 0) n = std::max(n, 4.0 * t * spread / feat);
    return static_cast<int>(std::min<double>(n, tol_.max_scan));
}

double Solver::max_speed() const
{
    const double M = data_.bound();
    return flux_.max_speed(-M, M);
}

std::vector<Candidate> Solver::candidates(double x, double t) const
{
    const Interval r = scan_range();
    return scan_candidates(FluxObjective(*this, x, t), r.lo, r.hi, scan_points(t), tol_);
}

MaximizerSet Solver::maximize(double x, double t) const
{
    return select_maximizers(candidates(x, t), tol_.val_tol);
}

SolutionSample Solver::solve(double x, double t) const
{
    SolutionSample s;
    s.x = x;
    s.t = t;
    s.maximizer = maximize(x, t);
    s.u_plus = s.maximizer.u_plus;
    s.u_minus = s.maximizer.u_minus;
    s.is_shock = s.u_minus - s.u_plus > tol_.jump_tol;
    return s;
}

unsigned thread_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* e = std::getenv("LAXO_THREADS")) {
        const long v = std::strtol(e, nullptr, 10);
        if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return n;
}

std::vector<SolutionSample> Solver::solve_grid(const std::vector<double>& xs, double t) const
{
    std::vector<SolutionSample> out(xs.size());
    const unsigned nt = std::min<unsigned>(thread_count(), static_cast<unsigned>(std::max<std::size_t>(1, xs.size() / 16)));
    if (nt <= 1) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = solve(xs[i], t);
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nt; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < xs.size(); i += nt) out[i] = solve(xs[i], t);
        });
    for (auto& th : pool) th.join();
    return out;
}

double Solver::e_hat(double x, double t) const
{
    const MaximizerSet m = maximize(x, t);
    const double u = m.u_plus;
    const double fu = flux_.deriv(u);
    return -data_.primitive(x - t * fu) - t * (u * fu - flux_.eval(u));
}

Restarted::Restarted(const Solver& base, double tau, const std::vector<double>& grid)
    : solver_(base), tau_(tau)
{
    if (!(tau > 0.0)) throw ParseError("restart needs tau > 0");
    if (grid.size() < 3) throw ParseError("restart grid needs >= 3 nodes");
    std::vector<double> eh(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) eh[i] = base.e_hat(grid[i], tau);
    std::vector<double> v(grid.size() - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        v[i] = (eh[i] - eh[i + 1]) / (grid[i + 1] - grid[i]);
    const double lt = base.solve(grid.front(), tau).u_minus;
    const double rt = base.solve(grid.back(), tau).u_plus;
    solver_ = Solver(base.flux(), InitialData::cells(grid, v, lt, rt), base.tol());
}

SolutionSample Restarted::solve(double x, double t) const
{
    SolutionSample s = solver_.solve(x, t - tau_);
    s.t = t;
    return s;
}

GeneralFluxPair GeneralFluxPair::from_flux(const Flux& f)
{
    GeneralFluxPair p;
    p.U = [](double u) { return u; };
    p.F = [f](double u) { return f.eval(u); };
    p.H = [f](double u) { return f.deriv(u); };
    p.identity = f;
    return p;
}

GeneralFluxPair GeneralFluxPair::make(Fn U, Fn dU, Fn F, Fn dF)
{
    GeneralFluxPair p;
    p.U = std::move(U);
    p.F = std::move(F);
    p.H = [dU, dF](double u) { return dF(u) / dU(u); };
    return p;
}

double eval_E_general(const GeneralFluxPair& p, const InitialData& d, double u, double x,
                      double t, const Tolerances& tol)
{
    if (p.identity) return Solver(*p.identity, d, tol).eval_E(u, x, t);
    const double h0 = p.H(0.0), hu = p.H(u);
    const double lin = integrate_U_phi(p.U, d, x - t * hu, x - t * h0, tol.quad_tol * 1e-2);
    return lin - t * (p.U(u) * hu - p.U(0.0) * h0 - p.F(u) + p.F(0.0));
}

SolutionSample solve_general(const GeneralFluxPair& p, const InitialData& d, double x, double t,
                             const Tolerances& tol)
{
    if (p.identity) return Solver(*p.identity, d, tol).solve(x, t);
    const double M = d.bound();
    const double dl = 0.01 * (1.0 + M);
    GeneralObjective obj(p, d, x, t, tol);
    const auto cands = scan_candidates(obj, -M - dl, M + dl, tol.n_scan, tol);
    SolutionSample s;
    s.x = x;
    s.t = t;
    s.maximizer = select_maximizers(cands, tol.val_tol);
    s.u_plus = s.maximizer.u_plus;
    s.u_minus = s.maximizer.u_minus;
    s.is_shock = s.u_minus - s.u_plus > tol.jump_tol;
    return s;
}

} // namespace laxo
