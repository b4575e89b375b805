#pragma once

#include <functional>
#include <vector>

namespace laxo {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool contains(double v, double tol = 0.0) const
    {
        return v >= lo - tol && v <= hi + tol;
    }
};

enum class Side { left, right };

enum class FluxKind { burgers, power2n, exponential, custom, table };

// f''(u) = (N + o(1)) |u - c|^alpha as u -> c from `side`
struct DegeneracyExpansion {
    double c = 0.0;
    Side side = Side::right;
    double alpha = 0.0;
    double N = 1.0;
};

class Flux {
public:
    using Fn = std::function<double(double)>;

    static Flux burgers();
    static Flux power2n(int n);            // u^{2n}/(2n)
    static Flux exponential(double k);     // (e^{ku} - 1)/k
    static Flux custom(Fn f, Fn df, Fn d2f, Interval hint = {-1e3, 1e3});
    // monotone cubic Hermite through (u_i, f'(u_i)); f by exact integration
    static Flux table(std::vector<double> u, std::vector<double> dfdu);

    double eval(double u) const;
    double deriv(double u) const;
    double second(double u) const;

    double invert_deriv(double v, Interval bracket) const;
    double invert_deriv(double v) const; // bracket grown automatically

    // mean of s weighted by f'' between v and u
    double rho(double u, double v) const;
    DegeneracyExpansion fit_degeneracy(double c, Side side) const;

    // Rankine-Hugoniot slope [f]/[u]; f'(u) when the states coincide
    double chord(double u, double v) const;

    FluxKind kind() const { return kind_; }
    int n() const { return n_; }
    double k() const { return k_; }
    Interval domain_hint() const { return hint_; }
    const std::vector<double>& table_u() const { return tu_; }
    const std::vector<double>& table_df() const { return td_; }

    // max |f'| over [lo,hi]; f' is monotone so endpoints suffice
    double max_speed(double lo, double hi) const;

    static constexpr double tol_u = 1e-12;

private:
    Flux() = default;
    double table_df(double u) const;
    double table_d2f(double u) const;
    double table_f(double u) const;

    FluxKind kind_ = FluxKind::burgers;
    int n_ = 1;
    double k_ = 1.0;
    double f0_ = 0.0; // subtracted so that f(0) = 0
    Interval hint_{-1e3, 1e3};
    Fn f_, df_, d2f_;

    std::vector<double> tu_, td_, tm_, tF_; // table knots, f', slopes, prefix integrals
};

} // namespace laxo
