#pragma once

#include <optional>
#include <vector>

#include "laxo/flux.hpp"

namespace laxo {

struct Term {
    enum class Kind { constant, poly, sin, cos, power };
    Kind kind = Kind::constant;
    double a = 0.0;              // amplitude (constant value for `constant`)
    double b = 1.0, c = 0.0;     // a*sin(b x + c), a*cos(b x + c)
    double center = 0.0;         // poly in (x-center), power a*|x-center|^p
    double p = 1.0;
    std::vector<double> coeffs;  // poly coefficients, lowest degree first

    static Term constant(double v);
    static Term poly(std::vector<double> coeffs, double center = 0.0);
    static Term sine(double a, double b, double c = 0.0);
    static Term cosine(double a, double b, double c = 0.0);
    static Term power(double a, double p, double center = 0.0);

    double value(double x) const;
    double antideriv(double x) const;
    // k-th Taylor coefficient at x0 (term must be smooth there)
    double taylor(double x0, int k) const;
    bool singular_at(double x0) const;
};

struct Piece {
    double lo = 0.0, hi = 0.0;
    std::vector<Term> terms;
    double value(double x) const;
    double antideriv(double x) const;
};

struct DiniPack {
    double x0 = 0.0;
    double upper_left = 0.0;  // upper left Dini derivative of the primitive
    double lower_right = 0.0; // lower right Dini derivative
};

// phi(x0+l) - c = (C_gamma + o(1)) sgn(l) |l|^gamma on one side
struct LocalExpansion {
    double x0 = 0.0, c = 0.0;
    Side side = Side::right;
    double gamma = 0.0;
    double C_gamma = 0.0;
};

struct TailInvariants {
    double ubar_l = 0.0, ulow_l = 0.0, ubar_r = 0.0, ulow_r = 0.0;
};

class InitialData {
public:
    InitialData() = default;
    InitialData(std::vector<Piece> pieces, std::optional<double> left_tail,
                std::optional<double> right_tail,
                std::optional<double> period = std::nullopt);

    static InitialData constant(double v);
    static InitialData step(double ul, double ur, double x0 = 0.0);
    static InitialData periodic(std::vector<Piece> pieces, double period);
    // one-term convenience: pieces covering one period [lo, lo+period)
    static InitialData periodic_terms(std::vector<Term> terms, double period, double lo = 0.0);
    // piecewise constant cells; tails default to the end values
    static InitialData cells(const std::vector<double>& edges, const std::vector<double>& values,
                             std::optional<double> left_tail = std::nullopt,
                             std::optional<double> right_tail = std::nullopt);

    double phi(double x) const;       // right-continuous representative
    double phi_left(double x) const;  // phi(x-)
    double phi_right(double x) const; // phi(x+)
    double primitive(double x) const; // Phi(x), Phi(0) = 0
    double bound() const { return bound_; }

    DiniPack dini(double x0) const;
    TailInvariants tail_invariants() const;
    LocalExpansion local_expansion(double x0, double c, Side side) const;

    // breakpoints (including periodic copies) inside [a,b]
    std::vector<double> breakpoints_in(double a, double b) const;
    // pieces restricted to [a,b], tails and periodic copies materialised
    std::vector<Piece> pieces_on(double a, double b) const;
    // smallest length scale of the data, infinity for pure step data
    double feature_scale() const { return feature_; }

    const std::vector<Piece>& pieces() const { return pieces_; }
    std::optional<double> left_tail() const { return lt_; }
    std::optional<double> right_tail() const { return rt_; }
    std::optional<double> period() const { return period_; }
    double support_lo() const { return slo_; }
    double support_hi() const { return shi_; }

private:
    // primitive measured from support_lo (or period start)
    double psi(double x) const;
    const Piece* piece_right(double x, double& xr) const;
    const Piece* piece_left(double x, double& xr) const;
    double reduce(double x, long long& k) const;

    std::vector<Piece> pieces_;
    std::optional<double> lt_, rt_, period_;
    double slo_ = 0.0, shi_ = 0.0;
    double ltv_ = 0.0, rtv_ = 0.0; // effective tail values
    std::vector<double> los_, psi_lo_, anti_lo_;
    double period_int_ = 0.0;
    double psi0_ = 0.0;
    double bound_ = 0.0;
    double feature_ = 0.0;
};

} // namespace laxo
