#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "laxo/characteristics.hpp"

namespace laxo {

enum class GenerationType {
    case_I,          // t_p+ = t_p-
    case_II_a_eq_c,  // t_p+ < t_p-, data continuous in the Dini sense
    case_II_a_lt_c,  // t_p+ < t_p-, c is the upper endpoint of a jump
    case_III_b_eq_c, // t_p- < t_p+
    case_III_c_lt_b
};

struct GenerationPoint {
    double x_p = 0.0, t_p = 0.0;
    double source_x0 = 0.0, speed_c = 0.0;
    double t_p_minus = kInf, t_p_plus = kInf;
    GenerationType type = GenerationType::case_I;
};

// local shape of f'(phi(x0+l)) - f'(c) = -Cg l + Cs_pm sgn(l)|l|^(1+sigma_pm) + Cr |l|^(1+sigma+rho)
// and phi(x0+l) - c = C_pm sgn(l)|l|^gamma_pm
struct DevelopmentInputs {
    double sigma_plus = 1.0, sigma_minus = 1.0;
    double Cbar_sigma_plus = 0.0, Cbar_sigma_minus = 0.0;
    double rho = 0.0, Cbar_rho = 0.0;
    double gamma_plus = 1.0, gamma_minus = 1.0;
    double C_gamma_plus = 0.0, C_gamma_minus = 0.0;
};

struct DevelopmentAsymptotics {
    double exponent_curve = 0.0;
    double coeff_curve = 0.0; // signed: x(t) - x_p - (t-t_p) f'(c) ~ coeff (t-t_p)^exponent
    double exponent_u = 0.0;  // Holder power of |u - c| on the compressive side
    double exponent_u_other = 0.0;
    double lambda0 = 1.0, lambda1 = 1.0;
    double Q_plus = 1.0, Q_minus = 1.0;
    double O1_plus = 0.0, O1_minus = 0.0; // two equal expressions for O1
    double Q3 = 0.0, O4 = 0.0;
};

struct ShockNode {
    double t = 0.0, x = 0.0;
    double u_minus = 0.0, u_plus = 0.0;
    double speed_right = 0.0, speed_left = 0.0;
};

struct ShockCurve {
    double origin_x = 0.0, origin_t = 0.0;
    double xi = 0.0; // axis point inside every backward triangle along the curve
    std::vector<ShockNode> nodes;
    void write_csv(std::ostream& os) const;
};

struct TriangleDecomposition {
    double x0 = 0.0, t0 = 0.0;
    Interval I;
    std::vector<double> boundary;
    std::vector<Interval> rarefactions; // I_m
    std::vector<Interval> gaps;         // J_n
    bool fan_verified = true;
    double fan_error = 0.0;
};

struct DirectionalLimits {
    double u_minus = 0.0, u_plus = 0.0;
    double from_left = 0.0, from_right = 0.0;
    struct Gap {
        Interval J;
        double left = 0.0, right = 0.0; // limits in the left / right part of the J-triangle
    };
    std::vector<Gap> gaps;
    bool converged = true;
};

enum class PointKind {
    interior_characteristic,
    continuous_shock_generation,
    discontinuous_shock_generation,
    single_shock_point,
    multi_shock_collision
};

struct PointClass {
    PointKind kind = PointKind::interior_characteristic;
    bool regular = true; // single_shock_point only
    int count = 0;       // shocks meeting, multi_shock_collision only
};

std::string to_string(GenerationType g);
std::string to_string(PointKind k);
std::string to_string(const PointClass& p);

// maxima of E on either side of u_xi = (f')^{-1}((x - xi)/t)
struct SplitMax {
    double u_xi = 0.0;
    double max_left = 0.0, max_right = 0.0; // over u <= u_xi and u >= u_xi
    double u_minus = 0.0, u_plus = 0.0;     // largest argmax on the right part, smallest on the left
};

class ShockAnalysis {
public:
    explicit ShockAnalysis(const Solver& s) : s_(s), ch_(s) {}

    std::optional<GenerationPoint> generation_point(double x0, double c) const;
    DevelopmentAsymptotics development_asymptotics(const GenerationPoint& gp, const DevelopmentInputs& in) const;

    SplitMax split_max(double x, double t, double xi) const;
    // x at time t of the forward generalized characteristic through axis point xi
    double locate(double t, double xi, double guess, double window) const;
    ShockCurve track_forward(double x0, double t0, double t_end, double dt) const;

    TriangleDecomposition backward_triangle(double x0, double t0) const;
    DirectionalLimits directional_limits(double x0, double t0) const;
    PointClass classify_point(double x, double t) const;

    const Characteristics& characteristics() const { return ch_; }

private:
    const Solver& s_;
    Characteristics ch_;
};

// real root of the lambda equation on the bracket between lambda0^{1/(1+g+s)} and lambda0^{1/s}
double solve_lambda1(double gamma, double sigma, double lambda0);

} // namespace laxo
