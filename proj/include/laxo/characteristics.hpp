#pragma once

#include <limits>
#include <string>

#include "laxo/variational_core.hpp"

namespace laxo {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SpectrumKind {
    empty,
    singleton,
    closed_interval,
    half_open_left,  // (a, b]
    half_open_right, // [a, b)
    open_interval
};

struct CharSpectrum {
    double x0 = 0.0;
    double a = 0.0, b = 0.0;
    SpectrumKind kind = SpectrumKind::empty;
    bool a_in = false, b_in = false;
    bool inconclusive = false;
    bool contains(double c, double tol = 1e-12) const;
};

enum class WaveClass { S, characteristic, R, SR, RS, SRS };

struct Lifespans {
    double t_p_minus = kInf;
    double t_p_plus = kInf;
    double t_p = kInf;
};

enum class TerminationKind {
    continuous_shock_generation,
    discontinuous_or_shock_point,
    collision_with_shock,
    immortal
};

struct TerminationClass {
    TerminationKind kind = TerminationKind::immortal;
    double t_star = kInf, t_p = kInf;
    double x = 0.0, t = kInf; // where the characteristic ends
};

std::string to_string(SpectrumKind k);
std::string to_string(WaveClass w);
std::string to_string(TerminationKind k);

class Characteristics {
public:
    explicit Characteristics(const Solver& s) : s_(s) {}

    double phi_l(double l, double x0, double c) const;
    double F_l(double l, double t, double c) const;

    CharSpectrum char_spectrum(double x0) const;
    WaveClass classify_initial_wave(double x0) const;
    Lifespans lifespan_upper(double x0, double c) const;

    // is c still a maximiser at (x0 + t f'(c), t)?
    bool alive(double x0, double c, double t) const;
    // local part only: c is a local maximiser by the sign of g next to it
    bool locally_alive(double x, double t, double c) const;
    double lifespan_exact(double x0, double c) const;
    TerminationClass classify_termination(double x0, double c) const;

    const Solver& solver() const { return s_; }

private:
    const Solver& s_;
};

} // namespace laxo
