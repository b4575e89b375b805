#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "laxo/shock_analysis.hpp"

namespace laxo {

struct HullReport {
    double N = 0.0, grid_h = 0.0;
    std::vector<double> xs, phi, hull; // grid over [-N, N]
    double slope_left = 0.0, slope_right = 0.0;
    std::vector<Interval> K0;          // contact components inside the window, width 0 for points
    bool K0_left_unbounded = false, K0_right_unbounded = false;
    bool periodic = false;
    bool finite = true;
    double value(double x) const; // hull value, tail lines outside the window
};

struct DivideFan {
    double x0 = 0.0;
    double lo = 0.0, hi = 0.0; // one-sided hull slopes
    bool empty = true;
};

struct GapRegion {
    double e = 0.0, h = 0.0, c = 0.0;
};

struct Partition {
    std::vector<Interval> K0;
    std::vector<GapRegion> gaps;
    bool has_minus_inf = false, has_plus_inf = false;
    double x_minus = 0.0, x_plus = 0.0;         // inf / sup of K0 when finite
    double speed_minus = 0.0, speed_plus = 0.0; // tail invariants driving the outer regions
};

enum class DecayNorm { sup, Lq };
enum class DecayTarget { u_tilde, nwave };

struct DecayFit {
    double exponent = 0.0, constant = 0.0;
    std::vector<double> ts, values;
};

class GlobalStructure {
public:
    // N <= 0 or grid_h <= 0 picks defaults from the data
    GlobalStructure(const Solver& s, double N = 0.0, double grid_h = 0.0);

    const HullReport& hull() const;
    DivideFan divide_fan(double x0) const;
    bool verify_divide(double x0, double c, double L) const;
    const Partition& partition() const;

    double u_tilde(double x, double t) const;
    // shock inside gap n at time t (forward curve through the gap midpoint)
    double gap_shock(std::size_t n, double t) const;
    double theta(std::size_t n, double t) const;
    using ShockFn = std::function<double(std::size_t, double)>;
    double nwave(double x, double t, const ShockFn& shock_x = {}) const;

    double norm_at(DecayNorm norm, double q, Interval region, double t, DecayTarget target, bool speeds,
                   int n_samples) const;
    DecayFit measure_decay(DecayNorm norm, double q, Interval region, const std::vector<double>& ts,
                           DecayTarget target = DecayTarget::u_tilde, bool speeds = false,
                           int n_samples = 4001) const;

    double window() const { return N_; }
    const Solver& solver() const { return s_; }

private:
    const Solver& s_;
    ShockAnalysis sa_;
    double N_, h_;
    mutable std::optional<HullReport> hull_;
    mutable std::optional<Partition> part_;
    mutable std::unique_ptr<Solver> tilde_;
    const Solver& tilde_solver() const;
    std::optional<std::size_t> gap_of(double x, double t) const;
};

// least-squares fit log y = log C + p log t
DecayFit fit_power(const std::vector<double>& ts, const std::vector<double>& ys);

} // namespace laxo
