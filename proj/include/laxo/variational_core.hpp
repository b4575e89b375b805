#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "laxo/flux.hpp"
#include "laxo/initial_data.hpp"

namespace laxo {

struct Tolerances {
    int n_scan = 2048;
    int max_scan = 1 << 20;
    double tol_u = 1e-12;
    double val_tol = 1e-9;
    double jump_tol = 1e-6;
    double zero_tol = 1e-12;  // |g| below this (relative) counts as zero on the scan
    double flat_tol = 1e-14;  // interior |g| below this certifies a flat maximiser interval
    double quad_tol = 1e-10;
    double restart_tol = 1e-3;
    double x_tol = 1e-12;
    double t_tol = 1e-8;
    double t_cap = 1e4;
    double hull_tol = 1e-9;
    double check_tol = 1e-10;
    double fit_tol = 0.05;
    double dir_tol = 1e-3;
};

// closed interval [lo,hi] of local maximisers with its E value
struct Candidate {
    double lo = 0.0, hi = 0.0;
    double value = 0.0;
};

struct MaximizerSet {
    std::vector<Interval> components;
    double u_plus = 0.0;  // inf
    double u_minus = 0.0; // sup
    double max_value = 0.0;
};

struct SolutionSample {
    double x = 0.0, t = 0.0;
    double u_minus = 0.0, u_plus = 0.0;
    bool is_shock = false;
    MaximizerSet maximizer;
};

// One-variable objective u -> E(u) together with a function whose sign is
// the sign of dE/du (dE/du = t f''(u) g(u) with f'' >= 0).
class Objective {
public:
    virtual ~Objective() = default;
    virtual double value(double u) const = 0;
    virtual double g(double u) const = 0;
    virtual double scale(double u) const { return 1.0 + std::abs(u); }
};

// local maxima of obj on [lo,hi] sampled at n points
std::vector<Candidate> scan_candidates(const Objective& obj, double lo, double hi, int n,
                                       const Tolerances& tol);
MaximizerSet select_maximizers(const std::vector<Candidate>& cands, double val_tol);

class Solver {
public:
    Solver(Flux flux, InitialData data, Tolerances tol = {});

    const Flux& flux() const { return flux_; }
    const InitialData& data() const { return data_; }
    const Tolerances& tol() const { return tol_; }
    Tolerances& tol() { return tol_; }

    double eval_E(double u, double x, double t) const;
    double eval_E_quadrature(double u, double x, double t) const;
    // sign function: phi(x - t f'(u)) - u
    double g(double u, double x, double t) const;

    std::vector<Candidate> candidates(double x, double t) const;
    MaximizerSet maximize(double x, double t) const;
    SolutionSample solve(double x, double t) const;
    std::vector<SolutionSample> solve_grid(const std::vector<double>& xs, double t) const;
    double e_hat(double x, double t) const;

    // u-range searched for maximisers and the scan density used at time t
    Interval scan_range() const;
    int scan_points(double t) const;
    // max |f'| over [-M, M]
    double max_speed() const;

private:
    Flux flux_;
    InitialData data_;
    Tolerances tol_;
};

// data u(., tau) rebuilt from exact E-hat node values on a caller grid
class Restarted {
public:
    Restarted(const Solver& base, double tau, const std::vector<double>& grid);
    SolutionSample solve(double x, double t) const; // t is absolute time, t > tau
    const Solver& solver() const { return solver_; }
    double tau() const { return tau_; }

private:
    Solver solver_;
    double tau_;
};

// U(u)_t + F(u)_x = 0 with U' > 0, H = F'/U' increasing
struct GeneralFluxPair {
    using Fn = std::function<double(double)>;
    Fn U, F, H;
    std::optional<Flux> identity; // set when U(u) = u and F is a Flux

    static GeneralFluxPair from_flux(const Flux& f);
    static GeneralFluxPair make(Fn U, Fn dU, Fn F, Fn dF);
};

SolutionSample solve_general(const GeneralFluxPair& pair, const InitialData& data, double x,
                             double t, const Tolerances& tol = {});
double eval_E_general(const GeneralFluxPair& pair, const InitialData& data, double u, double x,
                      double t, const Tolerances& tol = {});

// worker count for parallel maps: LAXO_THREADS if set, else hardware
unsigned thread_count();

} // namespace laxo
