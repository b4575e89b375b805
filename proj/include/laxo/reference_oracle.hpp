#pragma once

#include <ostream>
#include <vector>

#include "laxo/flux.hpp"
#include "laxo/initial_data.hpp"
#include "laxo/variational_core.hpp"

namespace laxo {

enum class Boundary { periodic, extrapolate };

struct FvGrid {
    double x_lo = -1.0, x_hi = 1.0;
    int n_cells = 100;
    double cfl = 0.9;
    Boundary boundary = Boundary::extrapolate;

    double dx() const { return (x_hi - x_lo) / n_cells; }
    double center(int i) const { return x_lo + (i + 0.5) * dx(); }
    void validate() const; // ParseError on n_cells < 4 or cfl outside (0,1)
};

// first-order Godunov for a convex flux
class Godunov {
public:
    Godunov(Flux f, FvGrid g);

    const FvGrid& grid() const { return g_; }
    // exact cell averages of the data
    std::vector<double> initial(const InitialData& d) const;
    double numerical_flux(double uL, double uR) const;
    double stable_dt(const std::vector<double>& state) const;
    // throws CflViolation when dt breaks the CFL bound
    void step(std::vector<double>& state, double dt) const;
    std::vector<double> evolve(std::vector<double> state, double t) const;
    std::vector<double> evolve(const InitialData& d, double t) const { return evolve(initial(d), t); }
    double mass(const std::vector<double>& state) const;
    void write_csv(std::ostream& os, const std::vector<double>& state) const;

private:
    Flux f_;
    FvGrid g_;
    double sonic_; // argmin of f, may be +-inf
};

struct Comparison {
    double dx = 0.0;
    double l1 = 0.0;
    double linf_smooth = 0.0;   // away from formula jumps by more than 3 dx
    double shock_offset = 0.0;  // worst distance between matched jumps
    int n_jumps = 0;
};

Comparison compare(const Solver& s, double t, const FvGrid& g);

} // namespace laxo
