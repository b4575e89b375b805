#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "laxo/characteristics.hpp"
#include "laxo/errors.hpp"
#include "laxo/global_structure.hpp"
#include "laxo/problem_io.hpp"
#include "laxo/reference_oracle.hpp"
#include "laxo/shock_analysis.hpp"

using namespace laxo;
using nlohmann::json;

namespace {

Interval parse_range(const std::string& s)
{
    const auto c = s.find(':');
    if (c == std::string::npos) throw ParseError("range must look like a:b, got '" + s + "'");
    try {
        std::size_t used = 0;
        const std::string A = s.substr(0, c), B = s.substr(c + 1);
        const double a = std::stod(A, &used);
        if (used != A.size()) throw std::invalid_argument(A);
        const double b = std::stod(B, &used);
        if (used != B.size()) throw std::invalid_argument(B);
        if (!(b > a)) throw ParseError("range '" + s + "' is empty");
        return {a, b};
    } catch (const std::logic_error&) {
        throw ParseError("bad range '" + s + "'");
    }
}

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw ParseError("bad number '" + item + "' in list");
        }
    }
    if (v.empty()) throw ParseError("empty list");
    return v;
}

std::vector<double> linspace(Interval r, int n)
{
    if (n < 1) throw ParseError("--n must be positive");
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = n == 1 ? r.lo : r.lo + r.width() * i / (n - 1);
    return xs;
}

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// default x range: one period, or the support padded by one on each side
Interval default_range(const InitialData& d)
{
    if (d.period()) return {d.support_lo(), d.support_lo() + *d.period()};
    return {d.support_lo() - 1.0, d.support_hi() + 1.0};
}

void fail(const std::string& tag, const std::string& msg)
{
    std::cerr << json{{"error", tag}, {"message", msg}}.dump() << std::endl;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"laxo: entropy solutions of convex scalar conservation laws via the variational formula"};
    app.require_subcommand(1);
    std::string problem_path;

    auto* solve = app.add_subcommand("solve", "sample u(x-,t), u(x+,t) on a uniform grid");
    double s_t = 1.0;
    std::string s_range;
    int s_n = 101;
    solve->add_option("problem", problem_path, "problem JSON file")->required();
    solve->add_option("--t", s_t, "time")->required();
    solve->add_option("--x-range", s_range, "a:b")->required();
    solve->add_option("--n", s_n, "number of nodes");

    auto* classify = app.add_subcommand("classify", "characteristic spectrum, initial wave class and lifespans");
    std::vector<double> c_x0;
    classify->add_option("problem", problem_path, "problem JSON file")->required();
    classify->add_option("--x0", c_x0, "generation point(s)")->required();

    auto* shock = app.add_subcommand("shock", "track a shock forward");
    std::string sh_seed;
    double sh_tend = 1.0, sh_dt = 0.1;
    shock->add_option("problem", problem_path, "problem JSON file")->required();
    shock->add_option("--seed", sh_seed, "x0 or x0,t0")->required();
    shock->add_option("--t-end", sh_tend, "final time")->required();
    shock->add_option("--dt", sh_dt, "output spacing");

    auto* divides = app.add_subcommand("divides", "convex hull, contact set and partition");
    double d_window = 0.0, d_h = 0.0;
    bool d_grid = false;
    divides->add_option("problem", problem_path, "problem JSON file")->required();
    divides->add_option("--window", d_window, "half-width N of [-N,N]");
    divides->add_option("--grid-h", d_h, "hull grid spacing");
    divides->add_flag("--hull-grid", d_grid, "include the hull samples");

    auto* profile = app.add_subcommand("profile", "rarefaction-constant profile or N-wave next to the solution");
    double p_t = 1.0;
    std::string p_kind = "utilde", p_range;
    int p_n = 201;
    profile->add_option("problem", problem_path, "problem JSON file")->required();
    profile->add_option("--t", p_t, "time")->required();
    profile->add_option("--kind", p_kind, "utilde|nwave")->check(CLI::IsMember({"utilde", "nwave"}));
    profile->add_option("--x-range", p_range, "a:b");
    profile->add_option("--n", p_n, "number of nodes");

    auto* decay = app.add_subcommand("decay", "distance to the asymptotic profile and its power-law fit");
    std::string de_norm = "sup", de_tlist, de_region, de_target = "utilde";
    double de_q = 1.0;
    int de_n = 4001;
    bool de_speeds = false;
    decay->add_option("problem", problem_path, "problem JSON file")->required();
    decay->add_option("--norm", de_norm, "sup|lq")->check(CLI::IsMember({"sup", "lq"}));
    decay->add_option("--q", de_q, "exponent for --norm lq");
    decay->add_option("--t-list", de_tlist, "comma separated times")->required();
    decay->add_option("--region", de_region, "a:b");
    decay->add_option("--target", de_target, "utilde|nwave")->check(CLI::IsMember({"utilde", "nwave"}));
    decay->add_flag("--speeds", de_speeds, "compare f'(u) instead of u");
    decay->add_option("--samples", de_n, "samples per time");

    auto* compare_cmd = app.add_subcommand("compare", "cross-check against a Godunov scheme");
    double cm_t = 1.0, cm_cfl = 0.9;
    int cm_n = 400;
    std::string cm_range, cm_bc;
    compare_cmd->add_option("problem", problem_path, "problem JSON file")->required();
    compare_cmd->add_option("--t", cm_t, "time")->required();
    compare_cmd->add_option("--n-cells", cm_n, "cells");
    compare_cmd->add_option("--x-range", cm_range, "a:b");
    compare_cmd->add_option("--cfl", cm_cfl, "CFL number");
    compare_cmd->add_option("--boundary", cm_bc, "periodic|extrapolate")->check(CLI::IsMember({"periodic", "extrapolate"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fail("ParseError", e.what());
        return 2;
    }

    std::cout << std::setprecision(17);
    try {
        const Problem pr = load_problem(problem_path);
        Solver s(pr.flux, pr.data, pr.tol);

        if (*solve) {
            const auto xs = linspace(parse_range(s_range), s_n);
            const auto us = s.solve_grid(xs, s_t);
            std::cout << "x,u_minus,u_plus\n";
            for (const auto& u : us) std::cout << u.x << ',' << u.u_minus << ',' << u.u_plus << '\n';
        } else if (*classify) {
            Characteristics ch(s);
            json out = json::array();
            for (double x0 : c_x0) {
                const CharSpectrum sp = ch.char_spectrum(x0);
                json j;
                j["x0"] = x0;
                try {
                    j["wave_class"] = to_string(ch.classify_initial_wave(x0));
                } catch (const CriterionInconclusive&) {
                    j["wave_class"] = nullptr;
                }
                j["spectrum"] = {{"kind", to_string(sp.kind)}, {"a", num_or_null(sp.a)}, {"b", num_or_null(sp.b)},
                                 {"a_in", sp.a_in}, {"b_in", sp.b_in}, {"inconclusive", sp.inconclusive}};
                json ls = json::array();
                if (sp.kind != SpectrumKind::empty) {
                    std::vector<double> cs = {sp.a};
                    if (sp.b != sp.a) cs.push_back(sp.b);
                    for (double c : cs) {
                        if (!std::isfinite(c)) continue;
                        const Lifespans l = ch.lifespan_upper(x0, c);
                        ls.push_back({{"c", c}, {"t_p_minus", num_or_null(l.t_p_minus)},
                                      {"t_p_plus", num_or_null(l.t_p_plus)}, {"t_p", num_or_null(l.t_p)}});
                    }
                }
                j["lifespans"] = ls;
                out.push_back(j);
            }
            std::cout << (out.size() == 1 ? out[0] : out).dump() << '\n';
        } else if (*shock) {
            const auto seed = parse_list(sh_seed);
            if (seed.size() > 2) throw ParseError("--seed takes x0 or x0,t0");
            ShockAnalysis sa(s);
            sa.track_forward(seed[0], seed.size() == 2 ? seed[1] : 0.0, sh_tend, sh_dt).write_csv(std::cout);
        } else if (*divides) {
            GlobalStructure gs(s, d_window, d_h);
            const HullReport& h = gs.hull();
            json j;
            j["window"] = {-h.N, h.N};
            j["grid_h"] = h.grid_h;
            j["periodic"] = h.periodic;
            j["finite"] = h.finite;
            j["slope_left"] = h.slope_left;
            j["slope_right"] = h.slope_right;
            json k0 = json::array();
            for (const auto& c : h.K0) k0.push_back({c.lo, c.hi});
            j["k0"] = k0;
            j["k0_left_unbounded"] = h.K0_left_unbounded;
            j["k0_right_unbounded"] = h.K0_right_unbounded;
            if (!h.K0.empty()) {
                const Partition& p = gs.partition();
                json gaps = json::array();
                for (const auto& g : p.gaps) gaps.push_back({{"e", g.e}, {"h", g.h}, {"c", g.c}});
                j["partition"] = {{"gaps", gaps}, {"has_minus_inf", p.has_minus_inf}, {"has_plus_inf", p.has_plus_inf}};
                if (p.has_minus_inf) j["partition"]["minus_inf"] = {{"x", p.x_minus}, {"speed", p.speed_minus}};
                if (p.has_plus_inf) j["partition"]["plus_inf"] = {{"x", p.x_plus}, {"speed", p.speed_plus}};
            }
            if (d_grid) {
                j["xs"] = h.xs;
                j["hull"] = h.hull;
            }
            std::cout << j.dump() << '\n';
        } else if (*profile) {
            GlobalStructure gs(s);
            const Interval r = p_range.empty() ? default_range(pr.data) : parse_range(p_range);
            const auto xs = linspace(r, p_n);
            const auto us = s.solve_grid(xs, p_t);
            std::vector<double> shocks(gs.partition().gaps.size(), std::nan(""));
            auto sx = [&](std::size_t n, double t) {
                if (std::isnan(shocks[n])) shocks[n] = gs.gap_shock(n, t);
                return shocks[n];
            };
            std::cout << "x,u," << p_kind << '\n';
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double w = p_kind == "utilde" ? gs.u_tilde(xs[i], p_t) : gs.nwave(xs[i], p_t, sx);
                std::cout << xs[i] << ',' << us[i].u_plus << ',' << w << '\n';
            }
        } else if (*decay) {
            GlobalStructure gs(s);
            const Interval r = de_region.empty() ? default_range(pr.data) : parse_range(de_region);
            const auto ts = parse_list(de_tlist);
            const DecayFit fit = gs.measure_decay(de_norm == "sup" ? DecayNorm::sup : DecayNorm::Lq, de_q, r, ts,
                                                  de_target == "utilde" ? DecayTarget::u_tilde : DecayTarget::nwave,
                                                  de_speeds, de_n);
            std::cout << "t,norm_value\n";
            for (std::size_t i = 0; i < fit.ts.size(); ++i) std::cout << fit.ts[i] << ',' << fit.values[i] << '\n';
            std::cout << "# exponent=" << fit.exponent << " constant=" << fit.constant << '\n';
        } else if (*compare_cmd) {
            FvGrid g;
            const Interval r = cm_range.empty() ? default_range(pr.data) : parse_range(cm_range);
            g.x_lo = r.lo;
            g.x_hi = r.hi;
            g.n_cells = cm_n;
            g.cfl = cm_cfl;
            g.boundary = cm_bc.empty() ? (pr.data.period() ? Boundary::periodic : Boundary::extrapolate)
                                       : (cm_bc == "periodic" ? Boundary::periodic : Boundary::extrapolate);
            const Comparison c = compare(s, cm_t, g);
            std::cout << json{{"t", cm_t},
                              {"n_cells", cm_n},
                              {"dx", c.dx},
                              {"l1", c.l1},
                              {"linf_smooth", c.linf_smooth},
                              {"shock_offset", c.shock_offset},
                              {"n_jumps", c.n_jumps}}
                             .dump()
                      << '\n';
        }
    } catch (const Error& e) {
        fail(e.tag(), e.what());
        return e.sentinel() ? 3 : 2;
    } catch (const std::exception& e) {
        fail("InternalError", e.what());
        return 1;
    }
    return 0;
}
