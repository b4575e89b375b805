#include "laxo/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "laxo/errors.hpp"
#include "laxo/quadrature.hpp"

namespace laxo {

namespace {

double falling(double p, int k)
{
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (p - i);
    return r;
}

double factorial(int k)
{
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

Term shifted(const Term& t, double s)
{
    Term r = t;
    switch (t.kind) {
    case Term::Kind::sin:
    case Term::Kind::cos: r.c = t.c - t.b * s; break;
    case Term::Kind::poly:
    case Term::Kind::power: r.center = t.center + s; break;
    case Term::Kind::constant: break;
    }
    return r;
}

} // namespace

Term Term::constant(double v) { Term t; t.kind = Kind::constant; t.a = v; return t; }

Term Term::poly(std::vector<double> coeffs, double center)
{
    Term t;
    t.kind = Kind::poly;
    t.coeffs = std::move(coeffs);
    t.center = center;
    return t;
}

Term Term::sine(double a, double b, double c)
{
    Term t; t.kind = Kind::sin; t.a = a; t.b = b; t.c = c; return t;
}

Term Term::cosine(double a, double b, double c)
{
    Term t; t.kind = Kind::cos; t.a = a; t.b = b; t.c = c; return t;
}

Term Term::power(double a, double p, double center)
{
    if (!(p > 0.0)) throw ParseError("power term needs p > 0");
    Term t; t.kind = Kind::power; t.a = a; t.p = p; t.center = center; return t;
}

double Term::value(double x) const
{
    switch (kind) {
    case Kind::constant: return a;
    case Kind::poly: {
        const double d = x - center;
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * d + *it;
        return acc;
    }
    case Kind::sin: return a * std::sin(b * x + c);
    case Kind::cos: return a * std::cos(b * x + c);
    case Kind::power: return a * std::pow(std::fabs(x - center), p);
    }
    return 0.0;
}

double Term::antideriv(double x) const
{
    switch (kind) {
    case Kind::constant: return a * x;
    case Kind::poly: {
        const double d = x - center;
        double acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * d + coeffs[k] / (k + 1.0);
        return acc * d;
    }
    case Kind::sin: return b == 0.0 ? a * std::sin(c) * x : -a / b * std::cos(b * x + c);
    case Kind::cos: return b == 0.0 ? a * std::cos(c) * x : a / b * std::sin(b * x + c);
    case Kind::power: {
        const double d = x - center;
        const double m = a * std::pow(std::fabs(d), p + 1.0) / (p + 1.0);
        return d < 0 ? -m : m;
    }
    }
    return 0.0;
}

bool Term::singular_at(double x0) const
{
    return kind == Kind::power && std::fabs(x0 - center) < 1e-13;
}

double Term::taylor(double x0, int k) const
{
    switch (kind) {
    case Kind::constant: return k == 0 ? a : 0.0;
    case Kind::poly: {
        const double d = x0 - center;
        double acc = 0.0;
        for (std::size_t j = coeffs.size(); j-- > static_cast<std::size_t>(k);) {
            // binomial(j,k) d^{j-k}
            double binom = 1.0;
            for (int i = 0; i < k; ++i) binom = binom * (j - i) / (i + 1.0);
            acc += coeffs[j] * binom * std::pow(d, static_cast<double>(j - k));
        }
        return acc;
    }
    case Kind::sin:
        return a * std::pow(b, k) * std::sin(b * x0 + c + k * std::numbers::pi / 2) / factorial(k);
    case Kind::cos:
        return a * std::pow(b, k) * std::cos(b * x0 + c + k * std::numbers::pi / 2) / factorial(k);
    case Kind::power: {
        const double d = x0 - center;
        const double s = d < 0 ? -1.0 : 1.0;
        return a * falling(p, k) * std::pow(s, k) * std::pow(std::fabs(d), p - k) / factorial(k);
    }
    }
    return 0.0;
}

double Piece::value(double x) const
{
    double v = 0.0;
    for (const auto& t : terms) v += t.value(x);
    return v;
}

double Piece::antideriv(double x) const
{
    double v = 0.0;
    for (const auto& t : terms) v += t.antideriv(x);
    return v;
}

InitialData::InitialData(std::vector<Piece> pieces, std::optional<double> left_tail,
                         std::optional<double> right_tail, std::optional<double> period)
    : pieces_(std::move(pieces)), lt_(left_tail), rt_(right_tail), period_(period)
{
    std::sort(pieces_.begin(), pieces_.end(), [](const Piece& p, const Piece& q) { return p.lo < q.lo; });
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (!(pieces_[i].hi > pieces_[i].lo)) throw ParseError("piece with empty interval");
        if (i > 0 && std::fabs(pieces_[i].lo - pieces_[i - 1].hi) > 1e-12)
            throw ParseError("pieces must be contiguous");
        if (i > 0) pieces_[i].lo = pieces_[i - 1].hi;
    }
    if (!pieces_.empty()) {
        slo_ = pieces_.front().lo;
        shi_ = pieces_.back().hi;
    }
    if (period_) {
        if (pieces_.empty()) throw ParseError("periodic data needs pieces");
        if (std::fabs(*period_ - (shi_ - slo_)) > 1e-9)
            throw ParseError("pieces must cover exactly one period");
        shi_ = slo_ + *period_;
        pieces_.back().hi = shi_;
    }

    ltv_ = lt_ ? *lt_ : (pieces_.empty() ? 0.0 : pieces_.front().value(slo_));
    rtv_ = rt_ ? *rt_ : (pieces_.empty() ? ltv_ : pieces_.back().value(shi_));

    los_.clear();
    psi_lo_.clear();
    anti_lo_.clear();
    double acc = 0.0;
    for (const auto& p : pieces_) {
        los_.push_back(p.lo);
        psi_lo_.push_back(acc);
        const double alo = p.antideriv(p.lo);
        anti_lo_.push_back(alo);
        acc += p.antideriv(p.hi) - alo;
    }
    period_int_ = acc;
    psi0_ = 0.0;
    psi0_ = psi(0.0);

    // sup norm: dense sampling plus golden refinement around the best sample
    bound_ = std::max(std::fabs(ltv_), std::fabs(rtv_));
    feature_ = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_) {
        const int ns = 256;
        double best = -1.0, bx = p.lo;
        for (int i = 0; i <= ns; ++i) {
            const double x = p.lo + (p.hi - p.lo) * i / ns;
            const double v = std::fabs(p.value(x));
            if (v > best) { best = v; bx = x; }
        }
        const double h = (p.hi - p.lo) / ns;
        const double xr = golden_min([&](double x) { return -std::fabs(p.value(x)); },
                                     std::max(p.lo, bx - h), std::min(p.hi, bx + h), 1e-14);
        best = std::max(best, std::fabs(p.value(xr)));
        bound_ = std::max(bound_, best);

        bool smooth_const = true;
        for (const auto& t : p.terms) {
            if (t.kind == Term::Kind::sin || t.kind == Term::Kind::cos) {
                if (t.b != 0.0) feature_ = std::min(feature_, 2 * std::numbers::pi / std::fabs(t.b) / 8);
            }
            if (t.kind != Term::Kind::constant) smooth_const = false;
        }
        feature_ = std::min(feature_, p.hi - p.lo);
        (void)smooth_const;
    }
    bound_ *= 1.0 + 1e-12;
}

InitialData InitialData::constant(double v) { return step(v, v, 0.0); }

InitialData InitialData::step(double ul, double ur, double x0)
{
    InitialData d({}, ul, ur);
    d.slo_ = d.shi_ = x0;
    d.psi0_ = 0.0;
    d.psi0_ = d.psi(0.0);
    return d;
}

InitialData InitialData::periodic(std::vector<Piece> pieces, double period)
{
    return InitialData(std::move(pieces), std::nullopt, std::nullopt, period);
}

InitialData InitialData::periodic_terms(std::vector<Term> terms, double period, double lo)
{
    Piece p{lo, lo + period, std::move(terms)};
    return periodic({p}, period);
}

InitialData InitialData::cells(const std::vector<double>& edges, const std::vector<double>& values,
                               std::optional<double> left_tail, std::optional<double> right_tail)
{
    if (edges.size() != values.size() + 1 || values.empty())
        throw ParseError("cells need n+1 edges for n values");
    std::vector<Piece> ps;
    ps.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        ps.push_back(Piece{edges[i], edges[i + 1], {Term::constant(values[i])}});
    return InitialData(std::move(ps), left_tail ? left_tail : values.front(),
                       right_tail ? right_tail : values.back());
}

double InitialData::reduce(double x, long long& k) const
{
    const double P = *period_;
    const double q = std::floor((x - slo_) / P);
    k = static_cast<long long>(q);
    double r = x - q * P;
    if (r >= shi_) { r -= P; ++k; }
    if (r < slo_) { r += P; --k; }
    return r;
}

double InitialData::psi(double x) const
{
    if (period_) {
        long long k = 0;
        const double r = reduce(x, k);
        const std::size_t i = std::upper_bound(los_.begin(), los_.end(), r) - los_.begin() - 1;
        return static_cast<double>(k) * period_int_ + psi_lo_[i] + pieces_[i].antideriv(r) - anti_lo_[i];
    }
    if (x <= slo_) return ltv_ * (x - slo_);
    if (x >= shi_) return period_int_ + rtv_ * (x - shi_);
    const std::size_t i = std::upper_bound(los_.begin(), los_.end(), x) - los_.begin() - 1;
    return psi_lo_[i] + pieces_[i].antideriv(x) - anti_lo_[i];
}

double InitialData::primitive(double x) const { return psi(x) - psi0_; }

double InitialData::phi_right(double x) const
{
    if (period_) {
        long long k = 0;
        const double r = reduce(x, k);
        const std::size_t i = std::upper_bound(los_.begin(), los_.end(), r) - los_.begin() - 1;
        return pieces_[i].value(r);
    }
    if (x < slo_) return ltv_;
    if (x >= shi_) return rtv_;
    const std::size_t i = std::upper_bound(los_.begin(), los_.end(), x) - los_.begin() - 1;
    return pieces_[i].value(x);
}

double InitialData::phi(double x) const { return phi_right(x); }

double InitialData::phi_left(double x) const
{
    if (period_) {
        long long k = 0;
        double r = reduce(x, k);
        if (r == slo_) r = shi_;
        const std::size_t i = std::lower_bound(los_.begin(), los_.end(), r) - los_.begin() - 1;
        return pieces_[i].value(r);
    }
    if (x <= slo_) return ltv_;
    if (x > shi_) return rtv_;
    const std::size_t i = std::lower_bound(los_.begin(), los_.end(), x) - los_.begin() - 1;
    return pieces_[i].value(x);
}

DiniPack InitialData::dini(double x0) const
{
    return {x0, phi_left(x0), phi_right(x0)};
}

TailInvariants InitialData::tail_invariants() const
{
    if (period_) {
        const double m = period_int_ / *period_;
        return {m, m, m, m};
    }
    if (!lt_ || !rt_) throw UnsupportedTail("data declares neither tails nor a period");
    return {*lt_, *lt_, *rt_, *rt_};
}

LocalExpansion InitialData::local_expansion(double x0, double c, Side side) const
{
    LocalExpansion e;
    e.x0 = x0;
    e.c = c;
    e.side = side;

    // locate the piece seen from the requested side
    const Piece* pc = nullptr;
    double r = x0, tailv = 0.0;
    if (period_) {
        long long k = 0;
        r = reduce(x0, k);
        if (side == Side::left && r == slo_) r = shi_;
        const std::size_t i = side == Side::right
                                  ? std::upper_bound(los_.begin(), los_.end(), r) - los_.begin() - 1
                                  : std::lower_bound(los_.begin(), los_.end(), r) - los_.begin() - 1;
        pc = &pieces_[i];
    } else if (side == Side::right) {
        if (x0 < slo_) tailv = ltv_;
        else if (x0 >= shi_) tailv = rtv_;
        else pc = &pieces_[std::upper_bound(los_.begin(), los_.end(), x0) - los_.begin() - 1];
    } else {
        if (x0 <= slo_) tailv = ltv_;
        else if (x0 > shi_) tailv = rtv_;
        else pc = &pieces_[std::lower_bound(los_.begin(), los_.end(), x0) - los_.begin() - 1];
    }

    const bool right = side == Side::right;
    std::map<double, double> coef; // exponent -> C in the sgn(l)|l|^gamma form
    constexpr int K = 12;
    std::vector<double> tay(K + 1, 0.0);
    if (!pc) {
        tay[0] = tailv;
    } else {
        for (const auto& t : pc->terms) {
            if (t.singular_at(r)) {
                // a|l|^p reads as C sgn(l)|l|^p with C = a on the right, -a on the left
                coef[t.p] += right ? t.a : -t.a;
                continue;
            }
            for (int k = 0; k <= K; ++k) tay[k] += t.taylor(r, k);
        }
    }
    tay[0] -= c;
    for (int k = 0; k <= K; ++k) {
        // for l<0, l^k = (-1)^k |l|^k, i.e. C = (-1)^{k+1} t_k
        const double ck = right ? tay[k] : ((k % 2 == 0) ? -tay[k] : tay[k]);
        coef[static_cast<double>(k)] += ck;
    }
    const double scale = 1.0 + std::fabs(c) + bound_;
    for (const auto& [expo, C] : coef) {
        if (std::fabs(C) > 1e-11 * scale) {
            e.gamma = expo;
            e.C_gamma = C;
            return e;
        }
    }
    throw FitError("phi equals c identically on this side of x0");
}

std::vector<double> InitialData::breakpoints_in(double a, double b) const
{
    std::vector<double> out;
    if (period_) {
        const double P = *period_;
        const double k0 = std::floor((a - slo_) / P) - 1, k1 = std::ceil((b - slo_) / P) + 1;
        if (k1 - k0 > 1e6) return out;
        for (double k = k0; k <= k1; k += 1.0)
            for (double lo : los_) {
                const double x = lo + k * P;
                if (x >= a && x <= b) out.push_back(x);
            }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    auto push = [&](double x) { if (x >= a && x <= b) out.push_back(x); };
    push(slo_);
    for (std::size_t i = 1; i < los_.size(); ++i) push(los_[i]);
    push(shi_);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Piece> InitialData::pieces_on(double a, double b) const
{
    std::vector<Piece> out;
    if (!(b > a)) return out;
    auto clip = [&](const Piece& p, double s) {
        const double lo = std::max(a, p.lo + s), hi = std::min(b, p.hi + s);
        if (hi > lo) {
            Piece q{lo, hi, {}};
            for (const auto& t : p.terms) q.terms.push_back(s == 0.0 ? t : shifted(t, s));
            out.push_back(std::move(q));
        }
    };
    if (period_) {
        const double P = *period_;
        const double k0 = std::floor((a - slo_) / P) - 1, k1 = std::ceil((b - slo_) / P) + 1;
        for (double k = k0; k <= k1; k += 1.0)
            for (const auto& p : pieces_) clip(p, k * P);
        return out;
    }
    if (a < slo_) clip(Piece{a, slo_, {Term::constant(ltv_)}}, 0.0);
    for (const auto& p : pieces_) clip(p, 0.0);
    if (b > shi_) clip(Piece{shi_, b, {Term::constant(rtv_)}}, 0.0);
    return out;
}

} // namespace laxo
