#include "laxo/problem_io.hpp"

#include <fstream>

#include "laxo/errors.hpp"

namespace laxo {

using nlohmann::json;

namespace {

double num(const json& j, const char* key)
{
    if (!j.contains(key) || !j[key].is_number()) throw ParseError(std::string("missing numeric field '") + key + "'");
    return j[key].get<double>();
}

double num_or(const json& j, const char* key, double dflt)
{
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
    return j[key].get<double>();
}

std::optional<double> opt_num(const json& j, const char* key)
{
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
    return j[key].get<double>();
}

std::vector<double> nums(const json& j, const char* key)
{
    if (!j.contains(key) || !j[key].is_array()) throw ParseError(std::string("missing array field '") + key + "'");
    std::vector<double> v;
    for (const auto& e : j[key]) {
        if (!e.is_number()) throw ParseError(std::string("array '") + key + "' must hold numbers");
        v.push_back(e.get<double>());
    }
    return v;
}

std::string kind_of(const json& j)
{
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw ParseError("object needs a string 'kind'");
    return j["kind"].get<std::string>();
}

Term term_from_json(const json& j)
{
    const std::string k = kind_of(j);
    if (k == "constant") return Term::constant(num(j, "value"));
    if (k == "poly") return Term::poly(nums(j, "coeffs"), num_or(j, "center", 0.0));
    if (k == "sin") return Term::sine(num(j, "a"), num_or(j, "b", 1.0), num_or(j, "c", 0.0));
    if (k == "cos") return Term::cosine(num(j, "a"), num_or(j, "b", 1.0), num_or(j, "c", 0.0));
    if (k == "power") return Term::power(num(j, "a"), num(j, "p"), num_or(j, "center", 0.0));
    throw ParseError("unknown term kind '" + k + "'");
}

json term_to_json(const Term& t)
{
    switch (t.kind) {
    case Term::Kind::constant: return {{"kind", "constant"}, {"value", t.a}};
    case Term::Kind::poly: return {{"kind", "poly"}, {"coeffs", t.coeffs}, {"center", t.center}};
    case Term::Kind::sin: return {{"kind", "sin"}, {"a", t.a}, {"b", t.b}, {"c", t.c}};
    case Term::Kind::cos: return {{"kind", "cos"}, {"a", t.a}, {"b", t.b}, {"c", t.c}};
    case Term::Kind::power: return {{"kind", "power"}, {"a", t.a}, {"p", t.p}, {"center", t.center}};
    }
    return {};
}

} // namespace

Flux flux_from_json(const json& j)
{
    const std::string k = kind_of(j);
    if (k == "burgers") return Flux::burgers();
    if (k == "power2n") {
        const double n = num(j, "n");
        if (n < 1 || n != std::floor(n)) throw ParseError("power2n needs a positive integer n");
        return Flux::power2n(static_cast<int>(n));
    }
    if (k == "exponential") {
        const double kk = num(j, "k");
        if (!(kk > 0)) throw ParseError("exponential flux needs k > 0");
        return Flux::exponential(kk);
    }
    if (k == "table") return Flux::table(nums(j, "u"), nums(j, "dfdu"));
    throw ParseError("unknown flux kind '" + k + "'");
}

json flux_to_json(const Flux& f)
{
    switch (f.kind()) {
    case FluxKind::burgers: return {{"kind", "burgers"}};
    case FluxKind::power2n: return {{"kind", "power2n"}, {"n", f.n()}};
    case FluxKind::exponential: return {{"kind", "exponential"}, {"k", f.k()}};
    case FluxKind::table: return {{"kind", "table"}, {"u", f.table_u()}, {"dfdu", f.table_df()}};
    default: break;
    }
    throw ParseError("custom fluxes have no JSON form");
}

InitialData data_from_json(const json& j)
{
    if (!j.is_object()) throw ParseError("data must be an object");
    if (j.contains("kind")) {
        const std::string k = kind_of(j);
        if (k == "riemann") return InitialData::step(num(j, "ul"), num(j, "ur"), num_or(j, "x0", 0.0));
        if (k == "constant") return InitialData::constant(num(j, "value"));
        throw ParseError("unknown data kind '" + k + "'");
    }
    if (!j.contains("pieces") || !j["pieces"].is_array()) throw ParseError("data needs a 'pieces' array");
    std::vector<Piece> pieces;
    for (const auto& pj : j["pieces"]) {
        Piece p;
        p.lo = num(pj, "lo");
        p.hi = num(pj, "hi");
        if (pj.contains("terms")) {
            if (!pj["terms"].is_array()) throw ParseError("'terms' must be an array");
            for (const auto& tj : pj["terms"]) p.terms.push_back(term_from_json(tj));
        } else {
            p.terms.push_back(term_from_json(pj));
        }
        pieces.push_back(std::move(p));
    }
    return InitialData(std::move(pieces), opt_num(j, "left_tail"), opt_num(j, "right_tail"), opt_num(j, "period"));
}

json data_to_json(const InitialData& d)
{
    json ps = json::array();
    for (const auto& p : d.pieces()) {
        json tj = json::array();
        for (const auto& t : p.terms) tj.push_back(term_to_json(t));
        ps.push_back({{"lo", p.lo}, {"hi", p.hi}, {"terms", tj}});
    }
    json j = {{"pieces", ps}};
    j["left_tail"] = d.left_tail() ? json(*d.left_tail()) : json(nullptr);
    j["right_tail"] = d.right_tail() ? json(*d.right_tail()) : json(nullptr);
    j["period"] = d.period() ? json(*d.period()) : json(nullptr);
    return j;
}

#define LAXO_TOL_FIELDS(X)                                                                             \
    X(n_scan) X(max_scan) X(tol_u) X(val_tol) X(jump_tol) X(zero_tol) X(flat_tol) X(quad_tol)          \
    X(restart_tol) X(x_tol) X(t_tol) X(t_cap) X(hull_tol) X(check_tol) X(fit_tol) X(dir_tol)

Tolerances tolerances_from_json(const json& j, Tolerances t)
{
    if (j.is_null()) return t;
    if (!j.is_object()) throw ParseError("tolerances must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_number()) throw ParseError("tolerance '" + it.key() + "' must be a number");
        bool known = false;
#define X(name)                                                                                        \
    if (it.key() == #name) {                                                                           \
        t.name = static_cast<decltype(t.name)>(it.value().get<double>());                              \
        known = true;                                                                                  \
    }
        LAXO_TOL_FIELDS(X)
#undef X
        if (!known) throw ParseError("unknown tolerance '" + it.key() + "'");
    }
    return t;
}

json tolerances_to_json(const Tolerances& t)
{
    json j = json::object();
#define X(name) j[#name] = t.name;
    LAXO_TOL_FIELDS(X)
#undef X
    return j;
}

Problem problem_from_json(const json& j)
{
    if (!j.is_object()) throw ParseError("problem must be a JSON object");
    if (!j.contains("flux")) throw ParseError("problem needs 'flux'");
    if (!j.contains("data")) throw ParseError("problem needs 'data'");
    return Problem{flux_from_json(j["flux"]), data_from_json(j["data"]),
                   tolerances_from_json(j.contains("tolerances") ? j["tolerances"] : json(nullptr))};
}

json problem_to_json(const Problem& p)
{
    return {{"flux", flux_to_json(p.flux)}, {"data", data_to_json(p.data)}, {"tolerances", tolerances_to_json(p.tol)}};
}

Problem load_problem(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return problem_from_json(j);
}

} // namespace laxo
