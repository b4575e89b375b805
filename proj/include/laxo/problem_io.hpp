#pragma once

#include <string>

#include "json.hpp"
#include "laxo/flux.hpp"
#include "laxo/initial_data.hpp"
#include "laxo/variational_core.hpp"

namespace laxo {

struct Problem {
    Flux flux;
    InitialData data;
    Tolerances tol;
};

// all of these throw ParseError on malformed input
Flux flux_from_json(const nlohmann::json& j);
nlohmann::json flux_to_json(const Flux& f);
InitialData data_from_json(const nlohmann::json& j);
nlohmann::json data_to_json(const InitialData& d);
Tolerances tolerances_from_json(const nlohmann::json& j, Tolerances base = {});
nlohmann::json tolerances_to_json(const Tolerances& t);

Problem problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const Problem& p);
Problem load_problem(const std::string& path);

} // namespace laxo
