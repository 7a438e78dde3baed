#include "subordinate/json_io.hpp"

#include <string>

#include "subordinate/detail/overloaded.hpp"

namespace subordinate {

using detail::overloaded;

namespace {

template <class T>
T field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("bad field '") + key + "': " + e.what());
    }
}

}  // namespace

Json to_json(const ProcessSpec& spec) {
    Json params = std::visit(overloaded{
                                 [](const Poisson& p) { return Json{{"alpha", p.alpha}}; },
                                 [](const LinearBirth& b) { return Json{{"beta", b.beta}}; },
                                 [](const LinearDeathCounting& d) { return Json{{"delta", d.delta}, {"d0", d.d0}}; },
                                 [](const NonlinearDeathCounting& d) { return Json{{"d0", d.d0}}; },
                                 [](const GeneralTable& g) { return Json{{"rates", g.rates}}; },
                             },
                             spec.rate);
    Json j;
    j["family"] = family_name(spec.rate);
    j["params"] = std::move(params);
    j["initial_state"] = spec.initial_state;
    return j;
}

ProcessSpec process_spec_from_json(const Json& j) {
    const auto family = field<std::string>(j, "family");
    const Json params = j.contains("params") ? j.at("params") : Json::object();
    ProcessSpec spec;
    if (family == "poisson") {
        spec.rate = Poisson{field<double>(params, "alpha")};
    } else if (family == "linear_birth") {
        spec.rate = LinearBirth{field<double>(params, "beta")};
    } else if (family == "linear_death") {
        spec.rate = LinearDeathCounting{field<double>(params, "delta"), field<StateCount>(params, "d0")};
    } else if (family == "nonlinear_death") {
        spec.rate = NonlinearDeathCounting{field<StateCount>(params, "d0")};
    } else if (family == "general") {
        spec.rate = GeneralTable{field<std::vector<double>>(params, "rates")};
    } else {
        throw DomainError("unknown family '" + family + "'");
    }
    spec.initial_state = j.contains("initial_state") ? field<StateCount>(j, "initial_state") : 0;
    validate(spec);
    return spec;
}

Json to_json(const KernelDistribution& kernel) {
    Json probs = Json::object();
    for (std::size_t k = 0; k < kernel.probs.size(); ++k) probs[std::to_string(k)] = kernel.probs[k];
    Json j;
    j["s"] = kernel.base_state;
    j["probs"] = std::move(probs);
    j["tail_bound"] = kernel.tail_bound;
    return j;
}

Json to_json(const TransitionRateRow& row) {
    Json rates = Json::object();
    for (std::size_t i = 0; i < row.rates.size(); ++i) rates[std::to_string(i + 1)] = row.rates[i];
    Json j;
    j["s"] = row.state;
    j["lambda_S"] = row.rate_function;
    j["rates"] = std::move(rates);
    j["tail_bound"] = row.tail_bound;
    return j;
}

Json to_json(const Trajectory& traj) {
    Json events = Json::array();
    for (const auto& e : traj.events()) events.push_back(Json{{"time", e.time}, {"jump", e.jump}});
    Json j;
    j["initial_state"] = traj.initial_state();
    j["horizon"] = traj.horizon();
    j["events"] = std::move(events);
    return j;
}

SirConfig sir_config_from_json(const Json& j) {
    SirConfig c;
    c.population = field<StateCount>(j, "population");
    c.contact_rate = field<double>(j, "contact_rate");
    c.recovery_rate = field<double>(j, "recovery_rate");
    if (j.contains("step")) c.step = field<double>(j, "step");
    if (j.contains("overdispersed")) {
        const Json& od = j.at("overdispersed");
        if (od.contains("SI")) c.overdispersed_si = field<bool>(od, "SI");
        if (od.contains("IR")) c.overdispersed_ir = field<bool>(od, "IR");
    }
    const Json& init = j.contains("initial") ? j.at("initial") : Json::object();
    c.initial.susceptible = field<StateCount>(init, "S");
    c.initial.infectious = field<StateCount>(init, "I");
    c.initial.recovered = init.contains("R") ? field<StateCount>(init, "R") : 0;
    validate(c);
    return c;
}

}  // namespace subordinate
