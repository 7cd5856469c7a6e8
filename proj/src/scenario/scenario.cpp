#include <blocksim/scenario/scenario.hpp>

#include <blocksim/netsim/json_fields.hpp>

#include <fstream>

namespace blocksim {

Scenario scenario_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw ConfigError("<root>", "expected an object");
    Scenario s;
    if (!j.contains("schema_version")) throw ConfigError("schema_version", "missing");
    if (!j.at("schema_version").is_number_integer()) throw ConfigError("schema_version", "wrong type");
    s.schema_version = j.at("schema_version").get<int>();
    if (s.schema_version != kScenarioSchemaVersion) {
        throw ConfigError("schema_version", "unsupported version " + std::to_string(s.schema_version));
    }

    nlohmann::json sim = j;
    sim.erase("schema_version");
    sim.erase("attack");
    sim.erase("analysis");
    s.sim = config_from_json(sim);
    validate_config(s.sim);

    if (j.contains("analysis")) {
        JsonFields f(j.at("analysis"), "analysis", {"spy", "clustering", "deanon", "confirmation_margin"});
        f.read("spy", s.sim.spy);
        f.read("clustering", s.analysis.clustering);
        f.read("deanon", s.analysis.deanon);
        f.read("confirmation_margin", s.analysis.confirmation_margin);
        if (!(s.analysis.confirmation_margin >= 0.0)) {
            throw ConfigError("analysis.confirmation_margin", "must be non-negative");
        }
    }
    if (j.contains("attack")) s.attack = attack_from_json(j.at("attack"), s.sim);
    return s;
}

nlohmann::json scenario_to_json(const Scenario& s)
{
    nlohmann::json j = config_to_json(s.sim);
    j["schema_version"] = s.schema_version;
    j["analysis"] = {{"spy", s.sim.spy},
                     {"clustering", s.analysis.clustering},
                     {"deanon", s.analysis.deanon},
                     {"confirmation_margin", s.analysis.confirmation_margin}};
    if (s.attack) j["attack"] = attack_to_json(*s.attack);
    return j;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario", "cannot read " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("scenario", path.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

} // namespace blocksim
