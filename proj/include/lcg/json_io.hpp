#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "lcg/ffcg.hpp"
#include "lcg/scenarios.hpp"
#include "lcg/shapley.hpp"

namespace lcg {

using Json = nlohmann::json;

inline std::string to_string(ScenarioConfig::Kind kind) {
    switch (kind) {
    case ScenarioConfig::Kind::uniform: return "uniform";
    case ScenarioConfig::Kind::small_world: return "small_world";
    case ScenarioConfig::Kind::power_law: return "power_law";
    }
    throw std::invalid_argument("unknown scenario kind");
}

inline ScenarioConfig::Kind kind_from_string(const std::string& s) {
    if (s == "uniform") return ScenarioConfig::Kind::uniform;
    if (s == "small_world") return ScenarioConfig::Kind::small_world;
    if (s == "power_law") return ScenarioConfig::Kind::power_law;
    throw std::invalid_argument("unknown scenario kind: " + s);
}

inline Json instance_to_json(const FfcgInstance& inst) {
    Json j;
    j["forwarders"] = inst.forwarders;
    j["box_capacity"] = inst.box_capacity;
    auto services = Json::array();
    for (const auto& s : inst.services) {
        Json entry{{"owner", inst.forwarders[static_cast<std::size_t>(s.owner)]},
                   {"origin", s.pair.origin},
                   {"destination", s.pair.destination},
                   {"cost_per_box", s.cost_per_box},
                   {"box_count", s.box_count}};
        if (s.box_capacity > 0) entry["box_capacity"] = s.box_capacity;
        services.push_back(std::move(entry));
    }
    j["services"] = std::move(services);
    auto requests = Json::array();
    for (const auto& r : inst.requests)
        requests.push_back({{"owner", inst.forwarders[static_cast<std::size_t>(r.owner)]},
                            {"origin", r.pair.origin},
                            {"destination", r.pair.destination},
                            {"volume", r.volume}});
    j["requests"] = std::move(requests);
    auto edges = Json::array();
    for (auto [a, b] : build_collaboration_graph(inst).edges()) edges.push_back({a, b});
    j["graph"] = std::move(edges);
    return j;
}

inline FfcgInstance instance_from_json(const Json& j) {
    FfcgInstance inst;
    inst.forwarders = j.at("forwarders").get<std::vector<std::string>>();
    inst.box_capacity = j.value("box_capacity", 30);
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < inst.forwarders.size(); ++i)
        index[inst.forwarders[i]] = static_cast<int>(i);
    auto owner_of = [&](const Json& e) {
        const auto name = e.at("owner").get<std::string>();
        auto it = index.find(name);
        if (it == index.end()) throw std::invalid_argument("unknown forwarder id: " + name);
        return it->second;
    };
    for (const auto& e : j.at("services")) {
        Service s;
        s.owner = owner_of(e);
        s.pair = {e.at("origin").get<std::string>(), e.at("destination").get<std::string>()};
        s.cost_per_box = e.at("cost_per_box").get<int>();
        s.box_count = e.at("box_count").get<int>();
        s.box_capacity = e.value("box_capacity", 0);
        inst.services.push_back(std::move(s));
    }
    for (const auto& e : j.at("requests")) {
        Request r;
        r.owner = owner_of(e);
        r.pair = {e.at("origin").get<std::string>(), e.at("destination").get<std::string>()};
        r.volume = e.at("volume").get<int>();
        inst.requests.push_back(std::move(r));
    }
    validate_instance(inst);
    if (j.contains("graph")) {
        // The stored edge list is derived data; a mismatch means the file was
        // edited inconsistently.
        std::vector<std::pair<int, int>> stored;
        for (const auto& e : j.at("graph")) stored.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        if (stored != build_collaboration_graph(inst).edges())
            throw std::invalid_argument("stored collaboration graph disagrees with services/requests");
    }
    return inst;
}

inline Json assignment_to_json(const Assignment& a, const FfcgInstance& inst, Coalition who) {
    Json j;
    auto coalition = Json::array();
    for (int i : who.members()) coalition.push_back(inst.forwarders[static_cast<std::size_t>(i)]);
    j["coalition"] = std::move(coalition);
    j["total_cost"] = a.total_cost;
    auto boxes = Json::array();
    for (const auto& box : a.boxes) {
        const auto& svc = inst.services[static_cast<std::size_t>(box.service_id)];
        boxes.push_back({{"service", box.service_id},
                         {"owner", inst.forwarders[static_cast<std::size_t>(svc.owner)]},
                         {"origin", svc.pair.origin},
                         {"destination", svc.pair.destination},
                         {"box_index", box.box_index},
                         {"requests", box.item_ids},
                         {"load", box.load}});
    }
    j["boxes"] = std::move(boxes);
    return j;
}

// Allocation block: forwarder id -> exact value plus a double rendering,
// with solver diagnostics and relative savings on the side.
inline Json shapley_to_json(const ShapleyResult& result, const SavingsReport& savings,
                            const FfcgInstance& inst) {
    Json values;
    Json saved;
    for (std::size_t i = 0; i < result.values.size(); ++i) {
        const auto& name = inst.forwarders[i];
        const auto& v = result.values[i];
        values[name] = {{"value_numerator", numerator(v).str()},
                        {"value_denominator", denominator(v).str()},
                        {"value_decimal", v.convert_to<double>()}};
        saved[name] = savings.per_forwarder[i].convert_to<double>();
    }
    return Json{{"values", std::move(values)},
                {"grand_cost", result.v_grand},
                {"savings", Json{{"per_forwarder", std::move(saved)},
                                 {"average", savings.average.convert_to<double>()}}},
                {"diagnostics", Json{{"eval_count", result.eval_count},
                                     {"elapsed_seconds", result.elapsed_seconds}}}};
}

inline Json config_to_json(const ScenarioConfig& cfg) {
    return Json{{"kind", to_string(cfg.kind)},
                {"n_forwarders", cfg.n_forwarders},
                {"seed", cfg.seed},
                {"n_port_pairs", cfg.n_port_pairs},
                {"services_per_pair", {cfg.services_per_pair.lo, cfg.services_per_pair.hi}},
                {"cost_range", {cfg.cost_range.lo, cfg.cost_range.hi}},
                {"boxes_range", {cfg.boxes_range.lo, cfg.boxes_range.hi}},
                {"requests_per_service_range",
                 {cfg.requests_per_service_range.lo, cfg.requests_per_service_range.hi}},
                {"volume_range", {cfg.volume_range.lo, cfg.volume_range.hi}},
                {"box_capacity", cfg.box_capacity},
                {"avg_degree", cfg.avg_degree},
                {"rewire_prob", cfg.rewire_prob},
                {"power_exponent", cfg.power_exponent},
                {"shared_pool", cfg.shared_pool}};
}

// Reads a config, starting from defaults; unknown keys are errors so typos
// cannot silently fall back to defaults.
inline ScenarioConfig config_from_json(const Json& j) {
    ScenarioConfig cfg;
    auto range = [](const Json& e) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("range fields take [lo, hi]");
        return IntRange{e[0].get<int>(), e[1].get<int>()};
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "kind") cfg.kind = kind_from_string(value.get<std::string>());
        else if (key == "n_forwarders") cfg.n_forwarders = value.get<int>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "n_port_pairs") cfg.n_port_pairs = value.get<int>();
        else if (key == "services_per_pair") cfg.services_per_pair = range(value);
        else if (key == "cost_range") cfg.cost_range = range(value);
        else if (key == "boxes_range") cfg.boxes_range = range(value);
        else if (key == "requests_per_service_range") cfg.requests_per_service_range = range(value);
        else if (key == "volume_range") cfg.volume_range = range(value);
        else if (key == "box_capacity") cfg.box_capacity = value.get<int>();
        else if (key == "avg_degree") cfg.avg_degree = value.get<int>();
        else if (key == "rewire_prob") cfg.rewire_prob = value.get<double>();
        else if (key == "power_exponent") cfg.power_exponent = value.get<double>();
        else if (key == "shared_pool") cfg.shared_pool = value.get<bool>();
        else throw std::invalid_argument("unknown config key: " + key);
    }
    validate_config(cfg);
    return cfg;
}

inline std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << canonical_dump(j);
}

} // namespace lcg
