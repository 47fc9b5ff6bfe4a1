#include <catch2/catch_amalgamated.hpp>

#include "lcg/json_io.hpp"
#include "test_util.hpp"

using namespace lcg;
using lcgtest::two_forwarder_instance;

TEST_CASE("instance JSON round-trips exactly") {
    const FfcgInstance inst = two_forwarder_instance();
    const Json j = instance_to_json(inst);
    REQUIRE(instance_from_json(j) == inst);

    SECTION("schema shape") {
        REQUIRE(j.at("forwarders") == Json::array({"A", "B"}));
        REQUIRE(j.at("box_capacity") == 30);
        const auto& svc = j.at("services").at(0);
        REQUIRE(svc.at("owner") == "A");
        REQUIRE(svc.at("origin").get<std::string>().size() == 5);
        REQUIRE(svc.at("cost_per_box") == 900);
        REQUIRE(svc.at("box_count") == 2);
        REQUIRE_FALSE(svc.contains("box_capacity")); // no per-service override set
        const auto& req = j.at("requests").at(0);
        REQUIRE(req.at("owner") == "A");
        REQUIRE(req.at("volume") == 14);
    }

    SECTION("collaboration graph is embedded as an index-pair edge list") {
        REQUIRE(j.at("graph") == Json::array({Json::array({0, 1})}));
    }

    SECTION("canonical dump is stable") {
        REQUIRE(canonical_dump(j) == canonical_dump(instance_to_json(inst)));
        REQUIRE(canonical_dump(j).back() == '\n');
    }
}

TEST_CASE("per-service capacity overrides survive the round trip") {
    FfcgInstance inst;
    inst.forwarders = {"SOLO"};
    inst.box_capacity = 30;
    inst.services.push_back({0, {"AAAAA", "BBBBB"}, 100, 4, 12});
    inst.services.push_back({0, {"AAAAA", "BBBBB"}, 120, 2, 0});
    inst.requests.push_back({0, {"AAAAA", "BBBBB"}, 12});
    inst.requests.push_back({0, {"AAAAA", "BBBBB"}, 11});
    const Json j = instance_to_json(inst);
    REQUIRE(j.at("services").at(0).at("box_capacity") == 12);
    REQUIRE_FALSE(j.at("services").at(1).contains("box_capacity"));
    REQUIRE(instance_from_json(j) == inst);
}

TEST_CASE("generated instances round-trip and dump deterministically") {
    ScenarioConfig cfg;
    cfg.n_forwarders = 12;
    cfg.n_port_pairs = 10;
    cfg.seed = 7;
    for (auto kind : {ScenarioConfig::Kind::uniform, ScenarioConfig::Kind::small_world,
                      ScenarioConfig::Kind::power_law}) {
        cfg.kind = kind;
        const FfcgInstance inst = generate_instance(cfg);
        REQUIRE(instance_from_json(instance_to_json(inst)) == inst);
        REQUIRE(canonical_dump(instance_to_json(generate_instance(cfg))) ==
                canonical_dump(instance_to_json(inst)));
    }
}

TEST_CASE("instance JSON rejects inconsistent input") {
    const Json good = instance_to_json(two_forwarder_instance());

    SECTION("unknown owner id") {
        Json j = good;
        j["services"][0]["owner"] = "NOBODY";
        REQUIRE_THROWS_AS(instance_from_json(j), std::invalid_argument);
    }
    SECTION("stored graph disagreeing with the data") {
        Json j = good;
        j["graph"] = Json::array();
        REQUIRE_THROWS_AS(instance_from_json(j), std::invalid_argument);
    }
    SECTION("instance-level validation still applies") {
        Json j = good;
        j["requests"][0]["volume"] = 4000; // larger than any box the owner has
        REQUIRE_THROWS_AS(instance_from_json(j), std::invalid_argument);
    }
    SECTION("missing required field") {
        Json j = good;
        j["services"][0].erase("cost_per_box");
        REQUIRE_THROWS(instance_from_json(j));
    }
}

TEST_CASE("assignment JSON mirrors the solved packing") {
    const FfcgInstance inst = two_forwarder_instance();
    const Coalition all = Coalition::full(2);
    const Assignment a = solve_coalition(inst, all, PackMode::exact);
    const Json j = assignment_to_json(a, inst, all);
    REQUIRE(j.at("coalition") == Json::array({"A", "B"}));
    REQUIRE(j.at("total_cost") == 2900);
    std::int64_t cost = 0;
    std::size_t items = 0;
    for (const auto& box : j.at("boxes")) {
        REQUIRE(box.at("load").get<int>() <= inst.box_capacity);
        REQUIRE(box.at("origin").get<std::string>().size() == 5);
        items += box.at("requests").size();
        cost += inst.services[box.at("service").get<std::size_t>()].cost_per_box;
    }
    REQUIRE(items == inst.requests.size());
    REQUIRE(cost == 2900);
}

TEST_CASE("allocation JSON carries exact values, savings, and diagnostics") {
    const FfcgInstance inst = two_forwarder_instance();
    const AgentGraph g = build_collaboration_graph(inst);
    const FfcgCharacteristic v(inst, PackMode::exact);
    MemoizedGame game(v);
    const ShapleyResult result = fs_lcg_shapley(g, game);
    const Json j = shapley_to_json(result, savings_report(game, result), inst);

    REQUIRE(j.at("values").at("A").at("value_numerator") == "1900");
    REQUIRE(j.at("values").at("A").at("value_denominator") == "1");
    REQUIRE(j.at("values").at("B").at("value_decimal") == Catch::Approx(1000.0));
    REQUIRE(j.at("grand_cost") == 2900);
    REQUIRE(j.at("savings").at("per_forwarder").at("A") == Catch::Approx(11.0 / 30.0));
    REQUIRE(j.at("savings").at("average") ==
            Catch::Approx((11.0 / 30.0 + 11.0 / 21.0) / 2.0));
    REQUIRE(j.at("diagnostics").at("eval_count").get<std::size_t>() == result.eval_count);
    REQUIRE(j.at("diagnostics").at("elapsed_seconds").get<double>() >= 0.0);
}

TEST_CASE("scenario config JSON round-trips and rejects typos") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioConfig::Kind::small_world;
    cfg.n_forwarders = 24;
    cfg.seed = 99;
    cfg.avg_degree = 6;
    cfg.rewire_prob = 0.35;
    cfg.cost_range = {500, 800};
    cfg.shared_pool = true;

    const Json j = config_to_json(cfg);
    const ScenarioConfig back = config_from_json(j);
    REQUIRE(back.kind == cfg.kind);
    REQUIRE(back.n_forwarders == 24);
    REQUIRE(back.seed == 99);
    REQUIRE(back.avg_degree == 6);
    REQUIRE(back.rewire_prob == 0.35);
    REQUIRE(back.cost_range == IntRange{500, 800});
    REQUIRE(back.shared_pool);
    REQUIRE(generate_instance(back) == generate_instance(cfg));

    SECTION("partial configs inherit defaults") {
        const ScenarioConfig partial = config_from_json(Json{{"kind", "uniform"}, {"seed", 3}});
        REQUIRE(partial.n_forwarders == 10);
        REQUIRE(partial.n_port_pairs == 100);
        REQUIRE(partial.volume_range == IntRange{1, 29});
    }
    SECTION("unknown key") {
        Json bad = j;
        bad["n_forwarder"] = 5;
        REQUIRE_THROWS_AS(config_from_json(bad), std::invalid_argument);
    }
    SECTION("malformed range") {
        Json bad = j;
        bad["cost_range"] = 700;
        REQUIRE_THROWS_AS(config_from_json(bad), std::invalid_argument);
    }
    SECTION("invalid settings are rejected on load") {
        Json bad = j;
        bad["avg_degree"] = 3; // small-world degrees must be even
        REQUIRE_THROWS_AS(config_from_json(bad), std::invalid_argument);
    }
}
