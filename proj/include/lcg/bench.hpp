#pragma once

#include <atomic>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lcg/characteristic.hpp"
#include "lcg/ffcg.hpp"
#include "lcg/json_io.hpp"
#include "lcg/scenarios.hpp"
#include "lcg/shapley.hpp"

namespace lcg {

inline constexpr const char* kBenchCsvHeader =
    "kind,n,deg,seed,method,elapsed_s,eval_count,total_cost,avg_savings";

// One benchmark sweep: the cartesian product of sizes x degrees x seeds x
// methods over a shared base config. Degrees apply to small-world topologies
// only.
struct SweepConfig {
    ScenarioConfig base;
    std::vector<int> sizes;
    std::vector<int> degrees;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> methods;
    PackMode mode = PackMode::two_step;
};

struct BenchRecord {
    std::string kind;
    int n = 0;
    std::optional<int> deg;
    std::uint64_t seed = 0;
    std::string method;
    double elapsed_s = 0.0;
    std::size_t eval_count = 0;
    std::int64_t total_cost = 0;
    double avg_savings = 0.0;
    std::string error; // nonempty: the row failed and the value fields are blank
};

inline ShapleyResult run_method(const std::string& method, const AgentGraph& g,
                                MemoizedGame& game) {
    if (method == "fs_lcg") return fs_lcg_shapley(g, game);
    if (method == "baseline") return baseline_graph_restricted_shapley(g, game);
    if (method == "bruteforce") return exact_shapley_bruteforce(game);
    throw std::invalid_argument("unknown method: " + method);
}

inline void validate_sweep(const SweepConfig& cfg) {
    if (cfg.sizes.empty()) throw std::invalid_argument("sweep needs at least one size");
    if (cfg.seeds.empty()) throw std::invalid_argument("sweep needs at least one seed");
    if (cfg.methods.empty()) throw std::invalid_argument("sweep needs at least one method");
    for (const auto& m : cfg.methods)
        if (m != "fs_lcg" && m != "baseline" && m != "bruteforce")
            throw std::invalid_argument("unknown method: " + m);
    if (!cfg.degrees.empty() && cfg.base.kind != ScenarioConfig::Kind::small_world)
        throw std::invalid_argument("degree list only applies to small-world sweeps");
}

namespace detail {

struct RowSpec {
    int n = 0;
    std::optional<int> deg;
    std::uint64_t seed = 0;
    std::string method;
};

inline std::vector<RowSpec> expand_rows(const SweepConfig& cfg) {
    std::vector<std::optional<int>> degrees;
    if (cfg.base.kind == ScenarioConfig::Kind::small_world) {
        if (cfg.degrees.empty()) degrees.push_back(cfg.base.avg_degree);
        for (int d : cfg.degrees) degrees.push_back(d);
    } else {
        degrees.push_back(std::nullopt);
    }
    std::vector<RowSpec> rows;
    for (int n : cfg.sizes)
        for (const auto& deg : degrees)
            for (std::uint64_t seed : cfg.seeds)
                for (const auto& method : cfg.methods)
                    rows.push_back({n, deg, seed, method});
    return rows;
}

inline BenchRecord run_row(const SweepConfig& cfg, const RowSpec& row) {
    BenchRecord rec;
    rec.kind = to_string(cfg.base.kind);
    rec.n = row.n;
    rec.deg = row.deg;
    rec.seed = row.seed;
    rec.method = row.method;
    try {
        ScenarioConfig sc = cfg.base;
        sc.n_forwarders = row.n;
        sc.seed = row.seed;
        if (row.deg) sc.avg_degree = *row.deg;
        const FfcgInstance inst = generate_instance(sc);
        const AgentGraph g = build_collaboration_graph(inst);
        const FfcgCharacteristic v(inst, cfg.mode);
        MemoizedGame game(v); // fresh cache: timing must include every evaluation
        const ShapleyResult result = run_method(row.method, g, game);
        rec.elapsed_s = result.elapsed_seconds;
        rec.eval_count = result.eval_count;
        rec.total_cost = result.v_grand;
        rec.avg_savings = savings_report(game, result).average.convert_to<double>();
    } catch (const std::exception& ex) {
        rec.error = ex.what();
    }
    return rec;
}

inline std::string format_fixed(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

} // namespace detail

// Runs every row of the sweep on a worker pool. Failed rows carry their error
// message and keep their position; the result order matches config order.
inline std::vector<BenchRecord> run_sweep(const SweepConfig& cfg, int jobs = 0) {
    validate_sweep(cfg);
    const auto rows = detail::expand_rows(cfg);
    std::vector<BenchRecord> out(rows.size());
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    jobs = std::min<int>(jobs, static_cast<int>(rows.size()));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) out[i] = detail::run_row(cfg, rows[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= rows.size()) return;
                out[i] = detail::run_row(cfg, rows[i]);
            }
        });
    for (auto& th : pool) th.join();
    return out;
}

inline void write_csv(std::ostream& os, const std::vector<BenchRecord>& rows) {
    os << kBenchCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.kind << ',' << r.n << ',';
        if (r.deg) os << *r.deg;
        os << ',' << r.seed << ',' << r.method << ',';
        if (r.error.empty())
            os << detail::format_fixed(r.elapsed_s) << ',' << r.eval_count << ','
               << r.total_cost << ',' << detail::format_fixed(r.avg_savings);
        else
            os << ",,,";
        os << '\n';
    }
}

// Sweep JSON: {"base": {scenario config}, "sizes": [...], "seeds": [...],
// "methods": [...], "degrees": [...], "exact": bool}.
inline SweepConfig sweep_from_json(const Json& j) {
    SweepConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "base") cfg.base = config_from_json(value);
        else if (key == "sizes") cfg.sizes = value.get<std::vector<int>>();
        else if (key == "degrees") cfg.degrees = value.get<std::vector<int>>();
        else if (key == "seeds") cfg.seeds = value.get<std::vector<std::uint64_t>>();
        else if (key == "methods") cfg.methods = value.get<std::vector<std::string>>();
        else if (key == "exact") cfg.mode = value.get<bool>() ? PackMode::exact : PackMode::two_step;
        else throw std::invalid_argument("unknown sweep key: " + key);
    }
    validate_sweep(cfg);
    return cfg;
}

} // namespace lcg
