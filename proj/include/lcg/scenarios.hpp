#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lcg/errors.hpp"
#include "lcg/ffcg.hpp"
#include "lcg/graph.hpp"

namespace lcg {

struct IntRange {
    int lo = 0;
    int hi = 0;
    friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct ScenarioConfig {
    enum class Kind { uniform, small_world, power_law };
    Kind kind = Kind::uniform;
    int n_forwarders = 10;
    std::uint64_t seed = 0;
    int n_port_pairs = 100;
    IntRange services_per_pair{1, 5};
    IntRange cost_range{700, 1300};
    IntRange boxes_range{20, 80};
    IntRange requests_per_service_range{1, 5};
    IntRange volume_range{1, 29};
    int box_capacity = 30;
    int avg_degree = 4;       // small_world: even, < n_forwarders
    double rewire_prob = 0.2; // small_world
    double power_exponent = 2.0;
    bool shared_pool = false; // graph kinds: draw lanes from a common pool
                              // instead of one fresh lane per edge
};

// Deterministic random stream: bounded draws via rejection sampling on the
// standard-specified mt19937_64 sequence, so instances are identical across
// platforms and compilers.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    int range(int lo, int hi) {
        if (lo > hi) throw std::invalid_argument("empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        const std::uint64_t cutoff = std::numeric_limits<std::uint64_t>::max() -
                                     std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= cutoff);
        return lo + static_cast<int>(x % span);
    }

    int range(IntRange r) { return range(r.lo, r.hi); }

    double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 engine_;
};

inline void validate_config(const ScenarioConfig& cfg) {
    if (cfg.n_forwarders < 1 || cfg.n_forwarders > kMaxAgents)
        throw std::invalid_argument("n_forwarders must be in 1..64");
    if (cfg.n_port_pairs < 1) throw std::invalid_argument("n_port_pairs must be positive");
    auto positive = [](IntRange r, const char* what) {
        if (r.lo < 1 || r.hi < r.lo)
            throw std::invalid_argument(std::string(what) + " range must be nonempty and positive");
    };
    positive(cfg.services_per_pair, "services_per_pair");
    positive(cfg.cost_range, "cost");
    positive(cfg.boxes_range, "boxes");
    positive(cfg.requests_per_service_range, "requests_per_service");
    positive(cfg.volume_range, "volume");
    if (cfg.box_capacity < 1) throw std::invalid_argument("box_capacity must be positive");
    if (cfg.volume_range.hi > cfg.box_capacity)
        throw std::invalid_argument("volumes must fit in a box");
    if (cfg.kind == ScenarioConfig::Kind::small_world) {
        if (cfg.avg_degree < 2 || cfg.avg_degree % 2 != 0)
            throw std::invalid_argument("avg_degree must be even and at least 2");
        if (cfg.avg_degree >= cfg.n_forwarders)
            throw std::invalid_argument("avg_degree must be below n_forwarders");
        if (cfg.rewire_prob < 0.0 || cfg.rewire_prob > 1.0)
            throw std::invalid_argument("rewire_prob must be a probability");
    }
    if (cfg.kind == ScenarioConfig::Kind::power_law) {
        if (cfg.n_forwarders < 5)
            throw std::invalid_argument("power_law needs at least 5 forwarders");
        if (cfg.power_exponent <= 0.0)
            throw std::invalid_argument("power_exponent must be positive");
    }
}

namespace detail {

inline std::string port_code(int k) {
    std::string s(5, 'A');
    for (int pos = 4; pos >= 0; --pos) {
        s[static_cast<std::size_t>(pos)] = static_cast<char>('A' + k % 26);
        k /= 26;
    }
    return s;
}

inline PortPair lane_for(int index) { return {port_code(2 * index), port_code(2 * index + 1)}; }

inline std::string forwarder_name(int i) {
    std::string s = std::to_string(i);
    if (s.size() < 2) s.insert(s.begin(), '0');
    return "F" + s;
}

// One service for `owner` on `lane`, plus that service's own requests.
inline void add_service_with_requests(FfcgInstance& inst, Rng& rng, const ScenarioConfig& cfg,
                                      int owner, const PortPair& lane) {
    inst.services.push_back(
        {owner, lane, rng.range(cfg.cost_range), rng.range(cfg.boxes_range), 0});
    const int n_requests = rng.range(cfg.requests_per_service_range);
    for (int r = 0; r < n_requests; ++r)
        inst.requests.push_back({owner, lane, rng.range(cfg.volume_range)});
}

// Raise box counts until every forwarder can ship its own demand on every
// lane it uses. With the default 20-80 boxes per service this is a no-op;
// it exists so tight configurations still produce valid instances.
inline void ensure_self_sufficiency(FfcgInstance& inst) {
    std::map<std::pair<int, PortPair>, std::pair<std::vector<int>, std::vector<int>>> lanes;
    for (std::size_t s = 0; s < inst.services.size(); ++s)
        lanes[{inst.services[s].owner, inst.services[s].pair}].first.push_back(
            static_cast<int>(s));
    for (std::size_t r = 0; r < inst.requests.size(); ++r)
        lanes[{inst.requests[r].owner, inst.requests[r].pair}].second.push_back(
            static_cast<int>(r));

    for (auto& [key, group] : lanes) {
        auto& [service_idx, request_idx] = group;
        if (request_idx.empty()) continue;
        if (service_idx.empty())
            throw std::logic_error("generator produced a request without a service");
        std::vector<PackItem> items;
        for (int r : request_idx)
            items.push_back({r, inst.requests[static_cast<std::size_t>(r)].volume});
        while (true) {
            std::vector<PackService> services;
            for (int s : service_idx) {
                const auto& svc = inst.services[static_cast<std::size_t>(s)];
                services.push_back({s, svc.cost_per_box, svc.box_count, capacity_of(svc, inst)});
            }
            try {
                ffd_greedy(items, services);
                break;
            } catch (const infeasible_error&) {
                ++inst.services[static_cast<std::size_t>(service_idx.front())].box_count;
            }
        }
    }
}

// Every graph edge gets lane traffic from both endpoints, so the instance's
// collaboration graph contains exactly these edges (plus possibly more when
// lanes come from a shared pool).
inline FfcgInstance instance_from_graph(const AgentGraph& g, Rng& rng,
                                        const ScenarioConfig& cfg) {
    FfcgInstance inst;
    inst.box_capacity = cfg.box_capacity;
    for (int i = 0; i < cfg.n_forwarders; ++i)
        inst.forwarders.push_back(forwarder_name(i));
    int next_lane = 0;
    for (auto [a, b] : g.edges()) {
        const PortPair lane = cfg.shared_pool
                                  ? lane_for(rng.range(0, cfg.n_port_pairs - 1))
                                  : lane_for(next_lane++);
        add_service_with_requests(inst, rng, cfg, a, lane);
        add_service_with_requests(inst, rng, cfg, b, lane);
    }
    ensure_self_sufficiency(inst);
    return inst;
}

inline AgentGraph sample_small_world_graph(const ScenarioConfig& cfg, Rng& rng) {
    const int n = cfg.n_forwarders;
    // adjacency as a matrix for cheap duplicate checks during rewiring
    std::vector<std::vector<char>> adj(static_cast<std::size_t>(n),
                                       std::vector<char>(static_cast<std::size_t>(n), 0));
    std::vector<std::pair<int, int>> edges;
    auto connect = [&](int a, int b) {
        adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
        adj[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
        edges.emplace_back(a, b);
    };
    for (int j = 1; j <= cfg.avg_degree / 2; ++j)
        for (int i = 0; i < n; ++i) connect(i, (i + j) % n);

    // Watts-Strogatz pass: each lattice edge keeps its near endpoint and,
    // with probability rewire_prob, sends the far end somewhere new.
    for (auto& [a, b] : edges) {
        if (rng.real01() >= cfg.rewire_prob) continue;
        for (int attempt = 0; attempt < 4 * n; ++attempt) {
            const int c = rng.range(0, n - 1);
            if (c == a || adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)]) continue;
            adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 0;
            adj[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 0;
            adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] = 1;
            adj[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)] = 1;
            b = c;
            break;
        }
    }
    return AgentGraph(n, edges);
}

inline AgentGraph sample_power_law_graph(const ScenarioConfig& cfg, Rng& rng) {
    const int n = cfg.n_forwarders;
    // discrete CDF of p(d) proportional to d^-exponent on 1..n-1
    std::vector<double> cdf(static_cast<std::size_t>(n - 1));
    double z = 0.0;
    for (int d = 1; d < n; ++d) {
        z += std::pow(static_cast<double>(d), -cfg.power_exponent);
        cdf[static_cast<std::size_t>(d - 1)] = z;
    }
    for (auto& c : cdf) c /= z;

    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<int> degree(static_cast<std::size_t>(n));
        int total = 0;
        for (auto& d : degree) {
            const double u = rng.real01();
            d = 1 + static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            d = std::min(d, n - 1);
            total += d;
        }
        if (total % 2 != 0) {
            for (auto& d : degree)
                if (d < n - 1) {
                    ++d;
                    break;
                }
        }

        // Havel-Hakimi with a random priority as the tie-break: repeatedly
        // exhaust the node with the largest remaining demand.
        std::vector<std::uint64_t> priority(static_cast<std::size_t>(n));
        for (auto& p : priority) p = rng.next();
        std::vector<int> pool(static_cast<std::size_t>(n));
        std::iota(pool.begin(), pool.end(), 0);
        std::vector<int> residual = degree;
        std::vector<std::pair<int, int>> edges;
        bool ok = true;
        while (!pool.empty()) {
            std::sort(pool.begin(), pool.end(), [&](int x, int y) {
                if (residual[static_cast<std::size_t>(x)] != residual[static_cast<std::size_t>(y)])
                    return residual[static_cast<std::size_t>(x)] >
                           residual[static_cast<std::size_t>(y)];
                return priority[static_cast<std::size_t>(x)] < priority[static_cast<std::size_t>(y)];
            });
            const int u = pool.front();
            const int need = residual[static_cast<std::size_t>(u)];
            if (need == 0) break;
            if (need > static_cast<int>(pool.size()) - 1) {
                ok = false;
                break;
            }
            for (int k = 1; k <= need; ++k) {
                const int w = pool[static_cast<std::size_t>(k)];
                if (residual[static_cast<std::size_t>(w)] == 0) {
                    ok = false;
                    break;
                }
                --residual[static_cast<std::size_t>(w)];
                edges.emplace_back(u, w);
            }
            if (!ok) break;
            residual[static_cast<std::size_t>(u)] = 0;
            pool.erase(pool.begin());
        }
        if (ok) return AgentGraph(n, edges);
    }
    throw infeasible_error("no simple graph realizes the sampled degree sequences");
}

} // namespace detail

inline FfcgInstance generate_uniform(const ScenarioConfig& cfg) {
    validate_config(cfg);
    if (cfg.kind != ScenarioConfig::Kind::uniform)
        throw std::invalid_argument("config kind is not uniform");
    Rng rng(cfg.seed);
    FfcgInstance inst;
    inst.box_capacity = cfg.box_capacity;
    for (int i = 0; i < cfg.n_forwarders; ++i)
        inst.forwarders.push_back(detail::forwarder_name(i));
    for (int p = 0; p < cfg.n_port_pairs; ++p) {
        const PortPair lane = detail::lane_for(p);
        const int n_services = rng.range(cfg.services_per_pair);
        for (int s = 0; s < n_services; ++s) {
            const int owner = rng.range(0, cfg.n_forwarders - 1);
            detail::add_service_with_requests(inst, rng, cfg, owner, lane);
        }
    }
    detail::ensure_self_sufficiency(inst);
    return inst;
}

inline FfcgInstance generate_small_world(const ScenarioConfig& cfg) {
    validate_config(cfg);
    if (cfg.kind != ScenarioConfig::Kind::small_world)
        throw std::invalid_argument("config kind is not small_world");
    Rng rng(cfg.seed);
    const AgentGraph g = detail::sample_small_world_graph(cfg, rng);
    return detail::instance_from_graph(g, rng, cfg);
}

inline FfcgInstance generate_power_law(const ScenarioConfig& cfg) {
    validate_config(cfg);
    if (cfg.kind != ScenarioConfig::Kind::power_law)
        throw std::invalid_argument("config kind is not power_law");
    Rng rng(cfg.seed);
    const AgentGraph g = detail::sample_power_law_graph(cfg, rng);
    return detail::instance_from_graph(g, rng, cfg);
}

inline FfcgInstance generate_instance(const ScenarioConfig& cfg) {
    switch (cfg.kind) {
    case ScenarioConfig::Kind::uniform: return generate_uniform(cfg);
    case ScenarioConfig::Kind::small_world: return generate_small_world(cfg);
    case ScenarioConfig::Kind::power_law: return generate_power_law(cfg);
    }
    throw std::invalid_argument("unknown scenario kind");
}

// The graph a graph-based scenario is built around: same seed, same graph.
// For small_world and power_law the instance's collaboration graph equals
// this exactly (unless lanes are pooled, which may add edges).
inline AgentGraph scenario_topology(const ScenarioConfig& cfg) {
    validate_config(cfg);
    Rng rng(cfg.seed);
    switch (cfg.kind) {
    case ScenarioConfig::Kind::small_world: return detail::sample_small_world_graph(cfg, rng);
    case ScenarioConfig::Kind::power_law: return detail::sample_power_law_graph(cfg, rng);
    case ScenarioConfig::Kind::uniform: return build_collaboration_graph(generate_uniform(cfg));
    }
    throw std::invalid_argument("unknown scenario kind");
}

} // namespace lcg
