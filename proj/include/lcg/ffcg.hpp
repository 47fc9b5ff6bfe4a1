#pragma once

#include <atomic>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lcg/binpack.hpp"
#include "lcg/characteristic.hpp"
#include "lcg/coalition.hpp"
#include "lcg/errors.hpp"
#include "lcg/graph.hpp"
#include "lcg/shapley.hpp"

namespace lcg {

// An ordered origin->destination shipping lane; the unit the cost model
// decomposes over, since a box never serves more than one lane.
struct PortPair {
    std::string origin;
    std::string destination;
    friend auto operator<=>(const PortPair&, const PortPair&) = default;
};

struct Service {
    int owner = 0; // index into FfcgInstance::forwarders
    PortPair pair;
    int cost_per_box = 0;
    int box_count = 0;
    int box_capacity = 0; // 0: use the instance-wide capacity
    friend bool operator==(const Service&, const Service&) = default;
};

struct Request {
    int owner = 0;
    PortPair pair;
    int volume = 0;
    friend bool operator==(const Request&, const Request&) = default;
};

struct FfcgInstance {
    std::vector<std::string> forwarders;
    std::vector<Service> services;
    std::vector<Request> requests;
    int box_capacity = 30;
    friend bool operator==(const FfcgInstance&, const FfcgInstance&) = default;
};

inline int capacity_of(const Service& s, const FfcgInstance& inst) {
    return s.box_capacity > 0 ? s.box_capacity : inst.box_capacity;
}

// How box bounds for the exact packing step are chosen: the greedy solution's
// per-service box usage (the default), or each service's full box count.
enum class PackMode { two_step, exact };

inline void validate_instance(const FfcgInstance& inst) {
    const int n = static_cast<int>(inst.forwarders.size());
    if (n < 1 || n > kMaxAgents)
        throw std::invalid_argument("instance needs between 1 and 64 forwarders");
    if (inst.box_capacity <= 0) throw std::invalid_argument("box_capacity must be positive");
    {
        std::unordered_map<std::string, int> seen;
        for (const auto& f : inst.forwarders) {
            if (f.empty()) throw std::invalid_argument("empty forwarder id");
            if (++seen[f] > 1) throw std::invalid_argument("duplicate forwarder id: " + f);
        }
    }
    auto check_pair = [](const PortPair& p) {
        if (p.origin.size() != 5 || p.destination.size() != 5)
            throw std::invalid_argument("port codes must be 5 characters");
        if (p.origin == p.destination)
            throw std::invalid_argument("origin and destination must differ");
    };
    for (const auto& s : inst.services) {
        if (s.owner < 0 || s.owner >= n) throw std::invalid_argument("service owner out of range");
        check_pair(s.pair);
        if (s.cost_per_box <= 0) throw std::invalid_argument("cost_per_box must be positive");
        if (s.box_count < 1) throw std::invalid_argument("box_count must be at least 1");
        if (s.box_capacity < 0)
            throw std::invalid_argument("per-service box_capacity cannot be negative");
    }
    // Each forwarder must be able to ship its own requests: a fitting own
    // service per request, and own capacity covering own demand per lane.
    std::map<std::pair<int, PortPair>, std::int64_t> own_capacity, own_demand;
    for (const auto& s : inst.services)
        own_capacity[{s.owner, s.pair}] +=
            static_cast<std::int64_t>(s.box_count) * capacity_of(s, inst);
    for (const auto& r : inst.requests) {
        if (r.owner < 0 || r.owner >= n) throw std::invalid_argument("request owner out of range");
        check_pair(r.pair);
        if (r.volume <= 0) throw std::invalid_argument("request volume must be positive");
        bool fits = false;
        for (const auto& s : inst.services)
            if (s.owner == r.owner && s.pair == r.pair && capacity_of(s, inst) >= r.volume) {
                fits = true;
                break;
            }
        if (!fits)
            throw std::invalid_argument("request on " + r.pair.origin + "-" + r.pair.destination +
                                        " has no fitting service owned by its forwarder");
        own_demand[{r.owner, r.pair}] += r.volume;
    }
    for (const auto& [key, demand] : own_demand)
        if (own_capacity[key] < demand)
            throw std::invalid_argument("forwarder " + inst.forwarders[key.first] +
                                        " cannot cover its own demand on " + key.second.origin +
                                        "-" + key.second.destination);
}

// One node per forwarder, an edge wherever two forwarders are active on a
// common lane (owning a request or a service there).
inline AgentGraph build_collaboration_graph(const FfcgInstance& inst) {
    std::map<PortPair, Coalition> active;
    for (const auto& s : inst.services) active[s.pair] = active[s.pair].with(s.owner);
    for (const auto& r : inst.requests) active[r.pair] = active[r.pair].with(r.owner);
    std::vector<std::pair<int, int>> edges;
    for (const auto& [pair, who] : active) {
        const auto members = who.members();
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b)
                edges.emplace_back(members[a], members[b]);
    }
    return AgentGraph(static_cast<int>(inst.forwarders.size()), edges);
}

struct PairGroup {
    PortPair pair;
    std::vector<int> requests; // indices into FfcgInstance::requests
    std::vector<int> services; // indices into FfcgInstance::services
};

// Splits a coalition's requests and services into independent per-lane
// subproblems, ordered by lane. A lane with requests but nothing to carry
// them is the coalition's problem being infeasible.
inline std::vector<PairGroup> decompose_by_port_pair(const FfcgInstance& inst, Coalition who) {
    std::map<PortPair, PairGroup> groups;
    for (std::size_t r = 0; r < inst.requests.size(); ++r)
        if (who.contains(inst.requests[r].owner)) {
            auto& g = groups[inst.requests[r].pair];
            g.pair = inst.requests[r].pair;
            g.requests.push_back(static_cast<int>(r));
        }
    for (std::size_t s = 0; s < inst.services.size(); ++s)
        if (who.contains(inst.services[s].owner)) {
            auto& g = groups[inst.services[s].pair];
            g.pair = inst.services[s].pair;
            g.services.push_back(static_cast<int>(s));
        }
    std::vector<PairGroup> out;
    out.reserve(groups.size());
    for (auto& [pair, g] : groups) {
        if (!g.requests.empty() && g.services.empty())
            throw infeasible_error("no service covers lane " + pair.origin + "-" +
                                   pair.destination + " for coalition " + who.to_string());
        out.push_back(std::move(g));
    }
    return out;
}

namespace detail {

inline Assignment solve_group(const FfcgInstance& inst, const PairGroup& g, PackMode mode) {
    std::vector<PackItem> items;
    items.reserve(g.requests.size());
    for (int r : g.requests) items.push_back({r, inst.requests[static_cast<std::size_t>(r)].volume});
    std::vector<PackService> services;
    services.reserve(g.services.size());
    for (int s : g.services) {
        const auto& svc = inst.services[static_cast<std::size_t>(s)];
        services.push_back({s, svc.cost_per_box, svc.box_count, capacity_of(svc, inst)});
    }
    std::vector<int> bounds;
    bounds.reserve(services.size());
    for (const auto& s : services) bounds.push_back(s.box_count);
    if (mode == PackMode::two_step) {
        try {
            bounds = ffd_greedy(items, services).used_boxes;
        } catch (const infeasible_error&) {
            // The greedy step has no answer here; fall back to the full
            // bounds rather than declaring a packable group infeasible.
        }
    }
    return exact_binpack(items, services, bounds);
}

} // namespace detail

// Minimum cost of shipping the coalition's pooled requests on its pooled
// services, with the full box-by-box assignment.
inline Assignment solve_coalition(const FfcgInstance& inst, Coalition who,
                                  PackMode mode = PackMode::two_step) {
    Assignment total;
    for (const auto& g : decompose_by_port_pair(inst, who)) {
        Assignment part = detail::solve_group(inst, g, mode);
        total.total_cost += part.total_cost;
        for (auto& box : part.boxes) total.boxes.push_back(std::move(box));
    }
    return total;
}

inline std::int64_t phi(const FfcgInstance& inst, Coalition who,
                        PackMode mode = PackMode::two_step) {
    return solve_coalition(inst, who, mode).total_cost;
}

// The collaboration game's characteristic function. Values are assembled
// per lane, and each lane keeps its own table of solved member subsets, so
// evaluating a fresh coalition mostly reuses lane solutions computed for
// other coalitions.
class FfcgCharacteristic final : public CharacteristicFunction {
  public:
    explicit FfcgCharacteristic(const FfcgInstance& inst, PackMode mode = PackMode::two_step)
        : inst_(inst), mode_(mode) {
        validate_instance(inst_);
        std::map<PortPair, std::size_t> at;
        auto group_for = [&](const PortPair& p) -> std::size_t {
            auto [it, fresh] = at.emplace(p, groups_.size());
            if (fresh) {
                groups_.push_back(std::make_unique<Lane>());
                groups_.back()->group.pair = p;
            }
            return it->second;
        };
        for (std::size_t r = 0; r < inst_.requests.size(); ++r) {
            auto& lane = *groups_[group_for(inst_.requests[r].pair)];
            lane.group.requests.push_back(static_cast<int>(r));
            lane.members = lane.members.with(inst_.requests[r].owner);
        }
        for (std::size_t s = 0; s < inst_.services.size(); ++s) {
            auto& lane = *groups_[group_for(inst_.services[s].pair)];
            lane.group.services.push_back(static_cast<int>(s));
            lane.members = lane.members.with(inst_.services[s].owner);
        }
        for (auto& lane : groups_) {
            lane->member_list = lane->members.members();
            if (lane->member_list.size() <= kDenseBits) {
                const std::size_t slots = std::size_t{1} << lane->member_list.size();
                lane->dense = std::make_unique<std::atomic<std::int64_t>[]>(slots);
                for (std::size_t i = 0; i < slots; ++i)
                    lane->dense[i].store(kUnsolved, std::memory_order_relaxed);
            }
        }
    }

    int agent_count() const override { return static_cast<int>(inst_.forwarders.size()); }

    std::int64_t evaluate(Coalition who) const override {
        std::int64_t total = 0;
        for (const auto& lane : groups_) {
            const Coalition present = who & lane->members;
            if (present.empty()) continue;
            total += lane_value(*lane, present);
        }
        return total;
    }

    const FfcgInstance& instance() const { return inst_; }
    PackMode mode() const { return mode_; }

  private:
    static constexpr std::size_t kDenseBits = 12;
    static constexpr std::int64_t kUnsolved = std::numeric_limits<std::int64_t>::min();

    struct Lane {
        PairGroup group;
        Coalition members;
        std::vector<int> member_list;
        std::unique_ptr<std::atomic<std::int64_t>[]> dense;
        mutable std::shared_mutex mutex;
        mutable std::unordered_map<std::uint64_t, std::int64_t> sparse;
    };

    std::int64_t lane_value(const Lane& lane, Coalition present) const {
        std::uint64_t key = 0;
        for (std::size_t j = 0; j < lane.member_list.size(); ++j)
            if (present.contains(lane.member_list[j])) key |= std::uint64_t{1} << j;

        if (lane.dense) {
            auto& slot = lane.dense[key];
            std::int64_t value = slot.load(std::memory_order_relaxed);
            if (value == kUnsolved) {
                value = solve_lane(lane, present);
                slot.store(value, std::memory_order_relaxed);
            }
            return value;
        }
        {
            std::shared_lock lock(lane.mutex);
            auto it = lane.sparse.find(key);
            if (it != lane.sparse.end()) return it->second;
        }
        const std::int64_t value = solve_lane(lane, present);
        std::unique_lock lock(lane.mutex);
        return lane.sparse.emplace(key, value).first->second;
    }

    std::int64_t solve_lane(const Lane& lane, Coalition present) const {
        PairGroup g;
        g.pair = lane.group.pair;
        for (int r : lane.group.requests)
            if (present.contains(inst_.requests[static_cast<std::size_t>(r)].owner))
                g.requests.push_back(r);
        for (int s : lane.group.services)
            if (present.contains(inst_.services[static_cast<std::size_t>(s)].owner))
                g.services.push_back(s);
        if (!g.requests.empty() && g.services.empty())
            throw infeasible_error("no service covers lane " + g.pair.origin + "-" +
                                   g.pair.destination + " for coalition " + present.to_string());
        return detail::solve_group(inst_, g, mode_).total_cost;
    }

    FfcgInstance inst_;
    PackMode mode_;
    std::vector<std::unique_ptr<Lane>> groups_;
};

struct SavingsReport {
    std::vector<std::int64_t> standalone;   // v({f})
    std::vector<Rational> per_forwarder;    // (v({f}) - Sh_f) / v({f})
    Rational average = 0;
};

// Relative cost saving each forwarder gets from its allocation compared to
// operating alone; degenerate forwarders with zero stand-alone cost save 0.
inline SavingsReport savings_report(const CharacteristicFunction& v,
                                    const ShapleyResult& result) {
    const int n = v.agent_count();
    if (static_cast<std::size_t>(n) != result.values.size())
        throw std::invalid_argument("allocation size does not match the game");
    SavingsReport report;
    for (int i = 0; i < n; ++i) {
        const std::int64_t alone = v.evaluate(Coalition::single(i));
        report.standalone.push_back(alone);
        if (alone == 0) {
            report.per_forwarder.emplace_back(0);
        } else {
            report.per_forwarder.push_back(
                (Rational(alone) - result.values[static_cast<std::size_t>(i)]) / alone);
        }
        report.average += report.per_forwarder.back();
    }
    report.average /= n;
    return report;
}

// Sub-instance over the listed forwarders (new indices follow list order);
// other forwarders' requests and services are dropped.
inline FfcgInstance restrict_instance(const FfcgInstance& inst, const std::vector<int>& keep) {
    std::vector<int> index(inst.forwarders.size(), -1);
    FfcgInstance out;
    out.box_capacity = inst.box_capacity;
    for (int f : keep) {
        if (f < 0 || f >= static_cast<int>(inst.forwarders.size()))
            throw std::invalid_argument("restrict_instance: forwarder index out of range");
        if (index[static_cast<std::size_t>(f)] != -1)
            throw std::invalid_argument("restrict_instance: duplicate forwarder index");
        index[static_cast<std::size_t>(f)] = static_cast<int>(out.forwarders.size());
        out.forwarders.push_back(inst.forwarders[static_cast<std::size_t>(f)]);
    }
    for (const auto& s : inst.services)
        if (index[static_cast<std::size_t>(s.owner)] != -1) {
            Service copy = s;
            copy.owner = index[static_cast<std::size_t>(s.owner)];
            out.services.push_back(std::move(copy));
        }
    for (const auto& r : inst.requests)
        if (index[static_cast<std::size_t>(r.owner)] != -1) {
            Request copy = r;
            copy.owner = index[static_cast<std::size_t>(r.owner)];
            out.requests.push_back(std::move(copy));
        }
    return out;
}

} // namespace lcg
