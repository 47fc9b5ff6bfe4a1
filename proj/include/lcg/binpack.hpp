#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "lcg/errors.hpp"

namespace lcg {

struct PackItem {
    int id = 0;
    int volume = 0;
};

struct PackService {
    int id = 0;
    int cost_per_box = 0;
    int box_count = 0;
    int box_capacity = 0;
};

struct PackedBox {
    int service_id = 0;
    int box_index = 0;
    std::vector<int> item_ids;
    int load = 0;
};

struct Assignment {
    std::vector<PackedBox> boxes;
    std::int64_t total_cost = 0;
};

struct FfdResult {
    Assignment assignment;
    std::vector<int> used_boxes; // parallel to the service list passed in
};

namespace detail {

inline void check_pack_inputs(const std::vector<PackItem>& items,
                              const std::vector<PackService>& services) {
    for (const auto& it : items)
        if (it.volume <= 0) throw std::invalid_argument("item volume must be positive");
    for (const auto& s : services) {
        if (s.cost_per_box <= 0) throw std::invalid_argument("cost_per_box must be positive");
        if (s.box_count < 1) throw std::invalid_argument("box_count must be at least 1");
        if (s.box_capacity <= 0) throw std::invalid_argument("box_capacity must be positive");
    }
}

inline std::vector<std::size_t> items_by_volume_desc(const std::vector<PackItem>& items) {
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (items[a].volume != items[b].volume) return items[a].volume > items[b].volume;
        return items[a].id < items[b].id;
    });
    return order;
}

inline std::vector<std::size_t> services_by_cost_asc(const std::vector<PackService>& services) {
    std::vector<std::size_t> order(services.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (services[a].cost_per_box != services[b].cost_per_box)
            return services[a].cost_per_box < services[b].cost_per_box;
        return services[a].id < services[b].id;
    });
    return order;
}

} // namespace detail

// First-fit decreasing: requests by volume descending, each into the first
// open box with room; fresh boxes drawn from the cheapest service that still
// has boxes left and whose capacity fits the request.
inline FfdResult ffd_greedy(const std::vector<PackItem>& items,
                            const std::vector<PackService>& services) {
    detail::check_pack_inputs(items, services);
    const auto item_order = detail::items_by_volume_desc(items);
    const auto service_order = detail::services_by_cost_asc(services);

    FfdResult result;
    result.used_boxes.assign(services.size(), 0);
    std::vector<int> residual; // parallel to result.assignment.boxes

    for (std::size_t pos : item_order) {
        const int v = items[pos].volume;
        int target = -1;
        for (std::size_t b = 0; b < residual.size(); ++b)
            if (residual[b] >= v) {
                target = static_cast<int>(b);
                break;
            }
        if (target < 0) {
            for (std::size_t s : service_order) {
                if (result.used_boxes[s] < services[s].box_count && services[s].box_capacity >= v) {
                    target = static_cast<int>(residual.size());
                    residual.push_back(services[s].box_capacity);
                    result.assignment.boxes.push_back(
                        {services[s].id, result.used_boxes[s], {}, 0});
                    ++result.used_boxes[s];
                    result.assignment.total_cost += services[s].cost_per_box;
                    break;
                }
            }
            if (target < 0)
                throw infeasible_error("no box left for a request of volume " + std::to_string(v));
        }
        residual[static_cast<std::size_t>(target)] -= v;
        auto& box = result.assignment.boxes[static_cast<std::size_t>(target)];
        box.item_ids.push_back(items[pos].id);
        box.load += v;
    }
    return result;
}

namespace detail {

// Decision search: do the items (given volume-descending) fit into at most
// k bins of capacity cap? Returns the bins as lists of item positions.
struct UniformDecision {
    const std::vector<PackItem>& items;
    const std::vector<std::size_t>& order;
    std::vector<std::int64_t> suffix_volume;
    int cap;
    std::size_t k;
    std::vector<int> loads;
    std::vector<std::vector<std::size_t>> bins;

    UniformDecision(const std::vector<PackItem>& its, const std::vector<std::size_t>& ord,
                    int capacity, std::size_t bins_allowed)
        : items(its), order(ord), cap(capacity), k(bins_allowed) {
        suffix_volume.assign(order.size() + 1, 0);
        for (std::size_t i = order.size(); i-- > 0;)
            suffix_volume[i] = suffix_volume[i + 1] + items[order[i]].volume;
    }

    bool solve() { return dfs(0); }

    bool dfs(std::size_t pos) {
        if (pos == order.size()) return true;
        std::int64_t free_space = static_cast<std::int64_t>(k - bins.size()) * cap;
        for (int load : loads) free_space += cap - load;
        if (suffix_volume[pos] > free_space) return false;

        const int v = items[order[pos]].volume;
        // A bin the item fills exactly can take it without loss of generality.
        for (std::size_t b = 0; b < bins.size(); ++b)
            if (loads[b] + v == cap) return attempt(b, pos);
        std::vector<int> tried;
        for (std::size_t b = 0; b < bins.size(); ++b) {
            if (loads[b] + v > cap) continue;
            if (std::find(tried.begin(), tried.end(), loads[b]) != tried.end()) continue;
            tried.push_back(loads[b]);
            if (attempt(b, pos)) return true;
        }
        if (bins.size() < k && v <= cap) {
            bins.emplace_back();
            loads.push_back(0);
            if (attempt(bins.size() - 1, pos)) return true;
            bins.pop_back();
            loads.pop_back();
        }
        return false;
    }

    bool attempt(std::size_t b, std::size_t pos) {
        bins[b].push_back(order[pos]);
        loads[b] += items[order[pos]].volume;
        if (dfs(pos + 1)) return true;
        bins[b].pop_back();
        loads[b] -= items[order[pos]].volume;
        return false;
    }
};

// Branch and bound over box contents for mixed capacities: items placed in
// volume-descending order either into an open box or into a fresh box of
// some service class; identical boxes never branch twice.
struct CostSolver {
    struct Cls {
        int cost = 0;
        int cap = 0;
        int remaining = 0;
        std::size_t service = 0;
    };
    struct Open {
        std::size_t cls = 0;
        int residual = 0;
        std::vector<std::size_t> item_positions;
    };

    const std::vector<PackItem>& items;
    const std::vector<std::size_t>& order;
    std::vector<std::int64_t> suffix_volume;
    std::vector<Cls> classes;

    std::vector<Open> open;
    std::int64_t cost = 0;
    std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
    std::vector<Open> best;

    CostSolver(const std::vector<PackItem>& its, const std::vector<std::size_t>& ord,
               std::vector<Cls> cls)
        : items(its), order(ord), classes(std::move(cls)) {
        suffix_volume.assign(order.size() + 1, 0);
        for (std::size_t i = order.size(); i-- > 0;)
            suffix_volume[i] = suffix_volume[i + 1] + items[order[i]].volume;
    }

    // Least extra cost any completion from this node could incur, or -1 when
    // the remaining boxes cannot hold the remaining volume at all.
    std::int64_t bound(std::size_t pos) const {
        std::int64_t rem = suffix_volume[pos];
        for (const auto& b : open) rem -= b.residual;
        if (rem <= 0) return 0;
        int max_cap = 0;
        std::int64_t min_cost = -1, capacity_left = 0;
        for (const auto& c : classes) {
            if (c.remaining == 0) continue;
            max_cap = std::max(max_cap, c.cap);
            min_cost = min_cost < 0 ? c.cost : std::min<std::int64_t>(min_cost, c.cost);
            capacity_left += static_cast<std::int64_t>(c.remaining) * c.cap;
        }
        if (max_cap == 0 || capacity_left < rem) return -1;
        return (rem + max_cap - 1) / max_cap * min_cost;
    }

    void dfs(std::size_t pos) {
        if (pos == order.size()) {
            if (cost < best_cost) {
                best_cost = cost;
                best = open;
            }
            return;
        }
        const std::int64_t lb = bound(pos);
        if (lb < 0 || cost + lb >= best_cost) return;

        const int v = items[order[pos]].volume;
        for (std::size_t b = 0; b < open.size(); ++b)
            if (open[b].residual == v) {
                descend(b, pos);
                return;
            }
        std::vector<int> tried;
        for (std::size_t b = 0; b < open.size(); ++b) {
            if (open[b].residual < v) continue;
            if (std::find(tried.begin(), tried.end(), open[b].residual) != tried.end()) continue;
            tried.push_back(open[b].residual);
            descend(b, pos);
        }
        for (std::size_t c = 0; c < classes.size(); ++c) {
            auto& cls = classes[c];
            if (cls.remaining == 0 || cls.cap < v) continue;
            bool duplicate = false;
            for (std::size_t d = 0; d < c; ++d)
                if (classes[d].remaining > 0 && classes[d].cost == cls.cost &&
                    classes[d].cap == cls.cap) {
                    duplicate = true;
                    break;
                }
            if (duplicate) continue;
            --cls.remaining;
            cost += cls.cost;
            open.push_back({c, cls.cap, {}});
            descend(open.size() - 1, pos);
            open.pop_back();
            cost -= cls.cost;
            ++cls.remaining;
        }
    }

    void descend(std::size_t b, std::size_t pos) {
        open[b].item_positions.push_back(pos);
        open[b].residual -= items[order[pos]].volume;
        dfs(pos + 1);
        open[b].residual += items[order[pos]].volume;
        open[b].item_positions.pop_back();
    }
};

} // namespace detail

// Minimum-cost packing of the items into at most box_bounds[s] boxes of each
// service. Exhaustive up to symmetry; throws infeasible_error when no packing
// exists under the bounds.
inline Assignment exact_binpack(const std::vector<PackItem>& items,
                                const std::vector<PackService>& services,
                                const std::vector<int>& box_bounds) {
    detail::check_pack_inputs(items, services);
    if (box_bounds.size() != services.size())
        throw std::invalid_argument("box_bounds must match the service list");
    for (std::size_t s = 0; s < services.size(); ++s)
        if (box_bounds[s] < 0 || box_bounds[s] > services[s].box_count)
            throw std::invalid_argument("box bound outside [0, box_count]");
    if (items.empty()) return {};

    const auto order = detail::items_by_volume_desc(items);
    const auto service_order = detail::services_by_cost_asc(services);

    // Greedy run under the same bounds: upper bound for the search, and the
    // answer itself whenever the search cannot beat it.
    std::optional<FfdResult> greedy;
    {
        std::vector<PackService> bounded;
        std::vector<std::size_t> back; // bounded index -> original index
        for (std::size_t s = 0; s < services.size(); ++s)
            if (box_bounds[s] > 0) {
                PackService copy = services[s];
                copy.box_count = box_bounds[s];
                bounded.push_back(copy);
                back.push_back(s);
            }
        try {
            FfdResult r = ffd_greedy(items, bounded);
            std::vector<int> used(services.size(), 0);
            for (std::size_t s = 0; s < bounded.size(); ++s) used[back[s]] = r.used_boxes[s];
            r.used_boxes = std::move(used);
            greedy = std::move(r);
        } catch (const infeasible_error&) {
            // The greedy order can paint itself into a corner the search escapes.
        }
    }

    const bool uniform_cap =
        std::all_of(services.begin(), services.end(), [&](const PackService& s) {
            return s.box_capacity == services.front().box_capacity;
        });

    if (uniform_cap && !services.empty()) {
        // With one capacity everywhere, cheapest cost is reached by the fewest
        // boxes, filled from the cheapest services first.
        const int cap = services.front().box_capacity;
        std::int64_t total_volume = 0;
        for (const auto& it : items) total_volume += it.volume;
        std::size_t bound_total = 0;
        for (int b : box_bounds) bound_total += static_cast<std::size_t>(b);

        const std::size_t k_low =
            static_cast<std::size_t>((total_volume + cap - 1) / cap);
        std::size_t k_greedy = std::numeric_limits<std::size_t>::max();
        if (greedy) k_greedy = greedy->assignment.boxes.size();

        for (std::size_t k = k_low; k <= std::min(bound_total, k_greedy); ++k) {
            if (k == k_greedy) return greedy->assignment;
            detail::UniformDecision decision(items, order, cap, k);
            if (!decision.solve()) continue;
            Assignment out;
            std::vector<int> used(services.size(), 0);
            std::size_t next_bin = 0;
            for (std::size_t s : service_order) {
                for (int b = 0; b < box_bounds[s] && next_bin < decision.bins.size(); ++b) {
                    PackedBox box{services[s].id, used[s]++, {}, 0};
                    for (std::size_t pos : decision.bins[next_bin]) {
                        box.item_ids.push_back(items[pos].id);
                        box.load += items[pos].volume;
                    }
                    out.total_cost += services[s].cost_per_box;
                    out.boxes.push_back(std::move(box));
                    ++next_bin;
                }
                if (next_bin == decision.bins.size()) break;
            }
            return out;
        }
        throw infeasible_error("requests do not fit in the available boxes");
    }

    std::vector<detail::CostSolver::Cls> classes;
    for (std::size_t s : service_order)
        if (box_bounds[s] > 0)
            classes.push_back(
                {services[s].cost_per_box, services[s].box_capacity, box_bounds[s], s});

    detail::CostSolver solver(items, order, std::move(classes));
    if (greedy) solver.best_cost = greedy->assignment.total_cost;
    solver.dfs(0);

    if (solver.best.empty()) {
        if (greedy) return greedy->assignment;
        throw infeasible_error("requests do not fit in the available boxes");
    }

    Assignment out;
    out.total_cost = solver.best_cost;
    std::vector<int> used(services.size(), 0);
    for (const auto& o : solver.best) {
        const auto& cls = solver.classes[o.cls];
        PackedBox box{services[cls.service].id, used[cls.service]++, {}, 0};
        for (std::size_t pos : o.item_positions) {
            box.item_ids.push_back(items[order[pos]].id);
            box.load += items[order[pos]].volume;
        }
        out.boxes.push_back(std::move(box));
    }
    return out;
}

// Checks an assignment against the packing constraints: every item in exactly
// one box, loads within capacity, per-service box usage within bounds, and an
// honestly added-up total cost. Throws std::invalid_argument on violation.
inline void validate_assignment(const std::vector<PackItem>& items,
                                const std::vector<PackService>& services,
                                const std::vector<int>& box_bounds,
                                const Assignment& a) {
    if (!box_bounds.empty() && box_bounds.size() != services.size())
        throw std::invalid_argument("box_bounds must match the service list");
    std::unordered_map<int, std::size_t> service_at;
    for (std::size_t s = 0; s < services.size(); ++s)
        if (!service_at.emplace(services[s].id, s).second)
            throw std::invalid_argument("duplicate service id");
    std::unordered_map<int, int> volume_at;
    for (const auto& it : items)
        if (!volume_at.emplace(it.id, it.volume).second)
            throw std::invalid_argument("duplicate item id");

    std::unordered_map<int, int> seen_items;
    std::vector<int> used(services.size(), 0);
    std::int64_t cost = 0;
    for (const auto& box : a.boxes) {
        auto s = service_at.find(box.service_id);
        if (s == service_at.end()) throw std::invalid_argument("box uses unknown service");
        const auto& svc = services[s->second];
        int load = 0;
        for (int id : box.item_ids) {
            auto vol = volume_at.find(id);
            if (vol == volume_at.end()) throw std::invalid_argument("box holds unknown item");
            if (++seen_items[id] > 1) throw std::invalid_argument("item assigned twice");
            load += vol->second;
        }
        if (load != box.load) throw std::invalid_argument("box load does not match contents");
        if (load > svc.box_capacity) throw std::invalid_argument("box over capacity");
        ++used[s->second];
        cost += svc.cost_per_box;
    }
    for (std::size_t s = 0; s < services.size(); ++s) {
        const int limit = box_bounds.empty() ? services[s].box_count : box_bounds[s];
        if (used[s] > limit) throw std::invalid_argument("service box bound exceeded");
    }
    if (static_cast<std::size_t>(seen_items.size()) != items.size())
        throw std::invalid_argument("not every item was assigned");
    if (cost != a.total_cost) throw std::invalid_argument("total cost does not add up");
}

} // namespace lcg
