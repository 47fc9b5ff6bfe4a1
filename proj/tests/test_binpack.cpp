#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "lcg/binpack.hpp"

using lcg::Assignment;
using lcg::PackItem;
using lcg::PackService;

namespace {

// Independent reference solver: enumerate every set partition of the items,
// then hand each block the cheapest still-free box that fits, largest block
// first (optimal because bigger blocks fit in fewer boxes). Returns -1 when
// no partition fits the available boxes.
std::int64_t partition_oracle(const std::vector<PackItem>& items,
                              const std::vector<PackService>& services,
                              const std::vector<int>& bounds) {
    if (items.empty()) return 0;
    struct BoxT {
        int cost;
        int cap;
    };
    std::vector<BoxT> boxes;
    for (std::size_t s = 0; s < services.size(); ++s)
        for (int b = 0; b < bounds[s]; ++b)
            boxes.push_back({services[s].cost_per_box, services[s].box_capacity});
    std::sort(boxes.begin(), boxes.end(), [](const BoxT& a, const BoxT& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        return a.cap < b.cap;
    });

    const std::size_t n = items.size();
    std::vector<std::size_t> rgs(n, 0); // restricted growth string
    std::int64_t best = -1;
    while (true) {
        const std::size_t blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        if (blocks <= boxes.size()) {
            std::vector<std::int64_t> volume(blocks, 0);
            for (std::size_t i = 0; i < n; ++i)
                volume[rgs[i]] += items[i].volume;
            std::sort(volume.rbegin(), volume.rend());
            std::vector<char> taken(boxes.size(), 0);
            std::int64_t cost = 0;
            bool ok = true;
            for (std::int64_t v : volume) {
                bool placed = false;
                for (std::size_t b = 0; b < boxes.size(); ++b) {
                    if (taken[b] || boxes[b].cap < v) continue;
                    taken[b] = 1;
                    cost += boxes[b].cost;
                    placed = true;
                    break;
                }
                if (!placed) {
                    ok = false;
                    break;
                }
            }
            if (ok && (best < 0 || cost < best)) best = cost;
        }
        std::size_t i = n - 1;
        for (; i > 0; --i) {
            const std::size_t limit = *std::max_element(rgs.begin(), rgs.begin() + i) + 1;
            if (rgs[i] < limit) {
                ++rgs[i];
                std::fill(rgs.begin() + i + 1, rgs.end(), 0);
                break;
            }
        }
        if (i == 0) break;
    }
    return best;
}

std::vector<PackItem> make_items(const std::vector<int>& volumes) {
    std::vector<PackItem> items;
    for (std::size_t i = 0; i < volumes.size(); ++i)
        items.push_back({static_cast<int>(i), volumes[i]});
    return items;
}

std::vector<int> full_bounds(const std::vector<PackService>& services) {
    std::vector<int> bounds;
    for (const auto& s : services) bounds.push_back(s.box_count);
    return bounds;
}

} // namespace

TEST_CASE("first-fit decreasing walks the worked seven-request group") {
    auto items = make_items({14, 12, 10, 6, 6, 6, 6});
    std::vector<PackService> services{{0, 900, 2, 30}, {1, 1000, 2, 30}};

    auto r = lcg::ffd_greedy(items, services);
    REQUIRE(r.used_boxes == std::vector<int>{2, 1});
    REQUIRE(r.assignment.total_cost == 2800);
    REQUIRE(r.assignment.boxes.size() == 3);
    REQUIRE(r.assignment.boxes[0].item_ids == std::vector<int>{0, 1});
    REQUIRE(r.assignment.boxes[0].load == 26);
    REQUIRE(r.assignment.boxes[1].item_ids == std::vector<int>{2, 3, 4, 5});
    REQUIRE(r.assignment.boxes[1].load == 28);
    REQUIRE(r.assignment.boxes[2].item_ids == std::vector<int>{6});
    REQUIRE(r.assignment.boxes[2].service_id == 1);
    REQUIRE_NOTHROW(lcg::validate_assignment(items, services, {}, r.assignment));
}

TEST_CASE("exact packing beats the greedy by one box on the worked group") {
    auto items = make_items({14, 12, 10, 6, 6, 6, 6});
    std::vector<PackService> services{{0, 900, 2, 30}, {1, 1000, 2, 30}};

    auto exact = lcg::exact_binpack(items, services, {2, 1});
    REQUIRE(exact.total_cost == 1800);
    REQUIRE(exact.boxes.size() == 2);
    for (const auto& box : exact.boxes) {
        REQUIRE(box.service_id == 0);
        REQUIRE(box.load == 30);
    }
    // 30 + 30 splits only as {14,10,6} + {12,6,6,6}.
    for (const auto& box : exact.boxes)
        if (std::count(box.item_ids.begin(), box.item_ids.end(), 0) == 1)
            REQUIRE(std::count(box.item_ids.begin(), box.item_ids.end(), 2) == 1);
    REQUIRE_NOTHROW(lcg::validate_assignment(items, services, {2, 1}, exact));

    // Lifting the greedy bounds changes nothing here: two boxes are optimal.
    REQUIRE(lcg::exact_binpack(items, services, full_bounds(services)).total_cost == 1800);
}

TEST_CASE("trivial groups") {
    std::vector<PackService> services{{0, 500, 1, 30}, {1, 400, 1, 5}};
    auto single = make_items({10});

    // The $400 box is too small, so the single request takes the $500 one.
    auto r = lcg::ffd_greedy(single, services);
    REQUIRE(r.assignment.total_cost == 500);
    REQUIRE(r.used_boxes == std::vector<int>{1, 0});
    REQUIRE(lcg::exact_binpack(single, services, {1, 1}).total_cost == 500);

    REQUIRE(lcg::exact_binpack({}, services, {1, 1}).total_cost == 0);
    REQUIRE(lcg::ffd_greedy({}, services).assignment.boxes.empty());
}

TEST_CASE("infeasible groups throw") {
    std::vector<PackService> services{{0, 500, 2, 10}};
    auto items = make_items({11});
    REQUIRE_THROWS_AS(lcg::ffd_greedy(items, services), lcg::infeasible_error);
    REQUIRE_THROWS_AS(lcg::exact_binpack(items, services, {2}), lcg::infeasible_error);

    auto crowd = make_items({9, 9, 9});
    REQUIRE_THROWS_AS(lcg::ffd_greedy(crowd, services), lcg::infeasible_error);
    REQUIRE_THROWS_AS(lcg::exact_binpack(crowd, services, {2}), lcg::infeasible_error);
}

TEST_CASE("greedy bounds can cut off the optimum under mixed capacities") {
    // Four cheap small boxes swallow the big requests one by one; the greedy
    // then needs a fifth box for the leftover. Unrestricted, two big boxes
    // cover everything at less than half the greedy cost.
    auto items = make_items({12, 11, 11, 8, 7});
    std::vector<PackService> services{{0, 100, 4, 12}, {1, 120, 2, 30}};

    auto greedy = lcg::ffd_greedy(items, services);
    REQUIRE(greedy.assignment.total_cost == 520);
    REQUIRE(greedy.used_boxes == std::vector<int>{4, 1});

    auto two_step = lcg::exact_binpack(items, services, greedy.used_boxes);
    REQUIRE(two_step.total_cost == 320);

    auto exact = lcg::exact_binpack(items, services, full_bounds(services));
    REQUIRE(exact.total_cost == 240);
    REQUIRE_NOTHROW(lcg::validate_assignment(items, services, {}, exact));
}

TEST_CASE("search succeeds where the greedy order dead-ends") {
    // Classic first-fit-decreasing anomaly: greedy wants four boxes, three
    // suffice ({5,5} {4,3,3} {4,3,3}).
    auto items = make_items({5, 5, 4, 4, 3, 3, 3, 3});

    std::vector<PackService> uniform{{0, 100, 3, 10}};
    REQUIRE_THROWS_AS(lcg::ffd_greedy(items, uniform), lcg::infeasible_error);
    REQUIRE(lcg::exact_binpack(items, uniform, {3}).total_cost == 300);

    std::vector<PackService> mixed{{0, 100, 2, 10}, {1, 120, 1, 11}};
    REQUIRE_THROWS_AS(lcg::ffd_greedy(items, mixed), lcg::infeasible_error);
    auto a = lcg::exact_binpack(items, mixed, {2, 1});
    REQUIRE(a.total_cost == 320);
    REQUIRE_NOTHROW(lcg::validate_assignment(items, mixed, {2, 1}, a));
}

TEST_CASE("exact packing agrees with partition enumeration on random groups") {
    std::mt19937 rng(2026);
    for (int trial = 0; trial < 60; ++trial) {
        const int n_items = 1 + static_cast<int>(rng() % 7);
        std::vector<int> volumes;
        for (int i = 0; i < n_items; ++i) volumes.push_back(1 + static_cast<int>(rng() % 29));
        auto items = make_items(volumes);

        const bool mixed_caps = trial % 2 == 1;
        const int n_services = 1 + static_cast<int>(rng() % 3);
        std::vector<PackService> services;
        for (int s = 0; s < n_services; ++s) {
            const int cap = mixed_caps ? 10 + static_cast<int>(rng() % 26) : 30;
            services.push_back({s, 50 + static_cast<int>(rng() % 101),
                                1 + static_cast<int>(rng() % 3), cap});
        }
        auto bounds = full_bounds(services);
        const std::int64_t expected = partition_oracle(items, services, bounds);

        if (expected < 0) {
            REQUIRE_THROWS_AS(lcg::exact_binpack(items, services, bounds),
                              lcg::infeasible_error);
            continue;
        }
        auto a = lcg::exact_binpack(items, services, bounds);
        REQUIRE(a.total_cost == expected);
        REQUIRE_NOTHROW(lcg::validate_assignment(items, services, bounds, a));

        // Volume lower bound and greedy upper bound.
        std::int64_t total_volume = 0;
        for (int v : volumes) total_volume += v;
        int max_cap = 0, min_cost = services.front().cost_per_box;
        for (const auto& s : services) {
            max_cap = std::max(max_cap, s.box_capacity);
            min_cost = std::min(min_cost, s.cost_per_box);
        }
        REQUIRE(a.total_cost >= (total_volume + max_cap - 1) / max_cap * min_cost);
        try {
            auto greedy = lcg::ffd_greedy(items, services);
            REQUIRE(a.total_cost <= greedy.assignment.total_cost);
            auto two_step = lcg::exact_binpack(items, services, greedy.used_boxes);
            REQUIRE(two_step.total_cost >= a.total_cost);
            if (!mixed_caps) REQUIRE(two_step.total_cost == a.total_cost);
        } catch (const lcg::infeasible_error&) {
            // greedy may fail although the exact search succeeded; fine
        }
    }
}

TEST_CASE("assignment validation catches tampering") {
    auto items = make_items({14, 12, 10, 6, 6, 6, 6});
    std::vector<PackService> services{{0, 900, 2, 30}, {1, 1000, 2, 30}};
    auto good = lcg::exact_binpack(items, services, {2, 1});

    auto wrong_cost = good;
    wrong_cost.total_cost += 1;
    REQUIRE_THROWS_AS(lcg::validate_assignment(items, services, {2, 1}, wrong_cost),
                      std::invalid_argument);

    auto dropped = good;
    dropped.boxes[0].item_ids.pop_back();
    REQUIRE_THROWS_AS(lcg::validate_assignment(items, services, {2, 1}, dropped),
                      std::invalid_argument);

    auto duplicated = good;
    duplicated.boxes[0].item_ids.push_back(duplicated.boxes[1].item_ids[0]);
    REQUIRE_THROWS_AS(lcg::validate_assignment(items, services, {2, 1}, duplicated),
                      std::invalid_argument);

    auto over_bound = good;
    for (auto& box : over_bound.boxes) box.service_id = 1;
    REQUIRE_THROWS_AS(lcg::validate_assignment(items, services, {2, 1}, over_bound),
                      std::invalid_argument);
}
