#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lcg/characteristic.hpp"
#include "lcg/coalition.hpp"
#include "lcg/errors.hpp"
#include "lcg/graph.hpp"
#include "lcg/numeric.hpp"

namespace lcg {

// Count of permutations witnessing one neighbor-subset case.
using PermutationWeight = BigInt;

// Number of permutations of `total` agents in which the set of agent i's
// neighbors preceding i is some fixed subset of size `preceding`, where i has
// `degree` neighbors overall. Summed over how many non-neighbors k are also
// placed in front of i:
//
//   sum_{k=0}^{total-degree-1} C(total-degree-1, k) (k+preceding)! (total-k-1-preceding)!
inline PermutationWeight permutation_weight(int total, int degree, int preceding,
                                            const FactorialTable& table) {
    if (total < 1 || degree < 0 || preceding < 0 || preceding > degree || degree > total - 1)
        throw std::invalid_argument("permutation_weight: need 0 <= preceding <= degree <= total-1");
    const int non_neighbors = total - degree - 1;
    BigInt sum = 0;
    for (int k = 0; k <= non_neighbors; ++k) {
        sum += table.binomial(non_neighbors, k) * table.factorial(k + preceding) *
               table.factorial(total - k - 1 - preceding);
    }
    return sum;
}

inline PermutationWeight permutation_weight(int total, int degree, int preceding) {
    return permutation_weight(total, degree, preceding, FactorialTable(total));
}

// Per-agent exact allocation plus run diagnostics.
struct ShapleyResult {
    std::vector<Rational> values;
    std::int64_t v_grand = 0;
    std::size_t eval_count = 0;      // distinct characteristic evaluations
    double elapsed_seconds = 0.0;
};

namespace detail {

class StageTimer {
  public:
    StageTimer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

inline BigInt bigint_from_i128(__int128 x) {
    const bool neg = x < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(x) : static_cast<unsigned __int128>(x);
    BigInt out = static_cast<std::uint64_t>(u >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(u);
    return neg ? BigInt(-out) : out;
}

inline void require_same_game(const AgentGraph& g, const CharacteristicFunction& v) {
    if (g.agent_count() != v.agent_count())
        throw std::invalid_argument("shapley: graph and characteristic agent counts differ");
}

// Turn per-agent numerators over the common denominator n! into a result,
// checking exact efficiency against the supplied grand-coalition value.
inline ShapleyResult finish_result(std::vector<BigInt> numerators, const BigInt& n_factorial,
                                   std::int64_t v_grand) {
    ShapleyResult r;
    BigInt total = 0;
    r.values.reserve(numerators.size());
    for (BigInt& num : numerators) {
        total += num;
        r.values.emplace_back(Rational(num, n_factorial));
    }
    if (total != BigInt(v_grand) * n_factorial)
        throw std::logic_error("shapley: allocation does not sum to the grand coalition value");
    r.v_grand = v_grand;
    return r;
}

} // namespace detail

// Fast Shapley for locally collaborative games: each agent's value is a sum
// of marginal contributions over its neighbor subsets, weighted by the exact
// permutation count for that subset size. The characteristic function must
// satisfy the locally collaborative property on g (see
// check_local_collaboration); only coalitions of the form S' and S'+{i} with
// S' inside i's neighborhood are ever evaluated.
inline ShapleyResult fs_lcg_shapley(const AgentGraph& g, MemoizedGame& v) {
    detail::require_same_game(g, v);
    const detail::StageTimer timer;
    const std::size_t evals_before = v.distinct_evaluations();
    const int n = g.agent_count();
    const FactorialTable table(n);

    std::vector<BigInt> numerators(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Coalition hood = g.neighbors(i);
        const int deg = hood.size();
        std::vector<BigInt> weight_by_size(static_cast<std::size_t>(deg) + 1);
        for (int s = 0; s <= deg; ++s)
            weight_by_size[static_cast<std::size_t>(s)] = permutation_weight(n, deg, s, table);

        BigInt acc = 0;
        for (Coalition sub : subsets(hood)) {
            const std::int64_t marginal = v.evaluate(sub.with(i)) - v.evaluate(sub);
            if (marginal != 0)
                acc += weight_by_size[static_cast<std::size_t>(sub.size())] * marginal;
        }
        numerators[static_cast<std::size_t>(i)] = std::move(acc);
    }

    // Efficiency pins down v(N) without evaluating it: the value sum must be
    // an exact integer for any locally collaborative characteristic.
    BigInt total = 0;
    for (const BigInt& num : numerators) total += num;
    const BigInt& n_fact = table.factorial(n);
    if (total % n_fact != 0)
        throw std::domain_error(
            "fs_lcg_shapley: value sum is not integral; characteristic is not locally "
            "collaborative on this graph");
    const BigInt grand = total / n_fact;

    ShapleyResult r = detail::finish_result(std::move(numerators), n_fact,
                                            grand.convert_to<std::int64_t>());
    r.eval_count = v.distinct_evaluations() - evals_before;
    r.elapsed_seconds = timer.seconds();
    return r;
}

// Direct coalition-sum form of the Shapley value:
//   Sh_i = sum_{S not containing i} |S|! (n-|S|-1)! / n! * (v(S+{i}) - v(S)).
// Exponential in n; guarded.
inline ShapleyResult exact_shapley_bruteforce(MemoizedGame& v, int guard = 12) {
    const detail::StageTimer timer;
    const std::size_t evals_before = v.distinct_evaluations();
    const int n = v.agent_count();
    if (n > guard) throw guard_error("exact_shapley_bruteforce: agent count above guard");
    const FactorialTable table(n);

    std::vector<BigInt> size_weight(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s)
        size_weight[static_cast<std::size_t>(s)] = table.factorial(s) * table.factorial(n - s - 1);

    std::vector<BigInt> numerators(static_cast<std::size_t>(n));
    const Coalition all = Coalition::full(n);
    for (int i = 0; i < n; ++i) {
        BigInt acc = 0;
        for (Coalition s : subsets(all.without(i))) {
            const std::int64_t marginal = v.evaluate(s.with(i)) - v.evaluate(s);
            if (marginal != 0)
                acc += size_weight[static_cast<std::size_t>(s.size())] * marginal;
        }
        numerators[static_cast<std::size_t>(i)] = std::move(acc);
    }

    ShapleyResult r = detail::finish_result(std::move(numerators), table.factorial(n),
                                            v.evaluate(all));
    r.eval_count = v.distinct_evaluations() - evals_before;
    r.elapsed_seconds = timer.seconds();
    return r;
}

// Generic exact baseline for graph-restricted games: memoize the
// characteristic on all 2^n coalitions with one ascending sweep, then take
// the same coalition sum. Serves as the runtime comparator for fs_lcg_shapley
// in benchmarks. Marginals are bucketed by coalition size in 128-bit
// accumulators before the one multiplication per size, which keeps the sweep
// itself the dominant cost.
inline ShapleyResult baseline_graph_restricted_shapley(const AgentGraph& g, MemoizedGame& v,
                                                       int guard = 30) {
    detail::require_same_game(g, v);
    const detail::StageTimer timer;
    const std::size_t evals_before = v.distinct_evaluations();
    const int n = g.agent_count();
    if (n > guard) throw guard_error("baseline_graph_restricted_shapley: agent count above guard");
    const FactorialTable table(n);

    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < limit; ++mask)
        v.evaluate(Coalition::from_mask(mask));

    std::vector<BigInt> numerators(static_cast<std::size_t>(n));
    std::vector<__int128> buckets(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::fill(buckets.begin(), buckets.end(), __int128{0});
        const std::uint64_t bit = std::uint64_t{1} << i;
        for (std::uint64_t mask = 0; mask < limit; ++mask) {
            if (mask & bit) continue;
            const std::int64_t marginal = v.evaluate(Coalition::from_mask(mask | bit)) -
                                          v.evaluate(Coalition::from_mask(mask));
            buckets[static_cast<std::size_t>(std::popcount(mask))] += marginal;
        }
        BigInt acc = 0;
        for (int s = 0; s < n; ++s) {
            if (buckets[static_cast<std::size_t>(s)] == 0) continue;
            acc += table.factorial(s) * table.factorial(n - s - 1) *
                   detail::bigint_from_i128(buckets[static_cast<std::size_t>(s)]);
        }
        numerators[static_cast<std::size_t>(i)] = std::move(acc);
    }

    ShapleyResult r = detail::finish_result(std::move(numerators), table.factorial(n),
                                            v.evaluate(Coalition::full(n)));
    r.eval_count = v.distinct_evaluations() - evals_before;
    r.elapsed_seconds = timer.seconds();
    return r;
}

// Outcome of the exhaustive locally-collaborative-property check. On failure,
// `agent` and `context` hold the first violating (x, X) pair found.
struct LocalityReport {
    bool holds = true;
    int agent = -1;
    Coalition context;
};

// True iff for every agent x and every X not containing x, the marginal
// contribution of x to X equals its marginal contribution to X intersected
// with x's neighborhood. Exhaustive in 2^n; guarded.
inline LocalityReport check_local_collaboration(const AgentGraph& g, MemoizedGame& v,
                                                int guard = 16) {
    detail::require_same_game(g, v);
    const int n = g.agent_count();
    if (n > guard) throw guard_error("check_local_collaboration: agent count above guard");

    const Coalition all = Coalition::full(n);
    for (int x = 0; x < n; ++x) {
        const Coalition hood = g.neighbors(x);
        for (Coalition context : subsets(all.without(x))) {
            const Coalition local = context & hood;
            if (local == context) continue; // identical coalitions, trivially equal
            const std::int64_t full_marginal = v.evaluate(context.with(x)) - v.evaluate(context);
            const std::int64_t local_marginal = v.evaluate(local.with(x)) - v.evaluate(local);
            if (full_marginal != local_marginal) return {false, x, context};
        }
    }
    return {};
}

} // namespace lcg
