// ffcg — generate, solve, allocate, verify, and benchmark freight
// collaboration instances from the command line.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcg/bench.hpp"

namespace {

using namespace lcg;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 2;
// infeasible_error -> 3 and guard_error -> 4, mapped at the bottom of main.

FfcgInstance load_instance(const std::string& path) {
    return instance_from_json(read_json_file(path));
}

// Coalition spec: comma-separated forwarder ids; empty means everyone.
Coalition parse_coalition(const FfcgInstance& inst, const std::string& spec) {
    const int n = static_cast<int>(inst.forwarders.size());
    if (spec.empty()) return Coalition::full(n);
    Coalition c;
    std::stringstream ss(spec);
    std::string name;
    while (std::getline(ss, name, ',')) {
        const auto it = std::find(inst.forwarders.begin(), inst.forwarders.end(), name);
        if (it == inst.forwarders.end())
            throw std::invalid_argument("unknown forwarder id: " + name);
        c = c.with(static_cast<int>(it - inst.forwarders.begin()));
    }
    return c;
}

std::string format_rational(const Rational& v) {
    if (denominator(v) == 1) return numerator(v).str();
    return numerator(v).str() + "/" + denominator(v).str();
}

std::string format_percent(const Rational& v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", v.convert_to<double>() * 100.0);
    return buf;
}

int cmd_generate(const ScenarioConfig& cfg, const std::string& out_path) {
    const FfcgInstance inst = generate_instance(cfg);
    const AgentGraph g = build_collaboration_graph(inst);
    const auto lanes = decompose_by_port_pair(inst, Coalition::full(g.agent_count()));
    write_json_file(out_path, instance_to_json(inst));
    std::cout << "wrote " << out_path << ": " << to_string(cfg.kind) << " scenario, seed "
              << cfg.seed << '\n'
              << "  forwarders " << inst.forwarders.size() << ", collaboration edges "
              << g.edge_count() << ", active lanes " << lanes.size() << ", services "
              << inst.services.size() << ", requests " << inst.requests.size() << '\n';
    return kExitOk;
}

int cmd_solve(const std::string& instance_path, const std::string& coalition_spec,
              PackMode mode, const std::string& out_path) {
    const FfcgInstance inst = load_instance(instance_path);
    const Coalition who = parse_coalition(inst, coalition_spec);
    const Assignment a = solve_coalition(inst, who, mode);
    std::cout << "coalition {";
    bool first = true;
    for (int i : who.members()) {
        std::cout << (first ? "" : ", ") << inst.forwarders[static_cast<std::size_t>(i)];
        first = false;
    }
    std::cout << "}: total cost " << a.total_cost << " using " << a.boxes.size()
              << " boxes\n";
    if (!out_path.empty()) {
        write_json_file(out_path, assignment_to_json(a, inst, who));
        std::cout << "wrote " << out_path << '\n';
    }
    return kExitOk;
}

int cmd_shapley(const std::string& instance_path, const std::string& method, PackMode mode,
                const std::string& out_path) {
    const FfcgInstance inst = load_instance(instance_path);
    const AgentGraph g = build_collaboration_graph(inst);
    const FfcgCharacteristic v(inst, mode);
    MemoizedGame game(v);
    const ShapleyResult result = run_method(method, g, game);
    const SavingsReport savings = savings_report(game, result);

    std::size_t width = 9;
    for (const auto& name : inst.forwarders) width = std::max(width, name.size());
    std::printf("%-*s  %14s  %12s  %9s\n", static_cast<int>(width), "forwarder", "allocation",
                "standalone", "savings");
    for (std::size_t i = 0; i < inst.forwarders.size(); ++i)
        std::printf("%-*s  %14s  %12lld  %9s\n", static_cast<int>(width),
                    inst.forwarders[i].c_str(), format_rational(result.values[i]).c_str(),
                    static_cast<long long>(savings.standalone[i]),
                    format_percent(savings.per_forwarder[i]).c_str());
    std::printf("grand coalition cost %lld, average savings %s\n",
                static_cast<long long>(result.v_grand), format_percent(savings.average).c_str());
    std::printf("method %s: %zu evaluations in %.3fs\n", method.c_str(), result.eval_count,
                result.elapsed_seconds);
    if (!out_path.empty()) {
        write_json_file(out_path, shapley_to_json(result, savings, inst));
        std::cout << "wrote " << out_path << '\n';
    }
    return kExitOk;
}

// --- verify ------------------------------------------------------------

// Exhaustive packing of every member request across ALL lanes at once:
// requests go one at a time into an open box or a fresh box from any service
// with budget left. Never splits by lane, so it cross-checks the per-lane
// decomposition used by the solver. Explores only solutions cheaper than
// `limit`; returns the best cost found, or limit+1 if none exists.
class JointPacker {
  public:
    JointPacker(const FfcgInstance& inst, Coalition who) {
        std::map<PortPair, int> lane_ids;
        auto lane_of = [&](const PortPair& p) {
            return lane_ids.emplace(p, static_cast<int>(lane_ids.size())).first->second;
        };
        for (std::size_t i = 0; i < inst.services.size(); ++i) {
            const Service& s = inst.services[i];
            if (!who.contains(s.owner)) continue;
            services_.push_back({lane_of(s.pair), s.cost_per_box, capacity_of(s, inst),
                                 s.box_count});
        }
        for (const Request& r : inst.requests) {
            if (!who.contains(r.owner)) continue;
            requests_.push_back({lane_of(r.pair), r.volume});
        }
        std::sort(requests_.begin(), requests_.end(),
                  [](const Req& a, const Req& b) { return a.volume > b.volume; });
    }

    std::int64_t solve(std::int64_t limit) {
        best_ = limit + 1;
        budget_.assign(services_.size(), 0);
        for (std::size_t i = 0; i < services_.size(); ++i) budget_[i] = services_[i].boxes;
        open_.clear();
        open_.reserve(requests_.size());
        nodes_ = 0;
        dfs(0, 0);
        return best_;
    }

  private:
    struct Svc { int lane, cost, cap, boxes; };
    struct Req { int lane, volume; };
    struct Box { std::size_t service; int free; };

    void dfs(std::size_t pos, std::int64_t cost) {
        if (++nodes_ > 50'000'000)
            throw guard_error("joint packing oracle exceeded its node budget");
        if (cost >= best_) return;
        if (pos == requests_.size()) {
            best_ = cost;
            return;
        }
        const Req& r = requests_[pos];
        std::vector<std::pair<std::size_t, int>> tried; // (service class rep, free) seen
        for (std::size_t b = 0; b < open_.size(); ++b) {
            // Index access throughout: deeper recursion grows open_ and may
            // reallocate, so references across dfs() would dangle.
            const Svc& s = services_[open_[b].service];
            if (s.lane != r.lane || open_[b].free < r.volume) continue;
            const auto key = std::make_pair(class_rep(open_[b].service), open_[b].free);
            if (std::find(tried.begin(), tried.end(), key) != tried.end()) continue;
            tried.push_back(key);
            open_[b].free -= r.volume;
            dfs(pos + 1, cost);
            open_[b].free += r.volume;
        }
        std::vector<std::size_t> opened_classes;
        for (std::size_t si = 0; si < services_.size(); ++si) {
            const Svc& s = services_[si];
            if (s.lane != r.lane || s.cap < r.volume || budget_[si] == 0) continue;
            const std::size_t rep = class_rep(si);
            if (std::find(opened_classes.begin(), opened_classes.end(), rep) !=
                opened_classes.end())
                continue;
            opened_classes.push_back(rep);
            --budget_[si];
            open_.push_back({si, s.cap - r.volume});
            dfs(pos + 1, cost + s.cost);
            open_.pop_back();
            ++budget_[si];
        }
    }

    // Services with equal (lane, cost, cap) are interchangeable.
    std::size_t class_rep(std::size_t si) const {
        const Svc& s = services_[si];
        for (std::size_t j = 0; j < si; ++j)
            if (services_[j].lane == s.lane && services_[j].cost == s.cost &&
                services_[j].cap == s.cap)
                return j;
        return si;
    }

    std::vector<Svc> services_;
    std::vector<Req> requests_;
    std::vector<int> budget_;
    std::vector<Box> open_;
    std::int64_t best_ = 0;
    std::uint64_t nodes_ = 0;
};

int cmd_verify(const std::string& instance_path, PackMode mode) {
    const FfcgInstance inst = load_instance(instance_path);
    const int n = static_cast<int>(inst.forwarders.size());
    if (n > 16) throw guard_error("verify is exhaustive in 2^n and refuses n > 16");
    const AgentGraph g = build_collaboration_graph(inst);
    const Coalition all = Coalition::full(n);
    const auto lanes = decompose_by_port_pair(inst, all);
    std::cout << "instance: " << n << " forwarders, " << lanes.size() << " active lanes, "
              << inst.services.size() << " services, " << inst.requests.size()
              << " requests\n";
    bool ok = true;
    const auto report = [&ok](bool pass, const std::string& line) {
        std::cout << (pass ? "[ok] " : "[FAIL] ") << line << '\n';
        ok = ok && pass;
    };

    {
        const FfcgCharacteristic v(inst, mode);
        MemoizedGame game(v);
        const LocalityReport loc = check_local_collaboration(g, game);
        std::ostringstream line;
        line << "locally collaborative: every marginal depends only on neighbors ("
             << (std::uint64_t{1} << n) << " coalitions)";
        if (!loc.holds)
            line << " — violated by agent " << inst.forwarders[static_cast<std::size_t>(loc.agent)]
                 << " against " << loc.context.to_string();
        report(loc.holds, line.str());
    }

    if (inst.requests.size() <= 8 && lanes.size() <= 2) {
        const std::int64_t decomposed = phi(inst, all, PackMode::exact);
        const std::int64_t joint = JointPacker(inst, all).solve(decomposed);
        std::ostringstream line;
        line << "decomposition: joint packing over all lanes costs " << joint
             << ", per-lane total is " << decomposed;
        report(joint == decomposed, line.str());
    } else {
        std::cout << "[skipped] decomposition: joint oracle needs <= 8 requests and <= 2 lanes\n";
    }

    {
        bool dominated = true;
        int compared = 0;
        for (const auto& lane : lanes) {
            std::vector<PackItem> items;
            for (int ri : lane.requests)
                items.push_back({ri, inst.requests[static_cast<std::size_t>(ri)].volume});
            std::vector<PackService> svcs;
            for (int si : lane.services) {
                const Service& s = inst.services[static_cast<std::size_t>(si)];
                svcs.push_back({si, s.cost_per_box, s.box_count, capacity_of(s, inst)});
            }
            const std::int64_t exact =
                detail::solve_group(inst, lane, PackMode::exact).total_cost;
            try {
                const std::int64_t greedy = ffd_greedy(items, svcs).assignment.total_cost;
                dominated = dominated && exact <= greedy;
                ++compared;
            } catch (const infeasible_error&) {
                // greedy dead end on a feasible lane: dominance is vacuous there
            }
        }
        std::ostringstream line;
        line << "greedy dominance: exact cost <= first-fit-decreasing cost on " << compared
             << " of " << lanes.size() << " lanes";
        report(dominated, line.str());
    }

    {
        const FactorialTable table(n);
        bool identity = true;
        for (int i = 0; i < n; ++i) {
            const int d = g.degree(i);
            BigInt sum = 0;
            for (int j = 0; j <= d; ++j)
                sum += table.binomial(d, j) * permutation_weight(n, d, j, table);
            identity = identity && sum == table.factorial(n);
        }
        std::ostringstream line;
        line << "permutation weights: subset-size weights sum to " << n << "! for every degree";
        report(identity, line.str());
    }

    std::cout << (ok ? "verification passed" : "verification FAILED") << '\n';
    return ok ? kExitOk : kExitVerifyFail;
}

int cmd_bench(const std::string& config_path, int jobs, const std::string& out_path) {
    const SweepConfig cfg = sweep_from_json(read_json_file(config_path));
    const auto rows = run_sweep(cfg, jobs);
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (!rows[i].error.empty())
            std::cerr << "row " << i << " (" << rows[i].method << ", n=" << rows[i].n
                      << ", seed=" << rows[i].seed << ") failed: " << rows[i].error << '\n';
    if (out_path.empty()) {
        write_csv(std::cout, rows);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot write " + out_path);
        write_csv(out, rows);
        std::cout << "wrote " << rows.size() << " rows to " << out_path << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Shapley cost allocation for collaborative freight consolidation"};
    app.require_subcommand(1);
    int rc = kExitOk;

    // generate
    auto* gen = app.add_subcommand("generate", "sample a scenario and write the instance JSON");
    std::string gen_config, gen_kind, gen_out = "instance.json";
    int gen_n = 0, gen_pairs = 0, gen_deg = 0, gen_capacity = 0;
    std::uint64_t gen_seed = 0;
    double gen_rewire = -1.0, gen_exponent = 0.0;
    bool gen_shared = false;
    gen->add_option("--config", gen_config, "scenario config JSON; flags override its fields");
    gen->add_option("--kind", gen_kind, "uniform | small_world | power_law");
    gen->add_option("-n,--forwarders", gen_n, "number of forwarders");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--pairs", gen_pairs, "port-pair pool size (uniform scenarios)");
    gen->add_option("--deg", gen_deg, "mean degree (small-world scenarios)");
    gen->add_option("--rewire", gen_rewire, "rewiring probability (small-world scenarios)");
    gen->add_option("--exponent", gen_exponent, "degree-law exponent (power-law scenarios)");
    gen->add_option("--capacity", gen_capacity, "box capacity in volume units");
    gen->add_flag("--shared-pool", gen_shared, "draw lanes from a shared pool so they can repeat");
    gen->add_option("-o,--out", gen_out, "output path")->capture_default_str();
    gen->callback([&] {
        ScenarioConfig cfg =
            gen_config.empty() ? ScenarioConfig{} : config_from_json(read_json_file(gen_config));
        if (gen->count("--kind")) cfg.kind = kind_from_string(gen_kind);
        if (gen->count("--forwarders")) cfg.n_forwarders = gen_n;
        if (gen->count("--seed")) cfg.seed = gen_seed;
        if (gen->count("--pairs")) cfg.n_port_pairs = gen_pairs;
        if (gen->count("--deg")) cfg.avg_degree = gen_deg;
        if (gen->count("--rewire")) cfg.rewire_prob = gen_rewire;
        if (gen->count("--exponent")) cfg.power_exponent = gen_exponent;
        if (gen->count("--capacity")) cfg.box_capacity = gen_capacity;
        if (gen->count("--shared-pool")) cfg.shared_pool = gen_shared;
        validate_config(cfg);
        rc = cmd_generate(cfg, gen_out);
    });

    // solve
    auto* solve = app.add_subcommand("solve", "pack one coalition's requests at minimum cost");
    std::string solve_instance, solve_coalition_spec, solve_out;
    bool solve_exact = false;
    solve->add_option("-i,--instance", solve_instance, "instance JSON path")->required();
    solve->add_option("--coalition", solve_coalition_spec,
                      "comma-separated forwarder ids (default: all)");
    solve->add_flag("--exact", solve_exact, "skip the greedy bound step and search exhaustively");
    solve->add_option("-o,--out", solve_out, "write the assignment JSON here");
    solve->callback([&] {
        rc = cmd_solve(solve_instance, solve_coalition_spec,
                       solve_exact ? PackMode::exact : PackMode::two_step, solve_out);
    });

    // shapley
    auto* shap = app.add_subcommand("shapley", "allocate the grand-coalition cost exactly");
    std::string shap_instance, shap_method = "fs_lcg", shap_out;
    bool shap_exact = false;
    shap->add_option("-i,--instance", shap_instance, "instance JSON path")->required();
    shap->add_option("--method", shap_method, "fs_lcg | baseline | bruteforce")
        ->capture_default_str();
    shap->add_flag("--exact", shap_exact, "skip the greedy bound step and search exhaustively");
    shap->add_option("-o,--out", shap_out, "write the allocation JSON here");
    shap->callback([&] {
        rc = cmd_shapley(shap_instance, shap_method,
                         shap_exact ? PackMode::exact : PackMode::two_step, shap_out);
    });

    // verify
    auto* verify = app.add_subcommand("verify", "run the structural property checks (n <= 16)");
    std::string verify_instance;
    bool verify_exact = false;
    verify->add_option("-i,--instance", verify_instance, "instance JSON path")->required();
    verify->add_flag("--exact", verify_exact, "verify the exhaustive solver instead of two-step");
    verify->callback([&] {
        rc = cmd_verify(verify_instance, verify_exact ? PackMode::exact : PackMode::two_step);
    });

    // bench
    auto* bench = app.add_subcommand("bench", "run a sweep and emit CSV");
    std::string bench_config, bench_out;
    int bench_jobs = 0;
    bench->add_option("--config", bench_config, "sweep config JSON")->required();
    bench->add_option("--jobs", bench_jobs, "worker threads (default: hardware cores)");
    bench->add_option("-o,--out", bench_out, "CSV path (default: stdout)");
    bench->callback([&] { rc = cmd_bench(bench_config, bench_jobs, bench_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const lcg::guard_error& e) {
        std::cerr << "guard violation: " << e.what() << '\n';
        return 4;
    } catch (const lcg::infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return rc;
}
