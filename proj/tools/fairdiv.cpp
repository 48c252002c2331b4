#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "fairdiv/bidding.hpp"
#include "fairdiv/exante.hpp"
#include "fairdiv/generators.hpp"
#include "fairdiv/ladder.hpp"
#include "fairdiv/shares.hpp"
#include "fairdiv/xosalloc.hpp"

using namespace fairdiv;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFalsified = 2;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("FAIRSHARE_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 0;
}

Json partition_json(const FractionalPartition& fp) {
    Json parts = Json::array();
    for (const auto& p : fp.parts) {
        parts.push_back({{"bundle", p.bundle.to_string()}, {"weight", p.weight.str()}});
    }
    return Json{{"rho", fp.rho.str()}, {"parts", std::move(parts)}};
}

int cmd_shares(const std::string& path, int agent_index) {
    Instance inst = load_instance(path);
    if (agent_index < 0 || agent_index >= inst.agent_count()) {
        throw Error("no such agent: " + std::to_string(agent_index));
    }
    const auto& agent = inst.agent(agent_index);
    Json out;
    out["agent"] = agent_index;
    out["entitlement"] = agent.entitlement.str();
    if (agent.entitlement.numerator() == 1 && agent.entitlement.denominator() <= 5 &&
        inst.item_count() <= 12) {
        int n = static_cast<int>(agent.entitlement.denominator().convert_to<long long>());
        auto report = share_relations(agent.valuation, n);
        out["mms"] = report.mms_value->str();
        Json mms_parts = Json::array();
        for (const auto& b : report.mms_partition) mms_parts.push_back(b.to_string());
        out["mms_partition"] = std::move(mms_parts);
        out["aps"] = report.aps_value.str();
        out["mes"] = report.mes_value.str();
        out["aps_partition"] = partition_json(report.aps_partition);
        out["mes_partition"] = partition_json(report.mes_partition);
        if (report.subadditive) out["subadditive"] = *report.subadditive;
        if (report.xos) out["xos"] = *report.xos;
    } else {
        out["mms"] = nullptr;
        auto ap = aps(agent.valuation, agent.entitlement);
        auto me = mes(agent.valuation, agent.entitlement);
        if (me.value < ap.value) throw RelationViolated("MES below APS");
        out["aps"] = ap.value.str();
        out["mes"] = me.value.str();
        out["aps_partition"] = partition_json(ap.partition);
        out["mes_partition"] = partition_json(me.partition);
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

Json agent_rows(const Instance& inst, const Allocation& alloc, const std::vector<Rat>& shares) {
    Json rows = Json::array();
    for (int i = 0; i < inst.agent_count(); ++i) {
        Rat value = inst.agent(i).valuation.eval(alloc.bundles[i]);
        Json row;
        row["agent"] = i;
        row["bundle"] = alloc.bundles[i].to_string();
        row["value"] = value.str();
        if (!shares.empty()) {
            row["aps"] = shares[i].str();
            row["ratio"] = shares[i].is_zero() ? "inf" : (value / shares[i]).str();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

int cmd_allocate(const std::string& path, const std::string& algo) {
    Instance inst = load_instance(path);
    Json out;
    out["algo"] = algo;
    if (algo == "welfare-max") {
        std::vector<Valuation> vals;
        for (const auto& a : inst.agents()) vals.push_back(a.valuation);
        auto alloc = welfare_max(inst, vals);
        out["agents"] = agent_rows(inst, alloc, {});
    } else if (algo == "apsxos") {
        auto result = apsxos_allocate(inst);
        out["agents"] = agent_rows(inst, result.allocation, result.aps);
    } else if (algo == "one-sixth") {
        auto result = allocate_one_sixth(inst);
        out["agents"] = agent_rows(inst, result.allocation, result.aps);
        Json steps = Json::array();
        for (const auto& s : result.steps) {
            steps.push_back({{"agent", s.agent},
                             {"case", s.kind == ReplacementStep::Kind::SingleItem
                                          ? "single-item"
                                          : "multiple-items"},
                             {"old", s.old_bundle.to_string()},
                             {"new", s.new_bundle.to_string()},
                             {"welfare_before", s.welfare_before.str()},
                             {"welfare_after", s.welfare_after.str()}});
        }
        out["steps"] = std::move(steps);
    } else if (algo == "four-seventeenths") {
        auto result = allocate_equal_417(inst);
        lemma817_check(inst, result);
        out["agents"] = agent_rows(inst, result.allocation, result.aps);
        Json removals = Json::array();
        for (const auto& r : result.step1) {
            removals.push_back({{"agent", r.agent}, {"set", r.set.to_string()}});
        }
        out["step1"] = std::move(removals);
    } else {
        throw Error("unknown algorithm: " + algo);
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

StrategyPtr make_strategy(const std::string& spec, std::uint64_t seed) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    if (name == "one-shot") {
        if (colon != std::string::npos) {
            return one_shot_strategy(Rat::parse(spec.substr(colon + 1)));
        }
        return one_shot_strategy();
    }
    if (name == "greedy") return greedy_strategy();
    if (name == "random") return random_strategy(seed);
    throw Error("unknown strategy: " + name);
}

int cmd_bid(const std::string& path, const std::string& strategies_spec,
            const std::string& mode_name, std::uint64_t seed) {
    Instance inst = load_instance(path);
    std::vector<StrategyPtr> strategies;
    std::string rest = strategies_spec;
    while (!rest.empty()) {
        auto comma = rest.find(',');
        strategies.push_back(make_strategy(rest.substr(0, comma), seed + strategies.size()));
        rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
    }
    GameMode mode = mode_name == "plain" ? GameMode::Plain : GameMode::Extended;
    auto t = run_game(inst, strategies, mode, lowest_index_tie(), seed);
    std::cout << transcript_to_jsonl(t);
    return kExitOk;
}

int cmd_verify_appendix(int k, int samples, std::uint64_t seed, int jobs) {
    std::atomic<int> failures{0};
    auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            Rng rng(seed + static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ull);
            std::vector<int> weights;
            int total = 0;
            for (int j = 0; j < k; ++j) {
                int w = 1 + static_cast<int>(rng() % 100);
                weights.push_back(w);
                total += w;
            }
            int slack = 1 + static_cast<int>(rng() % 100);
            YSeq y;
            for (int w : weights) y.y.push_back(Rat(w, total + slack));
            try {
                verify_appendix(y);
            } catch (const TheoremViolated&) {
                ++failures;
            }
        }
    };
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        worker(0, samples);
    } else {
        std::vector<std::thread> threads;
        int chunk = (samples + jobs - 1) / jobs;
        for (int t = 0; t < jobs; ++t) {
            int begin = t * chunk;
            int end = std::min(samples, begin + chunk);
            if (begin < end) threads.emplace_back(worker, begin, end);
        }
        for (auto& t : threads) t.join();
    }
    Json out{{"k", k}, {"samples", samples}, {"violations", failures.load()}};
    std::cout << out.dump(2) << "\n";
    return failures.load() == 0 ? kExitOk : kExitFalsified;
}

int cmd_verify_ladder(const std::string& path) {
    Instance inst = load_instance(path);
    Json agents = Json::array();
    for (int i = 0; i < inst.agent_count(); ++i) {
        const auto& v = inst.agent(i).valuation;
        Json row;
        row["agent"] = i;
        bool subadd = false;
        try {
            subadd = class_check(v, ValuationClass::Subadditive);
        } catch (const TooLarge&) {
            row["skipped"] = "class check too large";
            agents.push_back(std::move(row));
            continue;
        }
        row["subadditive"] = subadd;
        if (!subadd) {
            agents.push_back(std::move(row));
            continue;
        }
        int k = choose_k(inst.item_count());
        Ladder ladder = compute_ladder(v, inst.all_items(), k);
        Json entries = Json::array();
        for (int e : ladder.entries) entries.push_back(e);
        row["k"] = k;
        row["ladder"] = std::move(entries);
        auto lemmas = check_ladder_lemmas(v, inst.all_items(), k);
        row["superadditive"] = lemmas.superadditive;
        row["replacement_sets"] = lemmas.replacement_sets;
        Rat bound = payment_bound(ladder, Rat(1));
        row["payment_bound"] = bound.str();
        bool within_cap = Rat(inst.item_count()) <= Rat::pow(Rat(k - 1), k - 1);
        if (!lemmas.superadditive || !lemmas.replacement_sets || (within_cap && bound < Rat(1))) {
            throw LemmaViolated("ladder verification failed for agent " + std::to_string(i));
        }
        agents.push_back(std::move(row));
    }
    std::cout << Json{{"agents", std::move(agents)}}.dump(2) << "\n";
    return kExitOk;
}

int cmd_verify_relations(const std::string& path) {
    Instance inst = load_instance(path);
    Json agents = Json::array();
    for (int i = 0; i < inst.agent_count(); ++i) {
        const auto& agent = inst.agent(i);
        Json row;
        row["agent"] = i;
        if (agent.entitlement.numerator() == 1 && agent.entitlement.denominator() <= 5 &&
            inst.item_count() <= 12) {
            int n = static_cast<int>(agent.entitlement.denominator().convert_to<long long>());
            auto report = share_relations(agent.valuation, n);  // throws on violation
            row["mms"] = report.mms_value->str();
            row["aps"] = report.aps_value.str();
            row["mes"] = report.mes_value.str();
        } else {
            auto ap = aps(agent.valuation, agent.entitlement);
            auto me = mes(agent.valuation, agent.entitlement);
            if (me.value < ap.value) throw RelationViolated("MES below APS");
            row["aps"] = ap.value.str();
            row["mes"] = me.value.str();
        }
        agents.push_back(std::move(row));
    }
    std::cout << Json{{"agents", std::move(agents)}}.dump(2) << "\n";
    return kExitOk;
}

int cmd_verify_negative(int k, int q, const std::string& eps_text, int seeds,
                        std::uint64_t seed) {
    auto neg = gen_negative_instance(k, q, Rat::parse(eps_text));
    int kk = choose_k(neg.instance.item_count(), neg.instance.agent(0).entitlement);
    std::vector<std::pair<std::string, StrategyPtr>> battery;
    battery.emplace_back("one-shot", one_shot_strategy(neg.protagonist_aps / Rat(kk)));
    battery.emplace_back("greedy", greedy_strategy());
    for (int s = 0; s < seeds; ++s) {
        battery.emplace_back("random-" + std::to_string(s),
                             random_strategy(seed + static_cast<std::uint64_t>(s)));
    }
    Json runs = Json::array();
    bool violated = false;
    for (auto& [name, protagonist] : battery) {
        std::vector<StrategyPtr> all{protagonist};
        for (const auto& s : neg.adversaries) all.push_back(s);
        auto t = run_game(neg.instance, all, GameMode::Extended, lowest_index_tie(), seed);
        bool ok = t.final_values[0] <= neg.value_bound;
        violated = violated || !ok;
        runs.push_back({{"strategy", name},
                        {"value", t.final_values[0].str()},
                        {"bound", neg.value_bound.str()},
                        {"ok", ok}});
    }
    Json out{{"k", k}, {"q", q}, {"bound", neg.value_bound.str()}, {"runs", std::move(runs)}};
    std::cout << out.dump(2) << "\n";
    return violated ? kExitFalsified : kExitOk;
}

int cmd_exante(const std::string& path, const std::string& share_name, std::uint64_t seed,
               int trials) {
    Instance inst = load_instance(path);
    ShareKind kind = share_name == "mms" ? ShareKind::Mms : ShareKind::Mes;
    auto result = exante_opt(inst, kind);
    auto clp = clp_solve(inst);
    auto rounding = round_solution(inst, clp, seed, trials);
    Json agents = Json::array();
    for (int i = 0; i < inst.agent_count(); ++i) {
        const auto& row = rounding.agents[i];
        Json j;
        j["agent"] = i;
        j["lp_contribution"] = row.lp_contribution.str();
        j["empirical_mean"] = row.empirical_mean.str();
        j["ratio"] = row.ratio.str();
        j["share"] = result.shares[i].str();
        j["ratio_to_share"] = result.shares[i].is_zero()
                                  ? "inf"
                                  : (row.empirical_mean / result.shares[i]).str();
        j["expected_under_opt"] = result.expected[i].str();
        agents.push_back(std::move(j));
    }
    Json out;
    out["share"] = share_name;
    out["opt_ratio"] = result.ratio.str();
    out["clp_objective"] = clp.objective.str();
    out["trials"] = rounding.trials;
    out["agents"] = std::move(agents);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

struct GenerateArgs {
    int n = 3;
    int m = 4;
    int k = 2;
    int q = 8;
    std::string eps = "1/2";
    std::string cls = "xos";
    bool unequal = false;
};

int cmd_generate(const std::string& what, const GenerateArgs& a, std::uint64_t seed) {
    if (what == "triangles") {
        std::cout << instance_to_json(two_triangle_instance(a.n));
        return kExitOk;
    }
    if (what == "vector") {
        VectorClass vc = a.cls == "xos" ? VectorClass::Xos : VectorClass::Subadditive;
        std::cout << instance_to_json(gen_vector_instance(a.n, vc));
        return kExitOk;
    }
    if (what == "negative") {
        auto neg = gen_negative_instance(a.k, a.q, Rat::parse(a.eps));
        std::cout << instance_to_json(neg.instance);
        return kExitOk;
    }
    Rng rng(seed);
    RandomInstanceOptions opt;
    if (a.cls == "additive") opt.cls = GenClass::Additive;
    else if (a.cls == "xos") opt.cls = GenClass::Xos;
    else if (a.cls == "subadditive") opt.cls = GenClass::SubadditiveTable;
    else if (a.cls == "monotone") opt.cls = GenClass::MonotoneTable;
    else throw Error("unknown class: " + a.cls);
    opt.m = a.m;
    opt.n = a.n;
    opt.equal_entitlements = !a.unequal;
    std::cout << instance_to_json(random_instance(rng, opt));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact fair-division toolkit: share benchmarks, bidding games, "
                 "guaranteed allocations, and verification suites"};
    app.require_subcommand(1);
    std::uint64_t seed = default_seed();

    std::string shares_file = "-";
    int shares_agent = 0;
    auto* shares_cmd = app.add_subcommand("shares", "Share benchmarks for one agent");
    shares_cmd->add_option("file", shares_file, "instance JSON ('-' for stdin)");
    shares_cmd->add_option("--agent", shares_agent, "agent index");

    std::string alloc_file = "-";
    std::string algo = "apsxos";
    auto* alloc_cmd = app.add_subcommand("allocate", "Run an allocation algorithm");
    alloc_cmd->add_option("file", alloc_file, "instance JSON ('-' for stdin)");
    alloc_cmd->add_option("--algo", algo,
                          "apsxos | one-sixth | four-seventeenths | welfare-max");

    std::string bid_file = "-";
    std::string strategies = "one-shot,greedy";
    std::string mode = "extended";
    auto* bid_cmd = app.add_subcommand("bid", "Simulate the bidding game");
    bid_cmd->add_option("file", bid_file, "instance JSON ('-' for stdin)");
    bid_cmd->add_option("--strategies", strategies,
                        "comma list: one-shot[:p/q] | greedy | random");
    bid_cmd->add_option("--mode", mode, "plain | extended");
    bid_cmd->add_option("--seed", seed, "random seed");

    auto* verify_cmd = app.add_subcommand("verify", "Mechanical verification suites");
    verify_cmd->require_subcommand(1);
    int vk = 6, vsamples = 1000, vjobs = 1;
    auto* vap = verify_cmd->add_subcommand("appendix", "Recurrence and path-sum claims");
    vap->add_option("--k", vk, "sequence length");
    vap->add_option("--samples", vsamples, "number of random sequences");
    vap->add_option("--seed", seed, "random seed");
    vap->add_option("--jobs", vjobs, "parallel workers");
    std::string vlad_file = "-";
    auto* vlad = verify_cmd->add_subcommand("ladder", "Ladder lemmas and payment bound");
    vlad->add_option("file", vlad_file, "instance JSON ('-' for stdin)");
    std::string vrel_file = "-";
    auto* vrel = verify_cmd->add_subcommand("relations", "Share relation caps");
    vrel->add_option("file", vrel_file, "instance JSON ('-' for stdin)");
    int nk = 2, nq = 8, nseeds = 10;
    std::string neps = "1/2";
    auto* vneg = verify_cmd->add_subcommand("negative", "Adversarial bound battery");
    vneg->add_option("--k", nk, "value levels per group");
    vneg->add_option("--q", nq, "growth factor");
    vneg->add_option("--eps", neps, "danger threshold (rational)");
    vneg->add_option("--seeds", nseeds, "number of random protagonists");
    vneg->add_option("--seed", seed, "base seed");

    auto* gen_cmd = app.add_subcommand("generate", "Instance generators");
    gen_cmd->require_subcommand(1);
    GenerateArgs ga;
    auto* gtri = gen_cmd->add_subcommand("triangles", "Two-triangle gap instance");
    gtri->add_option("--n", ga.n, "number of agents (>= 3)");
    auto* gvec = gen_cmd->add_subcommand("vector", "Coordinate-fiber instance");
    gvec->add_option("--n", ga.n, "dimension (2 or 3)");
    gvec->add_option("--class", ga.cls, "subadditive | xos");
    auto* gneg = gen_cmd->add_subcommand("negative", "Adversarial instance");
    gneg->add_option("--k", ga.k, "value levels per group");
    gneg->add_option("--q", ga.q, "growth factor");
    gneg->add_option("--eps", ga.eps, "danger threshold (rational)");
    auto* grand = gen_cmd->add_subcommand("random", "Seeded random instance");
    grand->add_option("--class", ga.cls, "additive | xos | subadditive | monotone");
    grand->add_option("--m", ga.m, "items");
    grand->add_option("--n", ga.n, "agents");
    grand->add_option("--seed", seed, "random seed");
    grand->add_flag("--unequal", ga.unequal, "random entitlements instead of 1/n");

    std::string ex_file = "-";
    std::string ex_share = "mes";
    int ex_trials = 10000;
    auto* ex_cmd = app.add_subcommand("exante", "Lottery ratio optimum and rounding report");
    ex_cmd->add_option("file", ex_file, "instance JSON ('-' for stdin)");
    ex_cmd->add_option("--share", ex_share, "mes | mms");
    ex_cmd->add_option("--trials", ex_trials, "rounding trials");
    ex_cmd->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
        if (shares_cmd->parsed()) return cmd_shares(shares_file, shares_agent);
        if (alloc_cmd->parsed()) return cmd_allocate(alloc_file, algo);
        if (bid_cmd->parsed()) return cmd_bid(bid_file, strategies, mode, seed);
        if (verify_cmd->parsed()) {
            if (vap->parsed()) return cmd_verify_appendix(vk, vsamples, seed, vjobs);
            if (vlad->parsed()) return cmd_verify_ladder(vlad_file);
            if (vrel->parsed()) return cmd_verify_relations(vrel_file);
            if (vneg->parsed()) return cmd_verify_negative(nk, nq, neps, nseeds, seed);
        }
        if (gen_cmd->parsed()) {
            if (gtri->parsed()) return cmd_generate("triangles", ga, seed);
            if (gvec->parsed()) return cmd_generate("vector", ga, seed);
            if (gneg->parsed()) return cmd_generate("negative", ga, seed);
            if (grand->parsed()) return cmd_generate("random", ga, seed);
        }
        if (ex_cmd->parsed()) return cmd_exante(ex_file, ex_share, seed, ex_trials);
        std::cerr << "no subcommand selected\n";
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const Falsification& e) {
        std::cerr << "FALSIFIED: " << e.what() << "\n";
        return kExitFalsified;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
