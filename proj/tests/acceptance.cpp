// Acceptance suite: one check per numbered criterion, each printing a single
// [PASS]/[FAIL] line plus indented detail. Run all criteria or a single one
// with --criterion N. Exit code = number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gaplab/lasserre.hpp"
#include "gaplab/rates.hpp"
#include "gaplab/rng.hpp"
#include "gaplab/sa.hpp"
#include "gaplab/sdp.hpp"
#include "oracles.hpp"

using namespace gaplab;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

LinearCode working_code() { return dual_code(build_generalized_bch(3, 3)); }

// ---------------------------------------------------------------- criterion 1
bool criterion1(std::ostream& log) {
    bool ok = true;
    for (int n : {1024, 2048}) {
        int passing = 0;
        double worst_seconds = 0;
        for (uint64_t seed = 1; seed <= 10; ++seed) {
            auto start = std::chrono::steady_clock::now();
            Graph g = gen_gnp({n, gnp_default_p(n), seed});
            PropertyReport rep = audit_random_graph_properties(g);
            double elapsed = seconds_since(start);
            worst_seconds = std::max(worst_seconds, elapsed);
            if (rep.all_pass()) ++passing;
        }
        log << "    n=" << n << ": " << passing << "/10 seeds pass, worst " << worst_seconds
            << "s/seed\n";
        ok = ok && passing >= 9 && worst_seconds <= 60.0;
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 2
bool criterion2(std::ostream& log) {
    long mismatches = 0, agreements = 0;
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        int n = 6 + static_cast<int>(seed % 7);  // 6..12
        double p = 0.2 + 0.05 * static_cast<double>(seed % 5);
        Graph g = gen_gnp({n, p, seed});
        SteinerSolver solver(g);
        std::vector<int> subset;
        std::function<void(int, int)> rec = [&](int from, int want) {
            if (static_cast<int>(subset.size()) == want) {
                int oracle = oracles::exhaustive_steiner_size(g, subset);
                int dp = -1;
                try {
                    dp = solver.solve(subset).size;
                } catch (const DisconnectedTerminals&) {
                }
                if (dp != oracle)
                    ++mismatches;
                else
                    ++agreements;
                return;
            }
            for (int v = from; v < n; ++v) {
                subset.push_back(v);
                rec(v + 1, want);
                subset.pop_back();
            }
        };
        for (int size = 1; size <= 4; ++size) rec(0, size);
    }
    log << "    " << agreements << " terminal sets agree, " << mismatches << " mismatches\n";
    return mismatches == 0;
}

// ---------------------------------------------------------------- criterion 3
bool criterion3(std::ostream& log) {
    bool ok = true;
    {
        const int n = 4096, level = 4;
        Graph g = gen_gnp({n, gnp_default_p(n), 1});
        SaAssignment a(g, level);
        if (a.audit_warning()) {
            log << "    n=4096 seed 1: audit failed (construction proceeded)\n";
            ok = false;
        }
        Quartic d = Quartic::theta_pow(1, n) / Rational(level);  // n^{1/4}/L = 2
        SaSampler sampler;  // all |S| + |T| <= 4 splits, sampled
        sampler.samples = 1000;
        sampler.seed = 1;
        sampler.max_s = 4;
        sampler.max_t = 4;
        sampler.max_total = 4;
        SaVerdict ie = verify_family(a, SaFamily::inclusion_exclusion, 4, d, 64, sampler);
        SaVerdict dom = verify_family(a, SaFamily::dominate, 4, d, 64, sampler);
        SaSampler density_sampler = sampler;  // S of size <= 2, every i in S
        density_sampler.max_s = 2;
        density_sampler.max_t = 0;
        SaVerdict density = verify_family(a, SaFamily::density, 4, d, 64, density_sampler);
        log << "    inclusion-exclusion: " << ie.checked << " checked, " << ie.violation_count
            << " violations\n";
        log << "    dominate: " << dom.checked << " checked, " << dom.violation_count
            << " violations\n";
        log << "    density (d = n^{1/4}/L = 2): " << density.checked << " checked, "
            << density.violation_count << " violations\n";
        ok = ok && ie.pass() && dom.pass() && density.pass();
    }
    {
        // Size-constraint profile at n = 16384: the <= sqrt(n) flag is
        // reported, and on failure the violating Steiner bucket must be
        // localized -- the clause is diagnostic, not asymptotic (the paper's
        // condition (2L log n)^{2L} < n^{1/4} fails badly at this n).
        const int n = 16384, level = 4;
        for (uint64_t seed = 1; seed <= 3; ++seed) {
            Graph g = gen_gnp({n, gnp_default_p(n), seed});
            SaAssignment a(g, level, SaAssignment::AuditMode::diameter2_only);
            SaSampler sampler;
            sampler.samples = 100;
            sampler.seed = seed;
            sampler.max_s = 2;
            sampler.max_t = 0;
            SizeProfile profile = size_constraint_profile(a, sampler);
            log << "    n=16384 seed " << seed << ": max ratio " << profile.max_ratio.approx()
                << " vs sqrt(n) = 128, flag " << (profile.pass_sqrt_n ? "pass" : "exceeded")
                << "\n";
            if (!profile.pass_sqrt_n) {
                bool localized = false;
                for (const auto& row : profile.rows) {
                    if (row.S != profile.argmax_S) continue;
                    // diagnostic quality gate: buckets partition V and the
                    // dominant bucket is named
                    bool counts_ok = row.members + row.same + row.plus_one + row.plus_two ==
                                     static_cast<long>(n);
                    localized = counts_ok && row.dominant_bucket[0] != '\0';
                    log << "      violating bucket: " << row.dominant_bucket << " (members "
                        << row.members << ", same " << row.same << ", +1 " << row.plus_one
                        << ", +2 " << row.plus_two << ")"
                        << (localized ? "" : "  LOCALIZATION BROKEN") << "\n";
                }
                ok = ok && localized;
            }
        }
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 4
bool criterion4(std::ostream& log) {
    auto start = std::chrono::steady_clock::now();
    // First-level PSD needs L >= |lambda_min(A)| / n^{1/4} (about 4.3 at
    // n=500, 4.7 at n=1000); the criterion does not pin L, so run at L = 6.
    const int level = 6;
    bool ok = true;
    for (int n : {500, 1000}) {
        for (uint64_t seed = 1; seed <= 5; ++seed) {
            Graph g = gen_gnp({n, gnp_default_p(n), seed});
            PsdVerdict verdict = check_mixed_psd(g, level, 1e-8);
            if (!verdict.pass_Z || !verdict.pass_A) {
                log << "    n=" << n << " seed " << seed
                    << ": lambda_min_Z = " << verdict.lambda_min_Z
                    << ", lambda_min_A = " << verdict.lambda_min_A << " (bound "
                    << verdict.bound_A << ") FAIL\n";
                ok = false;
            }
        }
    }
    double elapsed = seconds_since(start);
    log << "    L=" << level << ", 5 seeds per n in {500, 1000}, total " << elapsed << "s\n";
    return ok && elapsed <= 120.0;
}

// ---------------------------------------------------------------- criterion 5
bool criterion5(std::ostream& log) {
    bool ok = true;
    const std::pair<int, int> params[] = {{3, 3}, {3, 4}, {4, 3}, {5, 3}};
    for (auto [q, two_delta] : params) {
        LinearCode code = build_generalized_bch(q, two_delta);
        const int K = q * q - 1;
        const int expected_dim = K - 2 * two_delta + 3;  // K - 4 delta + 3
        MinDistanceResult dist = min_distance_bruteforce(code, 20'000'000);
        LinearCode dual = dual_code(code);
        const int t = 2 * two_delta - 3;  // 4 delta - 3
        bool dual_size_ok = dual.dim() == t;
        if (dual.size() <= 100000)
            dual_size_ok =
                dual_size_ok && static_cast<double>(dual.all_codewords().size()) == dual.size();
        const FieldSpec& f = code.field();
        bool gh_zero = true;
        for (int i = 0; i < code.generator().rows && gh_zero; ++i)
            for (int j = 0; j < code.parity().rows && gh_zero; ++j) {
                int acc = 0;
                for (int c = 0; c < K; ++c)
                    acc = f.add(acc, f.mul(code.generator().at(i, c), code.parity().at(j, c)));
                gh_zero = acc == 0;
            }
        bool this_ok =
            dist.distance >= two_delta && code.dim() == expected_dim && dual_size_ok && gh_zero;
        log << "    (q=" << q << ", 2d=" << two_delta << "): [" << K << "," << code.dim()
            << "] distance " << dist.distance << " (>= " << two_delta << "), dual dim "
            << dual.dim() << " (= " << t << "), GH^T=0 " << (gh_zero ? "yes" : "NO")
            << (this_ok ? "" : "  FAIL") << "\n";
        ok = ok && this_ok;
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 6
bool criterion6(std::ostream& log) {
    bool ok = true;
    LinearCode code = working_code();
    const double p0 = 1.0 / 243.0;  // q^{t-K} = 3^{-5}
    {
        int within = 0;
        for (uint64_t seed = 1; seed <= 10; ++seed) {
            CspInstance inst = sample_random_instance(200, 10, code, seed);
            Engine eng = make_engine(derive_seed(seed, 0x66726571ULL));
            const long trials = 10000;
            long hits = 0;
            Assignment a;
            a.values.resize(200);
            for (long t = 0; t < trials; ++t) {
                for (auto& v : a.values) v = static_cast<uint8_t>(next_below(eng, 3));
                hits += count_satisfied(inst, a);
            }
            double freq = static_cast<double>(hits) / (static_cast<double>(trials) * 10.0);
            double sigma = std::sqrt(p0 * (1 - p0) / (static_cast<double>(trials) * 10.0));
            if (std::abs(freq - p0) <= 3 * sigma) ++within;
        }
        log << "    satisfaction frequency within 3 sigma of 3^-5: " << within << "/10 seeds\n";
        ok = ok && within >= 9;
    }
    {
        int passing = 0, passing_weak = 0, passing_delta2 = 0;
        for (uint64_t seed = 1; seed <= 10; ++seed) {
            CspInstance inst = sample_random_instance(200, 10, code, seed);
            ExpansionVerdict verdict = audit_expansion(inst, 4, 1.5);
            if (verdict.pass) ++passing;
            bool weak = true;  // non-strict threshold, diagnostic only
            for (auto [s, u] : verdict.min_union_by_s) weak = weak && 2L * u >= 13L * s;
            if (weak) ++passing_weak;
            if (audit_expansion(inst, 4, 2.0).pass) ++passing_delta2;
        }
        log << "    exhaustive expansion (s in [2,4], delta = 1.5, strict >): " << passing
            << "/10 seeds pass (criterion: >= 9)\n";
        log << "    informational: non-strict >= threshold " << passing_weak
            << "/10; delta = 2.0 " << passing_delta2 << "/10\n";
        if (passing < 9)
            log << "    note: measured per-seed pass probability is ~0.65 at these pinned\n"
                   "    parameters (s up to 4 of m = 10 constraints is outside the lemma's\n"
                   "    s <= eta*n regime), so >= 9/10 is a ~8% event; see decisions ledger\n";
        ok = ok && passing >= 9;
    }
    return ok;
}

// ------------------------------------------------------- criteria 7 and 8
bool criterion7(std::ostream& log) {
    auto start = std::chrono::steady_clock::now();
    LinearCode code = working_code();
    auto [inst, hidden] = plant_satisfiable_instance(10, 10, code, 1);
    BipartiteInstance bi = BipartiteInstance::build(inst, 1);
    PlantedCspOracle oracle = build_planted_csp_oracle(bi.instance(), 16);
    LiftedDksOracle lifted = lift_to_dks(oracle, bi, 2);

    LasserreCheckOptions opts;
    opts.quad_samples = 10000;
    opts.pair_samples = 100;
    opts.seed = 1;

    bool ok = true;
    LasserreVerdict csp = verify_csp_properties(oracle, bi.instance(), opts);
    for (const auto& check : csp.checks) {
        log << "    csp " << check.name << ": " << (check.pass ? "pass" : "FAIL") << " ("
            << check.checked << " checked)" << (check.pass ? "" : " witness: " + check.witness)
            << "\n";
        ok = ok && check.pass;
    }
    log << "    csp gram lambda_min = " << csp.gram_lambda_min << "\n";
    ok = ok && csp.gram_lambda_min >= -1e-8;

    LasserreVerdict dks = verify_dks_lasserre(lifted, bi, opts);
    for (const auto& check : dks.checks) {
        log << "    dks " << check.name << ": " << (check.pass ? "pass" : "FAIL") << " ("
            << check.checked << " checked)" << (check.pass ? "" : " witness: " + check.witness)
            << "\n";
        ok = ok && check.pass;
    }
    log << "    dks gram lambda_min = " << dks.gram_lambda_min << "\n";
    ok = ok && dks.gram_lambda_min >= -1e-8;

    Rational objective(0);
    {
        std::vector<long> pair(2);
        for (long l = 0; l < bi.num_left(); ++l) {
            pair[0] = l;
            bi.for_each_left_neighbor(l, [&](long r) {
                pair[1] = r;
                objective += lifted.norm2(pair);
            });
        }
    }
    log << "    lifted objective = " << rational_str(objective) << " (expected 80/1)\n";
    ok = ok && objective == Rational(80);

    double elapsed = seconds_since(start);
    log << "    runtime " << elapsed << "s (budget 300s)\n";
    return ok && elapsed <= 300.0;
}

bool criterion8(std::ostream& log) {
    LinearCode code = working_code();
    auto [inst, hidden] = plant_satisfiable_instance(10, 10, code, 1);
    BipartiteInstance bi = BipartiteInstance::build(inst, 1);
    PlantedCspOracle oracle = build_planted_csp_oracle(bi.instance(), 16);
    LiftedDksOracle lifted = lift_to_dks(oracle, bi, 2);

    LasserreCheckOptions opts;
    opts.pair_samples = 50;
    opts.seed = 1;
    MinDegreeVerdict verdict = verify_min_degree(lifted, bi, std::nullopt, opts);
    bool ok = verdict.pass;
    for (const auto& check : verdict.base.checks) {
        log << "    " << check.name << ": " << (check.pass ? "pass" : "FAIL") << " ("
            << check.checked << " checked)" << (check.pass ? "" : " witness: " + check.witness)
            << "\n";
        ok = ok && check.pass;
    }
    log << "    realized d* = " << rational_str(verdict.realized_min_factor)
        << " (left factor beta K = 8)\n";
    return ok;
}

// ---------------------------------------------------------------- criterion 9
bool criterion9(std::ostream& log) {
    bool ok = true;
    LinearCode code = working_code();
    CspInstance inst = sample_random_instance(10, 10, code, 3);
    BipartiteInstance bi = BipartiteInstance::build(inst, 1);
    const FieldSpec& f = code.field();

    long classify_mismatches = 0;
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        Engine eng = make_engine(seed);
        std::vector<char> flags(static_cast<size_t>(bi.num_right_base()), 0);
        std::vector<int> pool(static_cast<size_t>(bi.num_right_base()));
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < 20; ++i) {
            auto j = static_cast<size_t>(i) +
                     next_below(eng, static_cast<uint64_t>(bi.num_right_base() - i));
            std::swap(pool[static_cast<size_t>(i)], pool[j]);
            flags[static_cast<size_t>(pool[static_cast<size_t>(i)])] = 1;
        }
        PoorlySatisfiedReport report = classify_poorly_satisfied(bi, flags);
        for (long i = 0; i < 10; ++i) {
            int best = 0;
            const auto& c = inst.constraints[static_cast<size_t>(i)];
            for (const auto& word : code.all_codewords()) {
                int agr = 0;
                for (int t = 0; t < 8; ++t) {
                    int alpha =
                        f.sub(word[static_cast<size_t>(t)], c.shift[static_cast<size_t>(t)]);
                    long rbase = static_cast<long>(c.vars[static_cast<size_t>(t)]) * 3 + alpha;
                    agr += flags[static_cast<size_t>(rbase)];
                }
                best = std::max(best, agr);
            }
            bool expect_poor = best * 3 <= 64;
            if (report.max_agreement[static_cast<size_t>(i)] != best ||
                (report.poorly_satisfied[static_cast<size_t>(i)] == 1) != expect_poor)
                ++classify_mismatches;
        }
    }
    log << "    poorly-satisfied classification: " << classify_mismatches
        << " mismatches over 10 R sets\n";
    ok = ok && classify_mismatches == 0;

    LinearCode small_code = [&] {
        FqMatrix g(2, 4);
        g.at(0, 0) = 1;
        g.at(0, 2) = 1;
        g.at(0, 3) = 1;
        g.at(1, 1) = 1;
        g.at(1, 2) = 1;
        g.at(1, 3) = 2;
        return dual_code(LinearCode::from_generator(3, g));
    }();
    long greedy_mismatches = 0, greedy_checked = 0;
    for (int n : {4, 5, 6}) {  // |R'| = 12, 15, 18
        CspInstance small = sample_random_instance(n, n, small_code, 11);
        BipartiteInstance sbi = BipartiteInstance::build(small, 1);
        Engine eng = make_engine(static_cast<uint64_t>(100 + n));
        for (int rep = 0; rep < 25; ++rep) {
            std::vector<long> pool(static_cast<size_t>(sbi.num_left()));
            std::iota(pool.begin(), pool.end(), 0);
            for (long i = 0; i < sbi.k(); ++i) {
                auto j = static_cast<size_t>(i) +
                         next_below(eng, static_cast<uint64_t>(sbi.num_left() - i));
                std::swap(pool[static_cast<size_t>(i)], pool[j]);
            }
            std::vector<long> left(pool.begin(), pool.begin() + sbi.k());
            long greedy = best_for_left_set(sbi, left, sbi.k()).edge_count;
            std::vector<long> rights(static_cast<size_t>(sbi.num_right()));
            std::iota(rights.begin(), rights.end(), sbi.num_left());
            long best = -1;
            std::vector<long> chosen;
            std::function<void(size_t)> rec = [&](size_t from) {
                if (static_cast<long>(chosen.size()) == sbi.k()) {
                    best = std::max(best, sbi.count_edges(left, chosen));
                    return;
                }
                for (size_t i = from;
                     i + (static_cast<size_t>(sbi.k()) - chosen.size()) <= rights.size(); ++i) {
                    chosen.push_back(rights[i]);
                    rec(i + 1);
                    chosen.pop_back();
                }
            };
            rec(0);
            ++greedy_checked;
            if (greedy != best) ++greedy_mismatches;
        }
    }
    log << "    greedy vs exhaustive right selection: " << greedy_mismatches
        << " mismatches over " << greedy_checked << " left sets\n";
    ok = ok && greedy_mismatches == 0;

    BalancedSubgraphResult best =
        densest_balanced_subgraph(bi, BalancedMode::sampled_local_search, 100'000, 20, 5);
    SoundnessReport report = soundness_report(bi, best.edge_count);
    std::string json = report.to_json();
    bool fields = json.find("best_edges") != std::string::npos &&
                  json.find("completeness") != std::string::npos &&
                  json.find("ratio") != std::string::npos &&
                  json.find("bound_17") != std::string::npos &&
                  report.status == "informational";
    log << "    soundness report: " << json << "\n";
    ok = ok && fields;
    return ok;
}

// --------------------------------------------------------------- criterion 10
bool criterion10(std::ostream& log) {
    const int level = 4;
    std::vector<double> medians;
    for (int n : {256, 1024, 4096}) {
        int k = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
        double relax_d = std::pow(static_cast<double>(n), 0.25) / level;
        std::vector<double> ratios;
        for (uint64_t seed = 1; seed <= 5; ++seed) {
            Graph g = gen_gnp({n, gnp_default_p(n), seed});
            DensestResult integral = densest_k_localsearch(g, k, 8, seed);
            double density = 2.0 * static_cast<double>(integral.edge_count) / k;
            ratios.push_back(relax_d / density);
        }
        std::sort(ratios.begin(), ratios.end());
        medians.push_back(ratios[2]);
        log << "    n=" << n << ": median ratio " << ratios[2] << " (k=" << k
            << ", d_relax=" << relax_d << ")\n";
    }
    bool ok = medians[0] <= medians[1] && medians[1] <= medians[2];
    log << "    non-decreasing: " << (ok ? "yes" : "NO") << "\n";
    return ok;
}

// --------------------------------------------------------------- criterion 11
bool criterion11(std::ostream& log) {
    RateAnnotations r4 = annotate_rates(4);
    RateAnnotations r3 = annotate_rates(3);
    log << "    2delta=4: gamma = " << rational_str(r4.gamma)
        << ", epsilon = " << rational_str(r4.epsilon) << "\n";
    log << "    2delta=3: t = " << r3.t << "\n";
    return r4.epsilon == Rational(2, 53) && r4.gamma == Rational(2, 33) && r3.t == 3;
}

struct Criterion {
    int id;
    const char* title;
    std::function<bool(std::ostream&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    const std::vector<Criterion> criteria = {
        {1, "random-graph audits (n in {1024, 2048}, 10 seeds)", criterion1},
        {2, "Steiner DP vs exhaustive search (100 graphs, |S| <= 4)", criterion2},
        {3, "SA exact families at n = 4096 + size profile at n = 16384", criterion3},
        {4, "mixed-hierarchy PSD at n in {500, 1000}", criterion4},
        {5, "generalized BCH codes: distance, dimension, dual, GH^T", criterion5},
        {6, "CSP satisfaction frequency + exhaustive expansion audit", criterion6},
        {7, "Lasserre completeness suite on the planted preset", criterion7},
        {8, "min-degree factor identities", criterion8},
        {9, "soundness machinery (classification, greedy=exhaustive, report)", criterion9},
        {10, "gap-trend check across n in {256, 1024, 4096}", criterion10},
        {11, "rate annotations (epsilon = 2/53 at 2delta = 4)", criterion11},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (only != 0 && criterion.id != only) continue;
        std::ostringstream log;
        bool pass = false;
        std::string error;
        auto start = std::chrono::steady_clock::now();
        try {
            pass = criterion.run(log);
        } catch (const std::exception& e) {
            error = e.what();
        }
        double elapsed = seconds_since(start);
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << criterion.id << ": "
                  << criterion.title << "  (" << elapsed << "s)\n";
        std::cout << log.str();
        if (!error.empty()) std::cout << "    exception: " << error << "\n";
        if (!pass) ++failures;
    }
    if (only == 0)
        std::cout << (failures == 0 ? "ALL CRITERIA PASS"
                                    : "FAILURES: " + std::to_string(failures))
                  << "\n";
    return failures;
}
