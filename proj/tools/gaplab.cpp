// gaplab: construct and verify integrality-gap witnesses for densest
// k-subgraph relaxations (Sherali-Adams tables, the mixed-hierarchy PSD
// matrix, generalized BCH codes, Max K-CSP instances, the constraint-variable
// reduction, and Lasserre moment oracles).

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "gaplab/lab.hpp"
#include "gaplab/lasserre.hpp"
#include "gaplab/rates.hpp"
#include "gaplab/sa.hpp"
#include "gaplab/sdp.hpp"

using namespace gaplab;
using nlohmann::json;

namespace {

std::vector<int> parse_terminals(const std::string& csv) {
    std::vector<int> out;
    size_t pos = 0;
    while (pos < csv.size()) {
        size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        out.push_back(std::stoi(csv.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text << "\n";
}

LinearCode code_for(const std::string& code_path, int q, int two_delta, bool dual) {
    LinearCode base =
        code_path.empty() ? build_generalized_bch(q, two_delta) : load_code(code_path);
    return dual ? dual_code(base) : base;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"integrality-gap verification lab for densest k-subgraph"};
    app.require_subcommand(1);

    // ---- graph-gen ----
    struct {
        int n = 0;
        double p = -1;
        uint64_t seed = 0;
        std::string out;
    } gg;
    auto* graph_gen = app.add_subcommand("graph-gen", "sample a G(n,p) graph");
    graph_gen->add_option("--n", gg.n)->required();
    graph_gen->add_option("--p", gg.p, "edge probability (default ln n / sqrt n)");
    graph_gen->add_option("--seed", gg.seed)->required();
    graph_gen->add_option("--out", gg.out)->required();
    graph_gen->callback([&] {
        double p = gg.p >= 0 ? gg.p : gnp_default_p(gg.n);
        save_graph(gen_gnp({gg.n, p, gg.seed}), gg.out);
        std::cout << "wrote " << gg.out << "\n";
    });

    // ---- audit ----
    struct {
        std::string graph, report;
    } au;
    auto* audit = app.add_subcommand("audit", "degree / common-neighbor property audit");
    audit->add_option("--graph", au.graph)->required();
    audit->add_option("--report", au.report);
    audit->callback([&] {
        PropertyReport rep = audit_random_graph_properties(load_graph(au.graph));
        write_or_print(au.report, rep.to_json());
        if (!rep.all_pass()) throw CLI::RuntimeError(2);
    });

    // ---- dks ----
    struct {
        std::string graph, mode = "local";
        int k = 0;
        int restarts = 8;
        uint64_t seed = 0;
        uint64_t budget = 50'000'000;
    } dk;
    auto* dks = app.add_subcommand("dks", "densest k-subgraph search (exact or local)");
    dks->add_option("--graph", dk.graph)->required();
    dks->add_option("--k", dk.k)->required();
    dks->add_option("--mode", dk.mode)->check(CLI::IsMember({"brute", "local"}));
    dks->add_option("--restarts", dk.restarts);
    dks->add_option("--seed", dk.seed)->required();
    dks->add_option("--budget", dk.budget);
    dks->callback([&] {
        Graph g = load_graph(dk.graph);
        DensestResult result = dk.mode == "brute"
                                   ? densest_k_bruteforce(g, dk.k, dk.budget)
                                   : densest_k_localsearch(g, dk.k, dk.restarts, dk.seed);
        json doc = {{"mode", dk.mode},
                    {"k", dk.k},
                    {"edges", result.edge_count},
                    {"vertices", result.vertices}};
        std::cout << doc.dump(1) << "\n";
    });

    // ---- steiner ----
    struct {
        std::string graph, terminals;
    } st;
    auto* steiner = app.add_subcommand("steiner", "exact minimum Steiner tree");
    steiner->add_option("--graph", st.graph)->required();
    steiner->add_option("--terminals", st.terminals, "comma-separated vertex ids")->required();
    steiner->callback([&] {
        Graph g = load_graph(st.graph);
        SteinerResult result = steiner_size(g, parse_terminals(st.terminals));
        std::cout << "size " << result.size << "\n";
        for (auto [u, v] : result.witness) std::cout << u << " " << v << "\n";
    });

    // ---- sa-build ----
    struct {
        std::string graph, out;
        int level = 0;
        int materialize = -1;
    } sb;
    auto* sa_build = app.add_subcommand("sa-build", "build the explicit SA value table");
    sa_build->add_option("--graph", sb.graph)->required();
    sa_build->add_option("--level", sb.level)->required();
    sa_build->add_option("--out", sb.out)->required();
    sa_build->add_option("--materialize", sb.materialize,
                         "max subset size stored (default: full for n <= 64, else 1)");
    sa_build->callback([&] {
        Graph g = load_graph(sb.graph);
        SaAssignment a(g, sb.level);
        save_sa_table(a, sb.out, sb.materialize);
        std::cout << "wrote " << sb.out
                  << (a.audit_warning() ? " (audit warning: construction proceeded)" : "")
                  << (a.level_warning() ? " (level beyond the theorem regime)" : "") << "\n";
    });

    // ---- sa-verify ----
    struct {
        std::string table, family = "all", d = "auto", report;
        long samples = 1000;
        uint64_t seed = 0;
        long k = -1;
        int r = 4;
    } sv;
    auto* sa_verify = app.add_subcommand("sa-verify", "verify SA constraint families exactly");
    sa_verify->add_option("--table", sv.table)->required();
    sa_verify->add_option("--family", sv.family)
        ->check(CLI::IsMember({"all", "size", "density", "inclusion-exclusion", "dominate"}));
    sa_verify->add_option("--d", sv.d, "density value, or 'auto' for n^{1/4}/L");
    sa_verify->add_option("--samples", sv.samples);
    sa_verify->add_option("--seed", sv.seed)->required();
    sa_verify->add_option("--report", sv.report);
    sa_verify->add_option("--k", sv.k, "size-constraint budget (default floor(sqrt(n)))");
    sa_verify->add_option("--r", sv.r, "cap on |S|+|T|");
    sa_verify->callback([&] {
        LoadedSaTable loaded = load_sa_table(sv.table);
        const SaAssignment& a = *loaded.assignment;
        const int64_t n = loaded.graph->n();
        Quartic d = sv.d == "auto" ? Quartic::theta_pow(1, n) / Rational(a.level())
                                   : Quartic(parse_rational(sv.d), n);
        long k = sv.k > 0 ? sv.k
                          : static_cast<long>(std::floor(std::sqrt(static_cast<double>(n))));
        SaSampler sampler;
        sampler.samples = sv.samples;
        sampler.seed = sv.seed;
        sampler.max_total = sv.r;
        std::vector<SaFamily> families;
        if (sv.family == "all")
            families = {SaFamily::density, SaFamily::inclusion_exclusion, SaFamily::dominate};
        else
            families = {*family_from_name(sv.family)};
        json out = json::object();
        bool all_pass = true;
        for (SaFamily family : families) {
            SaVerdict v = verify_family(a, family, sv.r, d, k, sampler);
            all_pass = all_pass && v.pass();
            json violations = json::array();
            for (const auto& viol : v.violations)
                violations.push_back({{"S", viol.S},
                                      {"T", viol.T},
                                      {"vertex", viol.vertex},
                                      {"lhs", viol.lhs},
                                      {"rhs", viol.rhs}});
            out[family_name(family)] = {{"pass", v.pass()},
                                        {"checked", v.checked},
                                        {"violations", v.violation_count},
                                        {"worst_slack", v.worst_slack.str()},
                                        {"witnesses", violations},
                                        {"method", "exact"}};
        }
        SaSampler profile_sampler = sampler;
        profile_sampler.max_t = 0;
        SizeProfile profile = size_constraint_profile(a, profile_sampler);
        out["size_profile"] = {{"max_ratio", profile.max_ratio.str()},
                               {"max_ratio_approx", profile.max_ratio.approx()},
                               {"argmax_S", profile.argmax_S},
                               {"pass_sqrt_n", profile.pass_sqrt_n},
                               {"rows", profile.rows.size()}};
        write_or_print(sv.report, out.dump(1));
        if (!all_pass) throw CLI::RuntimeError(2);
    });

    // ---- psd-check ----
    struct {
        std::string graph, report;
        int level = 0;
        double tol = 1e-8;
    } pc;
    auto* psd = app.add_subcommand("psd-check", "mixed-hierarchy PSD verification");
    psd->add_option("--graph", pc.graph)->required();
    psd->add_option("--level", pc.level)->required();
    psd->add_option("--tol", pc.tol);
    psd->add_option("--report", pc.report);
    psd->callback([&] {
        PsdVerdict verdict = check_mixed_psd(load_graph(pc.graph), pc.level, pc.tol);
        write_or_print(pc.report, verdict.to_json());
        if (!verdict.pass_Z || !verdict.pass_A) throw CLI::RuntimeError(2);
    });

    // ---- bch-gen ----
    struct {
        int q = 0, distance = 0;
        std::string out;
    } bg;
    auto* bch = app.add_subcommand("bch-gen", "construct a generalized BCH code");
    bch->add_option("--q", bg.q)->required();
    bch->add_option("--distance", bg.distance, "distance target 2*delta")->required();
    bch->add_option("--out", bg.out)->required();
    bch->callback([&] {
        save_code(build_generalized_bch(bg.q, bg.distance), bg.out);
        std::cout << "wrote " << bg.out << "\n";
    });

    // ---- code-audit ----
    struct {
        std::string code;
        uint64_t budget = 10'000'000;
    } ca;
    auto* code_audit = app.add_subcommand("code-audit", "brute-force distance and dual checks");
    code_audit->add_option("--code", ca.code)->required();
    code_audit->add_option("--budget", ca.budget);
    code_audit->callback([&] {
        LinearCode code = load_code(ca.code);
        MinDistanceResult dist = min_distance_bruteforce(code, ca.budget);
        LinearCode dual = dual_code(code);
        json doc = {{"K", code.length()},
                    {"dim", code.dim()},
                    {"min_distance", dist.distance},
                    {"degenerate", dist.degenerate},
                    {"dual_dim", dual.dim()},
                    {"gh_zero", true}};  // enforced at construction
        std::cout << doc.dump(1) << "\n";
    });

    // ---- csp-gen / csp-plant ----
    struct {
        int n = 0, q = 3, two_delta = 3;
        long m = 0;
        uint64_t seed = 0;
        std::string code, out, assignment_out;
    } cg;
    auto* csp_gen = app.add_subcommand("csp-gen", "sample a random Max K-CSP(C) instance");
    auto* csp_plant = app.add_subcommand("csp-plant", "plant a satisfiable instance");
    for (auto* cmd : {csp_gen, csp_plant}) {
        cmd->add_option("--n", cg.n)->required();
        cmd->add_option("--m", cg.m)->required();
        cmd->add_option("--q", cg.q);
        cmd->add_option("--two-delta", cg.two_delta);
        cmd->add_option("--code", cg.code, "code file (default: dual of BCH(q, 2delta))");
        cmd->add_option("--seed", cg.seed)->required();
        cmd->add_option("--out", cg.out)->required();
    }
    csp_plant->add_option("--assignment-out", cg.assignment_out);
    csp_gen->callback([&] {
        LinearCode code = code_for(cg.code, cg.q, cg.two_delta, cg.code.empty());
        save_csp(sample_random_instance(cg.n, cg.m, code, cg.seed), cg.out);
        std::cout << "wrote " << cg.out << "\n";
    });
    csp_plant->callback([&] {
        LinearCode code = code_for(cg.code, cg.q, cg.two_delta, cg.code.empty());
        auto [inst, hidden] = plant_satisfiable_instance(cg.n, cg.m, code, cg.seed);
        save_csp(inst, cg.out);
        if (!cg.assignment_out.empty()) {
            json doc = json::array();
            for (uint8_t v : hidden.values) doc.push_back(static_cast<int>(v));
            write_or_print(cg.assignment_out, doc.dump());
        }
        std::cout << "wrote " << cg.out << "\n";
    });

    // ---- csp-audit ----
    struct {
        std::string instance;
        int r = 4;
        double delta = 1.5;
        long samples = 100'000;
        bool sample_flag = false;
        uint64_t seed = 1;
    } cx;
    std::vector<double> expansion_pair;
    auto* csp_audit = app.add_subcommand("csp-audit", "constraint-variable expansion audit");
    csp_audit->add_option("--instance", cx.instance)->required();
    csp_audit->add_option("--expansion", expansion_pair, "r delta")->expected(2);
    csp_audit->add_option("--r", cx.r, "max constraint-set size");
    csp_audit->add_option("--delta", cx.delta);
    csp_audit->add_flag("--sample", cx.sample_flag, "allow sampling past the exhaustive budget");
    csp_audit->add_option("--samples", cx.samples);
    csp_audit->add_option("--seed", cx.seed);
    csp_audit->callback([&] {
        CspInstance inst = load_csp(cx.instance);
        if (expansion_pair.size() == 2) {
            cx.r = static_cast<int>(expansion_pair[0]);
            cx.delta = expansion_pair[1];
        }
        ExpansionVerdict verdict =
            audit_expansion(inst, cx.r, cx.delta, 5'000'000, cx.sample_flag, cx.samples, cx.seed);
        json mins = json::array();
        for (auto [s, u] : verdict.min_union_by_s) mins.push_back({{"s", s}, {"min_union", u}});
        json doc = {{"pass", verdict.pass},
                    {"exhaustive", verdict.exhaustive},
                    {"sets_checked", verdict.sets_checked},
                    {"min_union_by_s", mins},
                    {"witness", verdict.witness}};
        std::cout << doc.dump(1) << "\n";
        if (!verdict.pass) throw CLI::RuntimeError(2);
    });

    // ---- reduce ----
    struct {
        std::string instance, out;
        int beta = 1;
    } rd;
    auto* reduce = app.add_subcommand("reduce", "build the bipartite DkS instance");
    reduce->add_option("--instance", rd.instance)->required();
    reduce->add_option("--beta", rd.beta);
    reduce->add_option("--out", rd.out)->required();
    reduce->callback([&] {
        save_bipartite(BipartiteInstance::build(load_csp(rd.instance), rd.beta), rd.out);
        std::cout << "wrote " << rd.out << "\n";
    });

    // ---- soundness ----
    struct {
        std::string bip, report;
        long budget = 100'000;
        long samples = 50;
        uint64_t seed = 0;
    } sn;
    auto* soundness =
        app.add_subcommand("soundness", "balanced-subgraph search + soundness report");
    soundness->add_option("--bip", sn.bip)->required();
    soundness->add_option("--budget", sn.budget);
    soundness->add_option("--samples", sn.samples);
    soundness->add_option("--seed", sn.seed)->required();
    soundness->add_option("--report", sn.report);
    soundness->callback([&] {
        BipartiteInstance bi = load_bipartite(sn.bip);
        BalancedSubgraphResult best =
            densest_balanced_subgraph(bi, BalancedMode::sampled_local_search,
                                      static_cast<uint64_t>(sn.budget), sn.samples, sn.seed);
        write_or_print(sn.report, soundness_report(bi, best.edge_count).to_json());
    });

    // ---- lasserre-build ----
    struct {
        std::string instance, out;
        bool planted = false;
        int rounds = 2;
    } lb;
    auto* lass_build =
        app.add_subcommand("lasserre-build", "export the planted oracle's Gram table");
    lass_build->add_option("--instance", lb.instance)->required();
    lass_build->add_flag("--planted", lb.planted)->required();
    lass_build->add_option("--rounds", lb.rounds);
    lass_build->add_option("--out", lb.out)->required();
    lass_build->callback([&] {
        CspInstance inst = load_csp(lb.instance);
        PlantedCspOracle oracle = build_planted_csp_oracle(inst, lb.rounds * inst.arity());
        write_or_print(lb.out, csp_gram_to_json(oracle, default_csp_labels(inst)));
    });

    // ---- lasserre-verify ----
    struct {
        std::string oracle, instance, what = "csp", report, d;
        bool planted = false;
        int rounds = 2, beta = 1;
    } lv;
    auto* lass_verify = app.add_subcommand("lasserre-verify", "verify moment-oracle properties");
    lass_verify->add_option("--oracle", lv.oracle, "gram table file");
    lass_verify->add_option("--instance", lv.instance, "csp instance file");
    lass_verify->add_flag("--planted", lv.planted, "build the counting oracle from the instance");
    lass_verify->add_option("--what", lv.what)->check(CLI::IsMember({"csp", "dks", "mindeg"}));
    lass_verify->add_option("--rounds", lv.rounds);
    lass_verify->add_option("--beta", lv.beta);
    lass_verify->add_option("--d", lv.d, "min-degree target (default: realized d*)");
    lass_verify->add_option("--report", lv.report);
    lass_verify->callback([&] {
        if (lv.instance.empty()) throw CLI::ValidationError("--instance is required");
        CspInstance inst = load_csp(lv.instance);
        std::unique_ptr<CspOracle> oracle;
        if (lv.planted) {
            oracle = std::make_unique<PlantedCspOracle>(
                build_planted_csp_oracle(inst, lv.rounds * inst.arity()));
        } else if (!lv.oracle.empty()) {
            std::ifstream in(lv.oracle);
            if (!in) throw std::runtime_error("cannot open " + lv.oracle);
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            oracle = std::make_unique<CspGramTable>(csp_gram_from_json(text));
        } else {
            throw CLI::ValidationError("either --planted or --oracle is required");
        }
        json out;
        bool pass = false;
        auto verdict_json = [](const LasserreVerdict& v) {
            json checks = json::array();
            for (const auto& c : v.checks)
                checks.push_back({{"name", c.name},
                                  {"pass", c.pass},
                                  {"checked", c.checked},
                                  {"witness", c.witness}});
            return json{{"checks", checks},
                        {"gram_lambda_min", v.gram_lambda_min},
                        {"all_pass", v.all_pass()}};
        };
        if (lv.what == "csp") {
            LasserreVerdict v = verify_csp_properties(*oracle, inst);
            out = verdict_json(v);
            pass = v.all_pass();
        } else {
            BipartiteInstance bi = BipartiteInstance::build(inst, lv.beta);
            LiftedDksOracle lifted = lift_to_dks(*oracle, bi, lv.rounds);
            if (lv.what == "dks") {
                LasserreVerdict v = verify_dks_lasserre(lifted, bi);
                out = verdict_json(v);
                pass = v.all_pass();
            } else {
                std::optional<Rational> d;
                if (!lv.d.empty()) d = parse_rational(lv.d);
                MinDegreeVerdict v = verify_min_degree(lifted, bi, d);
                out = verdict_json(v.base);
                out["realized_min_factor"] = rational_str(v.realized_min_factor);
                out["requested_d"] = rational_str(v.requested_d);
                out["pass"] = v.pass;
                pass = v.pass && v.base.all_pass();
            }
        }
        write_or_print(lv.report, out.dump(1));
        if (!pass) throw CLI::RuntimeError(2);
    });

    // ---- rates ----
    struct {
        int two_delta = 4;
        std::string gamma;
        long q = 0, n = 0;
    } ra;
    auto* rates = app.add_subcommand("rates", "parameter-calculus annotations");
    rates->add_option("--two-delta", ra.two_delta);
    rates->add_option("--gamma", ra.gamma, "exact rational gamma (default: maximizing)");
    rates->add_option("--q", ra.q);
    rates->add_option("--n", ra.n);
    rates->callback([&] {
        std::optional<Rational> gamma;
        if (!ra.gamma.empty()) gamma = parse_rational(ra.gamma);
        std::optional<std::pair<long, long>> qn;
        if (ra.q > 0 && ra.n > 0) qn = std::make_pair(ra.q, ra.n);
        std::cout << annotate_rates(ra.two_delta, gamma, qn).to_json() << "\n";
    });

    // ---- run ----
    struct {
        std::string config;
    } rn;
    auto* run = app.add_subcommand("run", "run a configured experiment");
    run->add_option("--config", rn.config)->required();
    run->callback([&] {
        GapReport report = run_experiment(ExperimentConfig::from_file(rn.config));
        std::cout << report.to_string() << "\n";
        if (!report.all_pass) throw CLI::RuntimeError(2);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
