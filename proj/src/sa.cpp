#include "gaplab/sa.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>

#include "gaplab/rng.hpp"
#include "json.hpp"

namespace gaplab {

namespace {

constexpr size_t kMaxRecordedViolations = 16;

std::vector<int> canonical_subset(std::span<const int> subset, int n) {
    std::vector<int> s(subset.begin(), subset.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int v : s)
        if (v < 0 || v >= n) throw std::invalid_argument("subset vertex out of range");
    return s;
}

Rational level_pow(int level, int size) {
    return Rational(int_pow(BigInt(level), static_cast<unsigned>(size)));
}

}  // namespace

SaAssignment::SaAssignment(const Graph& g, int level, AuditMode mode)
    : g_(&g), level_(level), solver_(std::make_unique<SteinerSolver>(g)) {
    if (level < 1) throw std::invalid_argument("SA level must be >= 1");
    switch (mode) {
        case AuditMode::full: {
            PropertyReport rep = audit_random_graph_properties(g);
            audit_warning_ = !rep.all_pass();
            diam2_ = rep.pass_common_lower ? solver_->diameter2() : false;
            break;
        }
        case AuditMode::diameter2_only:
            diam2_ = solver_->diameter2();
            audit_warning_ = !diam2_;
            break;
        case AuditMode::skip:
            diam2_ = false;
            audit_warning_ = true;
            break;
    }
    double ln_n = std::log(static_cast<double>(std::max(g.n(), 3)));
    double lnln = std::log(ln_n);
    level_warning_ = lnln > 0 && static_cast<double>(level) > ln_n / (10.0 * lnln);
}

int SaAssignment::steiner_or_disconnected(std::span<const int> subset) const {
    auto s = canonical_subset(subset, g_->n());
    if (s.empty()) return 0;
    try {
        return solver_->size(s);
    } catch (const DisconnectedTerminals&) {
        return -1;
    }
}

Quartic SaAssignment::value(std::span<const int> subset) const {
    auto s = canonical_subset(subset, g_->n());
    if (static_cast<int>(s.size()) > level_)
        throw std::out_of_range("SA value requested beyond level " + std::to_string(level_));
    if (s.empty()) return Quartic::one(g_->n());
    int st = steiner_or_disconnected(s);
    if (st < 0) return Quartic::zero(g_->n());
    Quartic v = Quartic::theta_pow(-(st + 1), g_->n());
    v /= level_pow(level_, static_cast<int>(s.size()));
    return v;
}

IntegralAssignment::IntegralAssignment(const Graph& g, std::vector<int> chosen)
    : g_(&g), in_set_(static_cast<size_t>(g.n()), 0), chosen_(std::move(chosen)) {
    for (int v : chosen_) {
        if (v < 0 || v >= g.n()) throw std::invalid_argument("chosen vertex out of range");
        in_set_[static_cast<size_t>(v)] = 1;
    }
}

Quartic IntegralAssignment::value(std::span<const int> subset) const {
    for (int v : subset)
        if (v < 0 || v >= g_->n() || !in_set_[static_cast<size_t>(v)])
            return Quartic::zero(g_->n());
    return Quartic::one(g_->n());
}

long IntegralAssignment::min_induced_degree() const {
    long best = -1;
    for (int v : chosen_) {
        long d = 0;
        for (int u : g_->neighbors(v))
            if (in_set_[static_cast<size_t>(u)]) ++d;
        if (best < 0 || d < best) best = d;
    }
    return best;
}

const char* family_name(SaFamily f) {
    switch (f) {
        case SaFamily::size: return "size";
        case SaFamily::density: return "density";
        case SaFamily::inclusion_exclusion: return "inclusion-exclusion";
        case SaFamily::dominate: return "dominate";
    }
    return "?";
}

std::optional<SaFamily> family_from_name(const std::string& name) {
    if (name == "size") return SaFamily::size;
    if (name == "density") return SaFamily::density;
    if (name == "inclusion-exclusion") return SaFamily::inclusion_exclusion;
    if (name == "dominate") return SaFamily::dominate;
    return std::nullopt;
}

namespace {

// sum over J subset of T of (-1)^|J| x(S u J)
Quartic alternating_sum(const SubsetValues& a, const std::vector<int>& S,
                        const std::vector<int>& T) {
    Quartic total = Quartic::zero(a.radicand());
    const size_t tsize = T.size();
    std::vector<int> subset;
    for (uint32_t jmask = 0; jmask < (1u << tsize); ++jmask) {
        subset.assign(S.begin(), S.end());
        for (size_t t = 0; t < tsize; ++t)
            if (jmask >> t & 1u) subset.push_back(T[t]);
        Quartic v = a.value(subset);
        if (std::popcount(jmask) % 2 == 0)
            total += v;
        else
            total -= v;
    }
    return total;
}

// sum over i in V of x(U u {i}), with a bucket fast path for the explicit SA
// solution on diameter-2 graphs.
Quartic profile_sum(const SubsetValues& a, const std::vector<int>& U) {
    const int n = a.graph().n();
    const auto* sa = dynamic_cast<const SaAssignment*>(&a);
    if (sa != nullptr && sa->diameter2() && U.size() <= 2) {
        if (U.empty())
            return Quartic::theta_pow(-2, a.radicand()) * Rational(n) / Rational(sa->level());
        auto counts = sa->solver().count_extensions(U);
        int b = counts.base;
        Quartic tail = Quartic::theta_pow(-(b + 1), a.radicand()) * Rational(counts.same);
        tail += Quartic::theta_pow(-(b + 2), a.radicand()) * Rational(counts.plus_one);
        tail += Quartic::theta_pow(-(b + 3), a.radicand()) * Rational(counts.plus_two_or_more);
        tail /= level_pow(sa->level(), static_cast<int>(U.size()) + 1);
        return tail + sa->value(U) * Rational(static_cast<long>(U.size()));
    }
    Quartic total = Quartic::zero(a.radicand());
    std::vector<int> ext(U.size() + 1);
    std::copy(U.begin(), U.end(), ext.begin());
    for (int i = 0; i < n; ++i) {
        ext.back() = i;
        total += a.value(ext);
    }
    return total;
}

// sum over j in G(i) of x(U u {j}) for the density constraint.
Quartic neighbor_sum(const SubsetValues& a, const std::vector<int>& U, int i) {
    const auto* sa = dynamic_cast<const SaAssignment*>(&a);
    if (sa != nullptr && sa->diameter2() && U.size() == 2 &&
        std::find(U.begin(), U.end(), i) != U.end()) {
        long in_set = 0;
        long c[3] = {0, 0, 0};  // st = 3, 4, 5
        for (int j : a.graph().neighbors(i)) {
            if (j == U[0] || j == U[1]) {
                ++in_set;
                continue;
            }
            int st3 = sa->solver().pair_extension_size(U[0], U[1], j);
            ++c[st3 - 3];
        }
        Quartic total = Quartic::zero(a.radicand());
        for (int t = 0; t < 3; ++t)
            if (c[t])
                total += Quartic::theta_pow(-(t + 4), a.radicand()) * Rational(c[t]);
        total /= level_pow(sa->level(), 3);
        total += sa->value(U) * Rational(in_set);
        return total;
    }
    Quartic total = Quartic::zero(a.radicand());
    std::vector<int> ext(U.size() + 1);
    std::copy(U.begin(), U.end(), ext.begin());
    for (int j : a.graph().neighbors(i)) {
        ext.back() = j;
        total += a.value(ext);
    }
    return total;
}

struct SampleStream {
    const SaSampler& cfg;
    const int n;
    Engine eng;
    // exhaustive enumeration state
    std::vector<std::pair<std::vector<int>, std::vector<int>>> all;
    size_t pos = 0;

    SampleStream(const SaSampler& cfg_, int n_, uint64_t stream)
        : cfg(cfg_), n(n_), eng(make_engine(derive_seed(cfg_.seed, stream))) {
        if (!cfg.exhaustive) return;
        std::vector<int> S, T;
        enumerate_subsets(S, 0, cfg.max_s, [&](const std::vector<int>& s) {
            enumerate_disjoint(s, T, 0,
                               std::min(cfg.max_t, cfg.max_total - static_cast<int>(s.size())));
        });
        if (all.size() > 5'000'000)
            throw BudgetExceeded("exhaustive (S,T) enumeration too large", all.size(), 5'000'000);
    }

    void enumerate_subsets(std::vector<int>& S, int from, int max_size,
                           const std::function<void(const std::vector<int>&)>& emit) {
        emit(S);
        if (static_cast<int>(S.size()) == max_size) return;
        for (int v = from; v < n; ++v) {
            S.push_back(v);
            enumerate_subsets(S, v + 1, max_size, emit);
            S.pop_back();
        }
    }

    void enumerate_disjoint(const std::vector<int>& S, std::vector<int>& T, int from, int max_t) {
        all.emplace_back(S, T);
        if (static_cast<int>(T.size()) == max_t) return;
        for (int v = from; v < n; ++v) {
            if (std::binary_search(S.begin(), S.end(), v)) continue;
            T.push_back(v);
            enumerate_disjoint(S, T, v + 1, max_t);
            T.pop_back();
        }
    }

    bool next(std::vector<int>& S, std::vector<int>& T, int min_s) {
        if (cfg.exhaustive) {
            while (pos < all.size() && static_cast<int>(all[pos].first.size()) < min_s) ++pos;
            if (pos >= all.size()) return false;
            S = all[pos].first;
            T = all[pos].second;
            ++pos;
            return true;
        }
        int smax = std::max(cfg.max_s, min_s);
        auto ssize = static_cast<int>(min_s + next_below(eng, static_cast<uint64_t>(smax - min_s + 1)));
        int tcap = std::min(cfg.max_t, cfg.max_total - ssize);
        auto tsize = static_cast<int>(next_below(eng, static_cast<uint64_t>(tcap + 1)));
        int want = ssize + tsize;
        // partial Fisher-Yates over [n]
        std::vector<int> pool(static_cast<size_t>(n));
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < want; ++i) {
            auto j = static_cast<size_t>(i) + next_below(eng, static_cast<uint64_t>(n - i));
            std::swap(pool[static_cast<size_t>(i)], pool[j]);
        }
        S.assign(pool.begin(), pool.begin() + ssize);
        T.assign(pool.begin() + ssize, pool.begin() + want);
        std::sort(S.begin(), S.end());
        std::sort(T.begin(), T.end());
        return true;
    }
};

void record_violation(SaVerdict& verdict, const std::vector<int>& S, const std::vector<int>& T,
                      int vertex, const Quartic& lhs, const Quartic& rhs) {
    ++verdict.violation_count;
    if (verdict.violations.size() >= kMaxRecordedViolations) return;
    SaViolation v;
    v.S = S;
    v.T = T;
    v.vertex = vertex;
    v.lhs = lhs.str();
    v.rhs = rhs.str();
    v.lhs_approx = lhs.approx();
    v.rhs_approx = rhs.approx();
    verdict.violations.push_back(std::move(v));
}

void fold_slack(SaVerdict& verdict, bool first, const Quartic& slack) {
    if (first || slack < verdict.worst_slack) verdict.worst_slack = slack;
}

}  // namespace

SaVerdict verify_family(const SubsetValues& a, SaFamily family, int r, const Quartic& d, long k,
                        const SaSampler& sampler, DensityScope scope) {
    SaVerdict verdict;
    verdict.family = family;
    verdict.worst_slack = Quartic::zero(a.radicand());
    if (r > a.level_cap() && family != SaFamily::size && family != SaFamily::density)
        throw std::invalid_argument("verification level r exceeds the assignment level");

    const Quartic one = Quartic::one(a.radicand());
    SaSampler cfg = sampler;
    cfg.max_total = std::min(cfg.max_total, r);
    int min_s = family == SaFamily::density ? 1 : 0;
    SampleStream stream(cfg, a.graph().n(), static_cast<uint64_t>(family));

    std::vector<int> S, T;
    long produced = 0;
    bool first = true;
    while ((cfg.exhaustive || produced < cfg.samples) && stream.next(S, T, min_s)) {
        ++produced;
        switch (family) {
            case SaFamily::inclusion_exclusion: {
                Quartic sum = alternating_sum(a, S, T);
                Quartic slack = sum < one - sum ? sum : one - sum;
                fold_slack(verdict, first, slack);
                first = false;
                ++verdict.checked;
                if (sum.sign() < 0 || (sum - one).sign() > 0)
                    record_violation(verdict, S, T, -1, sum, one);
                break;
            }
            case SaFamily::dominate: {
                Quartic sum = alternating_sum(a, S, T);
                Quartic x_s = a.value(S);
                Quartic upper_slack = x_s - sum;
                Quartic lower_slack = sum - x_s / Rational(2);
                Quartic slack = upper_slack < lower_slack ? upper_slack : lower_slack;
                fold_slack(verdict, first, slack);
                first = false;
                ++verdict.checked;
                if (upper_slack.sign() < 0 || lower_slack.sign() < 0)
                    record_violation(verdict, S, T, -1, sum, x_s);
                break;
            }
            case SaFamily::size: {
                // sum_i sum_J (-1)^|J| x(S+J+i) <= k sum_J (-1)^|J| x(S+J)
                Quartic lhs = Quartic::zero(a.radicand());
                Quartic rhs = Quartic::zero(a.radicand());
                std::vector<int> U;
                for (uint32_t jmask = 0; jmask < (1u << T.size()); ++jmask) {
                    U = S;
                    for (size_t t = 0; t < T.size(); ++t)
                        if (jmask >> t & 1u) U.push_back(T[t]);
                    std::sort(U.begin(), U.end());
                    Quartic inner = profile_sum(a, U);
                    Quartic base = a.value(U);
                    if (std::popcount(jmask) % 2 == 0) {
                        lhs += inner;
                        rhs += base;
                    } else {
                        lhs -= inner;
                        rhs -= base;
                    }
                }
                rhs *= Rational(k);
                fold_slack(verdict, first, rhs - lhs);
                first = false;
                ++verdict.checked;
                if ((rhs - lhs).sign() < 0) record_violation(verdict, S, T, -1, lhs, rhs);
                break;
            }
            case SaFamily::density: {
                std::vector<int> vertices;
                if (scope == DensityScope::members_of_S)
                    vertices = S;
                else {
                    vertices.resize(static_cast<size_t>(a.graph().n()));
                    std::iota(vertices.begin(), vertices.end(), 0);
                }
                for (int i : vertices) {
                    Quartic lhs = Quartic::zero(a.radicand());
                    Quartic rhs = Quartic::zero(a.radicand());
                    std::vector<int> U;
                    for (uint32_t jmask = 0; jmask < (1u << T.size()); ++jmask) {
                        U = S;
                        for (size_t t = 0; t < T.size(); ++t)
                            if (jmask >> t & 1u) U.push_back(T[t]);
                        if (std::find(U.begin(), U.end(), i) == U.end()) U.push_back(i);
                        std::sort(U.begin(), U.end());
                        Quartic inner = neighbor_sum(a, U, i);
                        Quartic base = a.value(U);
                        if (std::popcount(jmask) % 2 == 0) {
                            lhs += inner;
                            rhs += base;
                        } else {
                            lhs -= inner;
                            rhs -= base;
                        }
                    }
                    rhs *= d;
                    fold_slack(verdict, first, lhs - rhs);
                    first = false;
                    ++verdict.checked;
                    if ((lhs - rhs).sign() < 0) record_violation(verdict, S, T, i, lhs, rhs);
                }
                break;
            }
        }
    }
    return verdict;
}

DominateResult check_dominate(const SubsetValues& a, std::span<const int> S,
                              std::span<const int> T) {
    auto s = canonical_subset(S, a.graph().n());
    auto t = canonical_subset(T, a.graph().n());
    for (int v : t)
        if (std::binary_search(s.begin(), s.end(), v))
            throw std::invalid_argument("check_dominate: S and T overlap at vertex " +
                                        std::to_string(v));
    DominateResult result;
    result.value = alternating_sum(a, s, t);
    Quartic x_s = a.value(s);
    result.upper = (x_s - result.value).sign() >= 0;
    result.lower = (result.value - x_s / Rational(2)).sign() >= 0;
    return result;
}

SizeProfile size_constraint_profile(const SaAssignment& a, const SaSampler& sampler) {
    SizeProfile profile;
    profile.max_ratio = Quartic::zero(a.radicand());
    SaSampler cfg = sampler;
    cfg.max_t = 0;
    SampleStream stream(cfg, a.graph().n(), /*stream=*/0x5052ULL);
    std::vector<int> S, T;
    long produced = 0;
    bool first = true;
    while ((cfg.exhaustive || produced < cfg.samples) && stream.next(S, T, 0)) {
        ++produced;
        Quartic x_s = a.value(S);
        if (x_s.sign() == 0) continue;  // disconnected S: x_S = 0, ratio undefined

        SizeProfileRow row;
        row.S = S;
        row.steiner_base = a.steiner_or_disconnected(S);
        Quartic tail = Quartic::zero(a.radicand());
        if (S.empty()) {
            row.plus_one = a.graph().n();
            tail = Quartic::theta_pow(-2, a.radicand()) * Rational(a.graph().n()) /
                   Rational(a.level());
        } else {
            a.solver().for_each_extension(S, [&](int, int st_ext) {
                if (st_ext == row.steiner_base)
                    ++row.same;
                else if (st_ext == row.steiner_base + 1)
                    ++row.plus_one;
                else
                    ++row.plus_two;
            });
            row.members = static_cast<long>(S.size());
            int b = row.steiner_base;
            tail = Quartic::theta_pow(-(b + 1), a.radicand()) * Rational(row.same);
            tail += Quartic::theta_pow(-(b + 2), a.radicand()) * Rational(row.plus_one);
            tail += Quartic::theta_pow(-(b + 3), a.radicand()) * Rational(row.plus_two);
            tail /= level_pow(a.level(), static_cast<int>(S.size()) + 1);
        }
        Quartic total = tail + x_s * Rational(row.members);
        // ratio = total / x_S; x_S is 1 at S = empty, else the monomial
        // theta^-(st+1) / L^|S|
        Quartic inv_xs = S.empty() ? Quartic::one(a.radicand())
                                   : Quartic::theta_pow(row.steiner_base + 1, a.radicand()) *
                                         level_pow(a.level(), static_cast<int>(S.size()));
        row.ratio = total * inv_xs;
        row.ratio_approx = row.ratio.approx();
        row.bucket_contrib[0] = static_cast<double>(row.members);
        double l = static_cast<double>(a.level());
        double th = std::pow(static_cast<double>(a.radicand()), 0.25);
        row.bucket_contrib[1] = static_cast<double>(row.same) / th / l;
        row.bucket_contrib[2] = static_cast<double>(row.plus_one) / (th * th) / l;
        row.bucket_contrib[3] = static_cast<double>(row.plus_two) / (th * th * th) / l;
        const char* names[4] = {"members", "same", "plus-one", "plus-two"};
        row.dominant_bucket =
            names[std::max_element(row.bucket_contrib, row.bucket_contrib + 4) -
                  row.bucket_contrib];

        if (first || row.ratio > profile.max_ratio) {
            profile.max_ratio = row.ratio;
            profile.argmax_S = S;
        }
        first = false;
        profile.rows.push_back(std::move(row));
    }
    Quartic sqrt_n = Quartic::theta_pow(2, a.radicand());
    profile.pass_sqrt_n = !first && (profile.max_ratio - sqrt_n).sign() <= 0;
    return profile;
}

std::string quartic_table_str(const Quartic& v) {
    if (v.is_rational()) return rational_str(v.as_rational());
    int nonzero = -1;
    for (int i = 1; i < 4; ++i) {
        if (v.coeffs()[static_cast<size_t>(i)] == 0) continue;
        if (nonzero != -1 || v.coeffs()[0] != 0)
            throw std::invalid_argument("table values must be monomials in n^{1/4}");
        nonzero = i;
    }
    return rational_str(v.coeffs()[static_cast<size_t>(nonzero)]) + "@" + std::to_string(nonzero);
}

Quartic parse_quartic_table_str(const std::string& s, int64_t radicand) {
    auto at = s.find('@');
    if (at == std::string::npos) return Quartic(parse_rational(s), radicand);
    int e = std::stoi(s.substr(at + 1));
    if (e < 0 || e > 3) throw std::invalid_argument("bad theta exponent in '" + s + "'");
    std::array<Rational, 4> c{};
    c[static_cast<size_t>(e)] = parse_rational(s.substr(0, at));
    return Quartic(std::move(c), radicand);
}

void save_sa_table(const SaAssignment& a, const std::string& path, int materialize_max_size) {
    using nlohmann::json;
    const Graph& g = a.graph();
    if (materialize_max_size < 0) materialize_max_size = g.n() <= 64 ? a.level() : 1;
    materialize_max_size = std::min(materialize_max_size, a.level());

    json values = json::object();
    values[""] = "1/1";
    std::vector<int> subset;
    std::function<void(int)> rec = [&](int from) {
        if (!subset.empty()) {
            std::string key;
            for (size_t i = 0; i < subset.size(); ++i)
                key += (i ? "," : "") + std::to_string(subset[i]);
            values[key] = quartic_table_str(a.value(subset));
        }
        if (static_cast<int>(subset.size()) == materialize_max_size) return;
        for (int v = from; v < g.n(); ++v) {
            subset.push_back(v);
            rec(v + 1);
            subset.pop_back();
        }
    };
    rec(0);

    json edges = json::array();
    for (auto [u, v] : g.edges()) edges.push_back(json::array({u, v}));
    json doc = {{"version", 1},
                {"kind", "sa-table"},
                {"n", g.n()},
                {"L", a.level()},
                {"audit_warning", a.audit_warning()},
                {"level_warning", a.level_warning()},
                {"graph", {{"n", g.n()}, {"edges", edges}}},
                {"values", values}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write table file: " + path);
    out << doc.dump(1) << "\n";
}

LoadedSaTable load_sa_table(const std::string& path, SaAssignment::AuditMode mode) {
    using nlohmann::json;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table file: " + path);
    json doc = json::parse(in);
    if (doc.value("kind", "") != "sa-table") throw std::runtime_error("not an sa-table file");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : doc.at("graph").at("edges"))
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    LoadedSaTable loaded;
    loaded.graph = std::make_unique<Graph>(
        Graph::from_edges(doc.at("graph").at("n").get<int>(), std::move(edges)));
    loaded.assignment =
        std::make_unique<SaAssignment>(*loaded.graph, doc.at("L").get<int>(), mode);
    for (const auto& [key, val] : doc.at("values").items()) {
        std::vector<int> subset;
        size_t pos = 0;
        while (pos < key.size()) {
            size_t comma = key.find(',', pos);
            if (comma == std::string::npos) comma = key.size();
            subset.push_back(std::stoi(key.substr(pos, comma - pos)));
            pos = comma + 1;
        }
        Quartic stored = parse_quartic_table_str(val.get<std::string>(), loaded.graph->n());
        if (stored != loaded.assignment->value(subset))
            throw std::runtime_error("table value mismatch at subset {" + key + "}");
    }
    return loaded;
}

}  // namespace gaplab
