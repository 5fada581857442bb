#include "gaplab/code.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "gaplab/graph.hpp"  // BudgetExceeded
#include "json.hpp"

namespace gaplab {

int rref(FqMatrix& m, const FieldSpec& field) {
    int rank = 0;
    for (int col = 0; col < m.cols && rank < m.rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < m.rows; ++r)
            if (m.at(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int c = 0; c < m.cols; ++c) std::swap(m.at(pivot, c), m.at(rank, c));
        int scale = field.inv(m.at(rank, col));
        for (int c = 0; c < m.cols; ++c)
            m.at(rank, c) = static_cast<uint8_t>(field.mul(m.at(rank, c), scale));
        for (int r = 0; r < m.rows; ++r) {
            if (r == rank || m.at(r, col) == 0) continue;
            int factor = m.at(r, col);
            for (int c = 0; c < m.cols; ++c)
                m.at(r, c) = static_cast<uint8_t>(
                    field.sub(m.at(r, c), field.mul(factor, m.at(rank, c))));
        }
        ++rank;
    }
    return rank;
}

FqMatrix nullspace_basis(const FqMatrix& m, const FieldSpec& field) {
    FqMatrix red = m;
    int rank = rref(red, field);
    std::vector<int> pivot_col(static_cast<size_t>(rank), -1);
    std::vector<char> is_pivot(static_cast<size_t>(m.cols), 0);
    for (int r = 0, c = 0; r < rank; ++r) {
        while (c < m.cols && red.at(r, c) == 0) ++c;
        pivot_col[static_cast<size_t>(r)] = c;
        is_pivot[static_cast<size_t>(c)] = 1;
    }
    FqMatrix basis(m.cols - rank, m.cols);
    int row = 0;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[static_cast<size_t>(free)]) continue;
        basis.at(row, free) = 1;
        for (int r = 0; r < rank; ++r)
            basis.at(row, pivot_col[static_cast<size_t>(r)]) =
                static_cast<uint8_t>(field.neg(red.at(r, free)));
        ++row;
    }
    return basis;
}

bool same_row_space(const FqMatrix& a, const FqMatrix& b, const FieldSpec& field) {
    if (a.cols != b.cols) return false;
    FqMatrix ra = a, rb = b;
    int rka = rref(ra, field);
    int rkb = rref(rb, field);
    if (rka != rkb) return false;
    ra.rows = rka;
    ra.data.resize(static_cast<size_t>(rka) * static_cast<size_t>(ra.cols));
    rb.rows = rkb;
    rb.data.resize(static_cast<size_t>(rkb) * static_cast<size_t>(rb.cols));
    return ra == rb;
}

namespace {

void check_product_zero(const FqMatrix& gen, const FqMatrix& parity, const FieldSpec& field) {
    for (int i = 0; i < gen.rows; ++i)
        for (int j = 0; j < parity.rows; ++j) {
            int acc = 0;
            for (int c = 0; c < gen.cols; ++c)
                acc = field.add(acc, field.mul(gen.at(i, c), parity.at(j, c)));
            if (acc != 0) throw std::logic_error("code invariant violated: G H^T != 0");
        }
}

}  // namespace

LinearCode LinearCode::from_generator(int q, const FqMatrix& gen) {
    const FieldSpec& field = FieldSpec::get(q);
    FqMatrix red = gen;
    int rank = rref(red, field);
    if (rank != gen.rows)
        throw std::invalid_argument("generator rows are linearly dependent");
    LinearCode code;
    code.q_ = q;
    code.length_ = gen.cols;
    code.dim_ = gen.rows;
    code.gen_ = gen;
    code.parity_ = nullspace_basis(gen, field);
    check_product_zero(code.gen_, code.parity_, field);
    return code;
}

LinearCode LinearCode::from_parity(int q, const FqMatrix& parity) {
    const FieldSpec& field = FieldSpec::get(q);
    FqMatrix red = parity;
    int rank = rref(red, field);
    if (rank != parity.rows)
        throw std::invalid_argument("parity rows are linearly dependent");
    LinearCode code;
    code.q_ = q;
    code.length_ = parity.cols;
    code.dim_ = parity.cols - parity.rows;
    code.gen_ = nullspace_basis(parity, field);
    code.parity_ = parity;
    check_product_zero(code.gen_, code.parity_, field);
    return code;
}

double LinearCode::size() const { return std::pow(static_cast<double>(q_), dim_); }

bool LinearCode::contains(std::span<const uint8_t> word) const {
    if (static_cast<int>(word.size()) != length_)
        throw std::invalid_argument("word length mismatch");
    const FieldSpec& f = field();
    for (int r = 0; r < parity_.rows; ++r) {
        int acc = 0;
        for (int c = 0; c < length_; ++c) acc = f.add(acc, f.mul(parity_.at(r, c), word[static_cast<size_t>(c)]));
        if (acc != 0) return false;
    }
    return true;
}

void LinearCode::for_each_codeword(const std::function<void(std::span<const uint8_t>)>& fn,
                                   uint64_t budget) const {
    const FieldSpec& f = field();
    double total = size();
    if (total > static_cast<double>(budget))
        throw BudgetExceeded("codeword enumeration q^dim exceeds budget",
                             static_cast<uint64_t>(total), budget);
    std::vector<uint8_t> msg(static_cast<size_t>(dim_), 0);
    std::vector<uint8_t> word(static_cast<size_t>(length_), 0);
    fn(word);
    // odometer with incremental row updates
    for (;;) {
        int pos = 0;
        while (pos < dim_ && msg[static_cast<size_t>(pos)] == static_cast<uint8_t>(q_ - 1)) {
            // subtract (q-1) * row pos, i.e. add row once (sum over q copies is 0)
            for (int c = 0; c < length_; ++c)
                word[static_cast<size_t>(c)] = static_cast<uint8_t>(
                    f.add(word[static_cast<size_t>(c)], gen_.at(pos, c)));
            msg[static_cast<size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == dim_) break;
        ++msg[static_cast<size_t>(pos)];
        for (int c = 0; c < length_; ++c)
            word[static_cast<size_t>(c)] =
                static_cast<uint8_t>(f.add(word[static_cast<size_t>(c)], gen_.at(pos, c)));
        fn(word);
    }
}

std::vector<std::vector<uint8_t>> LinearCode::all_codewords(uint64_t budget) const {
    std::vector<std::vector<uint8_t>> out;
    for_each_codeword([&](std::span<const uint8_t> w) { out.emplace_back(w.begin(), w.end()); },
                      budget);
    return out;
}

LinearCode build_generalized_bch(int q, int distance) {
    if (distance < 3) throw std::invalid_argument("distance target must be >= 3");
    const FieldSpec& f = FieldSpec::get(q);
    const int K = q * q - 1;
    const int target_dim = K - 2 * distance + 3;
    if (target_dim < 1)
        throw std::invalid_argument("generalized BCH dimension K - 2D + 3 = " +
                                    std::to_string(target_dim) + " is not positive");

    // c(1) = 0 is one F_q row; each c(gamma^j) = 0 contributes two.
    FqMatrix h(1 + 2 * (distance - 2), K);
    for (int c = 0; c < K; ++c) h.at(0, c) = 1;
    for (int j = 1; j <= distance - 2; ++j) {
        Ext2 gj = f.epow(f.gamma(), j);
        Ext2 power{1, 0};
        for (int i = 1; i <= K; ++i) {
            power = f.emul(power, gj);  // gamma^{j i}
            h.at(2 * j - 1, i - 1) = static_cast<uint8_t>(power.lo);
            h.at(2 * j, i - 1) = static_cast<uint8_t>(power.hi);
        }
    }

    FqMatrix gen = nullspace_basis(h, f);  // already reduced, pivot-ordered
    if (gen.rows > target_dim) {
        FqMatrix red = gen;
        rref(red, f);
        red.rows = target_dim;  // drop trailing rows of the reduced generator
        red.data.resize(static_cast<size_t>(target_dim) * static_cast<size_t>(K));
        gen = red;
    }
    return LinearCode::from_generator(q, gen);
}

LinearCode dual_code(const LinearCode& code) {
    return LinearCode::from_generator(code.q(), code.parity());
}

namespace {

// Increasing-weight exhaustive search: enumerate supports and value patterns
// (first nonzero scaled to 1), testing parity membership. Returns the least
// weight found, or 0 if the cost bound is hit first.
int min_weight_by_weight_enum(const LinearCode& code, uint64_t budget) {
    const int K = code.length();
    const int q = code.q();
    uint64_t spent = 0;
    std::vector<int> support;
    std::vector<uint8_t> values;
    std::vector<uint8_t> word(static_cast<size_t>(K), 0);

    std::function<bool(int, int)> try_values = [&](int w, int pos) -> bool {
        if (pos == w) {
            ++spent;
            return code.contains(word);
        }
        for (int v = 1; v < q; ++v) {
            // scale normalization: first support position fixed to 1
            if (pos == 0 && v > 1) break;
            word[static_cast<size_t>(support[static_cast<size_t>(pos)])] = static_cast<uint8_t>(v);
            if (try_values(w, pos + 1)) return true;
        }
        word[static_cast<size_t>(support[static_cast<size_t>(pos)])] = 0;
        return false;
    };
    std::function<bool(int, int, int)> try_support = [&](int w, int from, int picked) -> bool {
        if (spent > budget) throw BudgetExceeded("weight enumeration exceeds budget", spent, budget);
        if (picked == w) return try_values(w, 0);
        for (int c = from; c <= K - (w - picked); ++c) {
            support[static_cast<size_t>(picked)] = c;
            if (try_support(w, c + 1, picked + 1)) return true;
            word[static_cast<size_t>(c)] = 0;
        }
        return false;
    };

    for (int w = 1; w <= K; ++w) {
        support.assign(static_cast<size_t>(w), 0);
        std::fill(word.begin(), word.end(), 0);
        if (try_support(w, 0, 0)) return w;
    }
    throw std::logic_error("no nonzero codeword found in weight sweep");
}

}  // namespace

MinDistanceResult min_distance_bruteforce(const LinearCode& code, uint64_t budget) {
    if (code.dim() == 0) return {code.length() + 1, true};
    if (code.size() <= static_cast<double>(budget)) {
        int best = code.length() + 1;
        code.for_each_codeword(
            [&](std::span<const uint8_t> w) {
                int weight = 0;
                for (uint8_t d : w) {
                    if (d != 0 && ++weight >= best) return;  // early exit
                }
                if (weight > 0 && weight < best) best = weight;
            },
            budget);
        return {best, false};
    }
    return {min_weight_by_weight_enum(code, budget), false};
}

std::string code_to_json(const LinearCode& code) {
    using nlohmann::json;
    const FieldSpec& f = code.field();
    json gen = json::array();
    for (uint8_t d : code.generator().data) gen.push_back(static_cast<int>(d));
    json par = json::array();
    for (uint8_t d : code.parity().data) par.push_back(static_cast<int>(d));
    json doc = {{"q", code.q()},
                {"p", f.characteristic()},
                {"e", f.degree()},
                {"modulus", f.modulus()},
                {"K", code.length()},
                {"dim", code.dim()},
                {"generator", gen},
                {"parity", par}};
    return doc.dump(1);
}

LinearCode code_from_json(const std::string& text) {
    using nlohmann::json;
    json doc = json::parse(text);
    int q = doc.at("q").get<int>();
    int K = doc.at("K").get<int>();
    int dim = doc.at("dim").get<int>();
    const FieldSpec& f = FieldSpec::get(q);
    if (doc.contains("modulus") && !doc.at("modulus").get<std::vector<int>>().empty() &&
        doc.at("modulus").get<std::vector<int>>() != f.modulus())
        throw std::runtime_error("code file was produced with a different field modulus");
    FqMatrix gen(dim, K);
    auto gdata = doc.at("generator").get<std::vector<int>>();
    if (static_cast<int>(gdata.size()) != dim * K)
        throw std::runtime_error("generator digit count mismatch");
    for (size_t i = 0; i < gdata.size(); ++i) gen.data[i] = static_cast<uint8_t>(gdata[i]);
    LinearCode code = LinearCode::from_generator(q, gen);
    if (doc.contains("parity")) {
        auto pdata = doc.at("parity").get<std::vector<int>>();
        FqMatrix par(K - dim, K);
        if (pdata.size() != par.data.size()) throw std::runtime_error("parity digit count mismatch");
        for (size_t i = 0; i < pdata.size(); ++i) par.data[i] = static_cast<uint8_t>(pdata[i]);
        if (!same_row_space(par, code.parity(), f))
            throw std::runtime_error("stored parity does not match the generator's dual");
    }
    return code;
}

void save_code(const LinearCode& code, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write code file: " + path);
    out << code_to_json(code) << "\n";
}

LinearCode load_code(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open code file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return code_from_json(text);
}

}  // namespace gaplab
