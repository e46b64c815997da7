#include "qsap/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsap {

bool is_prime(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

void CodeParams::validate() const {
    if (k < 2) throw std::invalid_argument("codebook: k must be >= 2");
    if (order < 2) throw std::invalid_argument("codebook: order K must be >= 2");
    if (!is_prime(q)) throw std::invalid_argument("codebook: q must be prime");
    // n = 1 + K(k-1) evaluation points; a singly extended RS code over GF(q)
    // supports up to q+1 of them.
    if (inner_length() > q + 1)
        throw std::invalid_argument("codebook: need q >= K(k-1)");
    if (clusters < 1 || static_cast<std::size_t>(clusters) > cardinality())
        throw std::invalid_argument("codebook: clusters must be in [1, C]");
}

double code_rate(unsigned q, unsigned k, unsigned order) {
    if (k < 2 || order < 2 || q < order * (k - 1))
        throw std::invalid_argument("code_rate: need k,K >= 2 and q >= K(k-1)");
    const double n = 1.0 + static_cast<double>(order) * (k - 1);
    return (k * std::log2(static_cast<double>(q))) / (q * n);
}

unsigned long min_binary_length(unsigned k, unsigned order) {
    const unsigned long m = static_cast<unsigned long>(order) * (k - 1);
    return m * (1 + m);
}

BitVec superpose(std::span<const BitVec> words) {
    if (words.empty())
        throw std::invalid_argument("superpose: empty codeword set");
    BitVec acc = words[0];
    for (std::size_t i = 1; i < words.size(); ++i) acc |= words[i];
    return acc;
}

Codebook Codebook::construct(const CodeParams& params) {
    params.validate();
    Codebook book;
    book.params_ = params;
    const unsigned q = params.q;
    const unsigned n = params.inner_length();
    const std::size_t C = params.cardinality();
    book.columns_.reserve(C);
    // Message m encodes polynomial coefficients base q, c_0 the constant
    // term. Evaluation points are 0..min(n,q)-1; when n == q+1 the extra
    // point is the one at infinity, whose value is the leading coefficient
    // (singly extended RS code, still MDS).
    std::vector<unsigned> coeff(params.k);
    for (std::size_t m = 0; m < C; ++m) {
        std::size_t t = m;
        for (unsigned j = 0; j < params.k; ++j) {
            coeff[j] = static_cast<unsigned>(t % q);
            t /= q;
        }
        BitVec w(params.binary_length());
        for (unsigned pos = 0; pos < n; ++pos) {
            unsigned value;
            if (pos < q) {
                unsigned long acc = 0;
                for (unsigned j = params.k; j-- > 0;)
                    acc = (acc * pos + coeff[j]) % q;
                value = static_cast<unsigned>(acc);
            } else {
                value = coeff[params.k - 1];  // point at infinity
            }
            w.set(static_cast<std::size_t>(pos) * q + value);
        }
        book.columns_.push_back(std::move(w));
    }
    return book;
}

std::size_t Codebook::cluster_of(std::size_t j) const {
    const std::size_t cs = cluster_size();
    if (j >= cs * params_.clusters) return npos;
    return j / cs;
}

std::pair<std::size_t, std::size_t> Codebook::cluster_range(std::size_t g) const {
    if (g >= params_.clusters)
        throw std::out_of_range("codebook: cluster index");
    const std::size_t cs = cluster_size();
    return {g * cs, (g + 1) * cs};
}

double Codebook::phase_of(std::size_t j) const {
    if (j >= size()) throw std::out_of_range("codebook: column index");
    return 2.0 * std::numbers::pi * static_cast<double>(j) /
           static_cast<double>(size());
}

std::size_t Codebook::index_of_phase(double phase) const {
    const double two_pi = 2.0 * std::numbers::pi;
    double p = std::fmod(phase, two_pi);
    if (p < 0) p += two_pi;
    std::size_t idx =
        static_cast<std::size_t>(std::llround(p * size() / two_pi)) % size();
    // reject phases that are not on the grid (circular distance)
    double d = std::abs(phase_of(idx) - p);
    d = std::min(d, two_pi - d);
    if (d > 1e-9)
        throw std::invalid_argument("codebook: phase not on the 2*pi*j/C grid");
    return idx;
}

std::optional<std::vector<std::size_t>> Codebook::decompose(
    const BitVec& observed, std::size_t max_order) const {
    if (observed.size() != params_.binary_length())
        throw std::invalid_argument("codebook: observation length mismatch");
    std::vector<std::size_t> gen;
    BitVec cover(observed.size());
    for (std::size_t j = 0; j < size(); ++j) {
        if (columns_[j].contained_in(observed)) {
            gen.push_back(j);
            cover |= columns_[j];
        }
    }
    if (gen.empty() || gen.size() > max_order || cover != observed)
        return std::nullopt;
    return gen;
}

namespace {

// Exact cover-style search: does some subset of `cand` of size exactly
// `want` OR to `target`? Branches on the columns covering the lowest
// still-uncovered bit, which keeps the tree small for disjunct codes.
bool cover_search(const BitVec& target, const std::vector<const BitVec*>& cand,
                  std::vector<char>& used, BitVec& acc, std::size_t chosen,
                  std::size_t want) {
    if (chosen == want) return acc == target;
    std::size_t bit = BitVec::npos;
    for (std::size_t b = 0; b < target.size(); ++b) {
        if (target.test(b) && !acc.test(b)) { bit = b; break; }
    }
    if (bit == BitVec::npos) {
        // target covered early: remaining picks must add nothing, i.e. be
        // fully contained. Count the unused contained candidates.
        std::size_t spare = 0;
        for (std::size_t i = 0; i < cand.size(); ++i)
            if (!used[i]) ++spare;
        return spare >= want - chosen;
    }
    for (std::size_t i = 0; i < cand.size(); ++i) {
        if (used[i] || !cand[i]->test(bit)) continue;
        used[i] = 1;
        BitVec saved = acc;
        acc |= *cand[i];
        if (cover_search(target, cand, used, acc, chosen + 1, want)) return true;
        acc = saved;
        used[i] = 0;
    }
    return false;
}

}  // namespace

bool Codebook::is_boolean_sum_of(const BitVec& v, std::size_t arity) const {
    if (v.size() != params_.binary_length())
        throw std::invalid_argument("codebook: observation length mismatch");
    if (arity == 0 || arity > size()) return false;
    std::vector<const BitVec*> cand;
    BitVec cover(v.size());
    for (std::size_t j = 0; j < size(); ++j) {
        if (columns_[j].contained_in(v)) {
            cand.push_back(&columns_[j]);
            cover |= columns_[j];
        }
    }
    if (cand.size() < arity || cover != v) return false;
    std::vector<char> used(cand.size(), 0);
    BitVec acc(v.size());
    return cover_search(v, cand, used, acc, 0, arity);
}

StackedCodebook StackedCodebook::build(const Codebook& book,
                                       std::size_t max_columns) {
    const unsigned top = book.params().order + 1;
    const std::size_t C = book.size();
    // total = sum_{k=1..K+1} C choose k; guard before allocating
    double total = 0.0;
    double binom = 1.0;
    for (unsigned r = 1; r <= top; ++r) {
        binom = binom * (C - r + 1) / r;
        total += binom;
    }
    if (total > static_cast<double>(max_columns))
        throw std::length_error("stacked codebook exceeds the column cap");

    StackedCodebook stacked;
    stacked.blocks.resize(top);
    for (unsigned r = 1; r <= top; ++r) {
        Block& blk = stacked.blocks[r - 1];
        blk.arity = r;
        std::vector<std::size_t> sel(r);
        for (std::size_t i = 0; i < r; ++i) sel[i] = i;
        while (true) {
            BitVec w(book.params().binary_length());
            for (std::size_t j : sel) w |= book.column(j);
            blk.index.insert(w);
            blk.columns.push_back(std::move(w));
            blk.generators.push_back(sel);
            // next lexicographic r-combination of [0, C)
            std::size_t i = r;
            while (i-- > 0) {
                if (sel[i] != C - r + i) {
                    ++sel[i];
                    for (std::size_t t = i + 1; t < r; ++t) sel[t] = sel[t - 1] + 1;
                    break;
                }
                if (i == 0) { sel.clear(); break; }
            }
            if (sel.empty()) break;
        }
    }
    return stacked;
}

}  // namespace qsap
