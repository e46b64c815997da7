#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace qsap {

/// Fixed-length binary vector backed by 64-bit words. Codewords and
/// subcarrier activation patterns are BitVecs; the boolean-sum algebra
/// (OR / containment) is what the decoder runs on.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n_bits)
        : n_bits_(n_bits), words_((n_bits + 63) / 64, 0) {}

    static BitVec from_string(const std::string& s) {
        BitVec v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] == '1') v.set(i);
        return v;
    }

    std::size_t size() const { return n_bits_; }

    bool test(std::size_t i) const {
        return (words_[i / 64] >> (i % 64)) & 1u;
    }
    void set(std::size_t i, bool value = true) {
        if (value) words_[i / 64] |= (std::uint64_t{1} << (i % 64));
        else       words_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
    }
    void clear(std::size_t i) { set(i, false); }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

    bool any() const {
        for (auto w : words_) if (w) return true;
        return false;
    }

    BitVec& operator|=(const BitVec& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    friend BitVec operator|(BitVec a, const BitVec& b) { a |= b; return a; }

    /// Bits of *this not present in o.
    BitVec minus(const BitVec& o) const {
        BitVec r = *this;
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= ~o.words_[i];
        return r;
    }

    /// Containment c <= v, the decomposition test of a disjunct code.
    bool contained_in(const BitVec& v) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~v.words_[i]) return false;
        return true;
    }

    bool operator==(const BitVec& o) const {
        return n_bits_ == o.n_bits_ && words_ == o.words_;
    }
    bool operator!=(const BitVec& o) const { return !(*this == o); }

    std::string to_string() const {
        std::string s(n_bits_, '0');
        for (std::size_t i = 0; i < n_bits_; ++i)
            if (test(i)) s[i] = '1';
        return s;
    }

    std::size_t hash() const {
        std::size_t h = n_bits_;
        for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }

private:
    std::size_t n_bits_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitVecHash {
    std::size_t operator()(const BitVec& v) const { return v.hash(); }
};

}  // namespace qsap
