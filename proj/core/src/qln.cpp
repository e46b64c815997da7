#include "qsap/qln.hpp"

#include <algorithm>
#include <stdexcept>

#include "qsap/quantum.hpp"

namespace qsap {

FeatureVector extract_features(const Observation& obs, double count_threshold,
                               double noise_power, double zeta) {
    FeatureVector f;
    f.counts = signal_counts(obs, count_threshold, noise_power);
    f.occupancy = BitVec(f.counts.size());
    for (std::size_t i = 0; i < f.counts.size(); ++i)
        if (f.counts[i] > 0) f.occupancy.set(i);
    f.d = threshold_features(interference_features(obs), zeta);
    return f;
}

bool MembershipOracle::contains(const BitVec& v, unsigned arity) const {
    if (stacked_ && arity <= stacked_->blocks.size())
        return stacked_->block(arity).contains(v);
    return book_->is_boolean_sum_of(v, arity);
}

const char* to_string(AttackLabel a) {
    switch (a) {
        case AttackLabel::wideband: return "wideband";
        case AttackLabel::silence: return "silence";
        case AttackLabel::partial_band: return "partial_band";
    }
    return "unknown";
}

namespace {

// Validates a decomposition as exactly n_users codewords in distinct
// clusters; returns them sorted by cluster.
std::optional<std::vector<std::size_t>> decode_exact(
    const BitVec& word, const Codebook& book, unsigned n_users) {
    auto gen = book.decompose(word, n_users);
    if (!gen || gen->size() != n_users) return std::nullopt;
    std::vector<std::size_t> clusters;
    for (std::size_t idx : *gen) {
        const std::size_t c = book.cluster_of(idx);
        if (c == Codebook::npos) return std::nullopt;
        clusters.push_back(c);
    }
    std::sort(clusters.begin(), clusters.end());
    if (std::adjacent_find(clusters.begin(), clusters.end()) != clusters.end())
        return std::nullopt;
    std::sort(gen->begin(), gen->end(), [&](std::size_t a, std::size_t b) {
        return book.cluster_of(a) < book.cluster_of(b);
    });
    return gen;
}

unsigned long count_total(const std::vector<unsigned>& counts) {
    unsigned long s = 0;
    for (unsigned c : counts) s += c;
    return s;
}

}  // namespace

AmdVerdict detect_attack_mode(const FeatureVector& f,
                              const MembershipOracle& oracle, unsigned n_users) {
    const auto& book = oracle.book();
    const std::size_t b = f.occupancy.size();
    AmdVerdict v;

    // wideband: occupied rows of d are all-ones off the diagonal; any idle
    // subcarrier contributes a zero column and correctly breaks the rule
    bool wideband = f.occupancy.count() == b && b > 1;
    for (std::size_t i = 0; wideband && i < b; ++i) {
        if (!f.occupancy.test(i)) continue;
        for (std::size_t j = 0; j < b; ++j)
            if (i != j && f.d(static_cast<Eigen::Index>(i),
                              static_cast<Eigen::Index>(j)) != 1) {
                wideband = false;
                break;
            }
    }
    if (wideband) {
        v.label = AttackLabel::wideband;
        // legitimate occupancy: subcarriers carrying more than the jammer
        v.working_word = BitVec(b);
        for (std::size_t i = 0; i < b; ++i)
            if (f.counts[i] >= 2) v.working_word.set(i);
        return v;
    }

    // silence: occupancy decomposes into exactly n_users codewords and the
    // count total equals the constituents' total digit weight
    auto gen = decode_exact(f.occupancy, book, n_users);
    if (gen) {
        unsigned long weight = 0;
        for (std::size_t idx : *gen) weight += book.column(idx).count();
        if (weight == count_total(f.counts)) {
            v.label = AttackLabel::silence;
            v.working_word = f.occupancy;
            return v;
        }
    }

    v.label = AttackLabel::partial_band;
    v.working_word = f.occupancy;
    return v;
}

DigitFunction build_digit_function(std::size_t j, const BitVec& working_word,
                                   const MembershipOracle& oracle,
                                   unsigned n_users) {
    DigitFunction g;
    const bool in_upper = oracle.contains(working_word, n_users + 1);
    g.g0 = in_upper ? 0 : 1;
    BitVec zeroed = working_word;
    if (zeroed.test(j)) zeroed.clear(j);
    const bool zeroed_in_base = oracle.contains(zeroed, n_users);
    // the two x=1 probes disagree in polarity by design
    g.g1 = in_upper ? (zeroed_in_base ? 0 : 1) : (zeroed_in_base ? 1 : 0);
    return g;
}

bool attribute_digit(const DigitFunction& g, bool use_quantum,
                     std::size_t* oracle_queries) {
    int parity;
    if (use_quantum) {
        auto res = quantum::parity_circuit([&](int x) { return g(x); });
        parity = res.parity;
        if (oracle_queries) *oracle_queries += res.oracle_uses;
    } else {
        parity = g(0) ^ g(1);
        if (oracle_queries) *oracle_queries += 2;
    }
    return parity == 0;
}

DigitAttribution attribute_digits(const AmdVerdict& verdict,
                                  const FeatureVector& f,
                                  const MembershipOracle& oracle,
                                  unsigned n_users, bool use_quantum) {
    const std::size_t b = f.occupancy.size();
    DigitAttribution at;
    at.flags.assign(b, 0);
    for (std::size_t i = 0; i < b; ++i)
        if (f.counts[i] == 1) at.singletons.push_back(i);

    if (verdict.label == AttackLabel::wideband) {
        at.flags.assign(b, 1);
        return at;
    }
    if (verdict.label == AttackLabel::silence) return at;

    for (std::size_t j = 0; j < b; ++j) {
        if (!verdict.working_word.test(j)) continue;  // no pilot on this digit
        const DigitFunction g =
            build_digit_function(j, verdict.working_word, oracle, n_users);
        if (attribute_digit(g, use_quantum, &at.oracle_queries))
            at.flags[j] = 1;
    }
    for (std::size_t j : at.singletons)
        if (at.flags[j]) at.confirmed.push_back(j);
    return at;
}

namespace {

// A candidate user set explains the burst when the leftover signal counts
// single out one attacker support and every observed correlation edge is
// covered by a shared codeword or by two attacker digits. Edges are checked
// one-sided: a noisy feature may miss an edge, never invent a source.
bool explains_features(const std::vector<std::size_t>& gen,
                       const FeatureVector& f, const Codebook& book) {
    const std::size_t b = f.occupancy.size();
    BitVec attacker(b);
    for (std::size_t i = 0; i < b; ++i) {
        unsigned cover = 0;
        for (std::size_t idx : gen)
            if (book.column(idx).test(i)) ++cover;
        if (cover > f.counts[i] || f.counts[i] - cover > 1) return false;
        if (f.counts[i] > cover) attacker.set(i);
    }
    for (std::size_t i = 0; i < b; ++i) {
        if (!f.occupancy.test(i)) continue;
        for (std::size_t j = i + 1; j < b; ++j) {
            if (!f.occupancy.test(j) ||
                f.d(static_cast<Eigen::Index>(i),
                    static_cast<Eigen::Index>(j)) != 1)
                continue;
            bool shared = attacker.test(i) && attacker.test(j);
            for (std::size_t k = 0; !shared && k < gen.size(); ++k)
                shared = book.column(gen[k]).test(i) &&
                         book.column(gen[k]).test(j);
            if (!shared) return false;
        }
    }
    return true;
}

AccessReport finish(AttackLabel label, const Codebook& book,
                    const std::optional<std::vector<std::size_t>>& gen) {
    AccessReport r;
    r.label = label;
    if (!gen) return r;
    r.status = AccessReport::Status::success;
    for (std::size_t idx : *gen) {
        r.user_ids.push_back(book.cluster_of(idx));
        r.codeword_indices.push_back(idx);
        r.phases.push_back(book.phase_of(idx));
    }
    return r;
}

}  // namespace

AccessReport detect_and_recover(const AmdVerdict& verdict,
                                const DigitAttribution& attribution,
                                const FeatureVector& f,
                                const MembershipOracle& oracle,
                                unsigned n_users) {
    const auto& book = oracle.book();
    const std::size_t b = f.occupancy.size();

    if (verdict.label == AttackLabel::wideband) {
        // every count includes the jammer once
        BitVec residual(b);
        for (std::size_t i = 0; i < b; ++i)
            if (f.counts[i] >= 2) residual.set(i);
        return finish(verdict.label, book,
                      decode_exact(residual, book, n_users));
    }
    if (verdict.label == AttackLabel::silence) {
        return finish(verdict.label, book,
                      decode_exact(f.occupancy, book, n_users));
    }

    // partial-band: first drop the attacker-flagged digits
    BitVec corrected = f.occupancy;
    for (std::size_t j = 0; j < b; ++j)
        if (attribution.flags[j] && corrected.test(j)) corrected.clear(j);
    if (auto gen = decode_exact(corrected, book, n_users))
        if (explains_features(*gen, f, book))
            return finish(verdict.label, book, gen);

    // digit-wise probes could not certify the attacker (more than one
    // injected digit): take a candidate attacker-only subcarrier among the
    // singletons and read its full support off the correlation matrix; a
    // burst admitting two distinct consistent explanations stays unresolved
    std::optional<std::vector<std::size_t>> unique;
    for (std::size_t j0 : attribution.singletons) {
        BitVec stripped = f.occupancy;
        stripped.clear(j0);
        for (std::size_t j : attribution.singletons)
            if (f.d(static_cast<Eigen::Index>(j0),
                    static_cast<Eigen::Index>(j)) == 1)
                stripped.clear(j);
        auto gen = decode_exact(stripped, book, n_users);
        if (!gen || !explains_features(*gen, f, book)) continue;
        if (unique && *unique != *gen) {
            unique.reset();
            break;
        }
        unique = gen;
    }
    if (unique) return finish(verdict.label, book, unique);

    AccessReport r;
    r.label = verdict.label;
    return r;
}

AccessReport decode_burst(const Observation& obs, const MembershipOracle& oracle,
                          const DecoderConfig& cfg) {
    const FeatureVector f =
        extract_features(obs, cfg.count_threshold, cfg.noise_power, cfg.zeta);
    const AmdVerdict v = detect_attack_mode(f, oracle, cfg.n_users);
    const DigitAttribution at =
        attribute_digits(v, f, oracle, cfg.n_users, cfg.use_quantum);
    return detect_and_recover(v, at, f, oracle, cfg.n_users);
}

}  // namespace qsap
