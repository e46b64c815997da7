#pragma once

#include <vector>

#include "qsap/qln.hpp"

namespace qsap::testing {

// Noise-free feature synthesis straight from the transmitted supports:
// counts add one per active source, digits connect subcarriers sharing one.
inline FeatureVector ideal_features(const std::vector<BitVec>& sources,
                                    std::size_t n_bits) {
    FeatureVector f;
    f.counts.assign(n_bits, 0);
    f.occupancy = BitVec(n_bits);
    f.d = Eigen::MatrixXi::Zero(static_cast<int>(n_bits),
                                static_cast<int>(n_bits));
    for (const auto& s : sources)
        for (std::size_t i = 0; i < n_bits; ++i) {
            if (!s.test(i)) continue;
            ++f.counts[i];
            f.occupancy.set(i, true);
            for (std::size_t j = 0; j < n_bits; ++j)
                if (j != i && s.test(j))
                    f.d(static_cast<int>(i), static_cast<int>(j)) = 1;
        }
    return f;
}

}  // namespace qsap::testing
