#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "respars/errors.hpp"
#include "respars/random.hpp"

namespace respars {

// Walker alias table: O(m) construction, O(1) per draw (two uniforms).
// Weights must be nonnegative and finite with a positive sum; they are
// normalized internally. Construction is deterministic, so identical
// weights always give identical tables.
class AliasTable {
public:
    explicit AliasTable(std::span<const double> weights);

    std::size_t size() const { return threshold_.size(); }

    std::size_t sample(SplitMix64& rng) const {
        const std::size_t i = rng.next_below(threshold_.size());
        return rng.next_double() < threshold_[i] ? i : alias_[i];
    }

private:
    std::vector<double> threshold_;
    std::vector<std::uint32_t> alias_;
};

inline AliasTable::AliasTable(std::span<const double> weights) {
    const std::size_t m = weights.size();
    if (m == 0) throw PreconditionError("alias table needs at least one weight");
    if (m > 0xffffffffULL) throw PreconditionError("alias table too large");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || w > 1e300) throw PreconditionError("alias weights must be finite and nonnegative");
        total += w;
    }
    if (!(total > 0.0)) throw PreconditionError("alias weights sum to zero");

    // Scale to mean 1, then pair each deficient bucket with a surplus one.
    std::vector<double> scaled(m);
    for (std::size_t i = 0; i < m; ++i) scaled[i] = weights[i] * static_cast<double>(m) / total;
    threshold_.assign(m, 1.0);
    alias_.resize(m);
    for (std::size_t i = 0; i < m; ++i) alias_[i] = static_cast<std::uint32_t>(i);

    std::vector<std::uint32_t> small, large;
    small.reserve(m);
    large.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        const std::uint32_t s = small.back();
        const std::uint32_t l = large.back();
        small.pop_back();
        threshold_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    // Leftovers on either stack are within rounding of 1.
    for (std::uint32_t s : small) threshold_[s] = 1.0;
}

} // namespace respars
