#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "derec/error.hpp"

namespace derec {

// mt19937_64 with hand-rolled draws. The standard distributions are not
// portable across library implementations; these helpers are, so equal
// seeds give byte-equal artifacts everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // [0, 1) with 53 random bits
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // [0, n), unbiased via rejection
    std::size_t next_index(std::size_t n) {
        if (n == 0) throw EmptySample("next_index over an empty range");
        std::uint64_t span = static_cast<std::uint64_t>(n);
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return static_cast<std::size_t>(draw % span);
    }

    std::size_t weighted_index(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (total <= 0.0) throw EmptySample("weighted_index with no mass");
        double u = next_double() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.size() - 1;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace derec
