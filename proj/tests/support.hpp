#pragma once

#include <random>
#include <string>
#include <vector>

#include "twistloop/bundle.hpp"
#include "twistloop/errors.hpp"

namespace testsupport {

// Random words of length 3..max_len that parse (both letters, some L-block >= 2).
inline std::vector<std::string> random_words(int count, unsigned seed, int max_len = 12) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> len(3, max_len), bit(0, 1);
    std::vector<std::string> out;
    while (static_cast<int>(out.size()) < count) {
        std::string w;
        const int n = len(rng);
        for (int k = 0; k < n; ++k) w += bit(rng) ? 'R' : 'L';
        try {
            twistloop::parse_word(w);
            out.push_back(w);
        } catch (const twistloop::InputError&) {
        }
    }
    return out;
}

}  // namespace testsupport
