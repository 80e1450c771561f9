#include "spider/random_instances.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "spider/rng.hpp"

namespace spider {

EnvironmentSpec random_env_spec(uint64_t seed) {
    Xoshiro256pp rng(seed, 0x656e76);
    for (int tries = 0; tries < 10000; ++tries) {
        double hi = 0.55 + 0.40 * rng.uniform();   // (1/2, 0.95]
        double lo = 0.05 + 0.45 * rng.uniform();   // [0.05, 1/2]
        double p = 0.2 + 0.6 * rng.uniform();
        std::vector<Atom> atoms{{p, hi}, {1.0 - p, lo}};
        double drift = p * std::log((1.0 - hi) / hi) + (1.0 - p) * std::log((1.0 - lo) / lo);
        if (!(drift < -0.05)) continue;  // clear negative drift
        double delta = std::min({hi, 1.0 - hi, lo, 1.0 - lo});
        delta = std::min(delta, 0.49);
        EnvironmentSpec spec(atoms, delta);
        if (validate_spec(spec).all_ok()) return spec;
    }
    throw std::runtime_error("random_env_spec failed to draw a valid spec");
}

LocalConfigSet random_config_set(uint64_t seed, int max_legs, int max_size) {
    Xoshiro256pp rng(seed, 0x636667);
    for (int tries = 0; tries < 10000; ++tries) {
        int legs = 1 + static_cast<int>(rng.next() % static_cast<uint64_t>(max_legs));
        if (legs == 1) return LocalConfigSet::validate({Config{0}});
        int target = 1 + static_cast<int>(rng.next() % static_cast<uint64_t>(max_size));

        Config base(static_cast<size_t>(legs), 0);
        for (int k = 1; k < legs; ++k)
            base[static_cast<size_t>(k)] = static_cast<int>(rng.next() % 5) - 2;
        std::set<Config> used{base};
        while (static_cast<int>(used.size()) < target) {
            // random single-leg move from a random member keeps the set connected
            auto it = used.begin();
            std::advance(it, static_cast<long>(rng.next() % used.size()));
            Config c = *it;
            size_t leg = 1 + rng.next() % static_cast<uint64_t>(legs - 1);
            c[leg] += (rng.next() & 1) ? 1 : -1;
            if (std::abs(c[leg]) > 4) continue;
            used.insert(c);
        }
        try {
            return LocalConfigSet::validate(std::vector<Config>(used.begin(), used.end()));
        } catch (const std::exception&) {
            continue;  // typically no forward edge; redraw
        }
    }
    throw std::runtime_error("random_config_set failed to draw a valid set");
}

}  // namespace spider
