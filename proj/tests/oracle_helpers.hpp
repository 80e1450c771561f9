#pragma once

// Brute-force reference implementations used by the tests. These stay
// deliberately naive (double loops, literal clause checks) and independent of
// the library code paths they verify.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "spider/env.hpp"
#include "spider/landscape.hpp"

namespace oracle {

// literal double loop over (x, y) pairs
inline double hill(const spider::PotentialProfile& p, int64_t a, int64_t b1) {
    double h = -std::numeric_limits<double>::infinity();
    for (int64_t x = a; x <= b1; ++x) {
        if (x == a) continue;  // empty left range
        double mx = -std::numeric_limits<double>::infinity();
        for (int64_t y = x; y <= b1; ++y) mx = std::max(mx, p.at(y));
        double mn = std::numeric_limits<double>::infinity();
        for (int64_t y = a; y < x; ++y) mn = std::min(mn, p.at(y));
        h = std::max(h, mx - mn);
    }
    return h;
}

// literal two-clause scan for every candidate j
inline std::vector<int64_t> valley_boundaries(const spider::PotentialProfile& p, double t,
                                              double kappa, int64_t w, int64_t margin) {
    double thr = 3.0 / std::min(1.0, kappa) * std::log(t);
    std::vector<int64_t> bounds{0};
    while (true) {
        int64_t ji = bounds.back();
        int64_t found = -1;
        for (int64_t j = ji; j <= w; ++j) {
            double mn = std::numeric_limits<double>::infinity();
            for (int64_t l = ji; l <= j; ++l) mn = std::min(mn, p.at(l));
            bool depth_ok = p.at(ji) - mn >= thr;
            double mx = -std::numeric_limits<double>::infinity();
            for (int64_t l = j; l <= w; ++l) mx = std::max(mx, p.at(l));
            bool right_ok = p.at(j) == mx;
            if (depth_ok && right_ok) {
                found = j;
                break;
            }
        }
        if (found < 0 || found > w - margin) break;
        bounds.push_back(found);
    }
    return bounds;
}

inline double valley_depth(const spider::PotentialProfile& p, int64_t ji, int64_t jnext) {
    double h = -std::numeric_limits<double>::infinity();
    for (int64_t j = ji; j < jnext; ++j)
        for (int64_t l = j + 1; l < jnext; ++l) h = std::max(h, p.at(l) - p.at(j));
    return h;
}

}  // namespace oracle
