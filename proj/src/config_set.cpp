#include "spider/config_set.hpp"

#include <algorithm>
#include <cstdio>
#include <queue>
#include <set>

namespace spider {

LocalConfigSet LocalConfigSet::validate(std::vector<Config> configs) {
    if (configs.empty()) throw std::invalid_argument("restriction set is empty");
    size_t n_legs = configs.front().size();
    if (n_legs == 0) throw std::invalid_argument("configurations need at least one leg");
    for (const auto& c : configs) {
        if (c.size() != n_legs)
            throw std::invalid_argument("configurations disagree on the number of legs");
        if (c[0] != 0)
            throw NotAnchoredError("local configuration does not have first coordinate 0");
    }
    std::sort(configs.begin(), configs.end());
    if (std::adjacent_find(configs.begin(), configs.end()) != configs.end())
        throw std::invalid_argument("duplicate local configuration");

    LocalConfigSet L;
    L.legs_ = static_cast<int>(n_legs);
    L.configs_ = std::move(configs);
    for (int i = 0; i < L.size(); ++i) L.index_[L.configs_[static_cast<size_t>(i)]] = i;

    // diameter under the max-coordinate distance
    for (int i = 0; i < L.size(); ++i)
        for (int j = i + 1; j < L.size(); ++j) {
            int dist = 0;
            for (size_t k = 0; k < n_legs; ++k)
                dist = std::max(dist, std::abs(L.configs_[static_cast<size_t>(i)][k] -
                                               L.configs_[static_cast<size_t>(j)][k]));
            L.diameter_ = std::max(L.diameter_, dist);
        }

    for (const auto& c : L.configs_)
        for (int v : c) {
            L.min_offset_ = std::min(L.min_offset_, v);
            L.max_offset_ = std::max(L.max_offset_, v);
        }

    // condition (i): connectivity of L under single-leg moves that stay in L.
    // Moves of leg 0 leave the level, so only legs >= 1 can appear here.
    std::vector<char> seen(static_cast<size_t>(L.size()), 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        int s = frontier.front();
        frontier.pop();
        Config c = L.configs_[static_cast<size_t>(s)];
        for (size_t leg = 1; leg < n_legs; ++leg)
            for (int dir : {+1, -1}) {
                c[leg] += dir;
                auto it = L.index_.find(c);
                c[leg] -= dir;
                if (it != L.index_.end() && !seen[static_cast<size_t>(it->second)]) {
                    seen[static_cast<size_t>(it->second)] = 1;
                    ++reached;
                    frontier.push(it->second);
                }
            }
    }
    if (reached != L.size())
        throw DisconnectedError("restriction set is not connected under single-leg moves");

    // condition (ii): a forward edge between levels. The cross edge
    // (r1 at x) -> (r2 at x+1) is a leg-0 up-move, which forces
    // r2 = (0, r1_2 - 1, ..., r1_N - 1). First pair in enumeration order wins.
    for (int i = 0; i < L.size() && L.anchor_r1_ < 0; ++i) {
        Config want(n_legs);
        want[0] = 0;
        for (size_t k = 1; k < n_legs; ++k)
            want[k] = L.configs_[static_cast<size_t>(i)][k] - 1;
        auto it = L.index_.find(want);
        if (it != L.index_.end()) {
            L.anchor_r1_ = i;
            L.anchor_r2_ = it->second;
        }
    }
    if (L.anchor_r1_ < 0)
        throw NoForwardEdgeError("no edge joins consecutive levels of the spider graph");

    // move table
    L.moves_.resize(static_cast<size_t>(L.size()));
    for (int s = 0; s < L.size(); ++s) {
        const Config& c = L.configs_[static_cast<size_t>(s)];
        for (size_t leg = 0; leg < n_legs; ++leg)
            for (int dir : {+1, -1}) {
                Config target = c;
                target[leg] += dir;
                int dlevel = 0;
                if (leg == 0) {
                    dlevel = dir;
                    for (auto& v : target) v -= dir;  // renormalize to first leg 0
                }
                auto it = L.index_.find(target);
                if (it == L.index_.end()) continue;
                L.moves_[static_cast<size_t>(s)].push_back(
                    Move{static_cast<int>(leg), dir, dlevel, it->second, c[leg]});
            }
    }
    return L;
}

int LocalConfigSet::shape_of(const Config& c) const {
    auto it = index_.find(c);
    return it == index_.end() ? -1 : it->second;
}

std::string LocalConfigSet::canonical_string() const {
    std::string s = "N " + std::to_string(legs_) + "\n";
    for (const auto& c : configs_) {
        for (size_t k = 0; k < c.size(); ++k) {
            if (k) s += ' ';
            s += std::to_string(c[k]);
        }
        s += '\n';
    }
    return s;
}

Config SpiderState::shape() const {
    Config c(positions.size());
    for (size_t i = 0; i < positions.size(); ++i)
        c[i] = static_cast<int>(positions[i] - positions[0]);
    return c;
}

SpiderState make_state(const LocalConfigSet& L, int64_t level, int shape) {
    SpiderState s;
    const Config& c = L.config(shape);
    s.positions.resize(c.size());
    for (size_t i = 0; i < c.size(); ++i) s.positions[i] = level + c[i];
    return s;
}

bool is_vertex(const LocalConfigSet& L, const SpiderState& s) {
    if (s.positions.size() != static_cast<size_t>(L.legs())) return false;
    return L.shape_of(s.shape()) >= 0;
}

}  // namespace spider
