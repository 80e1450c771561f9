#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spider/errors.hpp"

namespace spider {

using Config = std::vector<int>;  // N leg positions, first one 0 when local

// A single-leg move out of a local configuration, precomputed so the
// simulator never re-derives legality in the hot loop.
struct Move {
    int leg;          // which leg moves
    int dir;          // +1 or -1
    int dlevel;       // change of the spider position (nonzero only for leg 0)
    int to_shape;     // index of the resulting local configuration
    int leg_offset;   // position of the moving leg relative to the spider
};

// The validated restriction set L: local configurations anchored at 0,
// enumerated lexicographically, with the diameter d, the forward anchor pair
// and the per-shape move table.
class LocalConfigSet {
public:
    static LocalConfigSet validate(std::vector<Config> configs);

    int legs() const { return legs_; }
    int size() const { return static_cast<int>(configs_.size()); }
    int diameter() const { return diameter_; }
    const std::vector<Config>& configs() const { return configs_; }
    const Config& config(int shape) const { return configs_[static_cast<size_t>(shape)]; }

    // 1-based enumeration label, stable lexicographic order
    int label(int shape) const { return shape + 1; }
    int shape_of(const Config& c) const;  // -1 when not in L

    // anchor pair: the cross-level edge is (r1 at level x) -> (r2 at level x+1)
    int anchor_r1() const { return anchor_r1_; }
    int anchor_r2() const { return anchor_r2_; }

    const std::vector<Move>& moves(int shape) const { return moves_[static_cast<size_t>(shape)]; }

    // smallest/largest leg offset across all configs (window padding for
    // environment lookups)
    int min_offset() const { return min_offset_; }
    int max_offset() const { return max_offset_; }

    std::string canonical_string() const;

private:
    LocalConfigSet() = default;

    int legs_ = 0;
    int diameter_ = 0;
    int anchor_r1_ = -1;
    int anchor_r2_ = -1;
    int min_offset_ = 0;
    int max_offset_ = 0;
    std::vector<Config> configs_;
    std::map<Config, int> index_;
    std::vector<std::vector<Move>> moves_;
};

// A spider state as absolute leg positions. level() is the position of the
// first leg; shape is the normalized configuration.
struct SpiderState {
    std::vector<int64_t> positions;

    int64_t level() const { return positions.empty() ? 0 : positions[0]; }
    Config shape() const;
};

SpiderState make_state(const LocalConfigSet& L, int64_t level, int shape);
bool is_vertex(const LocalConfigSet& L, const SpiderState& s);

}  // namespace spider
