#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "spider/config_set.hpp"
#include "spider/env.hpp"

namespace spider {

// Site weight of the reversible product measure. With rates w+_x up / w-_x
// down at site x and the potential anchored by V(x+1) - V(x) = ln(w-_x/w+_x),
// the weight satisfying theta(x) w+_x = theta(x+1) w-_{x+1} exactly is
//   theta(x) = e^{-V(x)} + e^{-V(x+1)}  ( = e^{-V(x)} / w-_x ).
double theta(const PotentialProfile& vp, int64_t x);
double theta(const Environment& env, int64_t x);
double log_theta(const PotentialProfile& vp, int64_t x);

// pi(state) = product of theta over the leg positions
double pi_weight(const PotentialProfile& vp, const SpiderState& s);
double pi_weight(const Environment& env, const SpiderState& s);

// Single-leg moves out of a state together with their rates; exactly the
// moves whose target stays in the vertex set.
std::vector<std::pair<SpiderState, double>> neighbors(const SpiderState& s,
                                                      const Environment& env,
                                                      const LocalConfigSet& L);

// Closed-form constants with K3 e^{-N V(x1)} <= pi(x) <= K4 e^{-N V(x1)}.
std::pair<double, double> measure_sandwich_constants(const LocalConfigSet& L, double delta,
                                                     int legs);

struct DirectedEdge {
    int to;
    double rate;
};

// The finite window graph over levels [a, b]: all local configurations at
// each level, edges between vertices one single-leg move apart with both
// endpoints inside the window.
class SpiderGraphWindow {
public:
    SpiderGraphWindow(const LocalConfigSet& L, const Environment& env, int64_t a, int64_t b);

    const LocalConfigSet& config_set() const { return L_; }
    int64_t level_lo() const { return a_; }
    int64_t level_hi() const { return b_; }
    int vertex_count() const { return static_cast<int>(adj_.size()); }
    int edge_count() const;  // directed

    int vertex_id(int64_t level, int shape) const;
    int64_t level_of(int v) const { return a_ + v / L_.size(); }
    int shape_of(int v) const { return v % L_.size(); }
    SpiderState state_of(int v) const { return make_state(L_, level_of(v), shape_of(v)); }

    const std::vector<DirectedEdge>& out(int v) const { return adj_[static_cast<size_t>(v)]; }
    double rate(int u, int v) const;  // 0 when no edge

    double pi(int v) const { return pi_[static_cast<size_t>(v)]; }
    double pi_hat(int v) const { return pi_hat_[static_cast<size_t>(v)]; }
    double pi_total() const { return pi_total_; }

    const PotentialProfile& profile() const { return profile_; }

    // largest relative error of pi(x) q(x,y) = pi(y) q(y,x) over all edges
    double detailed_balance_error() const;

private:
    LocalConfigSet L_;
    int64_t a_, b_;
    PotentialProfile profile_;
    std::vector<std::vector<DirectedEdge>> adj_;
    std::vector<double> pi_, pi_hat_;
    double pi_total_ = 0.0;
};

}  // namespace spider
