#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spider/graph.hpp"

namespace spider {

// Partial sums of the resistances along the linear sub-network built from the
// anchor ladder and the within-level connector path. Everything is kept in
// log-domain; the weights grow like e^{N |V|} and overflow doubles quickly.
struct ResistanceSeries {
    int64_t levels = 0;                 // chain spans levels 0..levels
    std::vector<double> log_partial;    // ln R_k per level k
    std::vector<double> log_majorant;   // ln of the per-prefix series bound
    double tail_fraction = 1.0;         // (R_n - R_{3n/4}) / R_n
    double tail_threshold = 1e-3;
    bool converged = false;

    double log_total() const { return log_partial.back(); }
};

ResistanceSeries resistance_series(const LocalConfigSet& L, const Environment& env,
                                   int64_t n, double tail_threshold = 1e-3);

// Within-level connector: the shortest path between two local configurations
// through single-leg moves inside L, ties broken by the lexicographically
// smallest sequence of enumeration labels.
std::vector<int> within_level_path(const LocalConfigSet& L, int from_shape, int to_shape);

// One path per ordered vertex pair of a window graph. Same-level segments use
// the connector rule above; cross-level segments use only the anchor ladder.
// gamma(y, x) is the reverse of gamma(x, y).
class CanonicalPathSet {
public:
    CanonicalPathSet(const SpiderGraphWindow& g);

    const std::vector<int>& path(int x, int y) const;  // vertex ids, endpoints included
    size_t pair_count() const { return paths_.size(); }

    // undirected edges of the graph and their length-weighted loads
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<double>& edge_loads() const { return loads_; }
    int edge_id(int u, int v) const;  // -1 when absent

    int64_t max_path_length() const { return max_len_; }

private:
    int nv_;
    std::vector<std::vector<int>> paths_;  // indexed x * nv + y
    std::vector<std::pair<int, int>> edges_;
    std::vector<double> loads_;
    std::vector<std::vector<std::pair<int, int>>> edge_index_;  // per u: (v, id)
    int64_t max_len_ = 0;
};

struct GapBoundReport {
    double congestion = 0.0;  // A
    double gap_lower_bound = 0.0;  // 1/A
    std::optional<double> exact_gap;
    int vertices = 0;
    int64_t level_lo = 0;
    int64_t level_hi = 0;
    uint64_t env_hash = 0;
};

// Exact evaluation of the worst length-weighted edge congestion
//   A = max_e (pi_hat(u) q(u,v))^{-1} sum_{(x,y): e in gamma(x,y)} |gamma| pi_hat(x) pi_hat(y)
// over ordered pairs; 1/A lower-bounds the spectral gap.
GapBoundReport congestion_bound(const CanonicalPathSet& paths, const SpiderGraphWindow& g,
                                uint64_t env_hash = 0);

// Smallest nonzero eigenvalue of minus the generator, computed from the
// pi-symmetrized form. Dense; refuses windows above the cap.
double exact_gap(const SpiderGraphWindow& g, int cap = 200);

// Same computation on an explicit reversible rate list: per undirected edge
// (u, v) the pair of rates (q(u,v), q(v,u)).
struct RatePair {
    int u, v;
    double forward, backward;
};
double exact_gap_rates(int n, const std::vector<RatePair>& edges, int cap = 200);

// P^x[S(u) = y] for all pairs on a window graph, by uniformization of the
// generator. Row-major n*n matrix.
std::vector<double> transition_matrix(const SpiderGraphWindow& g, double u);

// Brute-force effective resistance between two vertex sets of a conductance
// network (sets are contracted). Dense solve; infinity when disconnected.
double effective_resistance(int n, const std::vector<std::pair<std::pair<int, int>, double>>& edges,
                            const std::vector<int>& source_set,
                            const std::vector<int>& target_set);

struct ConfinementBound {
    double hill = 0.0;   // H over [a, b + d]
    double value = 0.0;  // exp(-t / (K5 (b-a)^5 e^{N H}))
};

ConfinementBound confinement_bound(const Environment& env, const LocalConfigSet& L, int64_t a,
                                   int64_t b, double t, double k5 = 1.0);

}  // namespace spider
