#pragma once

#include <cstdint>
#include <vector>

#include "spider/env.hpp"

namespace spider {

// Verdict for the three-clause classification of a potential landscape at
// scale t: steep uphill to the left, steep downhill to the right, and no
// uphill stretch deeper than ((1-eps)/N) ln t near the origin.
struct GoodEnvReport {
    double t = 0.0;
    double eps = 0.0;
    double k7 = 0.0;
    int legs = 1;
    int64_t x_left = 0;
    int64_t x_right = 0;
    int64_t lookahead_edge = 0;  // rightmost j used by clause 3
    bool clause_left = false;    // V(x_left) >= ((2+eps)/N) ln t
    bool clause_right = false;   // V(x_right) <= -((2+eps)/N) ln t
    bool clause_hills = false;   // max_i max_{j>=i} (V(j)-V(i)) <= ((1-eps)/N) ln t
    double worst_rise = 0.0;
    bool good() const { return clause_left && clause_right && clause_hills; }
};

GoodEnvReport is_t_good(const PotentialProfile& profile, double t, double eps, double k7,
                        int legs);

// Valley boundaries from the two-clause recursion: starting from J_0 = 0,
// J_{i+1} is the smallest j >= J_i with
//   (depth)     V(J_i) - min_{l in [J_i, j]} V(l) >= (3/(1 ^ kappa)) ln t
//   (right max) V(j) = max_{l in [j, W]} V(l)
// The suffix max is certified only up to the scan window, so boundaries are
// reported only while j <= W - margin; past that the decomposition is
// truncated and flagged.
struct ValleyDecomposition {
    double t = 0.0;
    double kappa = 0.0;
    int64_t window = 0;  // scan window [0, W]
    int64_t margin = 0;
    double depth_threshold = 0.0;       // (3/(1 ^ kappa)) ln t
    std::vector<int64_t> boundaries;    // J_0 = 0 < J_1 < ...
    std::vector<double> depths;         // H_i for each valley [J_i, J_{i+1})
    bool truncated = false;             // scan hit W - margin before finishing

    size_t valley_count() const { return depths.size(); }
};

// Default certification margin: four times the mean number of sites the
// potential needs to drift one depth-threshold down.
int64_t default_suffix_margin(double depth_threshold, double mean_abs_log_rho);

ValleyDecomposition valleys(const PotentialProfile& profile, double t, double kappa,
                            int64_t window, int64_t margin);

// Census of deep valleys among those intersecting [0, floor(t^nu)), indices
// i >= 1 only. eps here is the census threshold parameter (canonically
// 4 ln ln t / ln t), evaluated literally even when it exceeds 1.
struct DeepValleyCensus {
    double t = 0.0;
    double eps = 0.0;
    double nu = 0.0;
    double nu0 = 0.0;  // kappa / N
    double depth_cut = 0.0;        // ((1-eps)/kappa) ln t
    int64_t horizon = 0;           // floor(t^nu)
    std::vector<size_t> deep_indices;
    size_t census = 0;             // |M|
    double psi_threshold = 0.0;    // t^{nu-nu0}/3
    bool psi = false;              // census >= psi_threshold
    bool small_t = false;          // t < e^e, census eps formula leaves (0,1)
};

double census_eps(double t);  // 4 ln ln t / ln t

DeepValleyCensus deep_valley_census(const ValleyDecomposition& decomp, double t, double eps,
                                    double kappa, double nu, int legs);

}  // namespace spider
