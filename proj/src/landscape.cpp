#include "spider/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spider {

GoodEnvReport is_t_good(const PotentialProfile& profile, double t, double eps, double k7,
                        int legs) {
    if (!(t > 1.0)) throw std::invalid_argument("t must exceed 1");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    if (!(k7 > 0.0)) throw std::invalid_argument("k7 must be positive");

    GoodEnvReport r;
    r.t = t;
    r.eps = eps;
    r.k7 = k7;
    r.legs = legs;
    double lt = std::log(t);
    r.x_left = static_cast<int64_t>(std::floor(-k7 * lt));
    r.x_right = static_cast<int64_t>(std::ceil(k7 * lt));
    if (profile.a() > r.x_left || profile.b() < r.x_right)
        throw WindowTooSmallError("profile must cover [floor(-K7 ln t), ceil(K7 ln t)]");
    r.lookahead_edge = profile.b();

    double steep = (2.0 + eps) / legs * lt;
    r.clause_left = profile.at(r.x_left) >= steep;
    r.clause_right = profile.at(r.x_right) <= -steep;

    // worst uphill rise started inside [x_left, x_right], end anywhere up to
    // the profile edge; one backward sweep with a running suffix max
    double suffix = -std::numeric_limits<double>::infinity();
    double worst = -std::numeric_limits<double>::infinity();
    for (int64_t i = profile.b(); i >= r.x_left; --i) {
        suffix = std::max(suffix, profile.at(i));
        if (i <= r.x_right) worst = std::max(worst, suffix - profile.at(i));
    }
    r.worst_rise = worst;
    r.clause_hills = worst <= (1.0 - eps) / legs * lt;
    return r;
}

int64_t default_suffix_margin(double depth_threshold, double mean_abs_log_rho) {
    if (!(mean_abs_log_rho > 0.0)) return 4;
    return 4 * static_cast<int64_t>(std::ceil(depth_threshold / mean_abs_log_rho));
}

ValleyDecomposition valleys(const PotentialProfile& profile, double t, double kappa,
                            int64_t window, int64_t margin) {
    if (!(t > 1.0)) throw std::invalid_argument("t must exceed 1");
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (profile.a() > 0 || profile.b() < window)
        throw WindowTooSmallError("profile must cover the scan window [0, W]");
    if (margin < 0 || margin >= window)
        throw std::invalid_argument("margin must lie in [0, W)");

    ValleyDecomposition d;
    d.t = t;
    d.kappa = kappa;
    d.window = window;
    d.margin = margin;
    d.depth_threshold = 3.0 / std::min(1.0, kappa) * std::log(t);

    // suffix max of V over [j, W]
    std::vector<double> suffix(static_cast<size_t>(window + 1));
    suffix[static_cast<size_t>(window)] = profile.at(window);
    for (int64_t j = window - 1; j >= 0; --j)
        suffix[static_cast<size_t>(j)] =
            std::max(profile.at(j), suffix[static_cast<size_t>(j + 1)]);

    d.boundaries.push_back(0);
    int64_t reportable = window - margin;
    while (true) {
        int64_t ji = d.boundaries.back();
        double v_ji = profile.at(ji);
        double run_min = v_ji;
        int64_t found = -1;
        for (int64_t j = ji; j <= window; ++j) {
            run_min = std::min(run_min, profile.at(j));
            if (v_ji - run_min >= d.depth_threshold &&
                profile.at(j) == suffix[static_cast<size_t>(j)]) {
                found = j;
                break;
            }
        }
        if (found < 0 || found > reportable) {
            d.truncated = found >= 0;  // a boundary exists but is uncertified
            break;
        }
        // depth of the closing valley [ji, found): largest rise V(l) - V(j)
        // with ji <= j < l < found
        double run_min2 = profile.at(ji);
        double depth = -std::numeric_limits<double>::infinity();
        for (int64_t l = ji + 1; l < found; ++l) {
            depth = std::max(depth, profile.at(l) - run_min2);
            run_min2 = std::min(run_min2, profile.at(l));
        }
        d.boundaries.push_back(found);
        d.depths.push_back(depth);
    }
    if (d.boundaries.size() < 2)
        throw WindowTooSmallError("no certified valley boundary inside [0, W - margin]");
    return d;
}

double census_eps(double t) { return 4.0 * std::log(std::log(t)) / std::log(t); }

DeepValleyCensus deep_valley_census(const ValleyDecomposition& decomp, double t, double eps,
                                    double kappa, double nu, int legs) {
    double nu0 = kappa / legs;
    if (!(nu0 < nu && nu < 1.0))
        throw std::invalid_argument("need kappa/N < nu < 1");

    DeepValleyCensus c;
    c.t = t;
    c.eps = eps;
    c.nu = nu;
    c.nu0 = nu0;
    c.small_t = t < std::exp(std::exp(1.0));
    c.depth_cut = (1.0 - eps) / kappa * std::log(t);
    c.horizon = static_cast<int64_t>(std::floor(std::pow(t, nu)));
    if (decomp.boundaries.back() < c.horizon)
        throw WindowTooSmallError("valley decomposition does not reach t^nu");

    // valleys i >= 1 with J_i < horizon
    for (size_t i = 1; i < decomp.valley_count(); ++i) {
        if (decomp.boundaries[i] >= c.horizon) break;
        if (decomp.depths[i] >= c.depth_cut) c.deep_indices.push_back(i);
    }
    c.census = c.deep_indices.size();
    c.psi_threshold = std::pow(t, nu - nu0) / 3.0;
    c.psi = static_cast<double>(c.census) >= c.psi_threshold;
    return c;
}

}  // namespace spider
