#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spider/errors.hpp"
#include "spider/rng.hpp"

namespace spider {

// One atom of the jump-probability law: P[w+ = value] = prob.
struct Atom {
    double prob;
    double value;
};

// Finite-atom law of the right-jump probability w+ at a site, with the
// ellipticity bound delta. Construction enforces the structural invariants
// (mass 1, values inside [delta, 1-delta]); the model conditions (negative
// drift, nestling) are reported by validate_spec so that deliberately
// degenerate oracle environments can still be built.
class EnvironmentSpec {
public:
    EnvironmentSpec(std::vector<Atom> atoms, double delta);

    const std::vector<Atom>& atoms() const { return atoms_; }
    double delta() const { return delta_; }

    // E[ln rho_0], rho_0 = (1 - w+)/w+
    double mean_log_rho() const;
    // E[|..|] companion used for window-margin heuristics
    double mean_abs_log_rho() const;
    double expect_rho_pow(double kappa) const;  // E[rho_0^kappa], log-domain safe

    bool has_atom_above_half() const;
    bool has_atom_at_or_below_half() const;
    bool has_rho_above_one() const;  // P[rho_0 > 1] > 0, i.e. some value < 1/2

    // cumulative probabilities for sampling
    const std::vector<double>& cumulative() const { return cum_; }

    std::string canonical_string() const;

private:
    std::vector<Atom> atoms_;
    double delta_;
    std::vector<double> cum_;
};

struct SpecValidationReport {
    bool drift_ok = false;        // condition (iii): E[ln rho_0] < 0
    bool elliptic_ok = false;     // condition (iv): values within [delta, 1-delta]
    bool nestling_ok = false;     // condition (v): mass above 1/2 and at-or-below 1/2
    double mean_log_rho = 0.0;
    bool all_ok() const { return drift_ok && elliptic_ok && nestling_ok; }
};

SpecValidationReport validate_spec(const EnvironmentSpec& spec);

// Unique positive root of E[rho_0^kappa] = 1. The function is log-convex with
// value 1 and negative slope at 0, so after bracketing by doubling the root is
// isolated and bisection converges.
double kappa_solve(const EnvironmentSpec& spec, double tol = 1e-12);

// A realization of the i.i.d. environment. w+ at site x is a pure function of
// (seed, x) via a counter-based generator, so the window can be materialized
// in any order, and copies of an Environment agree site-for-site.
class Environment {
public:
    Environment(EnvironmentSpec spec, uint64_t seed);

    const EnvironmentSpec& spec() const { return spec_; }
    uint64_t seed() const { return seed_; }

    double omega_plus(int64_t x) const;
    double omega_minus(int64_t x) const { return 1.0 - omega_plus(x); }

    // Pre-materialize [a, b]; optional, omega_plus() extends on demand.
    void ensure_window(int64_t a, int64_t b) const;

    int64_t window_lo() const { return lo_; }
    int64_t window_hi() const { return hi_; }

private:
    double realize(int64_t x) const;

    EnvironmentSpec spec_;
    uint64_t seed_;
    mutable std::vector<double> window_;  // sites lo_ .. hi_
    mutable int64_t lo_ = 0, hi_ = -1;    // empty when lo_ > hi_
};

// Potential V over an integer interval [a, b], anchored at V(0) = 0 with
// increments V(x+1) - V(x) = ln((1 - w+_x)/w+_x).
class PotentialProfile {
public:
    PotentialProfile(int64_t a, std::vector<double> values);

    // Build from explicit jump probabilities w+_a .. w+_{b-1}; the anchor 0
    // must lie in [a, b].
    static PotentialProfile from_omegas(int64_t a, const std::vector<double>& omegas);

    int64_t a() const { return a_; }
    int64_t b() const { return a_ + static_cast<int64_t>(values_.size()) - 1; }
    double at(int64_t x) const;
    const std::vector<double>& values() const { return values_; }

private:
    int64_t a_;
    std::vector<double> values_;
};

PotentialProfile potential(const Environment& env, int64_t a, int64_t b);

// H = max over x in (a, b1] of ( max_{y in [x, b1]} V(y) - min_{y in [a, x)} V(y) ),
// computed with prefix-min and suffix-max arrays. x = a contributes nothing
// (its left range is empty); a window of length <= 1 is an error.
double hill_height(const PotentialProfile& profile, int64_t a, int64_t b1);

}  // namespace spider
