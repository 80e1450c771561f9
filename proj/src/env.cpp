#include "spider/env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace spider {

EnvironmentSpec::EnvironmentSpec(std::vector<Atom> atoms, double delta)
    : atoms_(std::move(atoms)), delta_(delta) {
    if (atoms_.empty()) throw std::invalid_argument("environment spec needs at least one atom");
    if (!(delta_ > 0.0 && delta_ < 0.5))
        throw std::invalid_argument("delta must lie in (0, 1/2)");
    double mass = 0.0;
    for (const auto& a : atoms_) {
        if (!(a.prob >= 0.0)) throw ProbabilityMassError("negative atom probability");
        mass += a.prob;
    }
    if (std::abs(mass - 1.0) > 1e-12)
        throw ProbabilityMassError("atom probabilities sum to " + std::to_string(mass));
    for (const auto& a : atoms_) {
        if (!(a.value >= delta_ && a.value <= 1.0 - delta_))
            throw EllipticityError("atom value " + std::to_string(a.value) +
                                   " outside [delta, 1-delta]");
    }
    cum_.reserve(atoms_.size());
    double c = 0.0;
    for (const auto& a : atoms_) {
        c += a.prob;
        cum_.push_back(c);
    }
    cum_.back() = 1.0;
}

double EnvironmentSpec::mean_log_rho() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.prob * std::log((1.0 - a.value) / a.value);
    return s;
}

double EnvironmentSpec::mean_abs_log_rho() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.prob * std::abs(std::log((1.0 - a.value) / a.value));
    return s;
}

double EnvironmentSpec::expect_rho_pow(double kappa) const {
    // log-sum-exp over kappa * ln rho_i + ln p_i, guards overflow for large kappa
    double m = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(atoms_.size());
    for (const auto& a : atoms_) {
        if (a.prob == 0.0) continue;
        double t = kappa * std::log((1.0 - a.value) / a.value) + std::log(a.prob);
        terms.push_back(t);
        m = std::max(m, t);
    }
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return std::exp(m + std::log(s));
}

bool EnvironmentSpec::has_atom_above_half() const {
    for (const auto& a : atoms_)
        if (a.prob > 0.0 && a.value > 0.5) return true;
    return false;
}

bool EnvironmentSpec::has_atom_at_or_below_half() const {
    for (const auto& a : atoms_)
        if (a.prob > 0.0 && a.value <= 0.5) return true;
    return false;
}

bool EnvironmentSpec::has_rho_above_one() const {
    for (const auto& a : atoms_)
        if (a.prob > 0.0 && a.value < 0.5) return true;
    return false;
}

std::string EnvironmentSpec::canonical_string() const {
    char buf[64];
    std::string s;
    std::snprintf(buf, sizeof(buf), "delta %.17g\n", delta_);
    s += buf;
    for (const auto& a : atoms_) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", a.prob, a.value);
        s += buf;
    }
    return s;
}

SpecValidationReport validate_spec(const EnvironmentSpec& spec) {
    SpecValidationReport r;
    r.mean_log_rho = spec.mean_log_rho();
    // exactly-critical atom pairs cancel only up to rounding; classify them
    // as drift failures rather than letting the sign of 1e-17 decide
    r.drift_ok = r.mean_log_rho < -1e-12;
    r.elliptic_ok = true;  // enforced at construction
    r.nestling_ok = spec.has_atom_above_half() && spec.has_atom_at_or_below_half();
    return r;
}

double kappa_solve(const EnvironmentSpec& spec, double tol) {
    if (!spec.has_rho_above_one())
        throw NoRootError("E[rho^kappa] stays below 1: no atom with value < 1/2");
    if (!(spec.mean_log_rho() < 0.0))
        throw std::invalid_argument("kappa_solve requires E[ln rho] < 0");

    auto f = [&](double k) { return spec.expect_rho_pow(k); };

    // Bracket by doubling: f(0) = 1 with negative slope, so f < 1 just right
    // of 0; grow hi until f(hi) > 1.
    double hi = 1.0;
    int guard = 0;
    while (f(hi) <= 1.0) {
        hi *= 2.0;
        if (++guard > 64) throw NoRootError("no finite kappa bracket found");
    }
    double lo = hi * 0.5;
    if (f(lo) > 1.0) lo = 0.0;

    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 400; ++it) {
        mid = 0.5 * (lo + hi);
        double v = f(mid);
        if (std::abs(v - 1.0) <= tol) return mid;
        if (v > 1.0)
            hi = mid;
        else
            lo = mid;
    }
    return mid;
}

Environment::Environment(EnvironmentSpec spec, uint64_t seed)
    : spec_(std::move(spec)), seed_(seed) {}

double Environment::realize(int64_t x) const {
    double u = counter_uniform01(seed_, static_cast<uint64_t>(x));
    const auto& cum = spec_.cumulative();
    for (size_t i = 0; i + 1 < cum.size(); ++i)
        if (u < cum[i]) return spec_.atoms()[i].value;
    return spec_.atoms().back().value;
}

void Environment::ensure_window(int64_t a, int64_t b) const {
    if (a > b) return;
    if (lo_ > hi_) {
        lo_ = a;
        hi_ = b;
        window_.resize(static_cast<size_t>(b - a + 1));
        for (int64_t x = a; x <= b; ++x) window_[static_cast<size_t>(x - a)] = realize(x);
        return;
    }
    if (a < lo_) {
        std::vector<double> head(static_cast<size_t>(lo_ - a));
        for (int64_t x = a; x < lo_; ++x) head[static_cast<size_t>(x - a)] = realize(x);
        window_.insert(window_.begin(), head.begin(), head.end());
        lo_ = a;
    }
    if (b > hi_) {
        for (int64_t x = hi_ + 1; x <= b; ++x) window_.push_back(realize(x));
        hi_ = b;
    }
}

double Environment::omega_plus(int64_t x) const {
    if (x < lo_ || x > hi_) {
        // grow geometrically so long excursions stay amortized O(1)
        int64_t a = std::min(x, lo_ > hi_ ? x : lo_);
        int64_t b = std::max(x, lo_ > hi_ ? x : hi_);
        int64_t pad = std::max<int64_t>(64, (b - a) / 2);
        if (x < lo_) a = x - pad;
        if (x > hi_ || lo_ > hi_) b = x + pad;
        ensure_window(a, b);
    }
    return window_[static_cast<size_t>(x - lo_)];
}

PotentialProfile::PotentialProfile(int64_t a, std::vector<double> values)
    : a_(a), values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("empty potential profile");
    if (a_ > 0 || b() < 0) throw std::invalid_argument("profile must contain the anchor 0");
}

PotentialProfile PotentialProfile::from_omegas(int64_t a, const std::vector<double>& omegas) {
    // omegas are w+ at sites a .. a+n-1; the profile covers [a, a+n]
    int64_t b = a + static_cast<int64_t>(omegas.size());
    if (a > 0 || b < 0) throw std::invalid_argument("anchor 0 outside [a, b]");
    std::vector<double> v(static_cast<size_t>(b - a + 1));
    v[static_cast<size_t>(-a)] = 0.0;
    for (int64_t x = 0; x < b; ++x) {
        double w = omegas[static_cast<size_t>(x - a)];
        v[static_cast<size_t>(x + 1 - a)] =
            v[static_cast<size_t>(x - a)] + std::log((1.0 - w) / w);
    }
    for (int64_t x = -1; x >= a; --x) {
        double w = omegas[static_cast<size_t>(x - a)];
        v[static_cast<size_t>(x - a)] =
            v[static_cast<size_t>(x + 1 - a)] - std::log((1.0 - w) / w);
    }
    return PotentialProfile(a, std::move(v));
}

double PotentialProfile::at(int64_t x) const {
    if (x < a_ || x > b()) throw WindowTooSmallError("potential queried outside profile window");
    return values_[static_cast<size_t>(x - a_)];
}

PotentialProfile potential(const Environment& env, int64_t a, int64_t b) {
    if (!(a <= 0 && 0 <= b)) throw std::invalid_argument("potential window must contain 0");
    env.ensure_window(a, b - 1 >= a ? b - 1 : a);
    std::vector<double> omegas(static_cast<size_t>(b - a));
    for (int64_t x = a; x < b; ++x) omegas[static_cast<size_t>(x - a)] = env.omega_plus(x);
    return PotentialProfile::from_omegas(a, omegas);
}

double hill_height(const PotentialProfile& profile, int64_t a, int64_t b1) {
    if (a < profile.a() || b1 > profile.b())
        throw WindowTooSmallError("hill window outside profile");
    if (b1 <= a) throw EmptyRangeError("hill window has length <= 1");

    size_t n = static_cast<size_t>(b1 - a + 1);
    std::vector<double> suffix_max(n), prefix_min(n);
    suffix_max[n - 1] = profile.at(b1);
    for (size_t i = n - 1; i-- > 0;)
        suffix_max[i] = std::max(profile.at(a + static_cast<int64_t>(i)), suffix_max[i + 1]);
    prefix_min[0] = profile.at(a);
    for (size_t i = 1; i < n; ++i)
        prefix_min[i] = std::min(prefix_min[i - 1], profile.at(a + static_cast<int64_t>(i)));

    double h = -std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < n; ++i)  // x = a + i, left range [a, x) nonempty
        h = std::max(h, suffix_max[i] - prefix_min[i - 1]);
    return h;
}

}  // namespace spider
