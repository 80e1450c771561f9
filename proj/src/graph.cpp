#include "spider/graph.hpp"

#include <algorithm>
#include <cmath>

namespace spider {

double theta(const PotentialProfile& vp, int64_t x) {
    return std::exp(-vp.at(x)) + std::exp(-vp.at(x + 1));
}

double theta(const Environment& env, int64_t x) {
    auto vp = potential(env, std::min<int64_t>(0, x), std::max<int64_t>(0, x + 1));
    return theta(vp, x);
}

double log_theta(const PotentialProfile& vp, int64_t x) {
    double a = -vp.at(x), b = -vp.at(x + 1);
    double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double pi_weight(const PotentialProfile& vp, const SpiderState& s) {
    double p = 1.0;
    for (int64_t pos : s.positions) p *= theta(vp, pos);
    return p;
}

double pi_weight(const Environment& env, const SpiderState& s) {
    int64_t lo = 0, hi = 1;
    for (int64_t pos : s.positions) {
        lo = std::min(lo, pos);
        hi = std::max(hi, pos + 1);
    }
    auto vp = potential(env, lo, hi);
    return pi_weight(vp, s);
}

std::vector<std::pair<SpiderState, double>> neighbors(const SpiderState& s,
                                                      const Environment& env,
                                                      const LocalConfigSet& L) {
    int shape = L.shape_of(s.shape());
    if (shape < 0 || s.positions.size() != static_cast<size_t>(L.legs()))
        throw InvalidStateError("state is not a vertex of the spider graph");
    std::vector<std::pair<SpiderState, double>> out;
    int64_t level = s.level();
    for (const Move& m : L.moves(shape)) {
        int64_t site = level + m.leg_offset;
        double r = m.dir > 0 ? env.omega_plus(site) : env.omega_minus(site);
        out.emplace_back(make_state(L, level + m.dlevel, m.to_shape), r);
    }
    return out;
}

std::pair<double, double> measure_sandwich_constants(const LocalConfigSet& L, double delta,
                                                     int legs) {
    (void)L;
    double r = delta / (1.0 - delta);  // < 1
    int d = L.diameter();
    double k3 = std::pow((1.0 + r) * std::pow(r, d + 1), legs);
    double k4 = std::pow((1.0 + 1.0 / r) * std::pow(1.0 / r, d + 1), legs);
    return {k3, k4};
}

SpiderGraphWindow::SpiderGraphWindow(const LocalConfigSet& L, const Environment& env,
                                     int64_t a, int64_t b)
    : L_(L),
      a_(a),
      b_(b),
      profile_(potential(env, std::min<int64_t>(0, a + L.min_offset()),
                         std::max<int64_t>(1, b + L.max_offset() + 1))) {
    if (a > b) throw std::invalid_argument("window [a, b] is empty");
    int nl = L_.size();
    size_t nv = static_cast<size_t>((b - a + 1)) * static_cast<size_t>(nl);
    adj_.resize(nv);
    pi_.resize(nv);
    pi_hat_.resize(nv);

    for (int64_t x = a; x <= b; ++x) {
        for (int s = 0; s < nl; ++s) {
            int v = vertex_id(x, s);
            double p = 1.0;
            for (int off : L_.config(s)) p *= theta(profile_, x + off);
            pi_[static_cast<size_t>(v)] = p;
            pi_total_ += p;
            for (const Move& m : L_.moves(s)) {
                int64_t xt = x + m.dlevel;
                if (xt < a || xt > b) continue;
                int64_t site = x + m.leg_offset;
                double r = m.dir > 0 ? env.omega_plus(site) : env.omega_minus(site);
                adj_[static_cast<size_t>(v)].push_back(DirectedEdge{vertex_id(xt, m.to_shape), r});
            }
        }
    }
    for (size_t v = 0; v < nv; ++v) pi_hat_[v] = pi_[v] / pi_total_;
}

int SpiderGraphWindow::edge_count() const {
    int n = 0;
    for (const auto& l : adj_) n += static_cast<int>(l.size());
    return n;
}

int SpiderGraphWindow::vertex_id(int64_t level, int shape) const {
    return static_cast<int>((level - a_) * L_.size() + shape);
}

double SpiderGraphWindow::rate(int u, int v) const {
    for (const auto& e : adj_[static_cast<size_t>(u)])
        if (e.to == v) return e.rate;
    return 0.0;
}

double SpiderGraphWindow::detailed_balance_error() const {
    double worst = 0.0;
    for (int u = 0; u < vertex_count(); ++u)
        for (const auto& e : out(u)) {
            double lhs = pi(u) * e.rate;
            double rhs = pi(e.to) * rate(e.to, u);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(lhs, rhs));
        }
    return worst;
}

}  // namespace spider
