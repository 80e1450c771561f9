#include "spider/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace spider {

namespace {

double logsumexp_acc(double log_a, double log_b) {
    if (log_a == -std::numeric_limits<double>::infinity()) return log_b;
    if (log_b == -std::numeric_limits<double>::infinity()) return log_a;
    double m = std::max(log_a, log_b);
    return m + std::log(std::exp(log_a - m) + std::exp(log_b - m));
}

double log_pi_of(const PotentialProfile& vp, const LocalConfigSet& L, int64_t level,
                 int shape) {
    double lp = 0.0;
    for (int off : L.config(shape)) lp += log_theta(vp, level + off);
    return lp;
}

}  // namespace

ResistanceSeries resistance_series(const LocalConfigSet& L, const Environment& env,
                                   int64_t n, double tail_threshold) {
    if (n < 1) throw std::invalid_argument("resistance series needs n >= 1");
    ResistanceSeries out;
    out.levels = n;
    out.tail_threshold = tail_threshold;

    auto vp = potential(env, std::min<int64_t>(0, L.min_offset()),
                        n + L.max_offset() + 1);
    auto connector = within_level_path(L, L.anchor_r1(), L.anchor_r2());

    auto [k3, k4] = measure_sandwich_constants(L, env.spec().delta(), L.legs());
    (void)k4;
    double log_pref = std::log(static_cast<double>(L.size())) - std::log(k3) -
                      std::log(env.spec().delta());

    const double ninf = -std::numeric_limits<double>::infinity();
    double log_sum = ninf, log_major_sum = ninf;
    out.log_partial.resize(static_cast<size_t>(n + 1));
    out.log_majorant.resize(static_cast<size_t>(n + 1));

    for (int64_t lvl = 0; lvl <= n; ++lvl) {
        // within-level connector edges at this level
        for (size_t i = 0; i + 1 < connector.size(); ++i) {
            int sa = connector[i], sb = connector[i + 1];
            const Config& ca = L.config(sa);
            const Config& cb = L.config(sb);
            int leg = -1, dir = 0;
            for (size_t k = 0; k < ca.size(); ++k)
                if (ca[k] != cb[k]) {
                    leg = static_cast<int>(k);
                    dir = cb[k] - ca[k];
                }
            int64_t site = lvl + ca[static_cast<size_t>(leg)];
            double rate = dir > 0 ? env.omega_plus(site) : env.omega_minus(site);
            double log_r = -std::log(rate) - log_pi_of(vp, L, lvl, sa);
            log_sum = logsumexp_acc(log_sum, log_r);
        }
        // cross edge into this level: (r1 at lvl-1) -> (r2 at lvl), a leg-0 up-move
        if (lvl >= 1) {
            double rate = env.omega_plus(lvl - 1);
            double log_r = -std::log(rate) - log_pi_of(vp, L, lvl - 1, L.anchor_r1());
            log_sum = logsumexp_acc(log_sum, log_r);
        }
        log_major_sum = logsumexp_acc(log_major_sum, L.legs() * vp.at(lvl));
        out.log_partial[static_cast<size_t>(lvl)] = log_sum;
        out.log_majorant[static_cast<size_t>(lvl)] = log_pref + log_major_sum;
    }

    int64_t m = (3 * n) / 4;
    out.tail_fraction = 1.0 - std::exp(out.log_partial[static_cast<size_t>(m)] -
                                       out.log_partial[static_cast<size_t>(n)]);
    out.converged = out.tail_fraction < tail_threshold;
    return out;
}

std::vector<int> within_level_path(const LocalConfigSet& L, int from_shape, int to_shape) {
    if (from_shape == to_shape) return {from_shape};
    // within-level adjacency (moves that keep the level)
    int nl = L.size();
    std::vector<std::vector<int>> nbr(static_cast<size_t>(nl));
    for (int s = 0; s < nl; ++s)
        for (const Move& m : L.moves(s))
            if (m.dlevel == 0) nbr[static_cast<size_t>(s)].push_back(m.to_shape);
    for (auto& v : nbr) std::sort(v.begin(), v.end());

    // BFS distances to the target, then a greedy smallest-label descent,
    // which realizes the lexicographically minimal shortest label sequence
    std::vector<int> dist(static_cast<size_t>(nl), -1);
    std::queue<int> q;
    dist[static_cast<size_t>(to_shape)] = 0;
    q.push(to_shape);
    while (!q.empty()) {
        int s = q.front();
        q.pop();
        for (int t : nbr[static_cast<size_t>(s)])
            if (dist[static_cast<size_t>(t)] < 0) {
                dist[static_cast<size_t>(t)] = dist[static_cast<size_t>(s)] + 1;
                q.push(t);
            }
    }
    if (dist[static_cast<size_t>(from_shape)] < 0)
        throw PathFailure("no within-level path between local configurations");

    std::vector<int> path{from_shape};
    int cur = from_shape;
    while (cur != to_shape) {
        int best = -1;
        for (int t : nbr[static_cast<size_t>(cur)])
            if (dist[static_cast<size_t>(t)] == dist[static_cast<size_t>(cur)] - 1) {
                best = t;  // neighbors are sorted, first match is smallest label
                break;
            }
        path.push_back(best);
        cur = best;
    }
    return path;
}

CanonicalPathSet::CanonicalPathSet(const SpiderGraphWindow& g) : nv_(g.vertex_count()) {
    const LocalConfigSet& L = g.config_set();
    paths_.resize(static_cast<size_t>(nv_) * static_cast<size_t>(nv_));

    // undirected edge catalogue
    edge_index_.resize(static_cast<size_t>(nv_));
    for (int u = 0; u < nv_; ++u)
        for (const auto& e : g.out(u))
            if (u < e.to) {
                int id = static_cast<int>(edges_.size());
                edges_.emplace_back(u, e.to);
                edge_index_[static_cast<size_t>(u)].emplace_back(e.to, id);
                edge_index_[static_cast<size_t>(e.to)].emplace_back(u, id);
            }
    loads_.assign(edges_.size(), 0.0);

    // connector paths are level-independent; cache per shape pair
    int nl = L.size();
    std::vector<std::vector<int>> connector(static_cast<size_t>(nl) * static_cast<size_t>(nl));
    auto shapes_path = [&](int sa, int sb) -> const std::vector<int>& {
        auto& c = connector[static_cast<size_t>(sa) * static_cast<size_t>(nl) +
                            static_cast<size_t>(sb)];
        if (c.empty()) c = within_level_path(L, sa, sb);
        return c;
    };

    auto append_level_walk = [&](std::vector<int>& out, int64_t level, int sa, int sb) {
        const auto& sp = shapes_path(sa, sb);
        for (size_t i = out.empty() ? 0 : 1; i < sp.size(); ++i)
            out.push_back(g.vertex_id(level, sp[i]));
        if (out.empty()) out.push_back(g.vertex_id(level, sa));
    };

    for (int x = 0; x < nv_; ++x) {
        for (int y = 0; y < nv_; ++y) {
            if (x == y) continue;
            auto& p = paths_[static_cast<size_t>(x) * static_cast<size_t>(nv_) +
                             static_cast<size_t>(y)];
            int64_t lx = g.level_of(x), ly = g.level_of(y);
            int sx = g.shape_of(x), sy = g.shape_of(y);
            bool build_forward = (lx == ly) ? (sx < sy) : (lx < ly);
            if (!build_forward) continue;  // filled from the reverse below

            if (lx == ly) {
                const auto& sp = shapes_path(sx, sy);
                for (int s : sp) p.push_back(g.vertex_id(lx, s));
            } else {
                p.clear();
                append_level_walk(p, lx, sx, L.anchor_r1());
                for (int64_t lvl = lx + 1; lvl <= ly; ++lvl) {
                    p.push_back(g.vertex_id(lvl, L.anchor_r2()));
                    if (lvl < ly)
                        append_level_walk(p, lvl, L.anchor_r2(), L.anchor_r1());
                }
                append_level_walk(p, ly, L.anchor_r2(), sy);
            }
        }
    }
    // reverse halves
    for (int x = 0; x < nv_; ++x)
        for (int y = 0; y < nv_; ++y) {
            if (x == y) continue;
            auto& fwd = paths_[static_cast<size_t>(x) * static_cast<size_t>(nv_) +
                               static_cast<size_t>(y)];
            if (fwd.empty()) {
                const auto& rev = paths_[static_cast<size_t>(y) * static_cast<size_t>(nv_) +
                                         static_cast<size_t>(x)];
                fwd.assign(rev.rbegin(), rev.rend());
            }
        }
    // loads
    for (int x = 0; x < nv_; ++x)
        for (int y = 0; y < nv_; ++y) {
            if (x == y) continue;
            const auto& p = path(x, y);
            int64_t len = static_cast<int64_t>(p.size()) - 1;
            max_len_ = std::max(max_len_, len);
            for (size_t i = 0; i + 1 < p.size(); ++i) {
                int id = edge_id(p[i], p[i + 1]);
                if (id < 0) throw PathFailure("canonical path left the edge set");
                loads_[static_cast<size_t>(id)] += static_cast<double>(len);
            }
        }
}

const std::vector<int>& CanonicalPathSet::path(int x, int y) const {
    return paths_[static_cast<size_t>(x) * static_cast<size_t>(nv_) + static_cast<size_t>(y)];
}

int CanonicalPathSet::edge_id(int u, int v) const {
    for (const auto& [w, id] : edge_index_[static_cast<size_t>(u)])
        if (w == v) return id;
    return -1;
}

GapBoundReport congestion_bound(const CanonicalPathSet& paths, const SpiderGraphWindow& g,
                                uint64_t env_hash) {
    int nv = g.vertex_count();
    std::vector<double> acc(paths.edges().size(), 0.0);
    for (int x = 0; x < nv; ++x)
        for (int y = 0; y < nv; ++y) {
            if (x == y) continue;
            const auto& p = paths.path(x, y);
            double w = static_cast<double>(p.size() - 1) * g.pi_hat(x) * g.pi_hat(y);
            for (size_t i = 0; i + 1 < p.size(); ++i)
                acc[static_cast<size_t>(paths.edge_id(p[i], p[i + 1]))] += w;
        }
    GapBoundReport rep;
    rep.vertices = nv;
    rep.level_lo = g.level_lo();
    rep.level_hi = g.level_hi();
    rep.env_hash = env_hash;
    for (size_t e = 0; e < paths.edges().size(); ++e) {
        auto [u, v] = paths.edges()[e];
        double flow = g.pi_hat(u) * g.rate(u, v);  // = pi_hat(v) q(v,u)
        rep.congestion = std::max(rep.congestion, acc[e] / flow);
    }
    rep.gap_lower_bound = rep.congestion > 0.0 ? 1.0 / rep.congestion : 0.0;
    return rep;
}

double exact_gap_rates(int n, const std::vector<RatePair>& edges, int cap) {
    if (n > cap)
        throw TooLargeError("graph has " + std::to_string(n) + " vertices, cap " +
                            std::to_string(cap));
    if (n < 2) throw std::invalid_argument("gap needs at least two vertices");

    // pi-symmetrized negative generator: off-diagonal -sqrt(q(u,v) q(v,u))
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : edges) {
        m(e.u, e.v) = -std::sqrt(e.forward * e.backward);
        m(e.v, e.u) = m(e.u, e.v);
        m(e.u, e.u) += e.forward;
        m(e.v, e.v) += e.backward;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const auto& ev = es.eigenvalues();
    double tol = 1e-9 * std::max(1.0, ev(n - 1));
    if (ev(1) <= tol) throw DisconnectedWindowError("zero eigenvalue has multiplicity > 1");
    return ev(1);
}

double exact_gap(const SpiderGraphWindow& g, int cap) {
    int n = g.vertex_count();
    std::vector<RatePair> edges;
    for (int u = 0; u < n; ++u)
        for (const auto& e : g.out(u))
            if (u < e.to) edges.push_back(RatePair{u, e.to, e.rate, g.rate(e.to, u)});
    return exact_gap_rates(n, edges, cap);
}

std::vector<double> transition_matrix(const SpiderGraphWindow& g, double u) {
    int n = g.vertex_count();
    double cap = 0.0;
    for (int v = 0; v < n; ++v) {
        double exit = 0.0;
        for (const auto& e : g.out(v)) exit += e.rate;
        cap = std::max(cap, exit);
    }
    if (cap <= 0.0) cap = 1.0;

    // uniformized kernel K = I + Q / cap
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    for (int v = 0; v < n; ++v) {
        double exit = 0.0;
        for (const auto& e : g.out(v)) {
            k(v, e.to) = e.rate / cap;
            exit += e.rate;
        }
        k(v, v) = 1.0 - exit / cap;
    }

    double lam = cap * u;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd pw = Eigen::MatrixXd::Identity(n, n);
    double log_term = -lam;  // ln of Poisson(0) weight
    double mass = 0.0;
    for (int j = 0; j < 2000; ++j) {
        double w = std::exp(log_term);
        acc += w * pw;
        mass += w;
        if (mass > 1.0 - 1e-14 && j > lam) break;
        pw = pw * k;
        log_term += std::log(lam) - std::log(static_cast<double>(j + 1));
    }
    std::vector<double> out(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            out[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)] =
                acc(a, b);
    return out;
}

double effective_resistance(int n,
                            const std::vector<std::pair<std::pair<int, int>, double>>& edges,
                            const std::vector<int>& source_set,
                            const std::vector<int>& target_set) {
    // contract the two sets into terminal nodes
    std::vector<int> label(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) label[static_cast<size_t>(i)] = -1;
    for (int v : source_set) label[static_cast<size_t>(v)] = 0;
    for (int v : target_set) label[static_cast<size_t>(v)] = 1;
    int next = 2;
    for (int i = 0; i < n; ++i)
        if (label[static_cast<size_t>(i)] < 0) label[static_cast<size_t>(i)] = next++;

    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(next, next);
    for (const auto& [uv, c] : edges) {
        int a = label[static_cast<size_t>(uv.first)];
        int b = label[static_cast<size_t>(uv.second)];
        if (a == b) continue;
        lap(a, a) += c;
        lap(b, b) += c;
        lap(a, b) -= c;
        lap(b, a) -= c;
    }
    // ground node 1 (target), inject unit current at node 0
    int m = next - 1;
    Eigen::MatrixXd a(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    std::vector<int> keep;
    for (int i = 0; i < next; ++i)
        if (i != 1) keep.push_back(i);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = lap(keep[static_cast<size_t>(i)],
                                                  keep[static_cast<size_t>(j)]);
    rhs(0) = 1.0;  // node 0 kept first
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
    Eigen::VectorXd phi = lu.solve(rhs);
    return phi(0);
}

ConfinementBound confinement_bound(const Environment& env, const LocalConfigSet& L, int64_t a,
                                   int64_t b, double t, double k5) {
    if (!(b > a)) throw std::invalid_argument("confinement window needs b > a");
    int64_t b1 = b + L.diameter();
    auto vp = potential(env, std::min<int64_t>(0, a), std::max<int64_t>(0, b1));
    ConfinementBound out;
    out.hill = hill_height(vp, a, b1);
    double span = static_cast<double>(b - a);
    double denom = k5 * std::pow(span, 5) * std::exp(L.legs() * out.hill);
    out.value = std::exp(-t / denom);
    return out;
}

}  // namespace spider
