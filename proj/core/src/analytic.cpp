#include "walkcast/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace walkcast {

namespace {

BigInt binomial(std::int64_t n, std::int64_t m) {
    if (m < 0 || m > n) return 0;
    m = std::min(m, n - m);
    BigInt b = 1;
    for (std::int64_t i = 1; i <= m; ++i) {
        b *= n - m + i;
        b /= i;
    }
    return b;
}

BigInt pow2(std::int64_t e) { return BigInt(1) << e; }

}  // namespace

DistributionVector evolve_distribution(const GraphTopology& g, int i, std::int64_t t) {
    if (t < 0) throw std::invalid_argument("evolve_distribution: negative horizon");
    const int n = g.n();
    DistributionVector dv;
    dv.base = i;
    dv.t = t;
    dv.p.assign(static_cast<std::size_t>(n), 0.0);
    g.degree(i);  // range check
    dv.p[static_cast<std::size_t>(i - 1)] = 1.0;
    std::vector<double> next(static_cast<std::size_t>(n));
    int nbr[2];
    for (std::int64_t s = 0; s < t; ++s) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int v = 1; v <= n; ++v) {
            double mass = dv.p[static_cast<std::size_t>(v - 1)];
            if (mass == 0.0) continue;
            int d = g.neighbors_into(v, nbr);
            double share = mass / d;
            for (int j = 0; j < d; ++j) next[static_cast<std::size_t>(nbr[j] - 1)] += share;
        }
        dv.p.swap(next);
    }
    return dv;
}

std::vector<Rational> evolve_distribution_exact(const GraphTopology& g, int i, std::int64_t t) {
    if (t < 0) throw std::invalid_argument("evolve_distribution_exact: negative horizon");
    const int n = g.n();
    g.degree(i);
    std::vector<Rational> p(static_cast<std::size_t>(n), Rational(0));
    p[static_cast<std::size_t>(i - 1)] = 1;
    std::vector<Rational> next(static_cast<std::size_t>(n));
    int nbr[2];
    for (std::int64_t s = 0; s < t; ++s) {
        std::fill(next.begin(), next.end(), Rational(0));
        for (int v = 1; v <= n; ++v) {
            const Rational& mass = p[static_cast<std::size_t>(v - 1)];
            if (mass == 0) continue;
            int d = g.neighbors_into(v, nbr);
            Rational share = mass / d;
            for (int j = 0; j < d; ++j) next[static_cast<std::size_t>(nbr[j] - 1)] += share;
        }
        p.swap(next);
    }
    return p;
}

ReversibilityReport check_reversibility(const GraphTopology& g, std::int64_t t, double tol) {
    const int n = g.n();
    std::vector<std::vector<double>> P;
    P.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) P.push_back(evolve_distribution(g, i, t).p);
    std::vector<double> pi = g.stationary_distribution();

    ReversibilityReport rep;
    rep.ratio_bounds_ok = true;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            auto ui = static_cast<std::size_t>(i);
            auto uj = static_cast<std::size_t>(j);
            double fwd = P[ui][uj];
            double bwd = P[uj][ui];
            rep.max_balance_violation =
                std::max(rep.max_balance_violation, std::abs(pi[ui] * fwd - pi[uj] * bwd));
            if (g.kind() == GraphKind::Cycle) {
                rep.max_symmetry_violation =
                    std::max(rep.max_symmetry_violation, std::abs(fwd - bwd));
            }
            if (fwd > 0.0 || bwd > 0.0) {
                if (fwd > 2.0 * bwd + tol || bwd > 2.0 * fwd + tol) rep.ratio_bounds_ok = false;
            }
        }
    }
    rep.ok = rep.max_balance_violation <= tol && rep.max_symmetry_violation <= tol &&
             rep.ratio_bounds_ok;
    return rep;
}

Rational z_walk_point_mass(const ZWalkSpec& spec) {
    const std::int64_t t = spec.t;
    const std::int64_t a = spec.a;
    if (t < 0) throw std::invalid_argument("z_walk_point_mass: negative horizon");
    if (a > t || -a > t) return 0;
    if (!spec.lazy) {
        if ((t - a) % 2 != 0) return 0;
        return Rational(binomial(t, (t - a) / 2), pow2(t));
    }
    // Mixture over the number s of rounds the lazy walk actually moves.
    BigInt num = 0;
    std::int64_t abs_a = a < 0 ? -a : a;
    for (std::int64_t s = abs_a; s <= t; s += 1) {
        if ((s - a) % 2 != 0) continue;
        num += binomial(t, s) * binomial(s, (s - a) / 2) * pow2(t - s);
    }
    return Rational(num, pow2(2 * t));
}

std::vector<Rational> z_walk_distribution(bool lazy, std::int64_t t) {
    if (t < 0) throw std::invalid_argument("z_walk_distribution: negative horizon");
    const auto size = static_cast<std::size_t>(2 * t + 1);
    std::vector<Rational> dist(size, Rational(0));
    if (!lazy) {
        BigInt den = pow2(t);
        for (std::int64_t j = 0; j <= t; ++j) {
            // position a = 2j - t
            dist[static_cast<std::size_t>(2 * j)] = Rational(binomial(t, j), den);
        }
        return dist;
    }
    std::vector<BigInt> counts(size, BigInt(0)), next(size);
    counts[static_cast<std::size_t>(t)] = 1;
    for (std::int64_t s = 0; s < t; ++s) {
        std::fill(next.begin(), next.end(), BigInt(0));
        for (std::size_t idx = 0; idx < size; ++idx) {
            if (counts[idx] == 0) continue;
            next[idx] += 2 * counts[idx];
            if (idx > 0) next[idx - 1] += counts[idx];
            if (idx + 1 < size) next[idx + 1] += counts[idx];
        }
        counts.swap(next);
    }
    BigInt den = pow2(2 * t);
    for (std::size_t idx = 0; idx < size; ++idx) dist[idx] = Rational(counts[idx], den);
    return dist;
}

Rational z_walk_below_prob(bool lazy, std::int64_t t, std::int64_t a) {
    std::vector<Rational> dist = z_walk_distribution(lazy, t);
    Rational sum = 0;
    for (std::int64_t j = -(a - 1); j <= a - 1; ++j) {
        if (j < -t || j > t) continue;
        sum += dist[static_cast<std::size_t>(j + t)];
    }
    return sum;
}

double z_walk_anticoncentration_bound(std::int64_t t, std::int64_t a) {
    if (t < 1 || a < 1) throw std::invalid_argument("anticoncentration bound needs t,a >= 1");
    return 4.0 * static_cast<double>(a) / std::sqrt(static_cast<double>(t));
}

bool satisfies_anticoncentration_bound(const Rational& p, std::int64_t t, std::int64_t a) {
    return p * p * t <= Rational(16 * a * a);
}

Rational hitting_tail(std::int64_t t, std::int64_t a, bool lazy) {
    if (a < 1) throw std::invalid_argument("hitting_tail: need a >= 1");
    if (t < 0) throw std::invalid_argument("hitting_tail: negative horizon");
    // Reflection identity: P(tau_a > t) = P(-a < X_t <= a).
    std::vector<Rational> dist = z_walk_distribution(lazy, t);
    Rational sum = 0;
    for (std::int64_t j = -a + 1; j <= a; ++j) {
        if (j < -t || j > t) continue;
        sum += dist[static_cast<std::size_t>(j + t)];
    }
    return sum;
}

double chernoff_bound(double eps, double mu) {
    if (!(eps > 0.0 && eps < 1.5)) {
        throw std::domain_error("chernoff_bound: eps must lie in (0, 3/2)");
    }
    if (mu < 0.0) throw std::domain_error("chernoff_bound: negative mean");
    return 2.0 * std::exp(-eps * eps * mu / 3.0);
}

Rational binomial_two_sided_tail(int n, const Rational& p, const Rational& eps) {
    if (p < 0 || p > 1) throw std::domain_error("binomial_two_sided_tail: p outside [0,1]");
    Rational q = Rational(1) - p;
    Rational mu = p * n;
    Rational dev = eps * mu;
    Rational tail = 0;
    Rational px = 1;  // p^x
    std::vector<Rational> qpow(static_cast<std::size_t>(n) + 1);
    qpow[0] = 1;
    for (int x = 1; x <= n; ++x) qpow[static_cast<std::size_t>(x)] = qpow[static_cast<std::size_t>(x - 1)] * q;
    for (int x = 0; x <= n; ++x) {
        Rational diff = Rational(x) - mu;
        if (diff < 0) diff = -diff;
        if (diff >= dev) {
            tail += Rational(binomial(n, x)) * px * qpow[static_cast<std::size_t>(n - x)];
        }
        px *= p;
    }
    return tail;
}

double azuma_bound(double b, std::span<const double> c) {
    if (!(b > 0.0)) throw std::domain_error("azuma_bound: need b > 0");
    double sum_sq = 0.0;
    for (double ca : c) {
        if (!(ca > 0.0)) throw std::domain_error("azuma_bound: all c_a must be positive");
        sum_sq += ca * ca;
    }
    return 2.0 * std::exp(-b * b / (2.0 * sum_sq));
}

double max_deviation_exact(int t, int b) {
    if (t < 0 || t > 40) throw std::invalid_argument("max_deviation_exact: t outside [0,40]");
    if (b <= 0) return 1.0;
    // Survival DP over states |x| < b; absorbed once |x| >= b.
    std::vector<double> surv(static_cast<std::size_t>(2 * b - 1), 0.0);
    surv[static_cast<std::size_t>(b - 1)] = 1.0;  // x = 0 at index x + b - 1
    std::vector<double> next(surv.size());
    for (int s = 0; s < t; ++s) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t idx = 0; idx < surv.size(); ++idx) {
            if (surv[idx] == 0.0) continue;
            if (idx > 0) next[idx - 1] += 0.5 * surv[idx];
            if (idx + 1 < surv.size()) next[idx + 1] += 0.5 * surv[idx];
        }
        surv.swap(next);
    }
    double alive = 0.0;
    for (double m : surv) alive += m;
    return 1.0 - alive;
}

namespace {

// Absorbing-chain machinery for expected_xi_oracle.
struct OracleContext {
    const GraphTopology& g;
    int k;
    PropagationMode mode;
    int n;
    int num_states;  // n^k

    std::vector<int> decode(int s) const {
        std::vector<int> pos(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            pos[static_cast<std::size_t>(i)] = s % n + 1;
            s /= n;
        }
        return pos;
    }
    int encode(const std::vector<int>& pos) const {
        int s = 0;
        for (int i = k - 1; i >= 0; --i) s = s * n + (pos[static_cast<std::size_t>(i)] - 1);
        return s;
    }
};

unsigned green_mask_after_move(const OracleContext& ctx, const std::vector<int>& prev,
                               const std::vector<int>& next, unsigned mask) {
    std::vector<std::uint8_t> green(static_cast<std::size_t>(ctx.k), 0);
    for (int i = 0; i < ctx.k; ++i) green[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
    MeetingRelation rel = detect_meetings(ctx.g, prev, next);
    green = propagate(green, rel, ctx.mode);
    unsigned out = 0;
    for (int i = 0; i < ctx.k; ++i) {
        if (green[static_cast<std::size_t>(i)]) out |= 1u << i;
    }
    return out;
}

std::vector<Rational> gaussian_solve(std::vector<std::vector<Rational>> A,
                                     std::vector<Rational> rhs) {
    const std::size_t m = rhs.size();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        while (piv < m && A[piv][col] == 0) ++piv;
        if (piv == m) throw std::runtime_error("oracle: singular system");
        std::swap(A[piv], A[col]);
        std::swap(rhs[piv], rhs[col]);
        Rational inv = Rational(1) / A[col][col];
        for (std::size_t j = col; j < m; ++j) A[col][j] *= inv;
        rhs[col] *= inv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || A[r][col] == 0) continue;
            Rational f = A[r][col];
            for (std::size_t j = col; j < m; ++j) A[r][j] -= f * A[col][j];
            rhs[r] -= f * rhs[col];
        }
    }
    return rhs;
}

// Expected additional rounds to full green, for every position tuple, given
// the current green mask. `solved` holds results for all strictly larger
// masks that contain agent 0.
std::vector<Rational> solve_layer(const OracleContext& ctx, unsigned mask,
                                  const std::vector<std::vector<Rational>>& solved) {
    const int m = ctx.num_states;
    const unsigned full = (1u << ctx.k) - 1;
    std::vector<std::vector<Rational>> A(static_cast<std::size_t>(m),
                                         std::vector<Rational>(static_cast<std::size_t>(m), Rational(0)));
    std::vector<Rational> rhs(static_cast<std::size_t>(m), Rational(1));

    std::vector<int> degs(static_cast<std::size_t>(ctx.k));
    std::vector<std::array<int, 2>> nbrs(static_cast<std::size_t>(ctx.k));
    for (int s = 0; s < m; ++s) {
        auto us = static_cast<std::size_t>(s);
        A[us][us] = 1;
        std::vector<int> pos = ctx.decode(s);
        int combos = 1;
        for (int i = 0; i < ctx.k; ++i) {
            auto ui = static_cast<std::size_t>(i);
            degs[ui] = ctx.g.neighbors_into(pos[ui], nbrs[ui].data());
            combos *= degs[ui];
        }
        Rational prob = Rational(1, combos);
        std::vector<int> next(static_cast<std::size_t>(ctx.k));
        for (int c = 0; c < combos; ++c) {
            int rem = c;
            for (int i = 0; i < ctx.k; ++i) {
                auto ui = static_cast<std::size_t>(i);
                next[ui] = nbrs[ui][static_cast<std::size_t>(rem % degs[ui])];
                rem /= degs[ui];
            }
            unsigned nmask = green_mask_after_move(ctx, pos, next, mask);
            int s2 = ctx.encode(next);
            if (nmask == mask) {
                A[us][static_cast<std::size_t>(s2)] -= prob;
            } else if (nmask != full) {
                rhs[us] += prob * solved[nmask][static_cast<std::size_t>(s2)];
            }
            // nmask == full contributes 0 expected further rounds.
        }
    }
    return gaussian_solve(std::move(A), std::move(rhs));
}

}  // namespace

Rational expected_xi_oracle(const GraphTopology& g, int k, PropagationMode mode) {
    const int n = g.n();
    if (k < 2) throw std::domain_error("expected_xi_oracle: need k >= 2");
    if (n > 6 || k > 3) {
        double states = std::pow(n, k) * std::pow(2.0, k - 1);
        throw std::domain_error(
            "expected_xi_oracle: state space too large (about " +
            std::to_string(static_cast<long long>(states)) +
            " states); supported range is n <= 6, k <= 3");
    }
    OracleContext ctx{g, k, mode, n, 1};
    for (int i = 0; i < k; ++i) ctx.num_states *= n;

    const unsigned full = (1u << k) - 1;
    std::vector<std::vector<Rational>> solved(static_cast<std::size_t>(full) + 1);

    if (k == 3) {
        // Layer {agent0, agent1}; the {agent0, agent2} layer follows by
        // exchangeability of the white agents.
        solved[0b011] = solve_layer(ctx, 0b011, solved);
        solved[0b101].resize(static_cast<std::size_t>(ctx.num_states));
        for (int s = 0; s < ctx.num_states; ++s) {
            std::vector<int> pos = ctx.decode(s);
            std::swap(pos[1], pos[2]);
            solved[0b101][static_cast<std::size_t>(ctx.encode(pos))] =
                solved[0b011][static_cast<std::size_t>(s)];
        }
    }
    solved[0b001] = solve_layer(ctx, 0b001, solved);

    // Average over the uniform initial law with round-0 closure.
    Rational total = 0;
    for (int s = 0; s < ctx.num_states; ++s) {
        std::vector<int> pos = ctx.decode(s);
        unsigned mask = 0;
        for (int i = 0; i < k; ++i) {
            if (pos[static_cast<std::size_t>(i)] == pos[0]) mask |= 1u << i;
        }
        if (mask != full) total += solved[mask][static_cast<std::size_t>(s)];
    }
    return total / ctx.num_states;
}

}  // namespace walkcast
