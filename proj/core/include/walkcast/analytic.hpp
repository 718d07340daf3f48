#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "walkcast/broadcast.hpp"
#include "walkcast/topology.hpp"

namespace walkcast {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact t-step occupation law P_t(i, .) of one walker started at i.
struct DistributionVector {
    int base = 0;
    std::int64_t t = 0;
    std::vector<double> p;  // entry j-1 = P_t(i, j)
};

DistributionVector evolve_distribution(const GraphTopology& g, int i, std::int64_t t);

/// Rational variant for small instances; anchors the floating-point path.
std::vector<Rational> evolve_distribution_exact(const GraphTopology& g, int i, std::int64_t t);

struct ReversibilityReport {
    bool ok = false;
    /// max over i,j of |pi(i) P_t(i,j) - pi(j) P_t(j,i)|
    double max_balance_violation = 0.0;
    /// max over i,j of |P_t(i,j) - P_t(j,i)|; only checked on cycles
    double max_symmetry_violation = 0.0;
    /// P_t(j,i)/2 <= P_t(i,j) <= 2 P_t(j,i) wherever either side is nonzero
    bool ratio_bounds_ok = false;
};

ReversibilityReport check_reversibility(const GraphTopology& g, std::int64_t t,
                                        double tol = 1e-12);

struct ZWalkSpec {
    bool lazy = false;
    std::int64_t t = 0;
    std::int64_t a = 0;
};

/// Exact P(X_t = a) for the walk on Z started at 0. Non-lazy: C(t,(t-a)/2) 2^-t
/// (zero when t-a is odd). Lazy (hold prob 1/2, +-1 with prob 1/4 each):
/// binomial mixture over the number of active rounds.
Rational z_walk_point_mass(const ZWalkSpec& spec);

/// Full exact law of X_t, indexed by a + t (length 2t + 1).
std::vector<Rational> z_walk_distribution(bool lazy, std::int64_t t);

/// Exact P(|X_t| < a).
Rational z_walk_below_prob(bool lazy, std::int64_t t, std::int64_t a);

/// The 4a/sqrt(t) envelope of the anti-concentration bound.
double z_walk_anticoncentration_bound(std::int64_t t, std::int64_t a);

/// True iff p <= 4a/sqrt(t), decided exactly as p^2 t <= 16 a^2.
bool satisfies_anticoncentration_bound(const Rational& p, std::int64_t t, std::int64_t a);

/// Exact P(tau_a > t) via the reflection identity P(-a < X_t <= a).
Rational hitting_tail(std::int64_t t, std::int64_t a, bool lazy);

/// Chernoff envelope 2 exp(-eps^2 mu / 3); valid for 0 < eps < 3/2.
double chernoff_bound(double eps, double mu);

/// Exact two-sided binomial tail P(|X - np| >= eps np) for X ~ Bin(n, p).
Rational binomial_two_sided_tail(int n, const Rational& p, const Rational& eps);

/// Hoeffding-Azuma envelope 2 exp(-b^2 / (2 sum c_a^2)) on the maximal
/// deviation P(exists i <= t : |X_i - X_0| >= b).
double azuma_bound(double b, std::span<const double> c);

/// Exact P(exists i <= t : |X_i| >= b) for the +-1 walk; dyadic, exact in
/// double for t <= 40.
double max_deviation_exact(int t, int b);

/// Exact E[xi] by absorbing-chain enumeration over (position tuple, green
/// set) states, averaged over the uniform initial law with round-0 closure.
/// Guarded to n <= 6, k <= 3; larger instances are refused.
Rational expected_xi_oracle(const GraphTopology& g, int k,
                            PropagationMode mode = PropagationMode::SwapRelay);

}  // namespace walkcast
