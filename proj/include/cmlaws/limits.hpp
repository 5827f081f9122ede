#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cmlaws/degseq.hpp"
#include "cmlaws/multigraph.hpp"
#include "cmlaws/rng.hpp"

namespace cmlaws {

/// Limiting Poisson mean of the k-cycle count: xi_k = nu^k / (2k).
double xi(int k, double nu);

/// Limit of P(the configuration multigraph is simple): exp(-nu/2 - nu^2/4).
double prob_simple_limit(double nu);

/// Q(nu) = sqrt(1-nu) * exp(nu/2 + nu^2/4), the limiting acyclicity
/// probability of the simple graph; decreasing from 1 to 0 on [0,1].
double q_acyclic(double nu);

/// Limiting acyclicity probability of the simple graph: Q(nu) on [0,1), and
/// 0 for nu >= 1.
double acyclic_prob_closed(double nu);

/// Same quantity through the series exp(-sum_{k>=3} nu^k/2k), truncated once
/// the geometric tail bound drops below tol.
double acyclic_prob_series(double nu, double tol = 1e-14);

/// Root of Q(nu) = 1/2 in [0,1], by bisection on the decreasing Q.
double solve_nu0(double tol);

/// Limit of the expected total number of cycles: -ln(1-nu)/2. Rejects nu >= 1.
double expected_total_cycles(double nu);

enum class CycleVariant { Multigraph, Simple };

/// Limiting probability of seeing exactly a_k k-cycles for every k.
/// Multigraph variant: sqrt(1-nu) * prod_{k>=1} xi_k^{a_k}/a_k!.
/// Simple variant:     Q(nu)      * prod_{k>=3} xi_k^{a_k}/a_k!  (a_1 = a_2 = 0).
double joint_cycle_prob(const std::map<int, int>& a, double nu, CycleVariant variant);

/// Main term of the expected number of H-copies in the configuration model
/// on d:  n^h * prod_i rho_{n,i}^{h_i} / (authe(H) * m^l).
double expected_copies(const Multigraph& h, const DegreeSequence& d);

/// Upper-bound factor Xi_n(H) = (n_hat)_h * prod_i rho_{n,i}^{h_i}
///   / (authe(H) * lambda_hat^h * prod_{i=1..l} (m - 2i + 1)).
/// Requires min degree of H at least 2 and lambda_hat > 0.
double xi_bound(const Multigraph& h, const DegreeSequence& d);

/// Exact check of the factorial-ratio inequality
///   prod_i prod_{0<=j<beta_i} alpha_i/(alpha_i - j)
///     >= prod_{0<=j<beta-k+1} alpha/(alpha - j)
/// for positive integers alpha_i >= beta_i, in exact integer arithmetic.
bool factorial_ratio_inequality_holds(const std::vector<std::int64_t>& alpha,
                                      const std::vector<std::int64_t>& beta);

struct InequalityCheckReport {
    std::int64_t samples = 0;
    std::int64_t violations = 0;
};

/// Randomized exact checks of the inequality above.
InequalityCheckReport check_factorial_ratio_inequality(RngStream& rng, std::int64_t samples,
                                                       int max_terms = 8,
                                                       std::int64_t alpha_max = 50);

/// sup over a of ln(N^a (N-a)!/N!)/a (a < Delta) and
/// ln(N^Delta (N-a)!/(N+Delta-a)!)/a (Delta <= a < N), the o(1) rate of the
/// Stirling-type factorial bounds at Delta = floor(N^0.4).
double stirling_bound_sup(std::int64_t n, std::int64_t delta);

}  // namespace cmlaws
