#include "cmlaws/limits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "cmlaws/fragment.hpp"

namespace cmlaws {

using boost::multiprecision::cpp_int;

double xi(int k, double nu) {
    if (k < 1) throw std::invalid_argument("xi: k must be >= 1");
    return std::pow(nu, k) / (2.0 * k);
}

double prob_simple_limit(double nu) {
    if (nu < 0.0) throw std::domain_error("prob_simple_limit: nu < 0");
    return std::exp(-nu / 2.0 - nu * nu / 4.0);
}

double q_acyclic(double nu) {
    if (nu < 0.0 || nu > 1.0) throw std::domain_error("q_acyclic: nu outside [0,1]");
    return std::sqrt(1.0 - nu) * std::exp(nu / 2.0 + nu * nu / 4.0);
}

double acyclic_prob_closed(double nu) {
    if (nu < 0.0) throw std::domain_error("acyclic_prob_closed: nu < 0");
    if (nu >= 1.0) return 0.0;
    return q_acyclic(nu);
}

double acyclic_prob_series(double nu, double tol) {
    if (nu < 0.0) throw std::domain_error("acyclic_prob_series: nu < 0");
    if (nu >= 1.0) return 0.0;
    // sum_{k>K} nu^k/2k <= nu^{K+1} / (2(K+1)(1-nu))
    double sum = 0.0;
    double power = nu * nu;  // nu^k at k-1... advanced below
    for (int k = 3;; ++k) {
        power *= nu;
        sum += power / (2.0 * k);
        double tail = power * nu / (2.0 * (k + 1) * (1.0 - nu));
        if (tail < tol) break;
        if (k > 1'000'000) throw std::runtime_error("acyclic_prob_series: no convergence");
    }
    return std::exp(-sum);
}

double solve_nu0(double tol) {
    if (tol <= 0.0) throw std::invalid_argument("solve_nu0: tol must be positive");
    double lo = 0.0, hi = 1.0;
    // Q is strictly decreasing with Q(0) = 1 and Q(1) = 0; bisect Q = 1/2.
    while (true) {
        double mid = 0.5 * (lo + hi);
        double q = q_acyclic(mid);
        if (std::abs(q - 0.5) < tol && hi - lo < tol) return mid;
        if (q > 0.5)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15) return 0.5 * (lo + hi);
    }
}

double expected_total_cycles(double nu) {
    if (nu < 0.0 || nu >= 1.0)
        throw std::domain_error("expected_total_cycles: requires 0 <= nu < 1");
    return -0.5 * std::log1p(-nu);
}

double joint_cycle_prob(const std::map<int, int>& a, double nu, CycleVariant variant) {
    if (nu < 0.0 || nu >= 1.0) throw std::domain_error("joint_cycle_prob: requires 0 <= nu < 1");
    double result;
    int kmin;
    if (variant == CycleVariant::Multigraph) {
        result = std::sqrt(1.0 - nu);
        kmin = 1;
    } else {
        result = q_acyclic(nu);
        kmin = 3;
    }
    for (const auto& [k, ak] : a) {
        if (ak == 0) continue;
        if (ak < 0 || k < 1) throw std::invalid_argument("joint_cycle_prob: bad cycle counts");
        if (k < kmin)
            throw std::invalid_argument(
                "joint_cycle_prob: simple variant requires a_1 = a_2 = 0");
        double term = 1.0;
        double x = xi(k, nu);
        for (int i = 1; i <= ak; ++i) term *= x / i;
        result *= term;
    }
    return result;
}

namespace {

std::int64_t authe_small(const Multigraph& h) {
    std::int64_t result = aut_bruteforce(h);
    for (const auto& [v, l] : h.loops())
        for (int i = 0; i < l; ++i) result *= 2;
    for (const auto& [u, v, m] : h.edge_list())
        for (int i = 2; i <= m; ++i) result *= i;
    return result;
}

}  // namespace

double expected_copies(const Multigraph& h, const DegreeSequence& d) {
    const auto census = degree_census(h);
    const double n = d.n();
    const double m = static_cast<double>(d.half_edges());
    const std::int64_t ell = h.edge_count();

    double value = 1.0;
    for (const auto& [deg, cnt] : census) {
        // rho_{n,deg} = (1/n) sum_v (d_v)_deg
        double rho = 0.0;
        for (const auto& [k, nk] : d.counts()) {
            double ff = 1.0;
            for (int j = 0; j < deg; ++j) ff *= (k - j);
            if (k >= deg) rho += nk * ff;
        }
        rho /= n;
        for (int c = 0; c < cnt; ++c) value *= rho;
    }
    value *= std::pow(n, h.n());
    value /= static_cast<double>(authe_small(h));
    value /= std::pow(m, static_cast<double>(ell));
    return value;
}

double xi_bound(const Multigraph& h, const DegreeSequence& d) {
    for (int v = 0; v < h.n(); ++v)
        if (h.degree(v) < 2) throw std::invalid_argument("xi_bound: H must have min degree 2");
    const auto census = degree_census(h);
    const double n = d.n();
    const std::int64_t n_hat = d.n_hat();
    const double lambda_hat = static_cast<double>(n_hat) / n;
    if (h.n() > 0 && lambda_hat <= 0.0)
        throw std::domain_error("xi_bound: lambda_hat = 0 with nonempty H");
    const std::int64_t ell = h.edge_count();
    const std::int64_t m = d.half_edges();

    double value = 1.0;
    for (const auto& [deg, cnt] : census) {
        double rho = 0.0;
        for (const auto& [k, nk] : d.counts()) {
            double ff = 1.0;
            for (int j = 0; j < deg; ++j) ff *= (k - j);
            if (k >= deg) rho += nk * ff;
        }
        rho /= n;
        for (int c = 0; c < cnt; ++c) value *= rho;
    }
    for (int i = 0; i < h.n(); ++i) value *= static_cast<double>(n_hat - i);  // (n_hat)_h
    value /= static_cast<double>(authe_small(h));
    for (int i = 0; i < h.n(); ++i) value /= lambda_hat;
    for (std::int64_t i = 1; i <= ell; ++i) {
        std::int64_t denom = m - 2 * i + 1;
        if (denom <= 0) throw std::domain_error("xi_bound: too few half-edges");
        value /= static_cast<double>(denom);
    }
    return value;
}

bool factorial_ratio_inequality_holds(const std::vector<std::int64_t>& alpha,
                                      const std::vector<std::int64_t>& beta) {
    if (alpha.size() != beta.size() || alpha.empty())
        throw std::invalid_argument("inequality check: size mismatch");
    const std::size_t k = alpha.size();
    cpp_int alpha_sum = 0;
    std::int64_t beta_sum = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (beta[i] < 1 || alpha[i] < beta[i])
            throw std::invalid_argument("inequality check: needs alpha_i >= beta_i >= 1");
        alpha_sum += alpha[i];
        beta_sum += beta[i];
    }
    // Cross-multiplied form of the ratio inequality:
    //   prod_i alpha_i^{beta_i} * (alpha)_{beta-k+1}  >=
    //   alpha^{beta-k+1}        * prod_i (alpha_i)_{beta_i}
    cpp_int lhs = 1, rhs = 1;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::int64_t j = 0; j < beta[i]; ++j) {
            lhs *= alpha[i];
            rhs *= alpha[i] - j;
        }
    }
    const std::int64_t t = beta_sum - static_cast<std::int64_t>(k) + 1;
    for (std::int64_t j = 0; j < t; ++j) {
        lhs *= alpha_sum - j;
        rhs *= alpha_sum;
    }
    return lhs >= rhs;
}

InequalityCheckReport check_factorial_ratio_inequality(RngStream& rng, std::int64_t samples,
                                                       int max_terms, std::int64_t alpha_max) {
    InequalityCheckReport report;
    for (std::int64_t s = 0; s < samples; ++s) {
        int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
        std::vector<std::int64_t> alpha(static_cast<std::size_t>(k));
        std::vector<std::int64_t> beta(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            alpha[static_cast<std::size_t>(i)] =
                1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(alpha_max)));
            beta[static_cast<std::size_t>(i)] = 1 + static_cast<std::int64_t>(rng.below(
                static_cast<std::uint64_t>(alpha[static_cast<std::size_t>(i)])));
        }
        ++report.samples;
        if (!factorial_ratio_inequality_holds(alpha, beta)) ++report.violations;
    }
    return report;
}

double stirling_bound_sup(std::int64_t n, std::int64_t delta) {
    if (n < 4 || delta < 1 || delta >= n) throw std::invalid_argument("stirling_bound_sup: range");
    auto lf = [](std::int64_t x) { return std::lgamma(static_cast<double>(x) + 1.0); };
    const double log_n = std::log(static_cast<double>(n));
    double sup = -1e300;
    for (std::int64_t a = 1; a < delta; ++a) {
        double value = a * log_n + lf(n - a) - lf(n);
        sup = std::max(sup, value / static_cast<double>(a));
    }
    for (std::int64_t a = delta; a < n; ++a) {
        double value = delta * log_n + lf(n - a) - lf(n + delta - a);
        sup = std::max(sup, value / static_cast<double>(a));
    }
    return sup;
}

}  // namespace cmlaws
