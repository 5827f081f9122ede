#include <doctest.h>

#include <cmath>
#include <functional>

#include "cmlaws/degseq.hpp"
#include "cmlaws/limits.hpp"
#include "cmlaws/multigraph.hpp"
#include "cmlaws/oracle.hpp"
#include "cmlaws/rng.hpp"

using namespace cmlaws;

namespace {

// Independent fixed-length series evaluator for the acyclicity probability.
double acyclic_series_oracle(double nu, int terms) {
    double sum = 0.0;
    for (int k = 3; k < 3 + terms; ++k) sum += std::pow(nu, k) / (2.0 * k);
    return std::exp(-sum);
}

Multigraph cycle_graph(int k) {
    Multigraph g(std::max(k, 1));
    if (k == 1)
        g.add_edge(0, 0);
    else if (k == 2)
        g.add_edge(0, 1, 2);
    else
        for (int i = 0; i < k; ++i) g.add_edge(i, (i + 1) % k);
    return g;
}

}  // namespace

TEST_CASE("prob_simple_limit") {
    CHECK(prob_simple_limit(0.0) == doctest::Approx(1.0));
    CHECK(prob_simple_limit(1.0) == doctest::Approx(std::exp(-0.75)).epsilon(1e-14));
}

TEST_CASE("acyclicity probability: closed form vs series") {
    CHECK(acyclic_prob_closed(0.0) == doctest::Approx(1.0));
    CHECK(acyclic_prob_closed(1.0) == 0.0);
    CHECK(acyclic_prob_closed(1.5) == 0.0);
    double nu0 = solve_nu0(1e-9);
    CHECK(acyclic_prob_closed(nu0) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(std::abs(acyclic_prob_closed(0.5) - acyclic_series_oracle(0.5, 300)) < 1e-12);
    CHECK(std::abs(acyclic_prob_closed(0.5) - acyclic_prob_series(0.5)) < 1e-12);
    CHECK(std::abs(acyclic_prob_closed(0.9) - acyclic_prob_series(0.9)) < 1e-11);
}

TEST_CASE("nu0 bisection") {
    double nu0 = solve_nu0(1e-7);
    CHECK(std::abs(nu0 - 0.9368317) < 1e-6);
    CHECK(std::abs(q_acyclic(nu0) - 0.5) < 1e-7);
    CHECK(nu0 >= 0.75);
}

TEST_CASE("expected total cycles") {
    CHECK(expected_total_cycles(0.0) == doctest::Approx(0.0));
    CHECK(expected_total_cycles(1.0 - std::exp(-2.0)) == doctest::Approx(1.0).epsilon(1e-14));
    double series = 0.0;
    for (int k = 1; k <= 200; ++k) series += xi(k, 0.5);
    CHECK(std::abs(expected_total_cycles(0.5) - series) < 1e-12);
    CHECK_THROWS_AS(expected_total_cycles(1.0), std::domain_error);
}

TEST_CASE("Q is strictly decreasing") {
    double prev = q_acyclic(0.0);
    CHECK(prev == doctest::Approx(1.0));
    for (int i = 1; i <= 1000; ++i) {
        double nu = i / 1000.0;
        double q = q_acyclic(nu);
        CHECK(q < prev);
        prev = q;
    }
    CHECK(q_acyclic(1.0) == doctest::Approx(0.0));
}

TEST_CASE("simplicity/acyclicity identity") {
    for (int i = 0; i < 100; ++i) {
        double nu = i / 100.0;
        double lhs = prob_simple_limit(nu) * acyclic_prob_closed(nu) / std::sqrt(1.0 - nu);
        CHECK(std::abs(lhs - 1.0) < 1e-12);
    }
}

TEST_CASE("joint cycle probabilities") {
    const double nu = 0.5;
    CHECK(joint_cycle_prob({}, nu, CycleVariant::Multigraph) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(joint_cycle_prob({}, nu, CycleVariant::Simple) ==
          doctest::Approx(q_acyclic(nu)).epsilon(1e-14));
    CHECK(joint_cycle_prob({{3, 1}}, nu, CycleVariant::Simple) ==
          doctest::Approx(q_acyclic(nu) * std::pow(0.5, 3) / 6.0).epsilon(1e-14));
    CHECK_THROWS_AS(joint_cycle_prob({{1, 1}}, nu, CycleVariant::Simple), std::invalid_argument);
    CHECK_THROWS_AS(joint_cycle_prob({{2, 1}}, nu, CycleVariant::Simple), std::invalid_argument);
}

TEST_CASE("joint cycle probabilities sum to one") {
    // sum over all cycle profiles with total length <= K approaches 1 from
    // below as K grows
    const double nu = 0.5;
    double previous = 0.0;
    for (int cap : {2, 4, 8, 16, 24}) {
        double total = 0.0;
        std::map<int, int> profile;
        std::function<void(int, int)> rec = [&](int k, int weight_left) {
            total += joint_cycle_prob(profile, nu, CycleVariant::Multigraph);
            for (int kk = k; kk <= weight_left; ++kk) {
                profile[kk] += 1;
                rec(kk, weight_left - kk);
                profile[kk] -= 1;
                if (profile[kk] == 0) profile.erase(kk);
            }
        };
        rec(1, cap);
        CHECK(total > previous);
        CHECK(total <= 1.0 + 1e-12);
        previous = total;
    }
    CHECK(previous == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("expected copies main term on worked examples") {
    // H = loop, d = (2,1,1): main term 1/4; the exact oracle value is 1/3
    DegreeSequence d({2, 1, 1});
    CHECK(expected_copies(cycle_graph(1), d) == doctest::Approx(0.25).epsilon(1e-14));
    auto exact = exact_expectation(
        d, [](const Multigraph& g) { return g.total_loops(); });
    CHECK(exact == Rational(1, 3));

    // 3-regular: C2 main term is nu_n^2/4 = 1
    for (int n : {10, 100, 1000}) {
        std::vector<std::int32_t> reg(static_cast<std::size_t>(n), 3);
        if ((3 * n) % 2 != 0) reg.push_back(3), reg.push_back(3);
        DegreeSequence d3(reg);
        CHECK(expected_copies(cycle_graph(2), d3) == doctest::Approx(1.0).epsilon(1e-12));
    }

    // C3 under the nu = 1/2 model tends to xi_3 = 1/48
    DegreeModel model({{1, 0.76}, {2, 0.2}, {3, 0.04}});
    auto dn = realize(model, 20000);
    CHECK(expected_copies(cycle_graph(3), dn) == doctest::Approx(xi(3, 0.5)).epsilon(1e-2));
}

TEST_CASE("expected copies approaches the exact oracle as n grows") {
    // loop count on k copies of the (2,1,1) block: agreement is (1+O(1/n))
    double previous_gap = 1e9;
    for (int blocks : {1, 2, 3}) {
        std::vector<std::int32_t> degrees;
        for (int b = 0; b < blocks; ++b) {
            degrees.push_back(2);
            degrees.push_back(1);
            degrees.push_back(1);
        }
        DegreeSequence d(degrees);
        double main_term = expected_copies(cycle_graph(1), d);
        double exact = exact_expectation(d, [](const Multigraph& g) {
                           return g.total_loops();
                       }).to_double();
        double gap = std::abs(main_term / exact - 1.0);
        CHECK(gap < previous_gap);
        previous_gap = gap;
    }
}

TEST_CASE("xi_bound dominates the exact expectation on tiny instances") {
    struct Case {
        std::vector<std::int32_t> degrees;
        int k;  // cycle length of H
    };
    for (const auto& c : {Case{{2, 1, 1}, 1}, Case{{2, 2}, 1}, Case{{2, 2}, 2},
                          Case{{2, 2, 2}, 2}, Case{{2, 2, 2}, 3}, Case{{3, 3, 2, 2}, 2}}) {
        DegreeSequence d(c.degrees);
        Multigraph h = cycle_graph(c.k);
        double bound = xi_bound(h, d);
        double exact = exact_expectation(d, [&](const Multigraph& g) {
                           return count_cycles(g, std::max(3, c.k)).at(c.k);
                       }).to_double();
        CHECK(bound >= exact - 1e-12);
    }

    // and it is never smaller than the main term by more than a vanishing
    // factor on realized subcritical sequences
    DegreeModel model({{1, 0.76}, {2, 0.2}, {3, 0.04}});
    for (int n : {100, 1000, 10000}) {
        auto d = realize(model, n);
        for (int k : {1, 2, 3}) {
            double bound = xi_bound(cycle_graph(k), d);
            double main_term = expected_copies(cycle_graph(k), d);
            CHECK(bound >= main_term * (1.0 - 10.0 / n));
        }
    }

    Multigraph pendant(2);
    pendant.add_edge(0, 1);
    CHECK_THROWS_AS(xi_bound(pendant, DegreeSequence({2, 1, 1})), std::invalid_argument);
}

TEST_CASE("factorial ratio inequality: worked examples and random sweep") {
    CHECK(factorial_ratio_inequality_holds({1}, {1}));  // base case, equality
    CHECK(factorial_ratio_inequality_holds({5, 7}, {2, 3}));
    RngStream rng(909);
    auto report = check_factorial_ratio_inequality(rng, 10000);
    CHECK(report.samples == 10000);
    CHECK(report.violations == 0);
    CHECK_THROWS_AS(factorial_ratio_inequality_holds({1, 2}, {2, 2}), std::invalid_argument);
}

TEST_CASE("stirling-type bound rate decreases with N") {
    double previous = 1e300;
    for (std::int64_t n : {1000, 10000, 100000}) {
        auto delta = static_cast<std::int64_t>(std::floor(std::pow(n, 0.4)));
        double sup = stirling_bound_sup(n, delta);
        CHECK(sup > 0.0);
        CHECK(sup < previous);
        previous = sup;
    }
}
