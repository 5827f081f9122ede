#include <doctest.h>

#include <cmath>
#include <fstream>

#include "cmlaws/degseq.hpp"
#include "cmlaws/rng.hpp"

using namespace cmlaws;

namespace {

// Direct summation oracle for the factorial moments.
MomentSummary moments_oracle(const std::vector<std::int32_t>& degrees) {
    MomentSummary s;
    double r1 = 0.0, r2 = 0.0;
    for (auto d : degrees) {
        r1 += d;
        r2 += static_cast<double>(d) * (d - 1.0);
        s.max_degree = std::max(s.max_degree, d);
    }
    s.rho1 = r1 / degrees.size();
    s.rho2 = r2 / degrees.size();
    if (s.rho1 > 0) s.nu = s.rho2 / s.rho1;
    return s;
}

// Exhaustive feasibility oracle: tries every edge subset on n vertices.
bool feasible_oracle(const std::vector<std::int32_t>& degrees) {
    const int n = static_cast<int>(degrees.size());
    std::vector<std::pair<int, int>> slots;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) slots.emplace_back(u, v);
    for (std::uint64_t mask = 0; mask < (1ULL << slots.size()); ++mask) {
        std::vector<int> deg(static_cast<std::size_t>(n), 0);
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (mask & (1ULL << i)) {
                deg[static_cast<std::size_t>(slots[i].first)] += 1;
                deg[static_cast<std::size_t>(slots[i].second)] += 1;
            }
        }
        bool match = true;
        for (int v = 0; v < n; ++v)
            if (deg[static_cast<std::size_t>(v)] != degrees[static_cast<std::size_t>(v)])
                match = false;
        if (match) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("degree sequence construction") {
    DegreeSequence d({3, 3, 3, 3});
    CHECK(d.n() == 4);
    CHECK(d.half_edges() == 12);
    CHECK(d.max_degree() == 3);
    CHECK(d.count(3) == 4);
    CHECK(d.count(2) == 0);
    CHECK_THROWS_AS(DegreeSequence({1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(DegreeSequence({-1, 1}), std::invalid_argument);
}

TEST_CASE("moments on the worked examples") {
    auto m1 = moments(DegreeSequence({3, 3, 3, 3}));
    CHECK(m1.rho1 == doctest::Approx(3.0));
    CHECK(m1.rho2 == doctest::Approx(6.0));
    CHECK(*m1.nu == doctest::Approx(2.0));

    auto m2 = moments(DegreeSequence({0, 0}));
    CHECK(m2.rho1 == 0.0);
    CHECK(!m2.nu.has_value());

    auto m3 = moments(DegreeSequence({2, 1, 1}));
    CHECK(m3.rho1 == doctest::Approx(4.0 / 3.0));
    CHECK(m3.rho2 == doctest::Approx(2.0 / 3.0));
    CHECK(*m3.nu == doctest::Approx(0.5));
}

TEST_CASE("moments agrees with the direct summation oracle") {
    RngStream rng(12345);
    for (int rep = 0; rep < 50; ++rep) {
        int n = 1 + static_cast<int>(rng.below(100));
        std::vector<std::int32_t> degrees;
        std::int64_t total = 0;
        for (int i = 0; i < n; ++i) {
            auto d = static_cast<std::int32_t>(rng.below(7));
            degrees.push_back(d);
            total += d;
        }
        if (total % 2 != 0) {
            degrees.back() += 1;
        }
        auto got = moments(DegreeSequence(degrees));
        auto want = moments_oracle(degrees);
        CHECK(got.rho1 == doctest::Approx(want.rho1).epsilon(1e-12));
        CHECK(got.rho2 == doctest::Approx(want.rho2).epsilon(1e-12));
        CHECK(got.nu.has_value() == want.nu.has_value());
        if (got.nu) CHECK(*got.nu == doctest::Approx(*want.nu).epsilon(1e-12));
    }
}

TEST_CASE("feasibility on the worked examples") {
    CHECK(is_feasible(DegreeSequence({1, 1})));
    CHECK_FALSE(is_feasible(std::vector<std::int32_t>{3, 1, 1}));  // odd total
    CHECK(feasible_oracle({3, 1, 1}) == false);
    CHECK(is_feasible(DegreeSequence({2, 2, 2})));
    // degree n-1 twice on two vertices needs a double edge
    CHECK_FALSE(is_feasible(std::vector<std::int32_t>{2, 2}));
}

TEST_CASE("feasibility matches the exhaustive oracle") {
    RngStream rng(777);
    int checked = 0;
    while (checked < 120) {
        int n = 2 + static_cast<int>(rng.below(5));
        std::vector<std::int32_t> degrees;
        std::int64_t total = 0;
        for (int i = 0; i < n; ++i) {
            auto d = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(n + 1)));
            degrees.push_back(d);
            total += d;
        }
        if (total % 2 != 0) continue;
        CHECK(is_feasible(DegreeSequence(degrees)) == feasible_oracle(degrees));
        ++checked;
    }
}

TEST_CASE("realize: regular, degenerate, and parity-fix cases") {
    DegreeModel regular({{3, 1.0}});
    auto d = realize(regular, 4);
    CHECK(d.degrees() == std::vector<std::int32_t>{3, 3, 3, 3});

    DegreeModel zero({{0, 1.0}});
    auto z = realize(zero, 7);
    CHECK(z.n() == 7);
    CHECK(z.half_edges() == 0);

    DegreeModel half({{1, 0.5}, {2, 0.5}});
    auto h = realize(half, 5);
    CHECK(h.n() == 5);
    CHECK(h.half_edges() % 2 == 0);
    CHECK(h.count(1) + h.count(2) == 5);
    // largest-remainder puts the leftover on degree 1, the parity fix then
    // moves one vertex from class 2 down to class 1
    CHECK(h.count(1) == 4);
    CHECK(h.count(2) == 1);

    // no parity fix can stay inside the support of a 3-regular model at odd n
    CHECK_THROWS_AS(realize(regular, 5), std::invalid_argument);
}

TEST_CASE("realized sequences stay inside the model support with even total") {
    DegreeModel model({{1, 0.76}, {2, 0.2}, {3, 0.04}});
    RngStream rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 3 + static_cast<int>(rng.below(400));
        auto d = realize(model, n);
        CHECK(d.n() == n);
        CHECK(d.half_edges() % 2 == 0);
        for (const auto& [k, nk] : d.counts()) {
            CHECK(nk > 0);
            CHECK(model.lambda(k) > 0.0);
        }
    }
}

TEST_CASE("realize drives nu_n toward nu") {
    DegreeModel model({{1, 0.76}, {2, 0.2}, {3, 0.04}});
    const double nu = model.nu();
    CHECK(nu == doctest::Approx(0.5));
    double previous = 1e9;
    for (int n : {100, 1000, 10000}) {
        auto m = moments(realize(model, n));
        double err = std::abs(*m.nu - nu);
        CHECK(err <= previous + 1e-9);
        previous = err;
    }
    auto m = moments(realize(model, 10000));
    CHECK(std::abs(*m.nu - nu) < 1e-3);
}

TEST_CASE("degree model validation and accessors") {
    CHECK_THROWS_AS(DegreeModel({{1, 0.5}, {2, 0.6}}), std::invalid_argument);
    CHECK_THROWS_AS(DegreeModel({{1, -0.1}, {2, 1.1}}), std::invalid_argument);
    DegreeModel m({{0, 0.25}, {1, 0.25}, {3, 0.5}});
    CHECK(m.lambda_hat() == doctest::Approx(0.5));
    CHECK(m.rho1() == doctest::Approx(0.25 + 1.5));
    CHECK(m.rho2() == doctest::Approx(3.0));
    CHECK(m.nu() == doctest::Approx(3.0 / 1.75));
    DegreeModel degenerate({{0, 1.0}});
    CHECK_THROWS_AS(degenerate.nu(), std::domain_error);
}

TEST_CASE("poisson truncation keeps the second moment") {
    auto m = DegreeModel::poisson(2.0);
    double total = 0.0;
    for (const auto& [k, lam] : m.lambdas()) total += lam;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.rho2() == doctest::Approx(4.0).epsilon(1e-8));  // E[D(D-1)] = mean^2
    CHECK(m.nu() == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("model and degree file round trips") {
    DegreeModel m({{1, 0.76}, {2, 0.2}, {3, 0.04}});
    auto text = m.to_json_text();
    auto back = DegreeModel::from_json_text(text);
    CHECK(back.nu() == doctest::Approx(m.nu()).epsilon(1e-15));

    const char* path = "degseq_roundtrip.txt";
    DegreeSequence d({2, 1, 1, 0});
    d.save_text(path);
    auto loaded = DegreeSequence::load(path);
    CHECK(loaded.degrees() == d.degrees());
    std::remove(path);

    const char* jpath = "degseq_counts.json";
    {
        std::ofstream out(jpath);
        out << "{\"counts\": {\"2\": 1, \"1\": 2, \"0\": 1}}";
    }
    auto from_counts = DegreeSequence::load(jpath);
    CHECK(from_counts.n() == 4);
    CHECK(from_counts.half_edges() == 4);
    std::remove(jpath);
}
