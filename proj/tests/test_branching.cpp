#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>

#include "cmlaws/branching.hpp"
#include "cmlaws/fragcat.hpp"
#include "cmlaws/rational.hpp"

using namespace cmlaws;

namespace {

const DegreeModel& test_model() {
    static DegreeModel model({{1, 0.76}, {2, 0.2}, {3, 0.04}});  // nu = 1/2 exactly
    return model;
}

// Sum of p_tree over every forest with at most `max_vertices` vertices,
// enumerated directly over breadth-first offspring sequences.
double forest_mass_upto(int roots, const OffspringModel& model, RootLaw root_law,
                        int max_vertices) {
    double total = 0.0;
    std::function<void(std::vector<int>&, double)> rec = [&](std::vector<int>& counts,
                                                             double mass) {
        int assigned = static_cast<int>(counts.size());
        int existing = roots;
        for (int c : counts) existing += c;
        if (existing > max_vertices) return;
        if (assigned == existing) {
            total += mass;
            return;
        }
        RootLaw law = assigned < roots ? root_law : RootLaw::SizeBiased;
        for (int j = 0; j <= model.max_offspring(law); ++j) {
            double pj = model.prob(law, j);
            if (pj == 0.0) continue;
            counts.push_back(j);
            rec(counts, mass * pj);
            counts.pop_back();
        }
    };
    std::vector<int> counts;
    rec(counts, 1.0);
    return total;
}

}  // namespace

TEST_CASE("offspring laws normalize exactly for rational models") {
    // lambda = (76, 20, 4)/100: rho1 = 128/100, rho2 = 64/100
    Rational rho1(128, 100), rho2(64, 100);
    Rational dhat0 = Rational(1, 1) * Rational(76, 100) / rho1;
    Rational dhat1 = Rational(2, 1) * Rational(20, 100) / rho1;
    Rational dhat2 = Rational(3, 1) * Rational(4, 100) / rho1;
    CHECK(dhat0 + dhat1 + dhat2 == Rational(1));
    Rational dt0 = Rational(2, 1) * Rational(20, 100) / rho2;
    Rational dt1 = Rational(6, 1) * Rational(4, 100) / rho2;
    CHECK(dt0 + dt1 == Rational(1));

    OffspringModel off(test_model());
    CHECK(off.prob(RootLaw::SizeBiased, 0) == doctest::Approx(dhat0.to_double()).epsilon(1e-15));
    CHECK(off.prob(RootLaw::SizeBiased, 1) == doctest::Approx(dhat1.to_double()).epsilon(1e-15));
    CHECK(off.prob(RootLaw::SizeBiased, 2) == doctest::Approx(dhat2.to_double()).epsilon(1e-15));
    CHECK(off.prob(RootLaw::CycleRoot, 0) == doctest::Approx(dt0.to_double()).epsilon(1e-15));
    CHECK(off.prob(RootLaw::CycleRoot, 1) == doctest::Approx(dt1.to_double()).epsilon(1e-15));

    double sum_hat = 0.0, sum_tilde = 0.0;
    for (double p : off.pmf(RootLaw::SizeBiased)) sum_hat += p;
    for (double p : off.pmf(RootLaw::CycleRoot)) sum_tilde += p;
    CHECK(sum_hat == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sum_tilde == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mean of the size-biased law equals nu") {
    OffspringModel off(test_model());
    CHECK(off.mean_size_biased() == doctest::Approx(0.5).epsilon(1e-12));
    DegreeModel other({{0, 0.2}, {1, 0.3}, {2, 0.3}, {4, 0.2}});
    OffspringModel off2(other);
    CHECK(off2.mean_size_biased() == doctest::Approx(other.nu()).epsilon(1e-12));
}

TEST_CASE("sample_forest worked examples") {
    // all mass on degree 1: the size-biased law is concentrated at zero
    DegreeModel leaves({{1, 1.0}});
    OffspringModel off(leaves);
    RngStream rng(5);
    auto f = sample_forest(4, off, RootLaw::SizeBiased, rng);
    CHECK_FALSE(f.overflow);
    CHECK(f.forest.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(f.forest.child_count[static_cast<std::size_t>(i)] == 0);

    OffspringModel sub(test_model());
    for (int rep = 0; rep < 50; ++rep) {
        auto g = sample_forest(3, sub, RootLaw::CycleRoot, rng);
        REQUIRE_FALSE(g.overflow);
        CHECK(p_tree(g.forest, sub, RootLaw::CycleRoot) > 0.0);
    }
}

TEST_CASE("extinction is certain in the subcritical regime") {
    OffspringModel off(test_model());
    RngStream rng(99);
    int finished = 0;
    const int runs = 100000;
    for (int r = 0; r < runs; ++r) {
        auto f = sample_forest(1, off, RootLaw::SizeBiased, rng, 100000);
        if (!f.overflow) ++finished;
    }
    CHECK(finished == runs);
}

TEST_CASE("p_tree worked examples") {
    OffspringModel off(test_model());
    // k isolated roots
    LLForest bare;
    bare.roots = 3;
    bare.parent = {-1, -1, -1};
    bare.child_count = {0, 0, 0};
    CHECK(p_tree(bare, off, RootLaw::CycleRoot) ==
          doctest::Approx(std::pow(off.prob(RootLaw::CycleRoot, 0), 3)).epsilon(1e-14));

    // one root with two children, both leaves
    LLForest star;
    star.roots = 1;
    star.parent = {-1, 0, 0};
    star.child_count = {2, 0, 0};
    CHECK(p_tree(star, off, RootLaw::SizeBiased) ==
          doctest::Approx(off.prob(RootLaw::SizeBiased, 2) *
                          std::pow(off.prob(RootLaw::SizeBiased, 0), 2))
              .epsilon(1e-14));
}

TEST_CASE("forest masses fill up to one as the size cap grows") {
    OffspringModel off(test_model());
    double previous = 0.0;
    for (int cap : {1, 2, 4, 8, 16, 24}) {
        double mass = forest_mass_upto(1, off, RootLaw::SizeBiased, cap);
        CHECK(mass >= previous);
        CHECK(mass <= 1.0 + 1e-12);
        previous = mass;
    }
    CHECK(previous > 0.99);

    double pair_mass = forest_mass_upto(2, off, RootLaw::CycleRoot, 24);
    CHECK(pair_mass > 0.98);
    CHECK(pair_mass <= 1.0 + 1e-12);
}

TEST_CASE("limit fragment sampler hits the acyclic mass") {
    RngStream rng(2211);
    const int draws = 200000;
    int empty = 0, overflow = 0;
    for (int i = 0; i < draws; ++i) {
        auto s = sample_limit_fragment(test_model(), rng);
        if (s.overflow) ++overflow;
        else if (s.fragment.empty()) ++empty;
    }
    CHECK(overflow == 0);
    double p = static_cast<double>(empty) / draws;
    double theo = std::sqrt(0.5);
    double se = std::sqrt(theo * (1.0 - theo) / draws);
    CHECK(std::abs(p - theo) < 3.0 * se);
}

TEST_CASE("limit fragment sampler matches the catalogue on the top entries") {
    auto catalogue = enumerate_catalogue(test_model(), 1e-6, CatalogueVariant::Multigraph);
    REQUIRE(catalogue.entries.size() >= 10);
    RngStream rng(37);
    const int draws = 200000;
    std::map<std::string, int> freq;
    for (int i = 0; i < draws; ++i) {
        auto s = sample_limit_fragment(test_model(), rng);
        REQUIRE_FALSE(s.overflow);
        freq[s.fragment.code()] += 1;
    }
    double tv = 0.0, emp_top = 0.0, theo_top = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        const auto& e = catalogue.entries[i];
        double emp = freq.count(e.code) ? static_cast<double>(freq.at(e.code)) / draws : 0.0;
        tv += std::abs(emp - e.pstar);
        emp_top += emp;
        theo_top += e.pstar;
    }
    tv += std::abs((1.0 - emp_top) - (1.0 - theo_top));
    tv *= 0.5;
    CHECK(tv < 0.01);
}

TEST_CASE("nearly-degenerate model yields the empty fragment") {
    DegreeModel tiny({{1, 0.999}, {2, 0.001}});  // nu close to zero
    RngStream rng(4);
    int empty = 0;
    for (int i = 0; i < 2000; ++i)
        if (sample_limit_fragment(tiny, rng).fragment.empty()) ++empty;
    CHECK(empty > 1990);
}
