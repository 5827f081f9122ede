#include "cmlaws/branching.hpp"

#include <cmath>
#include <stdexcept>

#include "cmlaws/limits.hpp"

namespace cmlaws {

OffspringModel::OffspringModel(const DegreeModel& model) {
    const int kmax = model.max_support();
    degree_.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
    for (const auto& [k, lam] : model.lambdas()) degree_[static_cast<std::size_t>(k)] = lam;

    if (model.rho1() > 0.0) {
        size_biased_.assign(static_cast<std::size_t>(std::max(kmax, 1)), 0.0);
        for (int i = 1; i <= kmax; ++i)
            size_biased_[static_cast<std::size_t>(i - 1)] = i * model.lambda(i) / model.rho1();
    } else {
        size_biased_ = {1.0};
    }
    if (model.rho2() > 0.0) {
        cycle_root_.assign(static_cast<std::size_t>(std::max(kmax - 1, 1)), 0.0);
        for (int i = 2; i <= kmax; ++i)
            cycle_root_[static_cast<std::size_t>(i - 2)] =
                static_cast<double>(i) * (i - 1) * model.lambda(i) / model.rho2();
    } else {
        cycle_root_ = {1.0};
    }
}

const std::vector<double>& OffspringModel::pmf(RootLaw law) const {
    switch (law) {
        case RootLaw::Degree: return degree_;
        case RootLaw::SizeBiased: return size_biased_;
        default: return cycle_root_;
    }
}

double OffspringModel::prob(RootLaw law, int j) const {
    const auto& p = pmf(law);
    if (j < 0 || j >= static_cast<int>(p.size())) return 0.0;
    return p[static_cast<std::size_t>(j)];
}

double OffspringModel::mean_size_biased() const {
    double mean = 0.0;
    for (std::size_t j = 0; j < size_biased_.size(); ++j) mean += j * size_biased_[j];
    return mean;
}

int OffspringModel::max_offspring(RootLaw law) const {
    const auto& p = pmf(law);
    for (int j = static_cast<int>(p.size()) - 1; j >= 0; --j)
        if (p[static_cast<std::size_t>(j)] > 0.0) return j;
    return 0;
}

namespace {

int draw_offspring(const std::vector<double>& pmf, RngStream& rng) {
    double u = rng.u01();
    double cum = 0.0;
    for (std::size_t j = 0; j < pmf.size(); ++j) {
        cum += pmf[j];
        if (u < cum) return static_cast<int>(j);
    }
    return static_cast<int>(pmf.size()) - 1;
}

}  // namespace

ForestSample sample_forest(int k, const OffspringModel& model, RootLaw root_law, RngStream& rng,
                           int cap) {
    if (cap <= 0) throw std::invalid_argument("sample_forest: cap must be positive");
    ForestSample out;
    LLForest& f = out.forest;
    f.roots = k;
    for (int r = 0; r < k; ++r) {
        f.parent.push_back(-1);
        f.child_count.push_back(0);
    }
    // breadth-first expansion; node i's offspring count is assigned when the
    // frontier reaches it
    for (int i = 0; i < f.size(); ++i) {
        RootLaw law = f.parent[static_cast<std::size_t>(i)] < 0 ? root_law : RootLaw::SizeBiased;
        int c = draw_offspring(model.pmf(law), rng);
        f.child_count[static_cast<std::size_t>(i)] = c;
        for (int j = 0; j < c; ++j) {
            f.parent.push_back(i);
            f.child_count.push_back(0);
        }
        if (f.size() > cap) {
            out.overflow = true;
            return out;
        }
    }
    return out;
}

double p_tree(const LLForest& f, const OffspringModel& model, RootLaw root_law) {
    double p = 1.0;
    for (int i = 0; i < f.size(); ++i) {
        RootLaw law = f.parent[static_cast<std::size_t>(i)] < 0 ? root_law : RootLaw::SizeBiased;
        p *= model.prob(law, f.child_count[static_cast<std::size_t>(i)]);
    }
    return p;
}

LimitFragmentSample sample_limit_fragment(const DegreeModel& model, RngStream& rng, int cap) {
    const double nu = model.nu();
    if (nu >= 1.0) throw std::domain_error("sample_limit_fragment: requires nu < 1");
    OffspringModel offspring(model);

    LimitFragmentSample out;
    std::vector<int> cycle_lengths;
    for (int k = 1;; ++k) {
        double mean = xi(k, nu);
        if (mean < 1e-15) break;
        int count = rng.poisson(mean);
        for (int c = 0; c < count; ++c) cycle_lengths.push_back(k);
    }
    if (cycle_lengths.empty()) {
        out.fragment = Fragment{};
        return out;
    }

    int total_roots = 0;
    for (int k : cycle_lengths) total_roots += k;
    auto forest = sample_forest(total_roots, offspring, RootLaw::CycleRoot, rng, cap);
    if (forest.overflow) {
        out.overflow = true;
        return out;
    }

    // assemble the multigraph: cycles first, then the forest grafted onto
    // the cycle vertices in order
    const LLForest& f = forest.forest;
    Multigraph g(f.size());
    int base = 0;
    for (int k : cycle_lengths) {
        if (k == 1) {
            g.add_edge(base, base);
        } else if (k == 2) {
            g.add_edge(base, base + 1, 2);
        } else {
            for (int i = 0; i < k; ++i) g.add_edge(base + i, base + (i + 1) % k);
        }
        base += k;
    }
    for (int i = total_roots; i < f.size(); ++i)
        g.add_edge(f.parent[static_cast<std::size_t>(i)], i);

    out.fragment = extract_fragment(g);
    return out;
}

}  // namespace cmlaws
