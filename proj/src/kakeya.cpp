#include "cmlaws/kakeya.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "cmlaws/limits.hpp"

namespace cmlaws {

using nlohmann::json;

bool IntervalUnion::contains(double x, double eps) const {
    for (const auto& [a, b] : intervals)
        if (x >= a - eps && x <= b + eps) return true;
    return false;
}

bool IntervalUnion::is_full_unit_interval(double eps) const {
    return intervals.size() == 1 && intervals[0].first <= eps &&
           intervals[0].second >= 1.0 - eps;
}

std::vector<std::pair<double, double>> IntervalUnion::gaps() const {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 1; i < intervals.size(); ++i)
        out.emplace_back(intervals[i - 1].second, intervals[i].first);
    return out;
}

bool IntervalUnion::symmetric(double eps) const {
    for (const auto& [a, b] : intervals) {
        bool found = false;
        for (const auto& [c, d] : intervals) {
            if (std::abs((1.0 - b) - c) <= eps && std::abs((1.0 - a) - d) <= eps) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

IntervalUnion merge_intervals(std::vector<std::pair<double, double>> intervals, double seam) {
    std::sort(intervals.begin(), intervals.end());
    IntervalUnion out;
    for (const auto& [a, b] : intervals) {
        if (!out.intervals.empty() && a <= out.intervals.back().second + seam) {
            out.intervals.back().second = std::max(out.intervals.back().second, b);
        } else {
            out.intervals.emplace_back(a, b);
        }
    }
    return out;
}

KakeyaCheckResult kakeya_check(const std::vector<double>& ps, const std::vector<double>& tails) {
    if (ps.size() != tails.size()) throw std::invalid_argument("kakeya_check: size mismatch");
    for (std::size_t i = 1; i < ps.size(); ++i)
        if (ps[i] > ps[i - 1]) throw std::invalid_argument("kakeya_check: ps not sorted");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i] > tails[i]) return {false, i + 1};
    }
    return {true, 0};
}

int safe_tail_index(double nu) {
    if (nu <= 0.0 || nu > 1.0) throw std::domain_error("safe_tail_index: requires 0 < nu <= 1");
    const double target = 4.0 / nu;
    double sum = 0.0;
    for (int k = 5;; ++k) {
        sum += 1.0 / (k - 2);  // adds the j = k-2 term of sum_{j=3}^{K-2} 1/j
        if (sum >= target) return k;
        if (k > 100'000'000) throw std::runtime_error("safe_tail_index: did not converge");
    }
}

namespace {

// Lower bound on tail/(Q nu^k / 2k) for indices with sandwich value k:
// the single-cycle classes of length > k plus the pairs-of-cycles classes
// with total length k+1, all of which rank strictly below such indices.
double certified_ratio(double nu, int k) {
    // k * sum_{m>=1} nu^m / (k+m), truncated when the geometric tail is dust
    double single = 0.0;
    double power = 1.0;
    for (int m = 1; m < 100'000; ++m) {
        power *= nu;
        double term = power * k / static_cast<double>(k + m);
        single += term;
        if (power / (1.0 - nu) < 1e-15 * (single + 1e-300)) break;
    }
    // (nu k / 4) * sum_{l=3}^{k-2} 1/(l (k-l+1))
    double pairs = 0.0;
    for (int l = 3; l <= k - 2; ++l)
        pairs += 1.0 / (static_cast<double>(l) * (k - l + 1));
    pairs *= nu * k / 4.0;
    return single + pairs;
}

}  // namespace

int certified_tail_start(double nu) {
    if (nu <= 0.0 || nu >= 1.0) throw std::domain_error("certified_tail_start: requires 0 < nu < 1");
    for (int k = 3; k <= 2'000'000; ++k) {
        // certified_ratio is increasing in k, so the first hit certifies all
        // larger sandwich indices as well
        if (certified_ratio(nu, k) >= 1.0) return k;
    }
    throw std::runtime_error("certified_tail_start: did not converge");
}

double certified_floor(double nu) {
    const int k0 = certified_tail_start(nu);
    return q_acyclic(nu) * std::pow(nu, k0) / (2.0 * k0);
}

std::string AnalysisResult::to_json_text() const {
    json j;
    j["nu"] = nu;
    j["nu0"] = solve_nu0(1e-9);
    j["Q"] = q;
    j["verdict"] = verdict == SetVerdict::FullInterval ? "full" : "gap";
    j["floor"] = floor;
    j["K_star"] = safe_tail_index(nu);
    j["k_certified"] = k0;
    json iv = json::array();
    for (const auto& [a, b] : set.intervals) iv.push_back({a, b});
    j["intervals"] = iv;
    json gj = json::array();
    for (const auto& g : gap_certificates)
        gj.push_back({{"i", g.index}, {"p_i", g.p_i}, {"tail", g.tail}});
    j["gaps"] = gj;
    return j.dump(2);
}

AnalysisResult analyze(const DegreeModel& model, double eps) {
    const double nu = model.nu();
    if (nu >= 1.0) throw std::domain_error("analyze: requires nu < 1 (the set is [0,1] otherwise)");
    if (nu <= 0.0) throw std::domain_error("analyze: requires nu > 0");

    AnalysisResult result;
    result.nu = nu;
    result.q = q_acyclic(nu);
    result.k0 = certified_tail_start(nu);
    result.floor = q_acyclic(nu) * std::pow(nu, result.k0) / (2.0 * result.k0);
    if (result.floor < 1e-300)
        throw std::domain_error("analyze: certified floor underflows at this nu; the violating "
                                "head is too large to enumerate");

    // one-ulp slack so classes sitting exactly on the floor are opened
    auto catalogue =
        enumerate_catalogue(model, result.floor * (1.0 - 1e-9), CatalogueVariant::Simple);

    // Every enumerated index is checked directly; indices beyond the floor
    // carry sandwich value >= k0 and are certified by construction.
    std::size_t last_violation = 0;
    double prefix = 0.0;
    for (std::size_t i = 0; i < catalogue.entries.size(); ++i) {
        double p = catalogue.entries[i].prob;
        prefix += p;
        double tail = 1.0 - prefix;
        if (p > tail + eps) {
            last_violation = i + 1;
            result.gap_certificates.push_back({i + 1, p, tail});
        }
    }

    result.head_size = last_violation;
    if (last_violation > 25)
        throw std::runtime_error(
            "analyze: head of " + std::to_string(last_violation) +
            " violating indices needs more than 2^25 subset sums; refine manually");

    double head_mass = 0.0;
    for (std::size_t i = 0; i < last_violation; ++i) {
        result.head_probs.push_back(catalogue.entries[i].prob);
        head_mass += catalogue.entries[i].prob;
    }
    result.tail_mass = 1.0 - head_mass;

    std::vector<std::pair<double, double>> pieces;
    const std::size_t subsets = static_cast<std::size_t>(1) << last_violation;
    pieces.reserve(subsets);
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        double sigma = 0.0;
        for (std::size_t b = 0; b < last_violation; ++b)
            if (mask & (static_cast<std::size_t>(1) << b)) sigma += result.head_probs[b];
        pieces.emplace_back(sigma, sigma + result.tail_mass);
    }
    result.set = merge_intervals(std::move(pieces));
    result.verdict = result.set.is_full_unit_interval() ? SetVerdict::FullInterval
                                                        : SetVerdict::HasGaps;
    return result;
}

std::string ThresholdReport::to_json_text() const {
    json j;
    j["nu"] = nu;
    j["nu0"] = nu0;
    j["Q"] = q;
    j["verdict"] = verdict == SetVerdict::FullInterval ? "full" : "gap";
    return j.dump(2);
}

ThresholdReport threshold_report_for_nu(double nu) {
    ThresholdReport report;
    report.nu = nu;
    report.nu0 = solve_nu0(1e-9);
    if (nu >= 1.0) {
        report.q = 0.0;
        report.verdict = SetVerdict::FullInterval;
    } else {
        report.q = q_acyclic(nu);
        report.verdict =
            report.q <= 0.5 ? SetVerdict::FullInterval : SetVerdict::HasGaps;
    }
    return report;
}

ThresholdReport threshold_report(const DegreeModel& model) {
    return threshold_report_for_nu(model.nu());
}

}  // namespace cmlaws
