#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cmlaws/degseq.hpp"
#include "cmlaws/fragcat.hpp"

namespace cmlaws {

/// Sorted disjoint closed intervals within [0,1].
struct IntervalUnion {
    std::vector<std::pair<double, double>> intervals;

    bool contains(double x, double eps = 0.0) const;
    bool is_full_unit_interval(double eps = 1e-9) const;
    /// Open gaps between consecutive intervals.
    std::vector<std::pair<double, double>> gaps() const;
    /// True iff mapping x -> 1-x permutes the intervals, within eps.
    bool symmetric(double eps = 1e-9) const;
};

/// Merges possibly overlapping intervals; endpoints within `seam` are glued.
IntervalUnion merge_intervals(std::vector<std::pair<double, double>> intervals,
                              double seam = 1e-12);

struct GapCertificate {
    std::size_t index = 0;  // 1-based rank in the probability-sorted sequence
    double p_i = 0.0;
    double tail = 0.0;  // sum of all later probabilities
    bool valid() const { return p_i > tail; }
};

struct KakeyaCheckResult {
    bool full_interval = false;
    std::size_t first_violation = 0;  // 1-based; meaningful when not full
};

/// Kakeya's criterion on a sorted non-increasing sequence with the given
/// tails (tails[i] = sum_{j>i} ps[j]): the partial-sum set is the full
/// interval iff ps[i] <= tails[i] for every i. Unsorted input is rejected.
KakeyaCheckResult kakeya_check(const std::vector<double>& ps, const std::vector<double>& tails);

/// Smallest K with sum_{j=3}^{K-2} 1/j >= 4/nu: beyond sandwich index K the
/// harmonic two-cycle bound certifies the Kakeya condition. Valid for
/// 0 < nu <= 1.
int safe_tail_index(double nu);

/// Smallest k >= 3 such that for all sandwich indices >= k the combined
/// long-cycle plus two-cycle class masses already dominate Q nu^k/2k. Sharper
/// than the harmonic criterion; used to pick an enumerable catalogue floor.
int certified_tail_start(double nu);

/// Catalogue floor below which every fragment is certified to satisfy the
/// Kakeya condition: Q nu^k0 / (2 k0) at k0 = certified_tail_start(nu).
double certified_floor(double nu);

enum class SetVerdict { FullInterval, HasGaps };

struct AnalysisResult {
    double nu = 0.0;
    double q = 0.0;           // Q(nu)
    double floor = 0.0;       // certified catalogue floor
    int k0 = 0;               // certified tail start
    std::size_t head_size = 0;  // last violating index i*; 0 when none
    std::vector<double> head_probs;
    double tail_mass = 0.0;  // mass after the head
    IntervalUnion set;
    std::vector<GapCertificate> gap_certificates;
    SetVerdict verdict = SetVerdict::FullInterval;

    std::string to_json_text() const;
};

/// Computes the closure of the limit-probability set as a finite union of
/// intervals: builds the simple-fragment catalogue down to the certified
/// floor, locates every index violating the Kakeya condition, and merges
/// [sigma_A, sigma_A + T] over all subsets A of the violating head.
/// Rejects nu >= 1 and aborts if the head exceeds 25 indices.
AnalysisResult analyze(const DegreeModel& model, double eps = 1e-12);

struct ThresholdReport {
    double nu = 0.0;
    double nu0 = 0.0;
    double q = 0.0;  // Q(nu) for nu < 1, 0 otherwise
    SetVerdict verdict = SetVerdict::FullInterval;

    std::string to_json_text() const;
};

/// Full-interval verdict from the closed forms alone: full iff nu >= 1 or
/// Q(nu) <= 1/2 (equivalently nu >= nu0).
ThresholdReport threshold_report(const DegreeModel& model);
ThresholdReport threshold_report_for_nu(double nu);

}  // namespace cmlaws
