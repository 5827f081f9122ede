#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmlaws/degseq.hpp"
#include "cmlaws/fragcat.hpp"

namespace cmlaws {

/// Experiment definition. Either a degree model (realized at each n) or an
/// explicit degree sequence drives the sampling.
struct ExperimentSpec {
    std::string id;
    std::optional<DegreeModel> model;
    std::optional<DegreeSequence> degrees;
    std::vector<int> n_values;
    int trials = 1000;
    std::uint64_t seed = 1;
    int kmax = 4;          // cycle lengths tracked
    int top_m = 20;        // catalogue support for TV distances
    double z_bound = 3.0;  // pre-registered pass bound on |z|
    double tv_bound = 0.02;
    int threads = 0;  // 0 = hardware concurrency

    static ExperimentSpec from_json_text(const std::string& text);
    std::string to_json_text() const;
};

/// One checked statistic: empirical vs. theoretical value with its
/// pre-registered tolerance. `formula` states the limit law being checked.
struct CheckRow {
    std::string statistic;
    std::string formula;
    double empirical = 0.0;
    double theoretical = 0.0;
    double stderror = 0.0;
    double z = 0.0;
    bool pass = false;
};

struct Report {
    std::string experiment_id;
    std::uint64_t seed = 0;
    std::vector<CheckRow> rows;
    bool pass = true;

    std::string to_json_text() const;
    std::string to_csv_text() const;
};

/// Empirical cycle counts against the independent-Poisson limit law: means
/// vs xi_k, variance/mean ratios, pairwise covariances, simplicity rate, and
/// the acyclicity rate conditioned on simplicity.
Report run_cycle_law(const ExperimentSpec& spec);

/// Empirical fragment frequencies against the catalogue over the top-M
/// support, plus the complex-component frequency.
Report run_fragment_law(const ExperimentSpec& spec);

/// Sampler frequencies against the exhaustive matching oracle on a tiny
/// degree sequence; reports per-outcome z-scores and a chi-square statistic.
Report run_oracle_equivalence(const ExperimentSpec& spec);

/// Loop probability across the n-ladder. With a model the sequence family is
/// its realization (bounded control); without, the heavy-tail family with
/// floor(n^0.4) vertices of degree floor(n^0.4) and the rest degree one.
Report run_loop_divergence(const ExperimentSpec& spec);

/// Heavy-tailed degree sequence used by run_loop_divergence: floor(n^0.4)
/// vertices of degree floor(n^0.4), the rest of degree 1, parity-padded.
DegreeSequence heavy_tail_sequence(int n, double exponent = 0.4);

/// Mean total cycles across the n-ladder against -ln(1-nu)/2.
Report run_total_cycles(const ExperimentSpec& spec);

/// Runs the experiment named by spec.id prefix ("cycle_law", "fragment_law",
/// "oracle_equivalence", "loop_divergence", "total_cycles").
Report run_experiment(const ExperimentSpec& spec);

}  // namespace cmlaws
