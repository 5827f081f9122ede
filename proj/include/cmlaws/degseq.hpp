#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cmlaws {

/// A finite degree sequence d_1..d_n. The half-edge total m = sum d_i must be
/// even; odd totals are rejected at construction. Immutable once built.
class DegreeSequence {
public:
    explicit DegreeSequence(std::vector<std::int32_t> degrees);

    int n() const { return static_cast<int>(degrees_.size()); }
    std::int64_t half_edges() const { return half_edges_; }
    const std::vector<std::int32_t>& degrees() const { return degrees_; }
    std::int32_t degree(int v) const { return degrees_[static_cast<std::size_t>(v)]; }
    std::int32_t max_degree() const { return max_degree_; }

    /// counts[k] = number of vertices of degree k (absent keys are zero).
    const std::map<int, std::int64_t>& counts() const { return counts_; }
    std::int64_t count(int k) const;

    /// Number of vertices of degree >= 2.
    std::int64_t n_hat() const;

    static DegreeSequence from_counts(const std::map<int, std::int64_t>& counts);

    /// Loads either plain text (one integer per line) or a JSON object
    /// {"counts": {"k": n_k, ...}}; the format is sniffed from the content.
    static DegreeSequence load(const std::string& path);
    void save_text(const std::string& path) const;

private:
    std::vector<std::int32_t> degrees_;
    std::map<int, std::int64_t> counts_;
    std::int64_t half_edges_ = 0;
    std::int32_t max_degree_ = 0;
};

/// Finite-n moment summary: rho1_n, rho2_n and their ratio nu_n.
struct MomentSummary {
    double rho1 = 0.0;
    double rho2 = 0.0;
    std::optional<double> nu;  // absent when rho1 == 0
    double lambda_hat = 0.0;   // fraction of vertices of degree >= 2
    std::int32_t max_degree = 0;
};

/// Limiting degree distribution D given by point masses lambda_k, with the
/// first two factorial moments and nu = rho2/rho1 derived at construction.
class DegreeModel {
public:
    explicit DegreeModel(std::map<int, double> lambdas);

    const std::map<int, double>& lambdas() const { return lambdas_; }
    double lambda(int k) const;
    int max_support() const { return max_support_; }

    double rho1() const { return rho1_; }
    double rho2() const { return rho2_; }
    /// nu = rho2/rho1. Throws if rho1 == 0.
    double nu() const;
    /// 1 - lambda_0 - lambda_1.
    double lambda_hat() const { return lambda_hat_; }

    /// Poisson(mean) truncated at the smallest K whose discarded rho2 tail is
    /// below `rho2_tail`, then renormalized.
    static DegreeModel poisson(double mean, double rho2_tail = 1e-9);

    /// JSON object {"lambdas": {"k": lambda_k, ...}, "truncation": K}.
    static DegreeModel load(const std::string& path);
    static DegreeModel from_json_text(const std::string& text);
    std::string to_json_text() const;
    void save(const std::string& path) const;

private:
    std::map<int, double> lambdas_;
    double rho1_ = 0.0;
    double rho2_ = 0.0;
    double lambda_hat_ = 0.0;
    int max_support_ = 0;
};

enum class RoundingPolicy {
    LargestRemainder,  // floor targets, then distribute leftovers by remainder
    Floor,             // floor targets, leftovers assigned by descending mass
};

MomentSummary moments(const DegreeSequence& d);

/// True iff a simple graph with this degree sequence exists
/// (even half-edge sum plus the Erdos-Gallai inequalities).
bool is_feasible(const DegreeSequence& d);
/// Raw-vector form; odd half-edge totals simply return false.
bool is_feasible(const std::vector<std::int32_t>& degrees);

/// Rounds n*lambda_k to integer degree counts, fixes the count total to n and
/// the half-edge total to even parity, touching only degrees with positive
/// model mass. Deterministic for a given (model, n, policy).
DegreeSequence realize(const DegreeModel& model, int n,
                       RoundingPolicy policy = RoundingPolicy::LargestRemainder);

}  // namespace cmlaws
