#include "cmlaws/degseq.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cmlaws {

using nlohmann::json;

DegreeSequence::DegreeSequence(std::vector<std::int32_t> degrees) : degrees_(std::move(degrees)) {
    for (std::int32_t d : degrees_) {
        if (d < 0) throw std::invalid_argument("DegreeSequence: negative degree");
        counts_[d] += 1;
        half_edges_ += d;
        max_degree_ = std::max(max_degree_, d);
    }
    if (half_edges_ % 2 != 0)
        throw std::invalid_argument("DegreeSequence: odd half-edge total " +
                                    std::to_string(half_edges_));
}

std::int64_t DegreeSequence::count(int k) const {
    auto it = counts_.find(k);
    return it == counts_.end() ? 0 : it->second;
}

std::int64_t DegreeSequence::n_hat() const {
    std::int64_t s = 0;
    for (const auto& [k, nk] : counts_)
        if (k >= 2) s += nk;
    return s;
}

DegreeSequence DegreeSequence::from_counts(const std::map<int, std::int64_t>& counts) {
    std::vector<std::int32_t> degrees;
    for (const auto& [k, nk] : counts) {
        if (nk < 0) throw std::invalid_argument("DegreeSequence: negative count");
        for (std::int64_t i = 0; i < nk; ++i) degrees.push_back(k);
    }
    return DegreeSequence(std::move(degrees));
}

DegreeSequence DegreeSequence::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open degree file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j = json::parse(text);
        std::map<int, std::int64_t> counts;
        for (const auto& [key, val] : j.at("counts").items())
            counts[std::stoi(key)] = val.get<std::int64_t>();
        return from_counts(counts);
    }
    std::vector<std::int32_t> degrees;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        degrees.push_back(std::stoi(line));
    }
    return DegreeSequence(std::move(degrees));
}

void DegreeSequence::save_text(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write degree file: " + path);
    for (std::int32_t d : degrees_) out << d << '\n';
}

DegreeModel::DegreeModel(std::map<int, double> lambdas) : lambdas_(std::move(lambdas)) {
    double total = 0.0;
    for (const auto& [k, lam] : lambdas_) {
        if (k < 0) throw std::invalid_argument("DegreeModel: negative degree");
        if (lam < 0.0) throw std::invalid_argument("DegreeModel: negative mass");
        total += lam;
        rho1_ += lam * k;
        rho2_ += lam * k * (k - 1.0);
        if (lam > 0.0) max_support_ = std::max(max_support_, k);
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("DegreeModel: masses sum to " + std::to_string(total));
    lambda_hat_ = 1.0 - lambda(0) - lambda(1);
}

double DegreeModel::lambda(int k) const {
    auto it = lambdas_.find(k);
    return it == lambdas_.end() ? 0.0 : it->second;
}

double DegreeModel::nu() const {
    if (rho1_ <= 0.0) throw std::domain_error("DegreeModel: nu undefined, rho1 = 0");
    return rho2_ / rho1_;
}

DegreeModel DegreeModel::poisson(double mean, double rho2_tail) {
    if (mean <= 0.0) throw std::invalid_argument("poisson mean must be positive");
    // Walk the pmf until the remaining contribution to rho2 is below the
    // target, then renormalize the kept prefix.
    std::map<int, double> lam;
    double p = std::exp(-mean);
    double rho2_seen = 0.0;
    const double rho2_total = mean * mean;
    int k = 0;
    for (;;) {
        lam[k] = p;
        rho2_seen += p * k * (k - 1.0);
        if (k > mean && rho2_total - rho2_seen < rho2_tail) break;
        if (k > 10'000) throw std::runtime_error("poisson truncation did not converge");
        ++k;
        p *= mean / k;
    }
    double total = 0.0;
    for (const auto& [kk, l] : lam) total += l;
    for (auto& [kk, l] : lam) l /= total;
    return DegreeModel(std::move(lam));
}

DegreeModel DegreeModel::from_json_text(const std::string& text) {
    json j = json::parse(text);
    std::map<int, double> lam;
    for (const auto& [key, val] : j.at("lambdas").items()) lam[std::stoi(key)] = val.get<double>();
    if (j.contains("truncation")) {
        int kmax = j["truncation"].get<int>();
        double dropped = 0.0;
        for (auto it = lam.begin(); it != lam.end();) {
            if (it->first > kmax) {
                dropped += it->second;
                it = lam.erase(it);
            } else {
                ++it;
            }
        }
        if (dropped > 0.0) {
            double keep = 1.0 - dropped;
            for (auto& [k, l] : lam) l /= keep;
        }
    }
    return DegreeModel(std::move(lam));
}

DegreeModel DegreeModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::string DegreeModel::to_json_text() const {
    json lam = json::object();
    for (const auto& [k, l] : lambdas_) lam[std::to_string(k)] = l;
    json j;
    j["lambdas"] = lam;
    j["truncation"] = max_support_;
    return j.dump(2);
}

void DegreeModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << to_json_text() << '\n';
}

MomentSummary moments(const DegreeSequence& d) {
    MomentSummary s;
    s.max_degree = d.max_degree();
    const double n = d.n();
    if (n == 0) throw std::invalid_argument("moments: empty sequence");
    for (const auto& [k, nk] : d.counts()) {
        s.rho1 += nk * static_cast<double>(k);
        s.rho2 += nk * static_cast<double>(k) * (k - 1.0);
        if (k >= 2) s.lambda_hat += nk;
    }
    s.rho1 /= n;
    s.rho2 /= n;
    s.lambda_hat /= n;
    if (s.rho1 > 0.0) s.nu = s.rho2 / s.rho1;
    return s;
}

bool is_feasible(const std::vector<std::int32_t>& degrees) {
    std::int64_t total = 0;
    for (auto d : degrees) {
        if (d < 0) return false;
        total += d;
    }
    if (total % 2 != 0) return false;
    return is_feasible(DegreeSequence(degrees));
}

bool is_feasible(const DegreeSequence& d) {
    std::vector<std::int64_t> deg(d.degrees().begin(), d.degrees().end());
    std::sort(deg.begin(), deg.end(), std::greater<>());
    const std::int64_t n = static_cast<std::int64_t>(deg.size());
    if (n == 0) return true;
    if (deg[0] >= n) return false;

    // Erdos-Gallai: for each k, sum of the k largest degrees is at most
    // k(k-1) + sum_{i>k} min(d_i, k). The right sum is evaluated with prefix
    // sums over the sorted tail.
    std::vector<std::int64_t> suffix(n + 1, 0);
    for (std::int64_t i = n - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + deg[i];
    std::int64_t prefix = 0;
    for (std::int64_t k = 1; k <= n; ++k) {
        prefix += deg[k - 1];
        // first index >= k whose degree is < k
        auto it = std::lower_bound(deg.begin() + k, deg.end(), k - 1, std::greater<>());
        std::int64_t cut = it - deg.begin();  // indices [k, cut) have degree >= k
        std::int64_t rhs = k * (k - 1) + (cut - k) * k + suffix[cut];
        if (prefix > rhs) return false;
    }
    return true;
}

DegreeSequence realize(const DegreeModel& model, int n, RoundingPolicy policy) {
    if (n < 1) throw std::invalid_argument("realize: n must be positive");

    struct Target {
        int k;
        std::int64_t count;
        double remainder;
    };
    std::vector<Target> targets;
    std::int64_t assigned = 0;
    for (const auto& [k, lam] : model.lambdas()) {
        if (lam <= 0.0) continue;
        double exact = lam * n;
        auto base = static_cast<std::int64_t>(std::floor(exact));
        targets.push_back({k, base, exact - base});
        assigned += base;
    }
    if (targets.empty()) throw std::invalid_argument("realize: model has empty support");

    std::int64_t leftover = n - assigned;
    if (policy == RoundingPolicy::LargestRemainder) {
        std::vector<std::size_t> order(targets.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (targets[a].remainder != targets[b].remainder)
                return targets[a].remainder > targets[b].remainder;
            return targets[a].k < targets[b].k;
        });
        for (std::size_t i = 0; leftover > 0; i = (i + 1) % order.size(), --leftover)
            targets[order[i]].count += 1;
    } else {
        std::vector<std::size_t> order(targets.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return model.lambda(targets[a].k) > model.lambda(targets[b].k);
        });
        for (std::size_t i = 0; leftover > 0; i = (i + 1) % order.size(), --leftover)
            targets[order[i]].count += 1;
    }

    std::map<int, std::int64_t> counts;
    std::int64_t m = 0;
    for (const auto& t : targets) {
        if (t.count > 0) counts[t.k] = t.count;
        m += t.count * t.k;
    }

    if (m % 2 != 0) {
        // Move one vertex from the largest class k with n_k >= 1 into class
        // k-1 when that degree carries model mass; otherwise into k+1. Either
        // move flips the parity of the half-edge total.
        bool fixed = false;
        for (auto it = counts.rbegin(); it != counts.rend() && !fixed; ++it) {
            int k = it->first;
            if (it->second >= 1 && k >= 1 && model.lambda(k - 1) > 0.0) {
                it->second -= 1;
                counts[k - 1] += 1;
                fixed = true;
            }
        }
        if (!fixed) {
            for (auto it = counts.rbegin(); it != counts.rend() && !fixed; ++it) {
                int k = it->first;
                if (it->second >= 1 && model.lambda(k + 1) > 0.0) {
                    it->second -= 1;
                    counts[k + 1] += 1;
                    fixed = true;
                }
            }
        }
        if (!fixed)
            throw std::invalid_argument(
                "realize: cannot reach an even half-edge total within the model support");
        for (auto it = counts.begin(); it != counts.end();) {
            if (it->second == 0)
                it = counts.erase(it);
            else
                ++it;
        }
    }

    return DegreeSequence::from_counts(counts);
}

}  // namespace cmlaws
