#include "cmlaws/fragcat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "cmlaws/branching.hpp"
#include "cmlaws/limits.hpp"

namespace cmlaws {

using nlohmann::json;

double pstar(const Fragment& h, const DegreeModel& model) {
    const double nu = model.nu();
    if (nu >= 1.0) throw std::domain_error("pstar: requires nu < 1");
    double value = std::sqrt(1.0 - nu) / static_cast<double>(authe(h));
    for (const auto& [deg, count] : h.deg_all) {
        double lam = model.lambda(deg);
        if (lam == 0.0) return 0.0;
        double fact = 1.0;
        for (int j = 2; j <= deg; ++j) fact *= j;
        double factor = lam * fact / model.rho1();
        for (int c = 0; c < count; ++c) value *= factor;
    }
    return value;
}

double p_simple(const Fragment& g, const DegreeModel& model) {
    if (!g.simple()) throw std::invalid_argument("p_simple: fragment has 1- or 2-cycles");
    const double nu = model.nu();
    return pstar(g, model) * std::exp(nu / 2.0 + nu * nu / 4.0);
}

std::int64_t gamma_labelings(const Fragment& h) {
    using boost::multiprecision::cpp_int;
    cpp_int numer = 1;
    for (const auto& [k, ak] : h.cycle_type) {
        for (int i = 2; i <= ak; ++i) numer *= i;
        for (int i = 0; i < ak; ++i) numer *= 2 * k;
    }
    for (const auto& [deg, count] : h.deg_cycle)
        for (int c = 0; c < count; ++c)
            for (int j = 2; j <= deg - 2; ++j) numer *= j;
    for (const auto& [deg, count] : h.deg_tree)
        for (int c = 0; c < count; ++c)
            for (int j = 2; j <= deg - 1; ++j) numer *= j;
    cpp_int denom = authe(h);
    if (numer % denom != 0) throw std::logic_error("gamma_labelings: non-integer result");
    cpp_int result = numer / denom;
    if (result > std::numeric_limits<std::int64_t>::max())
        throw std::overflow_error("gamma_labelings: value exceeds int64");
    return static_cast<std::int64_t>(result);
}

double class_sum(const std::map<int, int>& cycle_type, const DegreeModel& model,
                 CatalogueVariant variant) {
    const double nu = model.nu();
    if (nu >= 1.0) throw std::domain_error("class_sum: requires nu < 1");
    double value;
    int kmin;
    if (variant == CatalogueVariant::Multigraph) {
        value = std::sqrt(1.0 - nu);
        kmin = 1;
    } else {
        value = q_acyclic(nu);
        kmin = 3;
    }
    for (const auto& [k, ak] : cycle_type) {
        if (ak == 0) continue;
        if (k < kmin)
            throw std::invalid_argument("class_sum: simple variant requires a_1 = a_2 = 0");
        double x = xi(k, nu);
        for (int i = 1; i <= ak; ++i) value *= x / i;
    }
    return value;
}

double FragmentCatalogue::enumerated_mass() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.prob;
    return s;
}

double FragmentCatalogue::tail_after(std::size_t count) const {
    double prefix = 0.0;
    for (std::size_t i = 0; i < count && i < entries.size(); ++i) prefix += entries[i].prob;
    return 1.0 - prefix;
}

int FragmentCatalogue::sandwich_k(std::size_t i) const {
    if (i == 0 || i >= entries.size())
        throw std::out_of_range("sandwich_k: defined for entry indices >= 1");
    const double q = q_acyclic(nu);
    const double p = entries[i].prob;
    int k = 1;
    while (q * std::pow(nu, k + 1) / (2.0 * (k + 1)) >= p) ++k;
    return k;  // now Q nu^k/2k >= p > Q nu^{k+1}/2(k+1)
}

std::string FragmentCatalogue::to_jsonl() const {
    std::ostringstream out;
    for (const auto& e : entries) {
        json j;
        j["code"] = e.code;
        j["pstar"] = e.pstar;
        if (e.psimple) j["psimple"] = *e.psimple;
        json ct = json::object();
        for (const auto& [k, a] : e.cycle_type) ct[std::to_string(k)] = a;
        j["cycle_type"] = ct;
        out << j.dump() << '\n';
    }
    return out.str();
}

FragmentCatalogue FragmentCatalogue::from_jsonl(const std::string& text) {
    FragmentCatalogue cat;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        CatalogueEntry e;
        e.code = j.at("code").get<std::string>();
        e.pstar = j.at("pstar").get<double>();
        if (j.contains("psimple")) e.psimple = j["psimple"].get<double>();
        for (const auto& [k, a] : j.at("cycle_type").items())
            e.cycle_type[std::stoi(k)] = a.get<int>();
        e.prob = e.psimple ? *e.psimple : e.pstar;
        cat.entries.push_back(std::move(e));
    }
    return cat;
}

namespace {

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// All cycle types (other than the empty one) whose class mass reaches the
// floor, by recursion over the cycle length k.
void collect_types_from(const DegreeModel& model, CatalogueVariant variant, double floor,
                        int kmin, int kmax_bound, int k, std::map<int, int>& current,
                        std::vector<TypeAccount>& out) {
    if (k > kmax_bound) return;
    collect_types_from(model, variant, floor, kmin, kmax_bound, k + 1, current, out);
    for (int a = 1;; ++a) {
        current[k] = a;
        double mass = class_sum(current, model, variant);
        if (mass < floor) break;
        out.push_back({current, mass, 0.0, 0.0});
        collect_types_from(model, variant, floor, kmin, kmax_bound, k + 1, current, out);
    }
    current.erase(k);
}

// One canonical unlabeled rooted tree together with the probability that the
// branching process generates it.
struct CanonicalTree {
    std::string code;
    double q = 0.0;
    int size = 0;
};

void check_budget(std::int64_t& budget) {
    if (--budget < 0)
        throw std::runtime_error("enumeration budget exceeded; raise the floor or the limits");
}

// P(total progeny = s) for s = 0..smax when the root offspring follows
// root_pmf and later generations follow child_pmf. A rigorous per-size
// ceiling for any single canonical tree probability. Subtree sizes use the
// Dwass identity P(|T| = s) = (1/s) P(X_1 + ... + X_s = s - 1).
std::vector<double> progeny_distribution(const std::vector<double>& root_pmf,
                                         const std::vector<double>& child_pmf, int smax) {
    std::vector<double> sub(static_cast<std::size_t>(smax) + 1, 0.0);
    {
        std::vector<double> power{1.0};  // child_pmf convolved s times, truncated
        for (int s = 1; s <= smax; ++s) {
            std::vector<double> next(static_cast<std::size_t>(smax) + 1, 0.0);
            for (std::size_t x = 0; x < power.size(); ++x) {
                double px = power[x];
                if (px == 0.0) continue;
                for (std::size_t y = 0; y < child_pmf.size() && x + y <= static_cast<std::size_t>(smax); ++y)
                    next[x + y] += px * child_pmf[y];
            }
            power = std::move(next);
            sub[static_cast<std::size_t>(s)] = power[static_cast<std::size_t>(s) - 1] / s;
        }
    }
    if (&root_pmf == &child_pmf) return sub;
    // root layer: P(|T| = s) = sum_j root_pmf[j] P(j subtrees total s - 1)
    std::vector<double> out(static_cast<std::size_t>(smax) + 1, 0.0);
    std::vector<double> conv(static_cast<std::size_t>(smax) + 1, 0.0);
    conv[0] = 1.0;  // sub convolved j times
    for (std::size_t j = 0; j < root_pmf.size(); ++j) {
        if (j > 0) {
            std::vector<double> next(static_cast<std::size_t>(smax) + 1, 0.0);
            for (int x = 0; x <= smax; ++x) {
                double cx = conv[static_cast<std::size_t>(x)];
                if (cx == 0.0) continue;
                for (int y = 1; x + y <= smax; ++y)
                    next[static_cast<std::size_t>(x + y)] += cx * sub[static_cast<std::size_t>(y)];
            }
            conv = std::move(next);
        }
        double pj = root_pmf[j];
        if (pj == 0.0) continue;
        for (int s = static_cast<int>(j); s < smax; ++s)
            out[static_cast<std::size_t>(s) + 1] += pj * conv[static_cast<std::size_t>(s)];
    }
    return out;
}

double offspring_c_star(const std::vector<double>& pmf) {
    double c = 0.0, fact = 1.0;
    for (std::size_t j = 0; j < pmf.size(); ++j) {
        if (j > 0) fact *= static_cast<double>(j);
        c = std::max(c, fact * pmf[j]);
    }
    return c;
}

// Canonical trees of the self-recursive child process with q >= threshold,
// built size by size. Complete because q(T) <= c* prod q(T_i) with
// c* = max_j j! P(j) <= 1, so subtrees of kept trees are kept.
std::vector<CanonicalTree> build_child_trees(const std::vector<double>& child_pmf,
                                             const std::vector<double>& size_ceiling,
                                             double threshold, std::int64_t& budget) {
    const int smax = static_cast<int>(size_ceiling.size()) - 1;
    const int max_children = static_cast<int>(child_pmf.size()) - 1;
    const double c_star = offspring_c_star(child_pmf);
    if (c_star > 1.0 + 1e-12)
        throw std::runtime_error(
            "catalogue completeness cannot be certified: some offspring count has "
            "j! P(D-hat = j) > 1");

    std::vector<double> ceiling_suffix_max(static_cast<std::size_t>(smax) + 1, 0.0);
    for (int s = smax; s >= 1; --s)
        ceiling_suffix_max[static_cast<std::size_t>(s)] =
            std::max(size_ceiling[static_cast<std::size_t>(s)],
                     s < smax ? ceiling_suffix_max[static_cast<std::size_t>(s) + 1] : 0.0);

    std::vector<CanonicalTree> kept;
    if (child_pmf[0] > 0.0 && child_pmf[0] >= threshold) kept.push_back({"()", child_pmf[0], 1});

    for (int s = 2; s <= smax; ++s) {
        if (ceiling_suffix_max[static_cast<std::size_t>(s)] < threshold) break;
        std::vector<int> chosen;
        std::vector<CanonicalTree> found;
        // chosen child indices are non-decreasing, so each multiset of
        // subtrees appears exactly once; prod tracks (j!/prod m!) prod q_i
        std::function<void(std::size_t, int, double, int)> rec =
            [&](std::size_t first_child, int size_used, double prod, int run_length) {
                check_budget(budget);
                const int j = static_cast<int>(chosen.size());
                if (size_used == s - 1) {
                    double pj = j <= max_children ? child_pmf[static_cast<std::size_t>(j)] : 0.0;
                    if (pj > 0.0) {
                        double q = pj * prod;
                        if (q >= threshold) {
                            std::string code = "(";
                            for (int idx : chosen)
                                code += kept[static_cast<std::size_t>(idx)].code;
                            code += ")";
                            found.push_back({std::move(code), q, s});
                        }
                    }
                    return;
                }
                if (j == max_children) return;
                for (std::size_t c = first_child; c < kept.size(); ++c) {
                    const auto& child = kept[c];
                    if (size_used + child.size > s - 1) continue;
                    int new_run = (!chosen.empty() && chosen.back() == static_cast<int>(c))
                                      ? run_length + 1
                                      : 1;
                    double new_prod = prod * child.q * static_cast<double>(j + 1) / new_run;
                    if (c_star * new_prod < threshold) {
                        // a repeated pick carries the 1/run factor; the next
                        // candidate starts a fresh run, so only break once a
                        // fresh-run candidate fails (kept is sorted by q)
                        if (new_run > 1) continue;
                        break;
                    }
                    chosen.push_back(static_cast<int>(c));
                    rec(c, size_used + child.size, new_prod, new_run);
                    chosen.pop_back();
                }
            };
        rec(0, 0, 1.0, 0);
        kept.insert(kept.end(), found.begin(), found.end());
        std::sort(kept.begin(), kept.end(), [](const CanonicalTree& a, const CanonicalTree& b) {
            if (a.q != b.q) return a.q > b.q;
            return a.code < b.code;
        });
    }
    return kept;
}

// Canonical trees whose root offspring follows root_pmf and whose subtrees
// come from the child catalogue.
std::vector<CanonicalTree> build_root_trees(const std::vector<double>& root_pmf,
                                            const std::vector<CanonicalTree>& children,
                                            int smax, double threshold, std::int64_t& budget) {
    const int max_children = static_cast<int>(root_pmf.size()) - 1;
    const double c_star = offspring_c_star(root_pmf);

    // optimistic completion: best product of kept child trees of total size
    // <= r (1.0 counts the empty completion)
    std::vector<double> best_single(static_cast<std::size_t>(smax) + 1, 0.0);
    for (const auto& t : children)
        if (t.size <= smax)
            best_single[static_cast<std::size_t>(t.size)] =
                std::max(best_single[static_cast<std::size_t>(t.size)], t.q);
    std::vector<double> best_fill(static_cast<std::size_t>(smax) + 1, 1.0);
    for (int r = 1; r <= smax; ++r) {
        best_fill[static_cast<std::size_t>(r)] = best_fill[static_cast<std::size_t>(r) - 1];
        for (int r1 = 1; r1 <= r; ++r1)
            best_fill[static_cast<std::size_t>(r)] =
                std::max(best_fill[static_cast<std::size_t>(r)],
                         best_single[static_cast<std::size_t>(r1)] *
                             best_fill[static_cast<std::size_t>(r - r1)]);
    }

    std::vector<CanonicalTree> out;
    if (root_pmf[0] > 0.0 && root_pmf[0] >= threshold) out.push_back({"()", root_pmf[0], 1});

    std::vector<int> chosen;
    std::function<void(std::size_t, int, double, int)> rec =
        [&](std::size_t first_child, int size_used, double prod, int run_length) {
            check_budget(budget);
            const int j = static_cast<int>(chosen.size());
            if (j > 0 && j <= max_children) {
                double pj = root_pmf[static_cast<std::size_t>(j)];
                if (pj > 0.0) {
                    double q = pj * prod;
                    if (q >= threshold) {
                        std::string code = "(";
                        for (int idx : chosen) code += children[static_cast<std::size_t>(idx)].code;
                        code += ")";
                        out.push_back({std::move(code), q, size_used + 1});
                    }
                }
            }
            if (j == max_children) return;
            for (std::size_t c = first_child; c < children.size(); ++c) {
                const auto& child = children[c];
                if (size_used + 1 + child.size > smax) continue;
                int new_run = (!chosen.empty() && chosen.back() == static_cast<int>(c))
                                  ? run_length + 1
                                  : 1;
                double new_prod = prod * child.q * static_cast<double>(j + 1) / new_run;
                double opt = c_star * new_prod *
                             best_fill[static_cast<std::size_t>(smax - size_used - 1 - child.size)];
                if (opt < threshold) {
                    if (new_run > 1) continue;
                    // children are sorted by q, but smaller trees later in
                    // the list leave more fill slack, so no break here
                    continue;
                }
                chosen.push_back(static_cast<int>(c));
                rec(c, size_used + child.size, new_prod, new_run);
                chosen.pop_back();
            }
        };
    if (!children.empty() && max_children >= 1) rec(0, 0, 1.0, 0);

    std::sort(out.begin(), out.end(), [](const CanonicalTree& a, const CanonicalTree& b) {
        if (a.q != b.q) return a.q > b.q;
        return a.code < b.code;
    });
    return out;
}

// One decorated cycle: a necklace of root trees with the probability that k
// independent root trees laid on a k-cycle realize it.
struct Necklace {
    std::string code;  // component code "Ck[t1,...,tk]"
    double prob = 0.0;
};

std::vector<std::string> dihedral_minimal(const std::vector<std::string>& trees) {
    const int k = static_cast<int>(trees.size());
    if (k <= 1) return trees;
    if (k == 2) {
        auto s = trees;
        std::sort(s.begin(), s.end());
        return s;
    }
    std::vector<std::string> best;
    for (int dir : {1, -1}) {
        for (int start = 0; start < k; ++start) {
            std::vector<std::string> cand(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i)
                cand[static_cast<std::size_t>(i)] =
                    trees[static_cast<std::size_t>(((start + dir * i) % k + k) % k)];
            if (best.empty() || cand < best) best = std::move(cand);
        }
    }
    return best;
}

// Number of distinct ordered slot assignments realizing the necklace:
// (dihedral group size) / (stabilizer size).
int count_ordered_tuples(const std::vector<std::string>& necklace) {
    const int k = static_cast<int>(necklace.size());
    if (k == 1) return 1;
    if (k == 2) return necklace[0] == necklace[1] ? 1 : 2;
    int stab = 0;
    for (int r = 0; r < k; ++r) {
        bool ok = true;
        for (int i = 0; i < k && ok; ++i)
            ok = necklace[static_cast<std::size_t>((i + r) % k)] ==
                 necklace[static_cast<std::size_t>(i)];
        if (ok) ++stab;
    }
    for (int r = 0; r < k; ++r) {
        bool ok = true;
        for (int i = 0; i < k && ok; ++i)
            ok = necklace[static_cast<std::size_t>(((r - i) % k + k) % k)] ==
                 necklace[static_cast<std::size_t>(i)];
        if (ok) ++stab;
    }
    return 2 * k / stab;
}

// All necklaces of length k over the kept root trees whose probability
// reaches the threshold.
std::vector<Necklace> build_necklaces(int k, const std::vector<CanonicalTree>& roots,
                                      double threshold, std::int64_t& budget) {
    std::vector<Necklace> out;
    const double dihedral = k == 1 ? 1.0 : k == 2 ? 2.0 : 2.0 * k;
    std::vector<int> chosen;
    std::function<void(std::size_t, double)> rec = [&](std::size_t first, double prod) {
        check_budget(budget);
        if (static_cast<int>(chosen.size()) == k) {
            std::vector<std::string> codes;
            codes.reserve(static_cast<std::size_t>(k));
            for (int idx : chosen) codes.push_back(roots[static_cast<std::size_t>(idx)].code);
            std::sort(codes.begin(), codes.end());
            std::set<std::vector<std::string>> arrangements;
            do {
                check_budget(budget);
                arrangements.insert(dihedral_minimal(codes));
            } while (std::next_permutation(codes.begin(), codes.end()));
            for (const auto& canon : arrangements) {
                double p = count_ordered_tuples(canon) * prod;
                if (p < threshold) continue;
                std::string code = "C" + std::to_string(k) + "[";
                for (std::size_t i = 0; i < canon.size(); ++i) {
                    if (i) code += ",";
                    code += canon[i];
                }
                code += "]";
                out.push_back({std::move(code), p});
            }
            return;
        }
        int slots_left = k - static_cast<int>(chosen.size());
        for (std::size_t c = first; c < roots.size(); ++c) {
            double q = roots[c].q;
            // tuple count <= dihedral size and remaining slots hold trees of
            // at most this q; roots are sorted by q descending
            if (prod * std::pow(q, slots_left) * dihedral < threshold) break;
            chosen.push_back(static_cast<int>(c));
            rec(c, prod * q);
            chosen.pop_back();
        }
    };
    rec(0, 1.0);
    std::sort(out.begin(), out.end(), [](const Necklace& a, const Necklace& b) {
        if (a.prob != b.prob) return a.prob > b.prob;
        return a.code < b.code;
    });
    return out;
}

}  // namespace

FragmentCatalogue enumerate_catalogue(const DegreeModel& model, double floor,
                                      CatalogueVariant variant, const EnumerationLimits& limits) {
    if (floor <= 0.0) throw std::invalid_argument("enumerate_catalogue: floor must be positive");
    const double nu = model.nu();
    if (nu >= 1.0) throw std::domain_error("enumerate_catalogue: requires nu < 1");

    FragmentCatalogue cat;
    cat.variant = variant;
    cat.floor = floor;
    cat.nu = nu;

    const int kmin = variant == CatalogueVariant::Multigraph ? 1 : 3;
    const double base = class_sum({}, model, variant);
    int kmax_bound = kmin;
    while (base * xi(kmax_bound + 1, nu) >= floor && kmax_bound < 100'000) ++kmax_bound;

    std::map<int, int> scratch;
    std::vector<TypeAccount> types;
    types.push_back({{}, base, 0.0, 0.0});
    collect_types_from(model, variant, floor * (1.0 - 1e-12), kmin, kmax_bound, kmin, scratch,
                       types);
    std::sort(types.begin(), types.end(), [](const TypeAccount& a, const TypeAccount& b) {
        return a.class_mass > b.class_mass;
    });

    // Threshold chain: a fragment above the floor has every component
    // necklace above theta_neck, every slot tree above theta_root(k) and
    // every subtree above theta_child, so building each layer down to its
    // threshold keeps the catalogue complete. The chain sharpens through the
    // maximum single-object masses of the lower layers: a necklace slot has
    // k-1 companions of mass at most qtilde_max, a tree's siblings weigh at
    // most qhat_max each.
    const OffspringModel offspring(model);
    const auto& child_pmf = offspring.pmf(RootLaw::SizeBiased);
    const auto& root_pmf = offspring.pmf(RootLaw::CycleRoot);

    double theta_neck = 1.0;
    for (const auto& t : types) {
        if (t.cycle_type.empty()) continue;
        double fact_product = 1.0;
        for (const auto& [k, a] : t.cycle_type)
            for (int i = 2; i <= a; ++i) fact_product *= i;
        theta_neck = std::min(theta_neck, floor / (t.class_mass * fact_product));
    }

    const double qhat_max = child_pmf[0];  // no tree outweighs the bare leaf
    double qtilde_max = 0.0;
    {
        double fact = 1.0;
        for (std::size_t j = 0; j < root_pmf.size(); ++j) {
            if (j > 0) fact *= static_cast<double>(j);
            qtilde_max = std::max(qtilde_max, fact * root_pmf[j] * std::pow(qhat_max, j));
        }
    }
    double theta_root = 1.0;
    for (const auto& t : types)
        for (const auto& [k, a] : t.cycle_type) {
            double dihedral = k == 1 ? 1.0 : k == 2 ? 2.0 : 2.0 * k;
            theta_root = std::min(
                theta_root, theta_neck / (dihedral * std::pow(qtilde_max, k - 1)));
        }
    double root_sibling = 1.0;
    {
        double fact = 1.0;
        for (std::size_t j = 1; j < root_pmf.size(); ++j) {
            fact *= static_cast<double>(j);
            root_sibling = std::max(root_sibling, fact * root_pmf[j] *
                                                      std::pow(qhat_max, static_cast<double>(j) - 1.0));
        }
    }
    const double theta_child = theta_root / root_sibling;

    std::int64_t budget = limits.max_pops;
    std::vector<CanonicalTree> child_trees, root_trees;
    std::map<int, std::vector<Necklace>> necklaces_by_length;
    if (types.size() > 1) {
        const int hard_cap = 600;
        auto probe = progeny_distribution(child_pmf, child_pmf, hard_cap);
        int smax = 1;
        for (int s = hard_cap; s >= 1; --s) {
            if (probe[static_cast<std::size_t>(s)] >= theta_child) {
                smax = s;
                break;
            }
        }
        std::vector<double> child_ceiling(probe.begin(),
                                          probe.begin() + smax + 1);
        child_trees = build_child_trees(child_pmf, child_ceiling, theta_child, budget);
        root_trees = build_root_trees(root_pmf, child_trees, smax + 1, theta_root, budget);

        for (const auto& t : types)
            for (const auto& [k, a] : t.cycle_type)
                if (!necklaces_by_length.count(k))
                    necklaces_by_length[k] = build_necklaces(k, root_trees, theta_neck, budget);
        cat.stats.tree_size_cap = smax;
    }
    cat.stats.theta_child = theta_child;
    cat.stats.theta_root = theta_root;
    cat.stats.theta_neck = theta_neck;
    cat.stats.child_trees = child_trees.size();
    cat.stats.root_trees = root_trees.size();
    for (const auto& [k, v] : necklaces_by_length) cat.stats.necklaces += v.size();

    const double simple_correction = std::exp(nu / 2.0 + nu * nu / 4.0);

    for (auto& type : types) {
        KahanSum entry_mass;
        if (type.cycle_type.empty()) {
            Fragment empty;
            CatalogueEntry e;
            e.code = empty.code();
            e.pstar = pstar(empty, model);
            e.psimple = p_simple(empty, model);
            e.prob = variant == CatalogueVariant::Multigraph ? e.pstar : *e.psimple;
            entry_mass.add(e.prob);
            cat.entries.push_back(std::move(e));
            type.enumerated = entry_mass.sum;
            type.residual = type.class_mass - type.enumerated;
            continue;
        }

        const std::vector<std::pair<int, int>> lengths(type.cycle_type.begin(),
                                                       type.cycle_type.end());
        const double w_min = (floor / type.class_mass) * (1.0 - 1e-9);

        // optimistic ceiling of the remaining per-length factors
        std::vector<double> tail_best(lengths.size() + 1, 1.0);
        for (std::size_t i = lengths.size(); i-- > 0;) {
            auto [k, a] = lengths[i];
            const auto& options = necklaces_by_length[k];
            double pmax = options.empty() ? 0.0 : options.front().prob;
            double fact = 1.0;
            for (int j = 2; j <= a; ++j) fact *= j;
            tail_best[i] = tail_best[i + 1] * fact * std::pow(pmax, a);
        }

        std::vector<std::string> codes;
        std::function<void(std::size_t, double)> over_lengths = [&](std::size_t li, double w) {
            if (li == lengths.size()) {
                Fragment frag = fragment_from_codes(codes);
                CatalogueEntry e;
                e.code = frag.code();
                e.cycle_type = frag.cycle_type;
                e.pstar = pstar(frag, model);
                if (frag.simple()) e.psimple = e.pstar * simple_correction;
                e.prob = variant == CatalogueVariant::Multigraph ? e.pstar : e.psimple.value();
                if (e.prob >= floor) {
                    entry_mass.add(e.prob);
                    if (cat.entries.size() >= limits.max_entries)
                        throw std::runtime_error(
                            "enumeration budget exceeded; raise the floor or the limits");
                    cat.entries.push_back(std::move(e));
                }
                return;
            }
            auto [k, a] = lengths[li];
            const auto& options = necklaces_by_length[k];
            double fact_a = 1.0;
            for (int j = 2; j <= a; ++j) fact_a *= j;
            // multiset of `a` necklaces with non-decreasing indices; factor
            // carries a!/prod(m!) * prod P incrementally, plain the bare
            // product of probabilities
            std::vector<int> chosen;
            std::function<void(std::size_t, double, double, int)> pick =
                [&](std::size_t first, double factor, double plain, int run_length) {
                    check_budget(budget);
                    if (static_cast<int>(chosen.size()) == a) {
                        over_lengths(li + 1, w * factor);
                        return;
                    }
                    int left = a - static_cast<int>(chosen.size());
                    for (std::size_t c = first; c < options.size(); ++c) {
                        double p = options[c].prob;
                        // full completion is at most a! * plain * p^left
                        // times the later lengths' ceiling
                        if (w * fact_a * plain * std::pow(p, left) * tail_best[li + 1] < w_min)
                            break;  // options sorted by probability
                        int new_run =
                            (!chosen.empty() && chosen.back() == static_cast<int>(c))
                                ? run_length + 1
                                : 1;
                        int j = static_cast<int>(chosen.size());
                        double new_factor = factor * p * static_cast<double>(j + 1) / new_run;
                        codes.push_back(options[c].code);
                        chosen.push_back(static_cast<int>(c));
                        pick(c, new_factor, plain * p, new_run);
                        chosen.pop_back();
                        codes.pop_back();
                    }
                };
            pick(0, 1.0, 1.0, 0);
        };
        over_lengths(0, 1.0);

        type.enumerated = entry_mass.sum;
        type.residual = type.class_mass - type.enumerated;
    }

    // Deterministic ordering: probability descending; entries within relative
    // tolerance 1e-12 of the group head are ordered by canonical code.
    std::sort(cat.entries.begin(), cat.entries.end(),
              [](const CatalogueEntry& a, const CatalogueEntry& b) {
                  if (a.prob != b.prob) return a.prob > b.prob;
                  return a.code < b.code;
              });
    std::size_t group_start = 0;
    for (std::size_t i = 1; i <= cat.entries.size(); ++i) {
        bool close = i < cat.entries.size() &&
                     cat.entries[group_start].prob - cat.entries[i].prob <=
                         1e-12 * cat.entries[group_start].prob;
        if (!close) {
            std::sort(cat.entries.begin() + static_cast<std::ptrdiff_t>(group_start),
                      cat.entries.begin() + static_cast<std::ptrdiff_t>(i),
                      [](const CatalogueEntry& a, const CatalogueEntry& b) {
                          return a.code < b.code;
                      });
            group_start = i;
        }
    }

    cat.types = std::move(types);
    double opened_mass = 0.0, entry_total = 0.0;
    for (const auto& t : cat.types) {
        opened_mass += t.class_mass;
        entry_total += t.enumerated;
    }
    cat.tail_mass = (1.0 - opened_mass) + (opened_mass - entry_total);
    return cat;
}

}  // namespace cmlaws
