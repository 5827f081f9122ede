#include "cmlaws/fragment.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cmlaws {

namespace {

// --- tree codes ---------------------------------------------------------

// AHU canonical form of the tree rooted at `root`, exploring only vertices
// with in_tree set, never crossing back through `parent`.
std::string tree_code(const std::vector<std::vector<std::pair<int, int>>>& adj,
                      const std::vector<bool>& in_tree, int root, int parent) {
    std::vector<std::string> children;
    for (const auto& [u, m] : adj[static_cast<std::size_t>(root)]) {
        if (u == parent || !in_tree[static_cast<std::size_t>(u)]) continue;
        children.push_back(tree_code(adj, in_tree, u, root));
    }
    std::sort(children.begin(), children.end());
    std::string code = "(";
    for (const auto& c : children) code += c;
    code += ")";
    return code;
}

// Parsed component code: cycle length plus tree codes in stored order.
struct ParsedComponent {
    int k = 0;
    std::vector<std::string> trees;
};

ParsedComponent parse_component(const std::string& code) {
    ParsedComponent pc;
    if (code.empty() || code[0] != 'C')
        throw std::invalid_argument("bad component code: " + code);
    std::size_t i = 1;
    while (i < code.size() && std::isdigit(static_cast<unsigned char>(code[i]))) ++i;
    pc.k = std::stoi(code.substr(1, i - 1));
    if (pc.k < 1 || i >= code.size() || code[i] != '[' || code.back() != ']')
        throw std::invalid_argument("bad component code: " + code);
    // split top-level commas inside [...]
    int depth = 0;
    std::string cur;
    for (std::size_t j = i + 1; j + 1 < code.size(); ++j) {
        char c = code[j];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            pc.trees.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    pc.trees.push_back(cur);
    if (static_cast<int>(pc.trees.size()) != pc.k)
        throw std::invalid_argument("component code tree count mismatch: " + code);
    return pc;
}

// Lexicographically minimal rotation/reflection of the tree-code sequence.
std::vector<std::string> minimize_necklace(const std::vector<std::string>& trees) {
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

std::string render_component(int k, const std::vector<std::string>& trees) {
    std::string out = "C" + std::to_string(k) + "[";
    for (std::size_t i = 0; i < trees.size(); ++i) {
        if (i) out += ",";
        out += trees[i];
    }
    out += "]";
    return out;
}

// Vertex count of a tree code (number of matched "(" pairs).
int tree_size(const std::string& code) {
    return static_cast<int>(std::count(code.begin(), code.end(), '('));
}

// Automorphisms of a rooted tree from its code: identical child subtrees may
// be permuted, recursively.
std::int64_t tree_aut(const std::string& code, std::size_t& pos) {
    assert(code[pos] == '(');
    ++pos;
    std::vector<std::string> child_codes;
    std::int64_t product = 1;
    while (code[pos] != ')') {
        std::size_t start = pos;
        product *= tree_aut(code, pos);
        child_codes.push_back(code.substr(start, pos - start));
    }
    ++pos;
    std::int64_t run = 1;
    for (std::size_t i = 1; i <= child_codes.size(); ++i) {
        if (i < child_codes.size() && child_codes[i] == child_codes[i - 1]) {
            ++run;
        } else {
            for (std::int64_t r = 2; r <= run; ++r) product *= r;
            run = 1;
        }
    }
    return product;
}

std::int64_t tree_aut(const std::string& code) {
    std::size_t pos = 0;
    return tree_aut(code, pos);
}

// Degree censuses of one decoded component, written into the fragment sums.
void accumulate_census(const ParsedComponent& pc, Fragment& frag) {
    frag.cycle_type[pc.k] += 1;
    for (const auto& tcode : pc.trees) {
        // walk the tree code; depth-first, tracking child counts
        std::vector<int> child_count_stack;
        for (std::size_t i = 0; i < tcode.size(); ++i) {
            if (tcode[i] == '(') {
                if (!child_count_stack.empty()) ++child_count_stack.back();
                child_count_stack.push_back(0);
            } else {
                int children = child_count_stack.back();
                child_count_stack.pop_back();
                bool is_root = child_count_stack.empty();
                int deg = is_root ? children + 2 : children + 1;
                frag.deg_all[deg] += 1;
                frag.vertex_count += 1;
                if (is_root)
                    frag.deg_cycle[deg] += 1;
                else
                    frag.deg_tree[deg] += 1;
            }
        }
    }
}

}  // namespace

bool Fragment::simple() const {
    for (const auto& [k, a] : cycle_type)
        if (k <= 2 && a > 0) return false;
    return true;
}

std::string Fragment::code() const {
    std::string out;
    for (std::size_t i = 0; i < component_codes.size(); ++i) {
        if (i) out += "+";
        out += component_codes[i];
    }
    return out;
}

std::string canonicalize_component(const Multigraph& g, const std::vector<int>& vertices) {
    const auto& adj = g.adjacency();

    std::int64_t edges = 0;
    for (int v : vertices) {
        edges += g.loops_at(v);
        for (const auto& [u, m] : adj[static_cast<std::size_t>(v)])
            if (u > v) edges += m;  // counts inner edges once; component is closed
    }
    if (edges != static_cast<std::int64_t>(vertices.size()))
        throw std::invalid_argument("canonicalize_component: component is not unicyclic");

    // Peel leaves; what survives is the unique cycle.
    std::vector<bool> in_comp(static_cast<std::size_t>(g.n()), false);
    for (int v : vertices) in_comp[static_cast<std::size_t>(v)] = true;
    std::vector<int> deg(static_cast<std::size_t>(g.n()), 0);
    std::vector<int> stack;
    for (int v : vertices) {
        deg[static_cast<std::size_t>(v)] = g.degree(v);
        if (deg[static_cast<std::size_t>(v)] == 1) stack.push_back(v);
    }
    std::vector<bool> on_cycle = in_comp;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        on_cycle[static_cast<std::size_t>(v)] = false;
        for (const auto& [u, m] : adj[static_cast<std::size_t>(v)]) {
            if (!on_cycle[static_cast<std::size_t>(u)]) continue;
            deg[static_cast<std::size_t>(u)] -= m;
            if (deg[static_cast<std::size_t>(u)] == 1) stack.push_back(u);
        }
    }

    std::vector<int> cycle;
    for (int v : vertices)
        if (on_cycle[static_cast<std::size_t>(v)]) cycle.push_back(v);
    if (cycle.empty()) throw std::logic_error("canonicalize_component: no cycle found");

    // Order the cycle vertices by walking it (k >= 3); k <= 2 is trivial.
    std::vector<int> order;
    if (cycle.size() <= 2) {
        order = cycle;
    } else {
        order.push_back(cycle[0]);
        int prev = -1, cur = cycle[0];
        while (static_cast<int>(order.size()) < static_cast<int>(cycle.size())) {
            int next = -1;
            for (const auto& [u, m] : adj[static_cast<std::size_t>(cur)]) {
                if (u != prev && on_cycle[static_cast<std::size_t>(u)]) {
                    next = u;
                    break;
                }
            }
            if (next < 0) throw std::logic_error("canonicalize_component: broken cycle walk");
            order.push_back(next);
            prev = cur;
            cur = next;
        }
    }

    std::vector<bool> tree_part = in_comp;
    for (int v : cycle) tree_part[static_cast<std::size_t>(v)] = false;
    std::vector<std::string> trees;
    for (int v : order) {
        // tree hanging at cycle vertex v: v plus the pruned vertices below it
        std::vector<std::string> subtrees;
        for (const auto& [u, m] : adj[static_cast<std::size_t>(v)])
            if (tree_part[static_cast<std::size_t>(u)])
                subtrees.push_back(tree_code(adj, tree_part, u, v));
        std::sort(subtrees.begin(), subtrees.end());
        std::string code = "(";
        for (const auto& s : subtrees) code += s;
        code += ")";
        trees.push_back(std::move(code));
    }

    return render_component(static_cast<int>(cycle.size()), minimize_necklace(trees));
}

Fragment extract_fragment(const Multigraph& g) {
    auto report = classify_components(g);
    std::vector<std::string> codes;
    for (const auto& comp : report.components)
        if (comp.cls == ComponentClass::Unicyclic)
            codes.push_back(canonicalize_component(g, comp.vertices));
    return fragment_from_codes(std::move(codes));
}

Fragment fragment_from_codes(std::vector<std::string> codes) {
    std::sort(codes.begin(), codes.end());
    Fragment frag;
    frag.component_codes = std::move(codes);
    for (const auto& code : frag.component_codes) accumulate_census(parse_component(code), frag);
    return frag;
}

Fragment fragment_from_code(const std::string& fragment_code) {
    std::vector<std::string> codes;
    if (!fragment_code.empty()) {
        std::string cur;
        for (char c : fragment_code) {
            if (c == '+') {
                codes.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        codes.push_back(cur);
    }
    return fragment_from_codes(std::move(codes));
}

namespace {

// Builds the decoded tree below `parent`, returning vertex count used.
void decode_tree(const std::string& code, std::size_t& pos, Multigraph& g, int parent,
                 int& next_vertex) {
    assert(code[pos] == '(');
    ++pos;
    while (code[pos] != ')') {
        int child = next_vertex++;
        g.add_edge(parent, child);
        decode_tree(code, pos, g, child, next_vertex);
    }
    ++pos;
}

int component_vertex_count(const ParsedComponent& pc) {
    int total = 0;
    for (const auto& t : pc.trees) total += tree_size(t);
    return total;
}

void decode_component_into(const ParsedComponent& pc, Multigraph& g, int& next_vertex) {
    const int k = pc.k;
    std::vector<int> cycle_vertices(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cycle_vertices[static_cast<std::size_t>(i)] = next_vertex++;
    if (k == 1) {
        g.add_edge(cycle_vertices[0], cycle_vertices[0]);
    } else if (k == 2) {
        g.add_edge(cycle_vertices[0], cycle_vertices[1], 2);
    } else {
        for (int i = 0; i < k; ++i)
            g.add_edge(cycle_vertices[static_cast<std::size_t>(i)],
                       cycle_vertices[static_cast<std::size_t>((i + 1) % k)]);
    }
    for (int i = 0; i < k; ++i) {
        const std::string& tcode = pc.trees[static_cast<std::size_t>(i)];
        std::size_t pos = 1;  // skip the root "(" of the cycle vertex itself
        while (tcode[pos] != ')') {
            int child = next_vertex++;
            g.add_edge(cycle_vertices[static_cast<std::size_t>(i)], child);
            decode_tree(tcode, pos, g, child, next_vertex);
        }
    }
}

}  // namespace

Multigraph decode_component(const std::string& code) {
    auto pc = parse_component(code);
    Multigraph g(component_vertex_count(pc));
    int next_vertex = 0;
    decode_component_into(pc, g, next_vertex);
    return g;
}

Multigraph decode_fragment(const std::string& fragment_code) {
    Fragment frag = fragment_from_code(fragment_code);
    int total = 0;
    std::vector<ParsedComponent> parsed;
    for (const auto& code : frag.component_codes) {
        parsed.push_back(parse_component(code));
        total += component_vertex_count(parsed.back());
    }
    Multigraph g(total);
    int next_vertex = 0;
    for (const auto& pc : parsed) decode_component_into(pc, g, next_vertex);
    return g;
}

namespace {

std::int64_t component_aut(const ParsedComponent& pc) {
    const int k = pc.k;
    std::int64_t trees_product = 1;
    for (const auto& t : pc.trees) trees_product *= tree_aut(t);

    // Symmetries of the cycle positions acting as vertex permutations:
    // identity only for k = 1, {id, swap} for k = 2, the dihedral group for
    // k >= 3. Count those preserving the tree-code sequence.
    std::int64_t sym = 0;
    if (k == 1) {
        sym = 1;
    } else if (k == 2) {
        sym = pc.trees[0] == pc.trees[1] ? 2 : 1;
    } else {
        for (int r = 0; r < k; ++r) {
            bool ok = true;
            for (int i = 0; i < k && ok; ++i)
                ok = pc.trees[static_cast<std::size_t>((i + r) % k)] ==
                     pc.trees[static_cast<std::size_t>(i)];
            if (ok) ++sym;
        }
        for (int r = 0; r < k; ++r) {
            bool ok = true;
            for (int i = 0; i < k && ok; ++i)
                ok = pc.trees[static_cast<std::size_t>(((r - i) % k + k) % k)] ==
                     pc.trees[static_cast<std::size_t>(i)];
            if (ok) ++sym;
        }
    }
    return sym * trees_product;
}

}  // namespace

std::int64_t aut(const Fragment& h) {
    std::int64_t result = 1;
    std::int64_t run = 1;
    for (std::size_t i = 0; i < h.component_codes.size(); ++i) {
        result *= component_aut(parse_component(h.component_codes[i]));
        if (i + 1 < h.component_codes.size() && h.component_codes[i + 1] == h.component_codes[i]) {
            ++run;
        } else {
            for (std::int64_t r = 2; r <= run; ++r) result *= r;
            run = 1;
        }
    }
    return result;
}

std::int64_t authe(const Fragment& h) {
    std::int64_t result = aut(h);
    auto it1 = h.cycle_type.find(1);
    auto it2 = h.cycle_type.find(2);
    int a1 = it1 == h.cycle_type.end() ? 0 : it1->second;
    int a2 = it2 == h.cycle_type.end() ? 0 : it2->second;
    // each loop doubles; each double edge contributes 2! = 2
    for (int i = 0; i < a1 + a2; ++i) result *= 2;
    return result;
}

std::int64_t aut_bruteforce(const Multigraph& g) {
    const int n = g.n();
    if (n > 10) throw std::invalid_argument("aut_bruteforce: graph too large");
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::int64_t count = 0;
    do {
        bool ok = true;
        for (int u = 0; u < n && ok; ++u) {
            if (g.loops_at(u) != g.loops_at(perm[static_cast<std::size_t>(u)])) ok = false;
            for (int v = u + 1; v < n && ok; ++v)
                ok = g.multiplicity(u, v) == g.multiplicity(perm[static_cast<std::size_t>(u)],
                                                            perm[static_cast<std::size_t>(v)]);
        }
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

bool isomorphic_bruteforce(const Multigraph& a, const Multigraph& b) {
    if (a.n() != b.n() || a.edge_count() != b.edge_count() ||
        a.total_loops() != b.total_loops())
        return false;
    const int n = a.n();
    if (n > 10) throw std::invalid_argument("isomorphic_bruteforce: graph too large");
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (int u = 0; u < n && ok; ++u) {
            if (a.loops_at(u) != b.loops_at(perm[static_cast<std::size_t>(u)])) ok = false;
            for (int v = u + 1; v < n && ok; ++v)
                ok = a.multiplicity(u, v) == b.multiplicity(perm[static_cast<std::size_t>(u)],
                                                            perm[static_cast<std::size_t>(v)]);
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

std::map<int, int> degree_census(const Multigraph& g) {
    std::map<int, int> census;
    for (int v = 0; v < g.n(); ++v) census[g.degree(v)] += 1;
    return census;
}

}  // namespace cmlaws
