#include "mcstat/stable_graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace mcstat {

StableGraph::StableGraph(std::vector<GraphVertex> vertices, std::vector<GraphEdge> edges,
                         std::optional<unsigned> declared_genus,
                         std::optional<unsigned long> override_sym_plus,
                         std::optional<unsigned long> override_sym)
    : vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      override_sym_plus_(override_sym_plus),
      override_sym_(override_sym) {
    int b1 = edge_count() - vertex_count() + 1;
    long total = b1;
    for (const auto& v : vertices_) total += v.genus;
    genus_ = total >= 0 ? static_cast<unsigned>(total) : 0u;
    validate(declared_genus);
}

int StableGraph::valence(int v) const {
    int n = 0;
    for (const auto& e : edges_) {
        if (e.a == v) ++n;
        if (e.b == v) ++n;
    }
    return n;
}

void StableGraph::validate(std::optional<unsigned> declared_genus) const {
    if (vertices_.empty()) throw std::invalid_argument("graph has no vertices");
    if (edges_.empty()) throw std::invalid_argument("graph has no edges (k >= 1 required)");
    {
        std::set<std::string> ids;
        for (const auto& v : vertices_)
            if (!ids.insert(v.id).second)
                throw std::invalid_argument("duplicate vertex id '" + v.id + "'");
        ids.clear();
        for (const auto& e : edges_)
            if (!ids.insert(e.id).second)
                throw std::invalid_argument("duplicate edge id '" + e.id + "'");
    }
    for (const auto& e : edges_) {
        if (e.a < 0 || e.a >= vertex_count() || e.b < 0 || e.b >= vertex_count())
            throw std::invalid_argument("edge '" + e.id + "' has a dangling endpoint");
        if (e.weight < 1) throw std::invalid_argument("edge '" + e.id + "' has weight < 1");
    }
    // connectivity
    std::vector<char> seen(vertices_.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& e : edges_) {
            int other = -1;
            if (e.a == v) other = e.b;
            else if (e.b == v) other = e.a;
            if (other >= 0 && !seen[other]) {
                seen[other] = 1;
                stack.push_back(other);
            }
        }
    }
    if (std::count(seen.begin(), seen.end(), 1) != vertex_count())
        throw std::invalid_argument("graph is disconnected");
    // per-vertex stability
    for (int i = 0; i < vertex_count(); ++i) {
        int chi = 2 * static_cast<int>(vertices_[i].genus) - 2 + valence(i);
        if (chi <= 0)
            throw std::invalid_argument("unstable vertex '" + vertices_[i].id +
                                        "': 2g-2+n = " + std::to_string(chi));
    }
    if (genus_ < 2)
        throw std::invalid_argument("total genus " + std::to_string(genus_) + " < 2");
    if (declared_genus && *declared_genus != genus_)
        throw std::invalid_argument("declared genus " + std::to_string(*declared_genus) +
                                    " != computed genus " + std::to_string(genus_));
    int kmax = 3 * static_cast<int>(genus_) - 3;
    if (edge_count() > kmax)
        throw std::invalid_argument("edge count " + std::to_string(edge_count()) +
                                    " exceeds 3g-3 = " + std::to_string(kmax));
}

unsigned StableGraph::one_handle_count() const {
    unsigned m = 0;
    for (int i = 0; i < vertex_count(); ++i)
        if (vertices_[i].genus == 1 && valence(i) == 1) ++m;
    return m;
}

namespace {

using EdgeTriple = std::tuple<int, int, unsigned long>;  // (min, max, weight)

std::vector<EdgeTriple> relabeled_edges(const std::vector<GraphEdge>& edges,
                                        const std::vector<int>& perm) {
    std::vector<EdgeTriple> out;
    out.reserve(edges.size());
    for (const auto& e : edges) {
        int a = perm[e.a], b = perm[e.b];
        out.emplace_back(std::min(a, b), std::max(a, b), e.weight);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Invoke fn for every vertex permutation that preserves the refinement
// classes (genus, valence). perm[v] = new label of v.
template <typename Fn>
void for_each_class_permutation(const StableGraph& g, Fn&& fn) {
    int nv = g.vertex_count();
    std::vector<std::pair<std::pair<int, int>, int>> keyed;  // (key, vertex)
    keyed.reserve(nv);
    for (int i = 0; i < nv; ++i)
        keyed.push_back({{static_cast<int>(g.vertex(i).genus), g.valence(i)}, i});
    std::sort(keyed.begin(), keyed.end());
    // class boundaries
    std::vector<std::pair<int, int>> classes;  // [begin, end) in keyed
    for (int i = 0; i < nv;) {
        int j = i;
        while (j < nv && keyed[j].first == keyed[i].first) ++j;
        classes.emplace_back(i, j);
        i = j;
    }
    // iterate the product of per-class permutations
    std::vector<int> arrangement(nv);
    for (int i = 0; i < nv; ++i) arrangement[i] = keyed[i].second;
    std::vector<int> perm(nv);
    auto emit = [&]() {
        for (int pos = 0; pos < nv; ++pos) perm[arrangement[pos]] = pos;
        fn(const_cast<const std::vector<int>&>(perm));
    };
    // recursive product of std::next_permutation over each class range
    std::function<void(std::size_t)> rec = [&](std::size_t ci) {
        if (ci == classes.size()) {
            emit();
            return;
        }
        auto [b, e] = classes[ci];
        std::sort(arrangement.begin() + b, arrangement.begin() + e);
        do {
            rec(ci + 1);
        } while (std::next_permutation(arrangement.begin() + b, arrangement.begin() + e));
    };
    rec(0);
}

}  // namespace

std::string StableGraph::canonical_form() const {
    std::vector<int> best_genera;
    std::vector<EdgeTriple> best_edges;
    bool have = false;
    for_each_class_permutation(*this, [&](const std::vector<int>& perm) {
        std::vector<int> genera(vertex_count());
        for (int v = 0; v < vertex_count(); ++v) genera[perm[v]] = static_cast<int>(vertices_[v].genus);
        auto edges = relabeled_edges(edges_, perm);
        if (!have || std::tie(genera, edges) < std::tie(best_genera, best_edges)) {
            best_genera = std::move(genera);
            best_edges = std::move(edges);
            have = true;
        }
    });
    std::ostringstream os;
    os << "g" << genus_ << " k" << edge_count() << " V[";
    for (std::size_t i = 0; i < best_genera.size(); ++i)
        os << (i ? "," : "") << best_genera[i];
    os << "] E[";
    for (std::size_t i = 0; i < best_edges.size(); ++i) {
        const auto& [a, b, w] = best_edges[i];
        os << (i ? "," : "") << "(" << a << "-" << b << ":" << w << ")";
    }
    os << "]";
    return os.str();
}

unsigned long StableGraph::automorphism_order() const {
    // Candidate labelings differ from the first one by a class-preserving
    // vertex permutation; counting coincidences with the first labeling
    // counts exactly the vertex automorphisms.
    bool have_ref = false;
    std::vector<int> ref_genera;
    std::vector<EdgeTriple> reference;
    unsigned long vertex_autos = 0;
    for_each_class_permutation(*this, [&](const std::vector<int>& perm) {
        std::vector<int> genera(vertex_count());
        for (int v = 0; v < vertex_count(); ++v)
            genera[perm[v]] = static_cast<int>(vertices_[v].genus);
        auto edges = relabeled_edges(edges_, perm);
        if (!have_ref) {
            ref_genera = std::move(genera);
            reference = std::move(edges);
            have_ref = true;
            ++vertex_autos;
        } else if (genera == ref_genera && edges == reference) {
            ++vertex_autos;
        }
    });
    // parallel edges in the same (endpoints, weight) class may be permuted
    std::map<EdgeTriple, unsigned long> classes;
    for (const auto& t : reference) ++classes[t];
    unsigned long total = vertex_autos;
    for (const auto& [t, m] : classes)
        for (unsigned long i = 2; i <= m; ++i) total *= i;
    return total;
}

unsigned long StableGraph::sym_plus_order() const {
    if (override_sym_plus_) return *override_sym_plus_;
    return automorphism_order();
}

unsigned long StableGraph::sym_order() const {
    if (override_sym_) return *override_sym_;
    return automorphism_order();
}

GraphConstants StableGraph::constants() const {
    GraphConstants c;
    c.one_handles = one_handle_count();
    c.sym_plus = sym_plus_order();
    c.sym = sym_order();
    c.d = dim();
    c.k = edge_count();
    c.overridden = has_override();
    return c;
}

std::vector<int> StableGraph::edges_by_id() const {
    std::vector<int> order(edges_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return edges_[i].id < edges_[j].id; });
    return order;
}

// ---------------------------------------------------------------------------
// multicurve text format

StableGraph StableGraph::parse(const std::string& text) {
    std::vector<GraphVertex> vertices;
    std::vector<GraphEdge> edges;
    std::map<std::string, int> vertex_index;
    std::optional<unsigned> declared_genus;
    std::optional<unsigned long> ov_sym_plus, ov_sym;

    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw ParseError("line " + std::to_string(lineno) + ": " + msg, lineno);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        std::string word;
        if (!(is >> word)) continue;
        if (word == "genus") {
            long g;
            if (!(is >> g) || g < 0) fail("expected 'genus <g>'");
            if (declared_genus) fail("duplicate genus declaration");
            declared_genus = static_cast<unsigned>(g);
        } else if (word == "vertex") {
            std::string id, kw;
            long gv;
            if (!(is >> id >> kw >> gv) || kw != "genus" || gv < 0)
                fail("expected 'vertex <id> genus <g>'");
            if (vertex_index.count(id)) fail("duplicate vertex id '" + id + "'");
            vertex_index[id] = static_cast<int>(vertices.size());
            vertices.push_back({id, static_cast<unsigned>(gv)});
        } else if (word == "edge") {
            std::string id, va, vb, kw;
            long w;
            if (!(is >> id >> va >> vb >> kw >> w) || kw != "weight" || w < 1)
                fail("expected 'edge <id> <vid> <vid> weight <c>'");
            auto ia = vertex_index.find(va);
            if (ia == vertex_index.end()) fail("edge '" + id + "' references unknown vertex '" + va + "'");
            auto ib = vertex_index.find(vb);
            if (ib == vertex_index.end()) fail("edge '" + id + "' references unknown vertex '" + vb + "'");
            edges.push_back({id, ia->second, ib->second, static_cast<unsigned long>(w)});
        } else if (word == "override") {
            std::string what;
            long m;
            if (!(is >> what >> m) || m < 1) fail("expected 'override sym_plus|sym <m>'");
            if (what == "sym_plus")
                ov_sym_plus = static_cast<unsigned long>(m);
            else if (what == "sym")
                ov_sym = static_cast<unsigned long>(m);
            else
                fail("unknown override '" + what + "'");
        } else {
            fail("unknown directive '" + word + "'");
        }
        std::string extra;
        if (is >> extra) fail("trailing tokens after directive");
    }
    try {
        return StableGraph(std::move(vertices), std::move(edges), declared_genus, ov_sym_plus,
                           ov_sym);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), lineno);
    }
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

struct Candidate {
    int nv;
    std::vector<std::pair<int, int>> edges;
    std::vector<unsigned> genera;
    std::vector<unsigned long> weights;
};

bool candidate_connected(int nv, const std::vector<std::pair<int, int>>& edges) {
    std::vector<char> seen(nv, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [a, b] : edges) {
            int other = a == v ? b : (b == v ? a : -1);
            if (other >= 0 && !seen[other]) {
                seen[other] = 1;
                stack.push_back(other);
            }
        }
    }
    return std::count(seen.begin(), seen.end(), 1) == nv;
}

StableGraph build_graph(const Candidate& c) {
    std::vector<GraphVertex> vs;
    for (int i = 0; i < c.nv; ++i) vs.push_back({"v" + std::to_string(i), c.genera[i]});
    std::vector<GraphEdge> es;
    for (std::size_t i = 0; i < c.edges.size(); ++i)
        es.push_back({"e" + std::to_string(i), c.edges[i].first, c.edges[i].second, c.weights[i]});
    return StableGraph(std::move(vs), std::move(es));
}

}  // namespace

std::vector<StableGraph> enumerate_stable_graphs(unsigned g, int k, unsigned long weight_cap,
                                                 std::size_t resource_cap) {
    if (g < 2) throw std::invalid_argument("enumeration needs genus >= 2");
    if (k < 1 || k > 3 * static_cast<int>(g) - 3)
        throw std::invalid_argument("edge count must satisfy 1 <= k <= 3g-3");
    if (weight_cap < 1) throw std::invalid_argument("weight cap must be >= 1");

    std::map<std::string, StableGraph> found;
    std::size_t budget = 0;
    auto spend = [&](std::size_t amount) {
        budget += amount;
        if (budget > resource_cap)
            throw ResourceLimitError("stable graph enumeration exceeded candidate cap");
    };

    // every stable vertex contributes at least 1 to sum(2g_v - 2 + n_v) = 2g - 2
    for (int nv = 1; nv <= 2 * static_cast<int>(g) - 2; ++nv) {
        int b1 = k - nv + 1;
        if (b1 < 0) continue;
        long gsum = static_cast<long>(g) - b1;
        if (gsum < 0) continue;

        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < nv; ++i)
            for (int j = i; j < nv; ++j) pairs.emplace_back(i, j);

        std::vector<int> choice(k, 0);
        std::vector<std::pair<int, int>> edges(k);
        // multisets of k endpoint pairs, non-decreasing in pair index
        std::function<void(int, int)> pick = [&](int pos, int min_pair) {
            if (pos == k) {
                spend(1);
                std::vector<int> val(nv, 0);
                for (auto [a, b] : edges) {
                    ++val[a];
                    ++val[b];
                }
                if (std::any_of(val.begin(), val.end(), [](int n) { return n == 0; })) return;
                if (!candidate_connected(nv, edges)) return;
                // genus assignments summing to gsum, stable at each vertex
                std::vector<unsigned> genera(nv, 0);
                std::function<void(int, long)> assign = [&](int v, long left) {
                    if (v == nv) {
                        if (left != 0) return;
                        // weights
                        std::vector<unsigned long> weights(k, 1);
                        std::function<void(int)> wassign = [&](int e) {
                            if (e == k) {
                                spend(1);
                                Candidate c{nv, edges, genera, weights};
                                StableGraph graph = build_graph(c);
                                found.emplace(graph.canonical_form(), std::move(graph));
                                return;
                            }
                            for (unsigned long w = 1; w <= weight_cap; ++w) {
                                weights[e] = w;
                                wassign(e + 1);
                            }
                        };
                        wassign(0);
                        return;
                    }
                    for (long gv = 0; gv <= left; ++gv) {
                        if (2 * gv - 2 + val[v] <= 0) continue;
                        genera[v] = static_cast<unsigned>(gv);
                        assign(v + 1, left - gv);
                    }
                };
                assign(0, gsum);
                return;
            }
            for (int p = min_pair; p < static_cast<int>(pairs.size()); ++p) {
                edges[pos] = pairs[p];
                pick(pos + 1, p);
            }
        };
        pick(0, 0);
    }

    std::vector<StableGraph> out;
    out.reserve(found.size());
    for (auto& [canon, graph] : found) out.push_back(std::move(graph));
    return out;
}

}  // namespace mcstat
