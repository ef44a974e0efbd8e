#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dbseq/error.hpp"
#include "dbseq/graph.hpp"
#include "dbseq/numeric.hpp"

namespace dbseq {

// Vertices without any incident edge play no part in Eulerian paths. They are
// left out of every arborescence (tree_edge stays empty) unless they are the
// root. On graphs where every degree is nonzero this is the usual spanning tree.

/// Directed spanning tree with every edge pointing towards the root.
/// tree_edge[x] is the unique out-edge of x in the tree; empty for the root.
struct Arborescence {
  VertexId root = 0;
  std::vector<std::optional<EdgeId>> tree_edge;

  std::vector<EdgeId> edges() const {
    std::vector<EdgeId> out;
    for (const auto& e : tree_edge) {
      if (e) out.push_back(*e);
    }
    return out;
  }

  bool operator==(const Arborescence&) const = default;
  auto operator<=>(const Arborescence&) const = default;
};

/// For each vertex x, a total order on the non-tree out-edges E_x \ T_x.
struct OrderingFamily {
  std::vector<std::vector<EdgeId>> order;
  bool operator==(const OrderingFamily&) const = default;
};

inline constexpr std::size_t kMaxEnumerationEdges = 40;
inline constexpr std::uint64_t kMaxArborescenceCandidates = 20'000'000;

namespace detail {

inline std::vector<bool> active_vertices(const Digraph& g, VertexId root) {
  std::vector<bool> active(g.vertex_count(), false);
  for (const Edge& e : g.edges()) {
    active[e.source] = true;
    active[e.target] = true;
  }
  active.at(root) = true;
  return active;
}

inline void check_root(const Digraph& g, VertexId root) {
  require(root < g.vertex_count(), ErrorKind::Precondition, "root vertex out of range");
}

}  // namespace detail

inline bool is_valid_arborescence(const Digraph& g, const Arborescence& t) {
  if (t.root >= g.vertex_count() || t.tree_edge.size() != g.vertex_count()) return false;
  const auto active = detail::active_vertices(g, t.root);
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    const auto& e = t.tree_edge[x];
    if (x == t.root || !active[x]) {
      if (e) return false;
      continue;
    }
    if (!e || *e >= g.edge_count()) return false;
    const Edge& edge = g.edge(*e);
    if (edge.source != x || edge.is_loop()) return false;
  }
  // 0 = unvisited, 1 = on current walk, 2 = known to reach the root.
  std::vector<int> state(g.vertex_count(), 0);
  state[t.root] = 2;
  for (VertexId start = 0; start < g.vertex_count(); ++start) {
    if (!active[start] || state[start] == 2) continue;
    std::vector<VertexId> walk;
    VertexId x = start;
    while (state[x] == 0) {
      state[x] = 1;
      walk.push_back(x);
      x = g.edge(*t.tree_edge[x]).target;
    }
    if (state[x] == 1) return false;
    for (VertexId y : walk) state[y] = 2;
  }
  return true;
}

/// Grows a maximal tree backwards from the root, vertices in BFS order and
/// in-edges in (source, id) order. The result spans every vertex with an edge
/// exactly when such a tree exists.
inline Arborescence find_arborescence(const Digraph& g, VertexId root) {
  detail::check_root(g, root);
  const auto active = detail::active_vertices(g, root);
  std::vector<std::vector<EdgeId>> in(g.vertex_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!g.edge(e).is_loop()) in[g.edge(e).target].push_back(e);
  }
  for (auto& list : in) {
    std::sort(list.begin(), list.end(), [&g](EdgeId a, EdgeId b) {
      return std::pair(g.edge(a).source, a) < std::pair(g.edge(b).source, b);
    });
  }
  Arborescence t{root, std::vector<std::optional<EdgeId>>(g.vertex_count())};
  std::vector<bool> in_tree(g.vertex_count(), false);
  in_tree[root] = true;
  std::vector<VertexId> queue{root};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (EdgeId e : in[queue[head]]) {
      const VertexId x = g.edge(e).source;
      if (in_tree[x]) continue;
      in_tree[x] = true;
      t.tree_edge[x] = e;
      queue.push_back(x);
    }
  }
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    require(!active[x] || in_tree[x], ErrorKind::NoSpanningTree,
            "vertex " + g.vertex_name(x) + " cannot reach the root " + g.vertex_name(root));
  }
  return t;
}

/// Brute force over one non-loop out-edge per vertex. Intended as an oracle on
/// small graphs; results come in odometer order with the last vertex fastest.
inline std::vector<Arborescence> enumerate_arborescences(
    const Digraph& g, VertexId root, std::uint64_t candidate_budget = kMaxArborescenceCandidates) {
  detail::check_root(g, root);
  const auto active = detail::active_vertices(g, root);
  std::vector<VertexId> movable;
  std::vector<std::vector<EdgeId>> choices;
  std::uint64_t candidates = 1;
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    if (x == root || !active[x]) continue;
    std::vector<EdgeId> options;
    for (EdgeId e : g.out_edges(x)) {
      if (!g.edge(e).is_loop()) options.push_back(e);
    }
    if (options.empty()) return {};
    require(candidates <= candidate_budget / options.size(), ErrorKind::Resource,
            "too many candidate edge selections for brute-force arborescence enumeration");
    candidates *= options.size();
    movable.push_back(x);
    choices.push_back(std::move(options));
  }
  std::vector<Arborescence> result;
  std::vector<std::size_t> digit(movable.size(), 0);
  Arborescence t{root, std::vector<std::optional<EdgeId>>(g.vertex_count())};
  while (true) {
    for (std::size_t i = 0; i < movable.size(); ++i) t.tree_edge[movable[i]] = choices[i][digit[i]];
    if (is_valid_arborescence(g, t)) result.push_back(t);
    std::size_t pos = movable.size();
    while (pos > 0) {
      --pos;
      if (++digit[pos] < choices[pos].size()) break;
      digit[pos] = 0;
      if (pos == 0) return result;
    }
    if (movable.empty()) return result;
  }
}

/// Exact arborescence count from the out-degree Laplacian (loops excluded)
/// with the root row and column deleted, by fraction-free elimination.
inline BigCount count_arborescences(const Digraph& g, VertexId root) {
  detail::check_root(g, root);
  const auto active = detail::active_vertices(g, root);
  std::vector<long> row_of(g.vertex_count(), -1);
  long size = 0;
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    if (x != root && active[x]) row_of[x] = size++;
  }
  std::vector<std::vector<BigInt>> laplacian(static_cast<std::size_t>(size),
                                             std::vector<BigInt>(static_cast<std::size_t>(size), 0));
  for (const Edge& e : g.edges()) {
    if (e.is_loop() || row_of[e.source] < 0) continue;
    const auto i = static_cast<std::size_t>(row_of[e.source]);
    laplacian[i][i] += 1;
    if (row_of[e.target] >= 0) laplacian[i][static_cast<std::size_t>(row_of[e.target])] -= 1;
  }
  return bareiss_determinant(std::move(laplacian));
}

/// The terms of #E = #T * deg(x0) * prod_x (deg(x) - 1)!.
struct BestTerms {
  BigCount arborescences;
  std::size_t root_degree = 0;
  /// prod over vertices of (deg(x) - 1)!, with (-1)! = 1.
  BigCount factorial_product;
  /// |O(T)|, the same for every tree T.
  BigCount orderings;
  BigCount eulerian_paths;
};

/// Size of O(T): deg(x0)! * prod_{x != x0} (deg(x) - 1)!. Equals
/// deg(x0) * prod_x (deg(x) - 1)! whenever deg(x0) >= 1, and is 1 on an edgeless root.
inline BigCount ordering_family_size(const Digraph& g, VertexId root) {
  BigCount size = factorial(static_cast<long long>(g.degree(root)));
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    if (x != root) size *= factorial(static_cast<long long>(g.degree(x)) - 1);
  }
  return size;
}

inline BestTerms best_terms(const Digraph& g, VertexId root) {
  detail::check_root(g, root);
  require(g.is_balanced(), ErrorKind::Unbalanced, "BEST counting needs in-degree = out-degree everywhere");
  BestTerms terms;
  terms.arborescences = count_arborescences(g, root);
  terms.root_degree = g.degree(root);
  terms.factorial_product = 1;
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    terms.factorial_product *= factorial(static_cast<long long>(g.degree(x)) - 1);
  }
  terms.orderings = ordering_family_size(g, root);
  terms.eulerian_paths = terms.arborescences * terms.orderings;
  return terms;
}

/// Number of Eulerian paths starting and ending at the root, cyclic rotations
/// counted as distinct.
inline BigCount best_count(const Digraph& g, VertexId root) { return best_terms(g, root).eulerian_paths; }

/// Backtracking DFS over unused out-edges in (target, id) order. Each Eulerian
/// path from the root back to the root is reported once; the visitor returns
/// false to stop early.
inline void for_each_eulerian_path(const Digraph& g, VertexId root,
                                   const std::function<bool(const GraphPath&)>& visit,
                                   std::size_t edge_budget = kMaxEnumerationEdges) {
  detail::check_root(g, root);
  require(g.edge_count() <= edge_budget, ErrorKind::Resource,
          "graph has " + std::to_string(g.edge_count()) +
              " edges, above the enumeration budget; use best_count");
  GraphPath path;
  path.vertices.push_back(root);
  std::vector<bool> used(g.edge_count(), false);
  bool stop = false;
  std::function<void(VertexId)> dfs = [&](VertexId x) {
    if (path.edges.size() == g.edge_count()) {
      if (x == root && !visit(path)) stop = true;
      return;
    }
    for (EdgeId e : g.out_edges(x)) {
      if (used[e]) continue;
      used[e] = true;
      path.edges.push_back(e);
      path.vertices.push_back(g.edge(e).target);
      dfs(g.edge(e).target);
      path.vertices.pop_back();
      path.edges.pop_back();
      used[e] = false;
      if (stop) return;
    }
  };
  dfs(root);
}

inline std::vector<GraphPath> enumerate_eulerian_paths(const Digraph& g, VertexId root,
                                                       std::size_t edge_budget = kMaxEnumerationEdges) {
  std::vector<GraphPath> out;
  for_each_eulerian_path(g, root, [&out](const GraphPath& p) {
    out.push_back(p);
    return true;
  }, edge_budget);
  return out;
}

/// E_x \ T_x in (target, id) order.
inline std::vector<EdgeId> ordering_domain(const Digraph& g, const Arborescence& t, VertexId x) {
  std::vector<EdgeId> dom;
  for (EdgeId e : g.out_edges(x)) {
    if (!t.tree_edge[x] || *t.tree_edge[x] != e) dom.push_back(e);
  }
  return dom;
}

inline bool is_valid_ordering(const Digraph& g, const Arborescence& t, const OrderingFamily& o) {
  if (o.order.size() != g.vertex_count()) return false;
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    auto expected = ordering_domain(g, t, x);
    auto given = o.order[x];
    std::sort(expected.begin(), expected.end());
    std::sort(given.begin(), given.end());
    if (expected != given) return false;
  }
  return true;
}

/// Ordering with mixed-radix index `index`: vertex 0 is the least significant
/// digit, each digit in [0, |E_x \ T_x|!) is the lexicographic rank of o_x.
inline OrderingFamily ordering_from_index(const Digraph& g, const Arborescence& t, BigCount index) {
  OrderingFamily o;
  o.order.resize(g.vertex_count());
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    auto dom = ordering_domain(g, t, x);
    const BigCount radix = factorial(static_cast<long long>(dom.size()));
    BigCount rank = index % radix;
    index /= radix;
    // Lehmer code, most significant position first.
    std::vector<EdgeId> perm;
    for (std::size_t remaining = dom.size(); remaining > 0; --remaining) {
      const BigCount block = factorial(static_cast<long long>(remaining) - 1);
      const auto pick = static_cast<std::size_t>(rank / block);
      rank %= block;
      perm.push_back(dom[pick]);
      dom.erase(dom.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    o.order[x] = std::move(perm);
  }
  require(index == 0, ErrorKind::Precondition, "ordering index out of range");
  return o;
}

/// Visits every element of O(T) in index order (vertex 0 fastest).
inline void for_each_ordering(const Digraph& g, const Arborescence& t,
                              const std::function<bool(const OrderingFamily&)>& visit) {
  // Permute positions in the domain, not edge ids: the domain is in (target, id)
  // order, so lexicographic position order matches ordering_from_index.
  std::vector<std::vector<EdgeId>> dom(g.vertex_count());
  std::vector<std::vector<std::size_t>> pos(g.vertex_count());
  OrderingFamily o;
  o.order.resize(g.vertex_count());
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    dom[x] = ordering_domain(g, t, x);
    pos[x].resize(dom[x].size());
    std::iota(pos[x].begin(), pos[x].end(), std::size_t{0});
    o.order[x] = dom[x];
  }
  while (true) {
    if (!visit(o)) return;
    std::size_t x = 0;
    while (x < pos.size() && !std::next_permutation(pos[x].begin(), pos[x].end())) {
      o.order[x] = dom[x];
      ++x;
    }
    if (x == pos.size()) return;
    for (std::size_t i = 0; i < pos[x].size(); ++i) o.order[x][i] = dom[x][pos[x][i]];
  }
}

inline OrderingFamily sample_ordering(const Digraph& g, const Arborescence& t, Rng& rng) {
  OrderingFamily o;
  o.order.resize(g.vertex_count());
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    o.order[x] = ordering_domain(g, t, x);
    rng.shuffle(o.order[x]);
  }
  return o;
}

/// The BEST map f(T, o): from the root, repeatedly leave the current vertex x
/// by its o_x-least unused non-tree edge; once those run out take the tree
/// edge, or stop if x is the root.
inline GraphPath best_bijection_f(const Digraph& g, const Arborescence& t, const OrderingFamily& o) {
  require(is_valid_arborescence(g, t), ErrorKind::Precondition, "invalid arborescence");
  require(is_valid_ordering(g, t, o), ErrorKind::Precondition, "ordering family does not match the tree");
  std::vector<std::size_t> next(g.vertex_count(), 0);
  std::vector<bool> used(g.edge_count(), false);
  GraphPath path;
  path.vertices.push_back(t.root);
  VertexId x = t.root;
  while (true) {
    EdgeId e;
    if (next[x] < o.order[x].size()) {
      e = o.order[x][next[x]++];
    } else if (x == t.root) {
      break;
    } else {
      e = *t.tree_edge[x];
    }
    require(!used[e], ErrorKind::Contradiction, "greedy walk re-entered a used tree edge");
    used[e] = true;
    path.edges.push_back(e);
    x = g.edge(e).target;
    path.vertices.push_back(x);
  }
  require(path.edges.size() == g.edge_count(), ErrorKind::Contradiction,
          "greedy walk stopped before using every edge");
  return path;
}

/// Wilson's algorithm: loop-erased random walks along uniformly chosen
/// out-edges until they hit the growing tree. Each tree T has probability
/// prod_{x != root} 1/deg(x), which is the same for all T, so the law is uniform.
inline Arborescence sample_arborescence(const Digraph& g, VertexId root, Rng& rng) {
  (void)find_arborescence(g, root);  // throws when no tree exists, so every walk terminates
  const auto active = detail::active_vertices(g, root);
  Arborescence t{root, std::vector<std::optional<EdgeId>>(g.vertex_count())};
  std::vector<bool> in_tree(g.vertex_count(), false);
  std::vector<EdgeId> next(g.vertex_count(), 0);
  in_tree[root] = true;
  for (VertexId start = 0; start < g.vertex_count(); ++start) {
    if (!active[start] || in_tree[start]) continue;
    for (VertexId x = start; !in_tree[x];) {
      const auto& out = g.out_edges(x);
      next[x] = out[rng.below(out.size())];
      x = g.edge(next[x]).target;
    }
    for (VertexId x = start; !in_tree[x]; x = g.edge(next[x]).target) {
      in_tree[x] = true;
      t.tree_edge[x] = next[x];
    }
  }
  return t;
}

/// Exactly uniform over all Eulerian paths from the root: uniform T times
/// uniform o, since |O(T)| does not depend on T.
inline GraphPath sample_uniform_eulerian(const Digraph& g, VertexId root, Rng& rng) {
  detail::check_root(g, root);
  require(g.is_balanced(), ErrorKind::Unbalanced, "sampling needs a balanced graph");
  const Arborescence t = sample_arborescence(g, root, rng);
  return best_bijection_f(g, t, sample_ordering(g, t, rng));
}

/// The common degree of a regular graph, if it is regular.
inline std::optional<std::size_t> regular_degree(const Digraph& g) {
  if (g.vertex_count() == 0) return std::nullopt;
  const std::size_t k = g.out_degree(0);
  if (k == 0 || !g.is_regular(k)) return std::nullopt;
  return k;
}

/// k * (k-1)!^|V| for a k-regular graph.
inline BigCount restricted_family_size(const Digraph& g) {
  const auto k = regular_degree(g);
  require(k.has_value(), ErrorKind::NotRegular, "restricted family needs a regular graph");
  return BigCount(*k) * pow_big(factorial(static_cast<long long>(*k) - 1), g.vertex_count());
}

/// E'(T) = { f(T, o) : o in O(T) }, materialised in index order.
inline std::vector<GraphPath> restricted_family(const Digraph& g, VertexId root, const Arborescence& t,
                                                std::uint64_t budget = 1'000'000) {
  require(t.root == root, ErrorKind::Precondition, "tree is rooted elsewhere");
  const BigCount size = restricted_family_size(g);
  require(size <= budget, ErrorKind::Resource, "restricted family too large to materialise");
  std::vector<GraphPath> out;
  for_each_ordering(g, t, [&](const OrderingFamily& o) {
    out.push_back(best_bijection_f(g, t, o));
    return true;
  });
  require(BigCount(out.size()) == size, ErrorKind::Contradiction, "restricted family size law violated");
  return out;
}

struct RestrictedPrefixCount {
  /// Members of E'(T) extending the prefix.
  BigCount count;
  /// count <= d * (d-1)!^(|V| - len/d) for the common degree d; empty if the graph is not regular.
  std::optional<bool> bound_holds;
};

/// Number of o in O(T) with f(T, o) extending `prefix`. A prefix taking a tree
/// edge before the other out-edges of its vertex is used up has no extension;
/// otherwise the count is prod_x (#unused non-tree out-edges of x)!.
inline RestrictedPrefixCount count_extensions_in_restricted(const Digraph& g, VertexId root,
                                                            const Arborescence& t, GraphPath prefix) {
  require(is_valid_arborescence(g, t) && t.root == root, ErrorKind::Precondition, "invalid arborescence");
  if (prefix.vertices.empty()) prefix.vertices.push_back(root);
  require(is_valid_path(prefix, g), ErrorKind::Precondition, "prefix is not a path of the graph");
  require(prefix.vertices.front() == root, ErrorKind::Precondition, "prefix does not start at the root");

  std::vector<std::size_t> remaining(g.vertex_count());
  for (VertexId x = 0; x < g.vertex_count(); ++x) remaining[x] = ordering_domain(g, t, x).size();
  std::vector<bool> used(g.edge_count(), false);
  bool consistent = true;
  for (EdgeId e : prefix.edges) {
    require(!used[e], ErrorKind::Precondition, "prefix repeats an edge");
    used[e] = true;
    const VertexId x = g.edge(e).source;
    if (t.tree_edge[x] && *t.tree_edge[x] == e) {
      if (remaining[x] != 0) consistent = false;
    } else {
      --remaining[x];
    }
  }
  RestrictedPrefixCount result;
  result.count = 0;
  if (consistent) {
    result.count = 1;
    for (VertexId x = 0; x < g.vertex_count(); ++x) result.count *= factorial(static_cast<long long>(remaining[x]));
  }
  if (const auto d = regular_degree(g)) {
    // N <= d * F^(|V| - l/d)  <=>  N^d <= d^d * F^(d|V| - l), F = (d-1)!.
    const std::uint64_t exponent = *d * g.vertex_count() - prefix.length();
    const BigCount lhs = pow_big(result.count, *d);
    const BigCount rhs = pow_big(BigCount(*d), *d) * pow_big(factorial(static_cast<long long>(*d) - 1), exponent);
    result.bound_holds = lhs <= rhs;
  }
  return result;
}

}  // namespace dbseq
