#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dbseq/error.hpp"
#include "dbseq/numeric.hpp"
#include "dbseq/words.hpp"

namespace dbseq {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  VertexId source;
  VertexId target;
  bool is_loop() const noexcept { return source == target; }
  bool operator==(const Edge&) const = default;
};

/// Vertex v of a graph carrying word labels is the length-`order` word whose
/// digit indices, read as a base-k numeral, equal v. This makes vertex order
/// lexicographic on digit strings.
struct WordLabels {
  DigitSystem ds;
  int order;

  Word word(VertexId v) const {
    std::vector<Digit> letters(static_cast<std::size_t>(order));
    std::uint64_t code = v;
    for (int i = order - 1; i >= 0; --i) {
      letters[static_cast<std::size_t>(i)] = ds.digit_at(static_cast<int>(code % static_cast<std::uint64_t>(ds.k())));
      code /= static_cast<std::uint64_t>(ds.k());
    }
    return Word(std::move(letters));
  }

  template <typename It>
  VertexId vertex(It first) const {
    std::uint64_t code = 0;
    for (int i = 0; i < order; ++i, ++first) {
      code = code * static_cast<std::uint64_t>(ds.k()) + static_cast<std::uint64_t>(ds.index_of(*first));
    }
    return static_cast<VertexId>(code);
  }
};

/// Directed multigraph. Loops and parallel edges are allowed; parallel edges
/// are told apart by their EdgeId. Out-edge lists are sorted by (target, id),
/// which fixes every deterministic traversal in the library.
class Digraph {
 public:
  Digraph() = default;

  Digraph(std::size_t vertex_count, std::vector<Edge> edges,
          std::optional<WordLabels> labels = std::nullopt)
      : vertex_count_(vertex_count), edges_(std::move(edges)), labels_(std::move(labels)) {
    out_.assign(vertex_count_, {});
    in_degree_.assign(vertex_count_, 0);
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      const Edge& edge = edges_[e];
      require(edge.source < vertex_count_ && edge.target < vertex_count_, ErrorKind::Precondition,
              "edge endpoint out of range");
      out_[edge.source].push_back(e);
      ++in_degree_[edge.target];
    }
    for (auto& list : out_) {
      std::sort(list.begin(), list.end(), [this](EdgeId a, EdgeId b) {
        return std::pair(edges_[a].target, a) < std::pair(edges_[b].target, b);
      });
    }
  }

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<EdgeId>& out_edges(VertexId v) const { return out_.at(v); }
  std::size_t out_degree(VertexId v) const { return out_.at(v).size(); }
  std::size_t in_degree(VertexId v) const { return in_degree_.at(v); }
  /// Out-degree; equal to the in-degree on balanced graphs.
  std::size_t degree(VertexId v) const { return out_degree(v); }
  const std::optional<WordLabels>& labels() const noexcept { return labels_; }

  bool is_balanced() const {
    for (VertexId v = 0; v < vertex_count_; ++v) {
      if (out_[v].size() != in_degree_[v]) return false;
    }
    return true;
  }

  /// Every vertex has in- and out-degree `k`.
  bool is_regular(std::size_t k) const {
    for (VertexId v = 0; v < vertex_count_; ++v) {
      if (out_[v].size() != k || in_degree_[v] != k) return false;
    }
    return true;
  }

  std::string vertex_name(VertexId v) const {
    if (labels_) return format_word(labels_->word(v), labels_->ds.base());
    return std::to_string(v);
  }

  std::optional<EdgeId> find_edge(VertexId source, VertexId target) const {
    for (EdgeId e : out_.at(source)) {
      if (edges_[e].target == target) return e;
    }
    return std::nullopt;
  }

 private:
  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::optional<WordLabels> labels_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::size_t> in_degree_;
};

/// Vertex sequence with the concrete edge instance used at every step.
struct GraphPath {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;

  std::size_t length() const noexcept { return edges.size(); }
  bool empty() const noexcept { return vertices.empty(); }
  bool is_closed() const noexcept { return !vertices.empty() && vertices.front() == vertices.back(); }
  auto operator<=>(const GraphPath&) const = default;
};

inline constexpr std::uint64_t kDefaultVertexBudget = std::uint64_t{1} << 20;

/// G_n(A): vertices are the length-n words over A, with an edge w -> t iff t
/// is w shifted left by one letter. Every vertex has in- and out-degree k.
inline Digraph build_debruijn_graph(const DigitSystem& ds, int n,
                                    std::uint64_t vertex_budget = kDefaultVertexBudget) {
  require(n >= 1, ErrorKind::Precondition, "graph order must be at least 1");
  const auto k = static_cast<std::uint64_t>(ds.k());
  std::uint64_t vertices = 1;
  for (int i = 0; i < n; ++i) {
    vertices *= k;
    require(vertices <= vertex_budget, ErrorKind::Resource,
            "de Bruijn graph of order " + std::to_string(n) + " exceeds the vertex budget of " +
                std::to_string(vertex_budget));
  }
  const std::uint64_t top = vertices / k;
  std::vector<Edge> edges;
  edges.reserve(vertices * k);
  for (std::uint64_t v = 0; v < vertices; ++v) {
    for (std::uint64_t c = 0; c < k; ++c) {
      edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>((v % top) * k + c)});
    }
  }
  return Digraph(vertices, std::move(edges), WordLabels{ds, n});
}

/// Builds a path from a vertex sequence, taking at each step the lowest-id
/// edge instance not yet used by the path (or the first instance again once
/// all are used, so over-use stays visible to is_eulerian).
inline GraphPath path_from_vertices(const Digraph& g, std::vector<VertexId> vertices) {
  GraphPath path;
  path.vertices = std::move(vertices);
  std::vector<bool> used(g.edge_count(), false);
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    const VertexId from = path.vertices[i];
    const VertexId to = path.vertices[i + 1];
    require(from < g.vertex_count() && to < g.vertex_count(), ErrorKind::Precondition,
            "vertex out of range");
    std::optional<EdgeId> first;
    std::optional<EdgeId> chosen;
    for (EdgeId e : g.out_edges(from)) {
      if (g.edge(e).target != to) continue;
      if (!first) first = e;
      if (!used[e]) {
        chosen = e;
        break;
      }
    }
    require(first.has_value(), ErrorKind::Precondition,
            "no edge " + g.vertex_name(from) + " -> " + g.vertex_name(to));
    const EdgeId e = chosen.value_or(*first);
    used[e] = true;
    path.edges.push_back(e);
  }
  return path;
}

/// Path whose i-th vertex is the i-th length-n window of w, on a word-labelled graph of order n.
inline GraphPath induced_path(const Word& w, const Digraph& g) {
  require(g.labels().has_value(), ErrorKind::Precondition, "graph has no word labels");
  const WordLabels& labels = *g.labels();
  validate_word(w, labels.ds);
  require(w.size() >= static_cast<std::size_t>(labels.order), ErrorKind::Precondition,
          "word shorter than the graph order");
  std::vector<VertexId> vertices;
  vertices.reserve(w.size() - static_cast<std::size_t>(labels.order) + 1);
  for (std::size_t i = 0; i + static_cast<std::size_t>(labels.order) <= w.size(); ++i) {
    vertices.push_back(labels.vertex(w.letters.begin() + static_cast<std::ptrdiff_t>(i)));
  }
  return path_from_vertices(g, std::move(vertices));
}

inline bool is_valid_path(const GraphPath& path, const Digraph& g) {
  if (path.vertices.empty()) return path.edges.empty();
  if (path.edges.size() + 1 != path.vertices.size()) return false;
  for (std::size_t i = 0; i < path.edges.size(); ++i) {
    if (path.edges[i] >= g.edge_count()) return false;
    const Edge& e = g.edge(path.edges[i]);
    if (e.source != path.vertices[i] || e.target != path.vertices[i + 1]) return false;
  }
  return true;
}

/// Uses every edge of g exactly once.
inline bool is_eulerian(const GraphPath& path, const Digraph& g) {
  require(is_valid_path(path, g), ErrorKind::Precondition, "not a path of the graph");
  if (path.vertices.empty() || path.edges.size() != g.edge_count()) return false;
  std::vector<bool> used(g.edge_count(), false);
  for (EdgeId e : path.edges) {
    if (used[e]) return false;
    used[e] = true;
  }
  return true;
}

/// All vertices distinct, except that the last may equal the first.
inline bool is_simple(const GraphPath& path) {
  std::vector<VertexId> body = path.vertices;
  if (body.size() > 1 && body.front() == body.back()) body.pop_back();
  std::sort(body.begin(), body.end());
  return std::adjacent_find(body.begin(), body.end()) == body.end();
}

/// The graph with the edge multiset of a closed path removed. Vertex set and
/// labels are kept; surviving edges keep their relative order.
inline Digraph remove_path_edges(const Digraph& g, const GraphPath& path) {
  require(is_valid_path(path, g), ErrorKind::Precondition, "not a path of the graph");
  if (path.edges.empty()) return g;
  require(path.is_closed(), ErrorKind::BalanceViolation,
          "removing a non-closed path leaves the graph unbalanced");
  std::vector<bool> removed(g.edge_count(), false);
  for (EdgeId e : path.edges) {
    require(!removed[e], ErrorKind::Precondition, "path uses an edge instance twice");
    removed[e] = true;
  }
  std::vector<Edge> kept;
  kept.reserve(g.edge_count() - path.edges.size());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!removed[e]) kept.push_back(g.edge(e));
  }
  Digraph result(g.vertex_count(), std::move(kept), g.labels());
  require(!g.is_balanced() || result.is_balanced(), ErrorKind::BalanceViolation,
          "result is not balanced");
  return result;
}

/// Adds one edge per step of the path; the inverse of remove_path_edges up to edge ids.
inline Digraph add_path_edges(const Digraph& g, const GraphPath& path) {
  std::vector<Edge> edges = g.edges();
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    edges.push_back({path.vertices[i], path.vertices[i + 1]});
  }
  return Digraph(g.vertex_count(), std::move(edges), g.labels());
}

/// Weak connectivity over all vertices; an isolated vertex is its own component.
inline bool is_connected(const Digraph& g) {
  if (g.vertex_count() == 0) return true;
  std::vector<VertexId> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), VertexId{0});
  auto find = [&parent](VertexId v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  std::size_t components = g.vertex_count();
  for (const Edge& e : g.edges()) {
    const VertexId a = find(e.source);
    const VertexId b = find(e.target);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

inline bool is_strongly_connected(const Digraph& g) {
  if (g.vertex_count() == 0) return true;
  auto reaches_all = [&g](bool forward) {
    std::vector<std::vector<VertexId>> adj(g.vertex_count());
    for (const Edge& e : g.edges()) {
      if (forward) {
        adj[e.source].push_back(e.target);
      } else {
        adj[e.target].push_back(e.source);
      }
    }
    std::vector<bool> seen(g.vertex_count(), false);
    std::vector<VertexId> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (VertexId w : adj[v]) {
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == g.vertex_count();
  };
  return reaches_all(true) && reaches_all(false);
}

/// One "src tgt" line per edge, in edge-id order.
inline std::string to_edge_list(const Digraph& g) {
  std::ostringstream out;
  for (const Edge& e : g.edges()) out << g.vertex_name(e.source) << ' ' << g.vertex_name(e.target) << '\n';
  return out.str();
}

/// Parsed edge-list graph together with the original vertex names.
struct NamedDigraph {
  Digraph graph;
  std::vector<std::string> names;

  std::optional<VertexId> vertex(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<VertexId>(it - names.begin());
  }
};

/// Reads "src tgt" lines; a single-token line declares an isolated vertex and
/// '#' starts a comment. Vertices are ordered numerically when every name is
/// a non-negative integer, lexicographically otherwise.
inline NamedDigraph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<std::string, std::string>> raw_edges;
  std::vector<std::string> names;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string token; fields >> token;) tokens.push_back(token);
    if (tokens.empty()) continue;
    require(tokens.size() <= 2, ErrorKind::Parse,
            "line " + std::to_string(line_no) + ": expected 'src tgt'");
    names.push_back(tokens[0]);
    if (tokens.size() == 2) {
      names.push_back(tokens[1]);
      raw_edges.emplace_back(tokens[0], tokens[1]);
    }
  }
  const bool numeric = std::all_of(names.begin(), names.end(), [](const std::string& s) {
    return !s.empty() && s.size() < 10 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  });
  std::sort(names.begin(), names.end(), [numeric](const std::string& a, const std::string& b) {
    if (numeric) return std::stoul(a) < std::stoul(b);
    return a < b;
  });
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::map<std::string, VertexId> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<VertexId>(i);
  std::vector<Edge> edges;
  edges.reserve(raw_edges.size());
  for (const auto& [s, t] : raw_edges) edges.push_back({index.at(s), index.at(t)});
  return {Digraph(names.size(), std::move(edges)), std::move(names)};
}

}  // namespace dbseq
