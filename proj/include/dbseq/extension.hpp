#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dbseq/best.hpp"
#include "dbseq/error.hpp"
#include "dbseq/graph.hpp"
#include "dbseq/numeric.hpp"
#include "dbseq/words.hpp"

namespace dbseq {

enum class SamplerMode {
  /// Uniform over all extensions (uniform arborescence times uniform ordering).
  UniformExact,
  /// Uniform over S'(w): one fixed arborescence, uniform ordering family.
  TreeRestricted,
};

inline std::string_view to_string(SamplerMode mode) {
  return mode == SamplerMode::UniformExact ? "uniform-exact" : "tree-restricted";
}

inline SamplerMode parse_sampler_mode(std::string_view text) {
  if (text == "uniform-exact") return SamplerMode::UniformExact;
  if (text == "tree-restricted") return SamplerMode::TreeRestricted;
  fail(ErrorKind::Parse, "unknown sampler mode '" + std::string(text) + "'");
}

/// Step size per k: 3 for k = 2, 2 for k = 3, 1 for k >= 4.
inline int default_delta(int k) { return k == 2 ? 3 : (k == 3 ? 2 : 1); }

/// Tree-restricted (S') for single steps on k >= 3, uniform-exact otherwise.
inline SamplerMode default_mode(int k, int delta) {
  return (k >= 3 && delta == 1) ? SamplerMode::TreeRestricted : SamplerMode::UniformExact;
}

struct ExtensionSpec {
  DigitSystem ds;
  int delta;
  SamplerMode mode;
  /// Lifts the per-k restriction on delta for experiments.
  bool allow_any_delta = false;

  static ExtensionSpec defaults(const DigitSystem& ds) {
    const int delta = default_delta(ds.k());
    return {ds, delta, default_mode(ds.k(), delta)};
  }

  void validate() const {
    require(delta >= 1 && delta <= 3, ErrorKind::Precondition, "delta must be 1, 2 or 3");
    const int k = ds.k();
    if (!allow_any_delta) {
      const bool ok = (k == 2 && delta == 3) || (k == 3 && (delta == 1 || delta == 2)) || (k >= 4 && delta == 1);
      require(ok, ErrorKind::Precondition,
              "delta " + std::to_string(delta) + " is not the step for k = " + std::to_string(k) +
                  " (k=2: 3, k=3: 1 or 2, k>=4: 1)");
    }
    require(mode != SamplerMode::TreeRestricted || k >= 3, ErrorKind::Unsupported,
            "tree-restricted sampling needs k >= 3");
  }
};

/// Everything needed to turn order-(m + delta) extensions of a de Bruijn word
/// of order m into Eulerian paths: the wrapped word, its closed induced path
/// gamma on G_N with N = m + delta - 1, and X = G_N minus the edges of gamma.
struct ExtensionGraph {
  DigitSystem ds;
  Word word;
  Word wrapped;
  int source_order = 0;
  int graph_order = 0;
  GraphPath gamma;
  Digraph graph;
  VertexId root = 0;

  int target_order() const { return graph_order + 1; }
};

/// Largest graph order whose vertex count k^N stays within the budget.
inline int max_graph_order(int k, std::uint64_t vertex_budget = kDefaultVertexBudget) {
  int n = 0;
  std::uint64_t v = 1;
  while (v <= vertex_budget / static_cast<std::uint64_t>(k)) {
    v *= static_cast<std::uint64_t>(k);
    ++n;
  }
  return n;
}

inline ExtensionGraph prepare_extension(const Word& w, int delta, const DigitSystem& ds,
                                        std::uint64_t vertex_budget = kDefaultVertexBudget) {
  validate_word(w, ds);
  require(delta >= 1, ErrorKind::Precondition, "delta must be positive");
  const auto m = order_for_length(w.size(), ds.k());
  require(m.has_value() && is_debruijn(w, *m, ds), ErrorKind::NotDeBruijn,
          "input is not a de Bruijn sequence");
  ExtensionGraph ctx{ds, w, {}, *m, *m + delta - 1, {}, {}, 0};
  ctx.wrapped = wrap_word(w, ctx.graph_order, ds);
  const Digraph g = build_debruijn_graph(ds, ctx.graph_order, vertex_budget);
  ctx.gamma = induced_path(ctx.wrapped, g);
  require(ctx.gamma.is_closed() && is_simple(ctx.gamma), ErrorKind::Contradiction,
          "wrapped word does not induce a simple closed path");
  ctx.graph = remove_path_edges(g, ctx.gamma);
  ctx.root = ctx.gamma.vertices.front();
  return ctx;
}

/// The wrapped word followed by the last letter of every vertex entered.
inline Word decode_extension(const ExtensionGraph& ctx, const GraphPath& path) {
  std::vector<Digit> letters = ctx.wrapped.letters;
  letters.reserve(letters.size() + path.edges.size());
  const WordLabels& labels = *ctx.graph.labels();
  const auto k = static_cast<std::uint64_t>(ctx.ds.k());
  for (EdgeId e : path.edges) {
    letters.push_back(labels.ds.digit_at(static_cast<int>(ctx.graph.edge(e).target % k)));
  }
  return Word(std::move(letters));
}

/// Inverse of decode_extension on words that start with the wrapped word:
/// the X-path spelled by the letters after it. Empty if the letters leave X
/// or reuse an edge.
inline std::optional<GraphPath> encode_extension_prefix(const ExtensionGraph& ctx, const Word& tau) {
  if (!tau.starts_with(ctx.wrapped)) return std::nullopt;
  const auto k = static_cast<std::uint64_t>(ctx.ds.k());
  const std::uint64_t top = static_cast<std::uint64_t>(ctx.graph.vertex_count()) / k;
  GraphPath path;
  path.vertices.push_back(ctx.root);
  std::vector<bool> used(ctx.graph.edge_count(), false);
  for (std::size_t i = ctx.wrapped.size(); i < tau.size(); ++i) {
    if (!ctx.ds.contains(tau[i])) return std::nullopt;
    const VertexId from = path.vertices.back();
    const auto to = static_cast<VertexId>((from % top) * k + static_cast<std::uint64_t>(ctx.ds.index_of(tau[i])));
    const auto e = ctx.graph.find_edge(from, to);
    if (!e || used[*e]) return std::nullopt;
    used[*e] = true;
    path.edges.push_back(*e);
    path.vertices.push_back(to);
  }
  return path;
}

/// All de Bruijn words of order m + delta that extend w (w de Bruijn of order m),
/// one per Eulerian path of X from its root.
inline void for_each_extension(const Word& w, int delta, const DigitSystem& ds,
                               const std::function<bool(const Word&)>& visit) {
  const ExtensionGraph ctx = prepare_extension(w, delta, ds);
  for_each_eulerian_path(ctx.graph, ctx.root,
                         [&](const GraphPath& p) { return visit(decode_extension(ctx, p)); });
}

inline std::vector<Word> extensions(const Word& w, int delta, const DigitSystem& ds) {
  std::vector<Word> out;
  for_each_extension(w, delta, ds, [&out](const Word& x) {
    out.push_back(x);
    return true;
  });
  return out;
}

/// Closed-form lower bound on the extension count where one is known:
/// 2^(2^m) for k = 2 with delta = 3, 4^(3^m) for k = 3 with delta = 2, and the
/// S' size (k-1) (k-2)!^(k^m) for k >= 3 with delta = 1.
inline std::optional<BigCount> extension_lower_bound(int k, int m, int delta) {
  const std::uint64_t km = pow_u64(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(m));
  if (k == 2 && delta == 3) return pow_big(2, km);
  if (k == 3 && delta == 2) return pow_big(4, km);
  if (k >= 3 && delta == 1) return BigCount(k - 1) * pow_big(factorial(k - 2), km);
  return std::nullopt;
}

struct ExtensionCount {
  BigCount count;
  BestTerms terms;
  std::optional<BigCount> lower_bound;
  bool bound_holds = true;
  int source_order = 0;
  int target_order = 0;
  std::size_t remaining_edges = 0;
};

/// Exact number of order-(m + delta) extensions by the BEST formula on X.
inline ExtensionCount count_extensions(const Word& w, int delta, const DigitSystem& ds) {
  const ExtensionGraph ctx = prepare_extension(w, delta, ds);
  ExtensionCount result;
  result.terms = best_terms(ctx.graph, ctx.root);
  result.count = result.terms.eulerian_paths;
  result.lower_bound = extension_lower_bound(ds.k(), ctx.source_order, delta);
  result.bound_holds = !result.lower_bound || result.count >= *result.lower_bound;
  result.source_order = ctx.source_order;
  result.target_order = ctx.target_order();
  result.remaining_edges = ctx.graph.edge_count();
  return result;
}

namespace detail {

inline void require_restricted_regime(const ExtensionGraph& ctx) {
  require(ctx.ds.k() >= 3, ErrorKind::Unsupported, "S'(w) needs k >= 3; use the delta = 3 route for k = 2");
  require(ctx.graph_order == ctx.source_order, ErrorKind::Precondition, "S'(w) is defined for delta = 1");
}

}  // namespace detail

/// (k - 1) (k - 2)!^(k^m).
inline BigCount restricted_extension_count(int k, int m) {
  return BigCount(k - 1) *
         pow_big(factorial(k - 2), pow_u64(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(m)));
}

/// S'(w): the order-(m+1) extensions whose X-paths lie in E'(T) for the
/// deterministic arborescence T = find_arborescence(X, root).
inline std::vector<Word> restricted_extensions(const Word& w, const DigitSystem& ds,
                                               std::uint64_t budget = 1'000'000) {
  const ExtensionGraph ctx = prepare_extension(w, 1, ds);
  detail::require_restricted_regime(ctx);
  const Arborescence t = find_arborescence(ctx.graph, ctx.root);
  std::vector<Word> out;
  for (const GraphPath& p : restricted_family(ctx.graph, ctx.root, t, budget)) {
    out.push_back(decode_extension(ctx, p));
  }
  require(BigCount(out.size()) == restricted_extension_count(ds.k(), ctx.source_order),
          ErrorKind::Contradiction, "S'(w) size law violated");
  return out;
}

struct RestrictedExtensionPrefix {
  BigCount count;
  /// count <= (k-1) (k-2)!^(k^m - (l_tau - l_w - 1)/k).
  bool bound_holds = true;
  /// The sharper graph-level bound with the degree k - 1 of X in place of k.
  std::optional<bool> graph_bound_holds;
};

/// Members of S'(w) that extend tau, for any tau extending w.
inline RestrictedExtensionPrefix count_restricted_extending(const Word& w, const Word& tau,
                                                            const DigitSystem& ds) {
  const ExtensionGraph ctx = prepare_extension(w, 1, ds);
  detail::require_restricted_regime(ctx);
  require(tau.starts_with(w), ErrorKind::Precondition, "tau must extend w");
  const Arborescence t = find_arborescence(ctx.graph, ctx.root);
  RestrictedExtensionPrefix result;
  const std::size_t k = static_cast<std::size_t>(ds.k());
  const std::uint64_t km = ctx.graph.vertex_count();
  if (tau.size() <= ctx.wrapped.size()) {
    result.count = ctx.wrapped.starts_with(tau) ? restricted_extension_count(ds.k(), ctx.source_order) : 0;
  } else if (const auto prefix = encode_extension_prefix(ctx, tau)) {
    const auto inner = count_extensions_in_restricted(ctx.graph, ctx.root, t, *prefix);
    result.count = inner.count;
    result.graph_bound_holds = inner.bound_holds;
  } else {
    result.count = 0;
  }
  // N <= (k-1) F^(k^m - L/k)  <=>  N^k <= (k-1)^k F^(k * k^m - L), L = l_tau - l_w - 1.
  const std::uint64_t extra = tau.size() > w.size() + 1 ? tau.size() - w.size() - 1 : 0;
  const BigCount lhs = pow_big(result.count, k);
  const BigCount rhs = pow_big(BigCount(k - 1), k) * pow_big(factorial(static_cast<long long>(k) - 2), k * km - extra);
  result.bound_holds = lhs <= rhs;
  return result;
}

struct SampleResult {
  Word word;
  std::vector<int> orders;
  /// Number of candidates at each step (extension count or |S'|); empty when not recorded.
  std::vector<std::optional<BigCount>> choice_set_sizes;
  std::uint64_t seed = 0;
  int max_safe_depth = 0;
};

struct SampleOptions {
  bool record_choice_sizes = true;
  /// Above this many vertices in X the per-step count is skipped (the
  /// determinant dominates the run time).
  std::size_t count_vertex_limit = 256;
  std::uint64_t vertex_budget = kDefaultVertexBudget;
};

/// Rounds the sampler can run from an order-m start before G_N outgrows the budget.
inline int max_safe_depth(int k, int start_order, int delta, std::uint64_t vertex_budget = kDefaultVertexBudget) {
  const int max_order = max_graph_order(k, vertex_budget);
  int depth = 0;
  for (int m = start_order; m + delta - 1 <= max_order; m += delta) ++depth;
  return depth;
}

/// One extension step of the sampler from a de Bruijn word of order m to order m + delta.
inline Word sample_extension_step(const ExtensionSpec& spec, const Word& w, Rng& rng,
                                  std::optional<BigCount>* choice_size = nullptr,
                                  const SampleOptions& options = {}) {
  const ExtensionGraph ctx = prepare_extension(w, spec.delta, spec.ds, options.vertex_budget);
  GraphPath path;
  const bool record = choice_size && options.record_choice_sizes &&
                      ctx.graph.vertex_count() <= options.count_vertex_limit;
  if (spec.mode == SamplerMode::UniformExact) {
    path = sample_uniform_eulerian(ctx.graph, ctx.root, rng);
    if (record) *choice_size = best_count(ctx.graph, ctx.root);
  } else {
    const Arborescence t = find_arborescence(ctx.graph, ctx.root);
    path = best_bijection_f(ctx.graph, t, sample_ordering(ctx.graph, t, rng));
    if (choice_size && options.record_choice_sizes) *choice_size = ordering_family_size(ctx.graph, ctx.root);
  }
  return decode_extension(ctx, path);
}

/// Random uniformly de Bruijn prefix: `depth` extension rounds from `start`,
/// each of size delta. Deterministic for a given seed.
inline SampleResult sample_uniform_debruijn(const ExtensionSpec& spec, const Word& start, int depth,
                                            std::uint64_t seed, const SampleOptions& options = {}) {
  spec.validate();
  validate_word(start, spec.ds);
  require(depth >= 0, ErrorKind::Precondition, "depth must be non-negative");
  const auto m = order_for_length(start.size(), spec.ds.k());
  require(m.has_value() && is_debruijn(start, *m, spec.ds), ErrorKind::NotDeBruijn,
          "start word is not a de Bruijn sequence");
  SampleResult result;
  result.seed = seed;
  result.max_safe_depth = max_safe_depth(spec.ds.k(), *m, spec.delta, options.vertex_budget);
  require(depth <= result.max_safe_depth, ErrorKind::Resource,
          "depth " + std::to_string(depth) + " exceeds the vertex budget; largest safe depth is " +
              std::to_string(result.max_safe_depth));
  Rng rng(seed);
  result.word = start;
  result.orders.push_back(*m);
  for (int round = 0; round < depth; ++round) {
    std::optional<BigCount> size;
    result.word = sample_extension_step(spec, result.word, rng, &size, options);
    result.orders.push_back(result.orders.back() + spec.delta);
    result.choice_set_sizes.push_back(size);
  }
  return result;
}

/// Strings of length N - 1 that do not occur in the wrapped word, in lexicographic order (k = 2 regime).
inline std::vector<Word> missing_strings(const ExtensionGraph& ctx) {
  const int len = ctx.graph_order - 1;
  require(len >= 1, ErrorKind::Precondition, "graph order too small for missing strings");
  const WordLabels labels{ctx.ds, len};
  const std::uint64_t count = pow_u64(static_cast<std::uint64_t>(ctx.ds.k()), static_cast<std::uint64_t>(len));
  std::vector<bool> seen(count, false);
  for (std::size_t i = 0; i + static_cast<std::size_t>(len) <= ctx.wrapped.size(); ++i) {
    seen[labels.vertex(ctx.wrapped.letters.begin() + static_cast<std::ptrdiff_t>(i))] = true;
  }
  std::vector<Word> out;
  for (std::uint64_t code = 0; code < count; ++code) {
    if (!seen[code]) out.push_back(labels.word(static_cast<VertexId>(code)));
  }
  return out;
}

/// For k = 2 and a length-(N-1) string tau absent from the wrapped word:
/// another arborescence agreeing with T outside E_tau = {a tau b}. For each
/// a in A in order, swaps the tree edge a tau f(a) for a tau g(a), g(a) != f(a),
/// and returns the first swap that is still an arborescence.
inline Arborescence tree_flip(const ExtensionGraph& ctx, const Arborescence& t, const Word& tau) {
  require(ctx.ds.k() == 2, ErrorKind::Unsupported, "tree flips are defined for k = 2");
  require(tau.size() + 1 == static_cast<std::size_t>(ctx.graph_order), ErrorKind::Precondition,
          "tau must have length N - 1");
  require(is_valid_arborescence(ctx.graph, t), ErrorKind::Precondition, "invalid arborescence");
  const auto missing = missing_strings(ctx);
  require(std::find(missing.begin(), missing.end(), tau) != missing.end(), ErrorKind::Precondition,
          "tau occurs in the wrapped word");
  const WordLabels& labels = *ctx.graph.labels();
  for (Digit a : ctx.ds.digits()) {
    std::vector<Digit> at = {a};
    at.insert(at.end(), tau.begin(), tau.end());
    const VertexId x = labels.vertex(at.begin());
    require(t.tree_edge[x].has_value(), ErrorKind::Contradiction, "vertex a tau has no tree edge");
    const VertexId current = ctx.graph.edge(*t.tree_edge[x]).target;
    for (EdgeId e : ctx.graph.out_edges(x)) {
      if (ctx.graph.edge(e).target == current) continue;
      Arborescence candidate = t;
      candidate.tree_edge[x] = e;
      if (is_valid_arborescence(ctx.graph, candidate)) return candidate;
    }
  }
  fail(ErrorKind::Contradiction, "no valid tree flip exists");
}

/// T_{v,N} for every bit vector v in {0,1}^|S|: flip along tau_i whenever v_i = 1.
/// Bit vectors are enumerated in increasing binary order with tau_1 as the most significant bit.
inline std::vector<Arborescence> flip_family(const ExtensionGraph& ctx, const Arborescence& start) {
  const auto s = missing_strings(ctx);
  require(s.size() <= 20, ErrorKind::Resource, "too many missing strings to enumerate flips");
  std::vector<Arborescence> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << s.size()); ++bits) {
    Arborescence t = start;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if ((bits >> (s.size() - 1 - i)) & 1u) t = tree_flip(ctx, t, s[i]);
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace dbseq
