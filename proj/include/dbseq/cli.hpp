#pragma once

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dbseq/best.hpp"
#include "dbseq/dimension.hpp"
#include "dbseq/error.hpp"
#include "dbseq/extension.hpp"
#include "dbseq/graph.hpp"
#include "dbseq/serialize.hpp"
#include "dbseq/symbolic.hpp"
#include "dbseq/words.hpp"

namespace dbseq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Flags shared by the subcommands; unset ones keep their defaults.
struct RunConfig {
  int k = 0;
  int base = 0;
  std::string digits;
  std::string word;
  std::string word_file;
  std::string graph_file;
  int delta = 0;
  std::string mode;
  int depth = 1;
  std::uint64_t seed = 0;
  std::string h_max = "0";
  int order = 0;
  long long root = -1;
  bool plain = false;
  bool csv = false;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Parse, "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    require(!item.empty() && item.size() <= 9 &&
                std::all_of(item.begin(), item.end(), [](char c) { return c >= '0' && c <= '9'; }),
            ErrorKind::Parse, "malformed digit list '" + text + "'");
    out.push_back(std::stoi(item));
  }
  return out;
}

/// --digits wins; otherwise digits 0..k-1. The base defaults to k, or to
/// max digit + 1 when only digits are given.
inline DigitSystem digit_system(const RunConfig& c, int default_k = 2) {
  if (!c.digits.empty()) {
    const auto digits = parse_int_list(c.digits);
    require(c.k == 0 || c.k == static_cast<int>(digits.size()), ErrorKind::Precondition,
            "--k disagrees with the number of --digits");
    const int base = c.base > 0 ? c.base : (digits.empty() ? 2 : *std::max_element(digits.begin(), digits.end()) + 1);
    return DigitSystem(base, digits);
  }
  const int k = c.k > 0 ? c.k : (c.base > 0 ? c.base : default_k);
  const int base = c.base > 0 ? c.base : k;
  std::vector<Digit> digits(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) digits[static_cast<std::size_t>(i)] = i;
  return DigitSystem(base, digits);
}

inline Word input_word(const RunConfig& c) {
  require(c.word.empty() != c.word_file.empty(), ErrorKind::Precondition, "give exactly one of --word, --word-file");
  return parse_word(c.word.empty() ? read_file(c.word_file) : c.word);
}

inline BigCount parse_count(const std::string& text) {
  require(!text.empty() && std::all_of(text.begin(), text.end(), [](char ch) { return ch >= '0' && ch <= '9'; }),
          ErrorKind::Parse, "malformed integer '" + text + "'");
  return BigCount(text);
}

inline ExtensionSpec extension_spec(const RunConfig& c, const DigitSystem& ds, bool allow_any_delta) {
  ExtensionSpec spec = ExtensionSpec::defaults(ds);
  if (c.delta > 0) {
    spec.delta = c.delta;
    spec.mode = default_mode(ds.k(), c.delta);
  }
  if (!c.mode.empty()) spec.mode = parse_sampler_mode(c.mode);
  spec.allow_any_delta = allow_any_delta;
  spec.validate();
  return spec;
}

inline std::string plain_value(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline void emit(std::ostream& out, const Json& j, bool plain) {
  if (!plain) {
    out << j.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : j.items()) out << key << ": " << plain_value(value) << '\n';
}

inline Json digit_header(const DigitSystem& ds) {
  return Json{{"k", ds.k()}, {"base", ds.base()}, {"digits", json_digits(ds)}};
}

inline void merge(Json& into, const Json& from) {
  for (const auto& [key, value] : from.items()) into[key] = value;
}

}  // namespace detail

/// Parses args (without the program name), runs one subcommand and writes its
/// result to `out`. Returns 0 on success, 1 when a verdict fails, 2 on usage
/// or library errors.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"De Bruijn sequence construction and symbolic Diophantine checks", "dbseq"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig c;
  app.add_flag("--plain", c.plain, "key: value lines instead of JSON");

  auto digits_options = [&c](CLI::App* sub) {
    sub->add_option("--k", c.k, "alphabet size")->check(CLI::Range(2, 64));
    sub->add_option("--b,--base", c.base, "base b")->check(CLI::Range(2, 1 << 20));
    sub->add_option("--digits", c.digits, "comma-separated digit set A");
  };
  auto word_options = [&c](CLI::App* sub) {
    sub->add_option("--word", c.word, "digit string, plain or comma-separated");
    sub->add_option("--word-file", c.word_file, "file holding the digit string");
  };

  auto* verify = app.add_subcommand("verify", "de Bruijn orders and gap report of a word");
  digits_options(verify);
  word_options(verify);
  verify->add_option("--order", c.order, "also test one order");

  auto* generate = app.add_subcommand("generate", "sample a uniformly de Bruijn prefix");
  digits_options(generate);
  generate->add_option("--delta", c.delta, "order step")->check(CLI::Range(1, 3));
  generate->add_option("--mode", c.mode, "uniform-exact or tree-restricted");
  generate->add_option("--depth", c.depth, "extension rounds")->check(CLI::NonNegativeNumber);
  generate->add_option("--seed", c.seed, "64-bit seed");
  generate->add_option("--start", c.word, "start word (default: least de Bruijn word of order 1)");
  bool any_delta = false;
  generate->add_flag("--any-delta", any_delta, "allow a step size outside the per-k table");

  auto* extend = app.add_subcommand("extend", "extensions of a de Bruijn word by delta orders");
  digits_options(extend);
  word_options(extend);
  extend->add_option("--delta", c.delta, "order step")->check(CLI::Range(1, 3));
  bool list = false;
  bool restricted = false;
  std::size_t limit = 10000;
  extend->add_flag("--list", list, "emit the words, not only the count");
  extend->add_flag("--restricted", restricted, "use the tree-restricted family S'");
  extend->add_option("--limit", limit, "largest list emitted");

  auto* count = app.add_subcommand("count", "BEST terms of a de Bruijn graph or an edge-list file");
  digits_options(count);
  count->add_option("--order", c.order, "de Bruijn graph order n (vertices are length-n words)");
  count->add_option("--graph-file", c.graph_file, "edge list 'src tgt' per line");
  count->add_option("--root", c.root, "root vertex (index, default 0)");

  std::string rational_text;
  auto* height = app.add_subcommand("height", "expansion and heights of a rational p/q");
  height->add_option("rational", rational_text, "p/q")->required();
  digits_options(height);

  auto* ba = app.add_subcommand("ba-check", "badly approximable certificate for a prefix");
  digits_options(ba);
  word_options(ba);
  ba->add_option("--hmax", c.h_max, "largest symbolic height checked")->required();

  auto* dirichlet = app.add_subcommand("dirichlet", "Dirichlet bound and witnesses");
  digits_options(dirichlet);
  word_options(dirichlet);
  dirichlet->add_option("--hmax", c.h_max, "largest symbolic height searched");
  std::string q_text;
  dirichlet->add_option("--q", q_text, "evaluate psi_*(q) only");

  auto* bounds = app.add_subcommand("bounds", "dimension bound constants");
  digits_options(bounds);

  auto* cost = app.add_subcommand("cost-series", "cost terms and ratio diagnostics");
  digits_options(cost);
  double s_value = -1;
  double epsilon = 0.1;
  int m_min = 1;
  int m_max = 7;
  int exact_upto = 0;
  cost->add_option("--s", s_value, "exponent s (default: log_b(k!)/k + epsilon)");
  cost->add_option("--epsilon", epsilon, "offset above the critical exponent");
  cost->add_option("--m-min", m_min);
  cost->add_option("--m-max", m_max);
  cost->add_option("--exact-upto", exact_upto, "use exact counts for m up to this order");
  cost->add_flag("--csv", c.csv, "CSV instead of JSON");

  auto* mdp = app.add_subcommand("mdp-check", "Monte Carlo cylinder measure check");
  digits_options(mdp);
  mdp->add_option("--delta", c.delta, "order step")->check(CLI::Range(1, 3));
  mdp->add_option("--mode", c.mode, "uniform-exact or tree-restricted");
  mdp->add_option("--tau", c.word, "cylinder word (default: the start word)");
  mdp->add_option("--seed", c.seed, "64-bit seed");
  std::uint64_t trials = 1000;
  mdp->add_option("--trials", trials)->check(CLI::PositiveNumber);
  double mdp_s = -1;
  double mdp_c = -1;
  mdp->add_option("--s", mdp_s, "exponent (default: alpha_k * delta)");
  mdp->add_option("--C", mdp_c, "constant (default: from the measure construction)");
  mdp->add_flag("--csv", c.csv, "CSV instead of JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (verify->parsed()) {
      const DigitSystem ds = detail::digit_system(c);
      const Word w = detail::input_word(c);
      const OrderSet orders = debruijn_orders(w, ds);
      Json j = detail::digit_header(ds);
      j["length"] = w.size();
      detail::merge(j, to_json(orders));
      j["gap_report"] = orders.orders.empty() ? Json(nullptr) : to_json(gap_report(orders));
      bool ok = !orders.orders.empty();
      if (c.order > 0) {
        const bool db = is_debruijn(w, c.order, ds);
        j["order"] = c.order;
        j["is_debruijn"] = db;
        ok = db;
      }
      detail::emit(out, j, c.plain);
      return ok ? kExitOk : kExitFail;
    }

    if (generate->parsed()) {
      const DigitSystem ds = detail::digit_system(c);
      const ExtensionSpec spec = detail::extension_spec(c, ds, any_delta);
      const Word start = c.word.empty() ? least_debruijn_word(ds, 1) : parse_word(c.word);
      const SampleResult r = sample_uniform_debruijn(spec, start, c.depth, c.seed);
      const OrderSet orders = debruijn_orders(r.word, ds);
      std::vector<int> expected;
      for (int o = r.orders.front(); o <= orders.horizon; o += spec.delta) expected.push_back(o);
      Json j{{"seed", c.seed}};
      detail::merge(j, detail::digit_header(ds));
      j["delta"] = spec.delta;
      j["mode"] = std::string(to_string(spec.mode));
      j["depth"] = c.depth;
      j["max_safe_depth"] = r.max_safe_depth;
      j["start"] = json_word(start, ds.base());
      j["length"] = r.word.size();
      j["orders"] = orders.orders;
      j["sampled_orders"] = r.orders;
      j["horizon"] = orders.horizon;
      j["gap_report"] = to_json(gap_report(orders));
      Json sizes = Json::array();
      for (const auto& s : r.choice_set_sizes) sizes.push_back(s ? json_count(*s) : Json(nullptr));
      j["choice_set_sizes"] = sizes;
      const bool ok = std::includes(orders.orders.begin(), orders.orders.end(), r.orders.begin(), r.orders.end());
      j["verified"] = ok;
      j["word"] = json_word(r.word, ds.base());
      detail::emit(out, j, c.plain);
      return ok ? kExitOk : kExitFail;
    }

    if (extend->parsed()) {
      const DigitSystem ds = detail::digit_system(c);
      const Word w = detail::input_word(c);
      const int delta = c.delta > 0 ? c.delta : (restricted ? 1 : default_delta(ds.k()));
      Json j = detail::digit_header(ds);
      j["delta"] = delta;
      if (restricted) {
        require(delta == 1, ErrorKind::Precondition, "--restricted needs delta 1");
        const auto words = restricted_extensions(w, ds);
        const auto m = *order_for_length(w.size(), ds.k());
        j["source_order"] = m;
        j["target_order"] = m + 1;
        j["family"] = "restricted";
        j["count"] = words.size();
        j["expected"] = json_count(restricted_extension_count(ds.k(), m));
        if (list) {
          require(words.size() <= limit, ErrorKind::Resource, "more extensions than --limit");
          Json arr = Json::array();
          for (const auto& x : words) arr.push_back(json_word(x, ds.base()));
          j["extensions"] = arr;
        }
        detail::emit(out, j, c.plain);
        return kExitOk;
      }
      const ExtensionCount n = count_extensions(w, delta, ds);
      j["source_order"] = n.source_order;
      j["target_order"] = n.target_order;
      j["family"] = "all";
      j["remaining_edges"] = n.remaining_edges;
      j["count"] = json_count(n.count);
      j["terms"] = to_json(n.terms);
      j["lower_bound"] = n.lower_bound ? json_count(*n.lower_bound) : Json(nullptr);
      j["bound_holds"] = n.bound_holds;
      if (list) {
        require(n.count <= limit, ErrorKind::Resource,
                "count " + to_decimal(n.count) + " exceeds --limit " + std::to_string(limit));
        Json arr = Json::array();
        for_each_extension(w, delta, ds, [&](const Word& x) {
          arr.push_back(json_word(x, ds.base()));
          return true;
        });
        j["extensions"] = arr;
      }
      detail::emit(out, j, c.plain);
      return n.bound_holds ? kExitOk : kExitFail;
    }

    if (count->parsed()) {
      Json j;
      Digraph g;
      VertexId root = 0;
      if (!c.graph_file.empty()) {
        const NamedDigraph named = parse_edge_list(detail::read_file(c.graph_file));
        g = named.graph;
        j["source"] = "edge-list";
        if (c.root >= 0) root = static_cast<VertexId>(c.root);
        require(root < g.vertex_count(), ErrorKind::Precondition, "root out of range");
        j["root"] = named.names.empty() ? Json(nullptr) : Json(named.names[root]);
      } else {
        const DigitSystem ds = detail::digit_system(c);
        require(c.order >= 1, ErrorKind::Precondition, "--order or --graph-file is required");
        g = build_debruijn_graph(ds, c.order);
        j = detail::digit_header(ds);
        j["source"] = "debruijn";
        j["order"] = c.order;
        if (c.root >= 0) root = static_cast<VertexId>(c.root);
        require(root < g.vertex_count(), ErrorKind::Precondition, "root out of range");
        j["root"] = g.vertex_name(root);
        j["debruijn_words_of_next_order"] = json_count(count_debruijn_words(ds, c.order + 1));
      }
      j["vertices"] = g.vertex_count();
      j["edges"] = g.edge_count();
      j["balanced"] = g.is_balanced();
      detail::merge(j, to_json(best_terms(g, root)));
      detail::emit(out, j, c.plain);
      return kExitOk;
    }

    if (height->parsed()) {
      const DigitSystem ds = detail::digit_system(c);
      const IFSSpec ifs = make_ifs(ds);
      const ExactRational r = parse_rational(rational_text);
      require(r >= 0 && r <= 1, ErrorKind::Domain, "rational must lie in [0, 1]");
      const auto e = fractal_expansion(r, ds);
      require(e.has_value(), ErrorKind::NotInFractal, to_decimal(r) + " is not in the fractal");
      Json j{{"r", json_rational(r)}};
      detail::merge(j, detail::digit_header(ds));
      j["strong_separation"] = ifs.strong_separation;
      detail::merge(j, to_json(*e));
      j["h_sym"] = json_count(symbolic_height(r, ifs));
      j["h_std"] = json_count(standard_height(r));
      detail::emit(out, j, c.plain);
      return kExitOk;
    }

    if (ba->parsed()) {
      const DigitSystem ds = detail::digit_system(c);
      const Word w = detail::input_word(c);
      const BACertificate cert = verify_badly_approximable(w, make_ifs(ds), detail::parse_count(c.h_max));
      detail::emit(out, to_json(cert, ds), c.plain);
      return cert.verdict ? kExitOk : kExitFail;
    }

    if (dirichlet->parsed()) {
      const DigitSystem ds = detail::digit_system(c);
      const IFSSpec ifs = make_ifs(ds);
      Json j = detail::digit_header(ds);
      j["delta"] = json_real(ifs.delta);
      if (!q_text.empty()) {
        const BigCount q = detail::parse_count(q_text);
        j["q"] = json_count(q);
        j["psi"] = json_real(dirichlet_bound(q, ifs));
        detail::emit(out, j, c.plain);
        return kExitOk;
      }
      const Word w = detail::input_word(c);
      const BigCount h_max = detail::parse_count(c.h_max);
      const auto witnesses = find_dirichlet_witnesses(w, ifs, h_max);
      j["prefix_length"] = w.size();
      j["h_max"] = json_count(h_max);
      Json arr = Json::array();
      for (const auto& wt : witnesses) {
        arr.push_back(Json{{"r", json_rational(wt.r)},
                           {"h_sym", json_count(wt.h_sym)},
                           {"distance_bound", json_real(to_real(wt.distance_bound))},
                           {"psi", json_real(wt.psi)}});
      }
      j["count"] = witnesses.size();
      j["witnesses"] = arr;
      detail::emit(out, j, c.plain);
      return kExitOk;
    }

    if (bounds->parsed()) {
      const DigitSystem ds = detail::digit_system(c);
      const BoundReport r = bound_report(ds.k(), ds.base());
      detail::emit(out, to_json(r), c.plain);
      return r.sandwich ? kExitOk : kExitFail;
    }

    if (cost->parsed()) {
      const DigitSystem ds = detail::digit_system(c);
      const Real s = s_value > 0 ? Real(s_value) : critical_exponent(ds) + Real(epsilon);
      std::map<int, BigCount> exact;
      for (int m = m_min; m <= std::min(exact_upto, m_max); ++m) exact[m] = count_debruijn_words(ds, m);
      const CostSeries series = cost_series(ds, s, m_min, m_max, exact);
      bool decreasing = true;
      for (std::size_t i = 1; i < series.ratios.size(); ++i) {
        decreasing = decreasing && series.ratios[i].ratio < series.ratios[i - 1].ratio;
      }
      if (c.csv) {
        out << "m,count,is_bound,term,ratio_to_next,closed_form\n";
        for (std::size_t i = 0; i < series.terms.size(); ++i) {
          const auto& t = series.terms[i];
          out << t.m << ',' << t.count << ',' << (t.is_bound ? 1 : 0) << ',' << t.term.str(17, std::ios_base::scientific)
              << ',';
          if (i < series.ratios.size()) {
            out << series.ratios[i].ratio.str(17, std::ios_base::scientific) << ',';
            if (series.ratios[i].closed_form) out << series.ratios[i].closed_form->str(17, std::ios_base::scientific);
          } else {
            out << ',';
          }
          out << '\n';
        }
        return decreasing ? kExitOk : kExitFail;
      }
      Json j = detail::digit_header(ds);
      detail::merge(j, to_json(series));
      j["ratios_decreasing"] = decreasing;
      detail::emit(out, j, c.plain);
      return decreasing ? kExitOk : kExitFail;
    }

    if (mdp->parsed()) {
      const DigitSystem ds = detail::digit_system(c);
      const ExtensionSpec spec = detail::extension_spec(c, ds, false);
      const Word start = least_debruijn_word(ds, 1);
      const Word tau = c.word.empty() ? start : parse_word(c.word);
      const Real s = mdp_s > 0 ? Real(mdp_s) : alpha(ds.k()) * make_ifs(ds).delta;
      const std::optional<Real> constant = mdp_c > 0 ? std::optional<Real>(Real(mdp_c)) : std::nullopt;
      const CylinderCheck check = empirical_cylinder_check(spec, start, tau, trials, s, constant, c.seed);
      if (c.csv) {
        out << "tau,trials,hits,estimate,wilson_low,wilson_high,threshold,pass\n";
        out << format_word(tau, ds.base()) << ',' << check.trials << ',' << check.hits << ',' << check.estimate << ','
            << check.interval.low << ',' << check.interval.high << ','
            << check.threshold.str(17, std::ios_base::scientific) << ',' << (check.pass ? 1 : 0) << '\n';
        return check.pass ? kExitOk : kExitFail;
      }
      Json j = detail::digit_header(ds);
      j["delta"] = spec.delta;
      j["mode"] = std::string(to_string(spec.mode));
      detail::merge(j, to_json(check, ds.base()));
      detail::emit(out, j, c.plain);
      return check.pass ? kExitOk : kExitFail;
    }
  } catch (const Error& e) {
    err << Json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}.dump() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << Json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace dbseq::cli
