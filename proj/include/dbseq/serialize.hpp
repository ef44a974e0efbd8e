#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <json.hpp>

#include "dbseq/best.hpp"
#include "dbseq/dimension.hpp"
#include "dbseq/extension.hpp"
#include "dbseq/symbolic.hpp"
#include "dbseq/words.hpp"

namespace dbseq {

using Json = nlohmann::ordered_json;

/// Integer when it fits in 64 signed bits, decimal string otherwise.
inline Json json_count(const BigCount& n) {
  if (n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max()) {
    return n.convert_to<std::int64_t>();
  }
  return n.str();
}

/// Double when representable without underflow, scientific string otherwise.
inline Json json_real(const Real& x) {
  const double d = x.convert_to<double>();
  if (std::isfinite(d) && (x == 0 || std::fabs(d) >= 1e-300)) return d;
  return x.str(20, std::ios_base::scientific);
}

inline Json json_rational(const ExactRational& r) { return to_decimal(r); }

inline Json json_word(const Word& w, int base) { return format_word(w, base); }

inline Json json_digits(const DigitSystem& ds) { return ds.digits(); }

inline Json to_json(const OrderSet& o) {
  return Json{{"orders", o.orders}, {"horizon", o.horizon}};
}

inline Json to_json(const GapReport& g) {
  Json j{{"max_gap", g.max_gap}, {"is_arithmetic", g.is_arithmetic}};
  j["gap"] = g.gap ? Json(*g.gap) : Json(nullptr);
  return j;
}

inline Json to_json(const BestTerms& t) {
  return Json{{"arborescences", json_count(t.arborescences)},
              {"root_degree", t.root_degree},
              {"factorial_product", json_count(t.factorial_product)},
              {"orderings", json_count(t.orderings)},
              {"eulerian_paths", json_count(t.eulerian_paths)}};
}

inline Json to_json(const PreperiodicExpansion& e) {
  return Json{{"i", e.i()},
              {"j", e.j()},
              {"preperiod", format_word(Word(e.preperiod), e.base)},
              {"period", format_word(Word(e.period), e.base)}};
}

inline Json to_json(const BARecord& r) {
  Json j{{"r", json_rational(r.r)},
         {"expansion", format_expansion(r.expansion)},
         {"h_sym", json_count(r.h_sym)},
         {"h_std", json_count(r.h_std)},
         {"m", r.m},
         {"resolved", r.resolved},
         {"lower_bound", json_real(to_real(r.lower_bound))},
         {"rhs", json_real(r.rhs)},
         {"margin", json_real(r.margin)},
         {"ok", r.ok},
         {"case", r.proof_case}};
  j["dichotomy_holds"] = r.dichotomy_holds ? Json(*r.dichotomy_holds) : Json(nullptr);
  return j;
}

inline Json to_json(const BACertificate& c, const DigitSystem& ds) {
  Json records = Json::array();
  for (const auto& r : c.records) records.push_back(to_json(r));
  return Json{{"base", ds.base()},
              {"digits", json_digits(ds)},
              {"prefix_length", c.prefix.size()},
              {"orders", c.orders.orders},
              {"horizon", c.orders.horizon},
              {"gap_bound", c.gap_bound},
              {"gap_bound_note", "largest gap seen within the prefix horizon"},
              {"kappa", json_rational(c.kappa)},
              {"h_max", json_count(c.h_max)},
              {"record_count", c.records.size()},
              {"needs_longer_prefix", c.needs_longer_prefix},
              {"verdict", c.verdict ? "pass" : "fail"},
              {"records", records}};
}

inline Json to_json(const BoundReport& r) {
  Json j{{"k", r.k},
         {"b", r.b},
         {"delta", json_real(r.delta)},
         {"alpha", json_real(r.alpha)}};
  const auto exact = alpha_rational(r.k);
  j["alpha_exact"] = exact ? Json(to_decimal(*exact)) : Json(nullptr);
  j["upper_coefficient"] = json_real(upper_coefficient(r.k));
  j["lower"] = json_real(r.lower);
  j["upper"] = json_real(r.upper);
  j["sandwich"] = r.sandwich;
  return j;
}

inline Json to_json(const CostSeries& c) {
  Json terms = Json::array();
  for (const auto& t : c.terms) {
    terms.push_back(Json{{"m", t.m}, {"count", json_count(t.count)}, {"is_bound", t.is_bound}, {"term", json_real(t.term)}});
  }
  Json ratios = Json::array();
  for (const auto& r : c.ratios) {
    Json j{{"m", r.m}, {"ratio", json_real(r.ratio)}};
    j["closed_form"] = r.closed_form ? json_real(*r.closed_form) : Json(nullptr);
    j["relative_error"] = r.relative_error ? json_real(*r.relative_error) : Json(nullptr);
    ratios.push_back(j);
  }
  return Json{{"s", json_real(c.s)}, {"epsilon", json_real(c.epsilon)}, {"terms", terms}, {"ratios", ratios}};
}

inline Json to_json(const CylinderCheck& c, int base) {
  return Json{{"tau", json_word(c.tau, base)},
              {"tau_length", c.tau.size()},
              {"depth", c.depth},
              {"trials", c.trials},
              {"hits", c.hits},
              {"seed", c.seed},
              {"estimate", c.estimate},
              {"wilson_low", c.interval.low},
              {"wilson_high", c.interval.high},
              {"z", 3.0},
              {"s", json_real(c.s)},
              {"constant", json_real(c.constant)},
              {"threshold", json_real(c.threshold)},
              {"statistical", true},
              {"pass", c.pass}};
}

}  // namespace dbseq
