#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dbseq/error.hpp"
#include "dbseq/extension.hpp"
#include "dbseq/numeric.hpp"
#include "dbseq/symbolic.hpp"
#include "dbseq/words.hpp"

namespace dbseq {

namespace detail {

inline Real log_real(const Real& x) { return boost::multiprecision::log(x); }

inline Real log_factorial(int n) { return log_real(Real(factorial(n))); }

}  // namespace detail

/// log k / log b.
inline Real fractal_dimension(int k, int b) {
  require(k >= 2 && b >= k, ErrorKind::Domain, "need 2 <= k <= b");
  return detail::log_real(Real(k)) / detail::log_real(Real(b));
}

/// Exact value of the lower coefficient where it is rational (k = 2 only).
inline std::optional<ExactRational> alpha_rational(int k) {
  require(k >= 2, ErrorKind::Domain, "k must be at least 2");
  if (k == 2) return ExactRational(1, 49);
  return std::nullopt;
}

/// 1/49 for k = 2, (8 (9 log_4 3 - 1))^-1 for k = 3, log (k-2)! / (k log k) for k >= 4.
inline Real alpha(int k) {
  require(k >= 2, ErrorKind::Domain, "k must be at least 2");
  if (k == 2) return Real(1) / 49;
  if (k == 3) return 1 / (8 * (9 * detail::log_real(Real(3)) / detail::log_real(Real(4)) - 1));
  return detail::log_factorial(k - 2) / (k * detail::log_real(Real(k)));
}

/// The same constant through the step-size route for k <= 3:
/// ((k^D - 1)(k^D log_B k - 1))^-1 with D = 3, B = 2 for k = 2 and D = 2, B = 4 for k = 3.
inline Real alpha_step_route(int k) {
  require(k == 2 || k == 3, ErrorKind::Domain, "the step route covers k = 2 and k = 3");
  const int d = default_delta(k);
  const Real big_b = k == 2 ? 2 : 4;
  const Real kd = boost::multiprecision::pow(Real(k), d);
  return 1 / ((kd - 1) * (kd * detail::log_real(Real(k)) / detail::log_real(big_b) - 1));
}

/// log(k!) / (k log k).
inline Real upper_coefficient(int k) {
  require(k >= 2, ErrorKind::Domain, "k must be at least 2");
  return detail::log_factorial(k) / (k * detail::log_real(Real(k)));
}

/// (1/k) log_b(k!): cost terms of de Bruijn covers are summable above it.
inline Real critical_exponent(const DigitSystem& ds) {
  return detail::log_factorial(ds.k()) / (ds.k() * detail::log_real(Real(ds.base())));
}

struct BoundReport {
  int k = 0;
  int b = 0;
  Real delta;
  Real alpha;
  Real lower;
  Real upper;
  /// 0 < lower <= upper < delta.
  bool sandwich = false;
};

inline BoundReport bound_report(int k, int b) {
  BoundReport r;
  r.k = k;
  r.b = b;
  r.delta = fractal_dimension(k, b);
  r.alpha = alpha(k);
  r.lower = r.alpha * r.delta;
  r.upper = upper_coefficient(k) * r.delta;
  r.sandwich = r.lower > 0 && r.lower <= r.upper && r.upper < r.delta;
  return r;
}

/// The s > 0 with sum c_i^s = 1, by bisection.
inline Real moran_dimension(const std::vector<Real>& ratios) {
  require(ratios.size() >= 2, ErrorKind::Domain, "at least two contraction ratios are required");
  for (const Real& c : ratios) require(c > 0 && c < 1, ErrorKind::Domain, "ratios must lie in (0, 1)");
  auto f = [&ratios](const Real& s) {
    Real sum = 0;
    for (const Real& c : ratios) sum += boost::multiprecision::pow(c, s);
    return sum - 1;
  };
  Real lo = 0;
  Real hi = 1;
  while (f(hi) > 0) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const Real mid = (lo + hi) / 2;
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

/// k^(m-1) k!^(k^(m-1)): the counting bound for de Bruijn words of order m.
inline BigCount debruijn_count_bound(int k, int m) {
  const std::uint64_t km1 = pow_u64(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(m - 1));
  return BigCount(km1) * pow_big(factorial(k), km1);
}

struct CostTerm {
  int m = 0;
  BigCount count;
  /// True when count is the counting bound rather than an exact count.
  bool is_bound = false;
  Real term;
};

struct CostRatio {
  int m = 0;
  Real ratio;
  /// k b^(-eps (k^(m+1) - k^m)) b^-s, when both terms are bounds.
  std::optional<Real> closed_form;
  std::optional<Real> relative_error;
};

struct CostSeries {
  Real s;
  Real epsilon;
  std::vector<CostTerm> terms;
  std::vector<CostRatio> ratios;
};

/// Terms N_m (b^-(k^m + m - 1))^s for m in [m_lo, m_hi]. Exact counts are used
/// where supplied, the counting bound otherwise.
inline CostSeries cost_series(const DigitSystem& ds, const Real& s, int m_lo, int m_hi,
                              const std::map<int, BigCount>& exact = {}) {
  require(s > 0, ErrorKind::Domain, "s must be positive");
  require(m_lo >= 1 && m_lo <= m_hi && m_hi <= 20, ErrorKind::Domain, "m range must lie in [1, 20]");
  const int k = ds.k();
  const Real log_b = detail::log_real(Real(ds.base()));
  CostSeries out;
  out.s = s;
  out.epsilon = s - detail::log_factorial(k) / (k * log_b);
  for (int m = m_lo; m <= m_hi; ++m) {
    CostTerm t;
    t.m = m;
    if (const auto it = exact.find(m); it != exact.end()) {
      t.count = it->second;
    } else {
      t.count = debruijn_count_bound(k, m);
      t.is_bound = true;
    }
    const Real len = Real(pow_u64(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(m)) +
                          static_cast<std::uint64_t>(m) - 1);
    t.term = boost::multiprecision::exp(detail::log_real(Real(t.count)) - s * len * log_b);
    out.terms.push_back(std::move(t));
  }
  for (std::size_t i = 1; i < out.terms.size(); ++i) {
    CostRatio r;
    r.m = out.terms[i - 1].m;
    r.ratio = out.terms[i].term / out.terms[i - 1].term;
    if (out.terms[i].is_bound && out.terms[i - 1].is_bound) {
      const Real km = boost::multiprecision::pow(Real(k), r.m);
      r.closed_form = k * boost::multiprecision::exp(-out.epsilon * (k * km - km) * log_b - s * log_b);
      r.relative_error = boost::multiprecision::abs(r.ratio - *r.closed_form) / *r.closed_form;
    }
    out.ratios.push_back(std::move(r));
  }
  return out;
}

/// log N_m / ((k^m + m - 1) log b).
inline Real empirical_box_dimension(const DigitSystem& ds, int m, const BigCount& count) {
  require(count >= 1 && m >= 1, ErrorKind::Domain, "need m >= 1 and a positive count");
  const Real len = Real(pow_u64(static_cast<std::uint64_t>(ds.k()), static_cast<std::uint64_t>(m)) +
                        static_cast<std::uint64_t>(m) - 1);
  return detail::log_real(Real(count)) / (len * detail::log_real(Real(ds.base())));
}

/// Number of de Bruijn words of order m over k letters, through BEST on G_(m-1)
/// summed over start vertices (order 1 words are the k! permutations).
inline BigCount count_debruijn_words(const DigitSystem& ds, int m) {
  require(m >= 1, ErrorKind::Precondition, "order must be at least 1");
  if (m == 1) return factorial(ds.k());
  const Digraph g = build_debruijn_graph(ds, m - 1);
  BigCount total = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) total += best_count(g, v);
  return total;
}

struct WilsonInterval {
  double low = 0;
  double high = 0;
};

inline WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = 3.0) {
  require(trials > 0, ErrorKind::Precondition, "no trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double denom = 1 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// diam of a length-l cylinder hull is c b^-l with c = (max A - min A) / (b - 1).
inline ExactRational cylinder_constant(const DigitSystem& ds) {
  return ExactRational(ds.digits().back() - ds.digits().front(), ds.base() - 1);
}

/// C in mu(U) <= C diam(U)^s. For k >= 4 this is (k - 1) c^-s. For k <= 3 the
/// start word has measure 1, so C = c^-s b^(s l_start) normalises it.
inline Real mdp_constant(const ExtensionSpec& spec, const Word& start, const Real& s) {
  const Real c = to_real(cylinder_constant(spec.ds));
  const Real cs = boost::multiprecision::pow(c, -s);
  if (spec.ds.k() >= 4) return (spec.ds.k() - 1) * cs;
  return cs * boost::multiprecision::pow(Real(spec.ds.base()), s * Real(start.size()));
}

struct CylinderCheck {
  Word tau;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  std::uint64_t seed = 0;
  int depth = 0;
  double estimate = 0;
  WilsonInterval interval;
  Real s;
  Real constant;
  /// C diam([tau])^s.
  Real threshold;
  /// Upper confidence bound <= threshold. Monte Carlo, not a proof.
  bool pass = false;
};

/// Estimates mu([tau]) under the sampler's law and compares the upper Wilson
/// bound (z = 3) with C diam([tau])^s. Trial t uses seed derive_seed(seed, t).
inline CylinderCheck empirical_cylinder_check(const ExtensionSpec& spec, const Word& start, const Word& tau,
                                              std::uint64_t trials, const Real& s,
                                              std::optional<Real> constant = std::nullopt,
                                              std::uint64_t seed = 0) {
  require(trials >= 1, ErrorKind::Precondition, "need at least one trial");
  validate_word(tau, spec.ds);
  CylinderCheck out;
  out.tau = tau;
  out.trials = trials;
  out.seed = seed;
  out.s = s;
  out.constant = constant ? *constant : mdp_constant(spec, start, s);
  const Real diam = to_real(cylinder_constant(spec.ds)) *
                    boost::multiprecision::pow(Real(spec.ds.base()), -Real(tau.size()));
  out.threshold = out.constant * boost::multiprecision::pow(diam, s);
  // Shallowest depth whose word covers tau.
  const auto m0 = order_for_length(start.size(), spec.ds.k());
  require(m0.has_value(), ErrorKind::NotDeBruijn, "start word is not de Bruijn");
  std::size_t len = start.size();
  int order = *m0;
  while (len < tau.size()) {
    order += spec.delta;
    len = *debruijn_length(spec.ds.k(), order);
    ++out.depth;
  }
  SampleOptions options;
  options.record_choice_sizes = false;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const SampleResult r = sample_uniform_debruijn(spec, start, out.depth, derive_seed(seed, t), options);
    if (r.word.starts_with(tau)) ++out.hits;
  }
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(trials);
  out.interval = wilson_interval(out.hits, trials);
  out.pass = Real(out.interval.high) <= out.threshold * (1 + Real("1e-12"));
  return out;
}

}  // namespace dbseq
