#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dbseq/error.hpp"
#include "dbseq/numeric.hpp"
#include "dbseq/words.hpp"

namespace dbseq {

/// A base-b IFS: the maps x -> (a + x)/b for a in A.
struct IFSSpec {
  DigitSystem ds;
  /// log k / log b.
  Real delta;
  bool strong_separation = false;
};

/// 0 not in A, or b-1 not in A, or no two consecutive digits in A.
inline bool strong_separation(const DigitSystem& ds) {
  const auto& a = ds.digits();
  if (a.front() != 0 || a.back() != ds.base() - 1) return true;
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i] == a[i - 1] + 1) return false;
  }
  return true;
}

inline IFSSpec make_ifs(const DigitSystem& ds) {
  using boost::multiprecision::log;
  return {ds, log(Real(ds.k())) / log(Real(ds.base())), strong_separation(ds)};
}

inline ExactRational make_rational(const BigInt& p, const BigInt& q) {
  require(q != 0, ErrorKind::Domain, "zero denominator");
  return ExactRational(p, q);
}

/// "p/q" or "p" in decimal.
inline ExactRational parse_rational(std::string_view text) {
  auto parse_int = [](std::string_view s) {
    require(!s.empty() && s.size() < 4000 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }),
            ErrorKind::Parse, "malformed integer '" + std::string(s) + "'");
    return BigInt(std::string(s));
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return ExactRational(parse_int(text));
  const BigInt q = parse_int(text.substr(slash + 1));
  require(q != 0, ErrorKind::Parse, "zero denominator");
  return ExactRational(parse_int(text.substr(0, slash)), q);
}

/// r = 0.pre (period)(period)... in base b.
struct PreperiodicExpansion {
  int base = 10;
  std::vector<Digit> preperiod;
  std::vector<Digit> period;

  std::size_t i() const { return preperiod.size(); }
  std::size_t j() const { return period.size(); }

  /// Digit at 1-based position n of the unrolled expansion.
  Digit digit(std::size_t n) const {
    if (n <= preperiod.size()) return preperiod[n - 1];
    return period[(n - preperiod.size() - 1) % period.size()];
  }

  ExactRational value() const {
    BigInt pre = 0;
    for (Digit d : preperiod) pre = pre * base + d;
    BigInt per = 0;
    for (Digit d : period) per = per * base + d;
    const BigInt bi = pow_big(base, preperiod.size());
    const BigInt bj1 = pow_big(base, period.size()) - 1;
    return ExactRational(pre, bi) + ExactRational(per, bi * bj1);
  }

  /// b^i (b^j - 1).
  BigCount height() const { return pow_big(base, i()) * (pow_big(base, j()) - 1); }

  bool uses_only(const DigitSystem& ds) const {
    auto in = [&ds](Digit d) { return ds.contains(d); };
    return std::all_of(preperiod.begin(), preperiod.end(), in) && std::all_of(period.begin(), period.end(), in);
  }

  bool operator==(const PreperiodicExpansion&) const = default;
};

inline std::string format_expansion(const PreperiodicExpansion& e) {
  return "0." + format_word(Word(e.preperiod), e.base) + "(" + format_word(Word(e.period), e.base) + ")";
}

/// Canonical expansion by long division; minimal preperiod and period.
/// Never ends in repeating b-1, except for r = 1 = 0.(b-1).
inline PreperiodicExpansion expand(const ExactRational& r, int base) {
  require(base >= 2, ErrorKind::Domain, "base must be at least 2");
  require(r >= 0 && r <= 1, ErrorKind::Domain, "rational must lie in [0, 1]");
  PreperiodicExpansion e;
  e.base = base;
  if (r == 1) {
    e.period = {base - 1};
    return e;
  }
  const BigInt den = boost::multiprecision::denominator(r);
  BigInt rem = boost::multiprecision::numerator(r);
  std::map<BigInt, std::size_t> seen;
  std::vector<Digit> digits;
  while (true) {
    const auto [it, inserted] = seen.emplace(rem, digits.size());
    if (!inserted) {
      e.preperiod.assign(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(it->second));
      e.period.assign(digits.begin() + static_cast<std::ptrdiff_t>(it->second), digits.end());
      break;
    }
    rem *= base;
    digits.push_back(static_cast<Digit>(rem / den));
    rem %= den;
  }
  return e;
}

/// For b-adic r in (0, 1): the other expansion d1..d(t-1) (dt - 1) (b-1)(b-1)...
inline std::optional<PreperiodicExpansion> alternative_expansion(const ExactRational& r, int base) {
  const PreperiodicExpansion e = expand(r, base);
  if (e.period != std::vector<Digit>{0} || e.preperiod.empty()) return std::nullopt;
  PreperiodicExpansion alt;
  alt.base = base;
  alt.preperiod = e.preperiod;
  alt.preperiod.back() -= 1;
  alt.period = {base - 1};
  return alt;
}

/// The expansion of r with every digit in A, if there is one.
inline std::optional<PreperiodicExpansion> fractal_expansion(const ExactRational& r, const DigitSystem& ds) {
  const PreperiodicExpansion e = expand(r, ds.base());
  if (e.uses_only(ds)) return e;
  const auto alt = alternative_expansion(r, ds.base());
  if (alt && alt->uses_only(ds)) return alt;
  return std::nullopt;
}

inline bool in_fractal(const ExactRational& r, const IFSSpec& ifs) {
  require(r >= 0 && r <= 1, ErrorKind::Domain, "rational must lie in [0, 1]");
  return fractal_expansion(r, ifs.ds).has_value();
}

inline BigCount standard_height(const ExactRational& r) { return boost::multiprecision::denominator(r); }

inline BigCount symbolic_height(const ExactRational& r, const IFSSpec& ifs) {
  require(ifs.strong_separation, ErrorKind::Unsupported, "symbolic height needs strong separation");
  require(r >= 0 && r <= 1, ErrorKind::Domain, "rational must lie in [0, 1]");
  const auto e = fractal_expansion(r, ifs.ds);
  require(e.has_value(), ErrorKind::NotInFractal, to_decimal(r) + " is not in the fractal");
  return e->height();
}

struct FractalRational {
  ExactRational value;
  BigCount h_sym;
  PreperiodicExpansion expansion;
};

namespace detail {

inline bool primitive_block(const std::vector<Digit>& p) {
  const std::size_t n = p.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t t = d; t < n && periodic; ++t) periodic = p[t] == p[t - d];
    if (periodic) return false;
  }
  return true;
}

inline bool odometer(std::vector<int>& idx, int k) {
  for (std::size_t t = idx.size(); t-- > 0;) {
    if (++idx[t] < k) return true;
    idx[t] = 0;
  }
  return false;
}

}  // namespace detail

/// Every rational of F with symbolic height <= h_max, sorted by height then value.
inline std::vector<FractalRational> enumerate_fractal_rationals(const IFSSpec& ifs, const BigCount& h_max,
                                                                std::uint64_t block_budget = 10'000'000) {
  require(ifs.strong_separation, ErrorKind::Unsupported, "enumeration needs strong separation");
  const int b = ifs.ds.base();
  const int k = ifs.ds.k();
  std::vector<FractalRational> out;
  // Budget check first so a huge h_max fails before doing any work.
  BigCount blocks = 0;
  for (std::size_t j = 1; pow_big(b, j) - 1 <= h_max; ++j) {
    for (std::size_t i = 0; pow_big(b, i) * (pow_big(b, j) - 1) <= h_max; ++i) blocks += pow_big(k, i + j);
  }
  require(blocks <= block_budget, ErrorKind::Resource,
          "height bound needs " + to_decimal(blocks) + " blocks, over the budget of " + std::to_string(block_budget));
  for (std::size_t j = 1; pow_big(b, j) - 1 <= h_max; ++j) {
    for (std::size_t i = 0; pow_big(b, i) * (pow_big(b, j) - 1) <= h_max; ++i) {
      std::vector<int> idx(i + j, 0);
      do {
        PreperiodicExpansion e;
        e.base = b;
        for (std::size_t t = 0; t < i; ++t) e.preperiod.push_back(ifs.ds.digit_at(idx[t]));
        for (std::size_t t = i; t < i + j; ++t) e.period.push_back(ifs.ds.digit_at(idx[t]));
        if (!detail::primitive_block(e.period)) continue;
        if (i > 0 && e.preperiod.back() == e.period.back()) continue;
        out.push_back({e.value(), e.height(), std::move(e)});
      } while (detail::odometer(idx, k));
    }
  }
  std::sort(out.begin(), out.end(), [](const FractalRational& x, const FractalRational& y) {
    return x.h_sym != y.h_sym ? x.h_sym < y.h_sym : x.value < y.value;
  });
  return out;
}

namespace detail {

/// 1 / (q (log_b q)^(1/delta)) for q >= 2.
inline Real psi(const BigCount& q, const IFSSpec& ifs) {
  using boost::multiprecision::log;
  using boost::multiprecision::pow;
  require(q >= 2, ErrorKind::Domain, "height must be at least 2");
  const Real lq = log(Real(q)) / log(Real(ifs.ds.base()));
  return 1 / (Real(q) * pow(lq, 1 / ifs.delta));
}

/// Relative slack applied to transcendental right-hand sides before comparing.
inline const Real& rounding_slack() {
  static const Real slack("1e-40");
  return slack;
}

}  // namespace detail

/// psi_*(q) = 1 / (q (log_b q)^(1/delta)), q >= b.
inline Real dirichlet_bound(const BigCount& q, const IFSSpec& ifs) {
  require(q >= ifs.ds.base(), ErrorKind::Domain, "q must be at least the base");
  return detail::psi(q, ifs);
}

/// Exact hull of the cylinder of x's prefix: [0.prefix min(A)..., 0.prefix max(A)...].
struct Cylinder {
  ExactRational low;
  ExactRational high;

  ExactRational width() const { return high - low; }

  /// Distance from r to the interval; 0 when r lies inside.
  ExactRational distance_to(const ExactRational& r) const {
    if (r < low) return low - r;
    if (r > high) return r - high;
    return 0;
  }

  /// Largest distance from r to any point of the interval.
  ExactRational max_distance_to(const ExactRational& r) const {
    const ExactRational a = r > low ? ExactRational(r - low) : ExactRational(low - r);
    const ExactRational c = r > high ? ExactRational(r - high) : ExactRational(high - r);
    return std::max(a, c);
  }
};

inline Cylinder cylinder(const Word& prefix, const DigitSystem& ds) {
  validate_word(prefix, ds);
  BigInt p = 0;
  for (Digit d : prefix) p = p * ds.base() + d;
  const BigInt scale = pow_big(ds.base(), prefix.size());
  const ExactRational value(p, scale);
  const ExactRational tail_unit(1, scale * (ds.base() - 1));
  return {value + tail_unit * ds.digits().front(), value + tail_unit * ds.digits().back()};
}

struct Agreement {
  /// Largest m with x_n = tau_n for all n <= m (capped at the prefix length).
  std::size_t m = 0;
  /// False when the whole prefix agrees; m is then only a lower bound.
  bool resolved = false;
  /// b^-(m+2).
  ExactRational lower_bound;
  /// Exact distance from r to the prefix cylinder of x.
  ExactRational interval_distance;
};

inline Agreement agreement_length(const Word& x_prefix, const PreperiodicExpansion& e, const DigitSystem& ds) {
  require(e.base == ds.base(), ErrorKind::Precondition, "expansion base differs from the digit system");
  Agreement a;
  while (a.m < x_prefix.size() && x_prefix[a.m] == e.digit(a.m + 1)) ++a.m;
  a.resolved = a.m < x_prefix.size();
  a.lower_bound = ExactRational(1, pow_big(ds.base(), a.m + 2));
  a.interval_distance = cylinder(x_prefix, ds).distance_to(e.value());
  return a;
}

struct DirichletWitness {
  ExactRational r;
  BigCount h_sym;
  /// Upper bound on |x - r| over the prefix cylinder.
  ExactRational distance_bound;
  Real psi;
};

/// Rationals of height <= h_max that approximate every point of the prefix
/// cylinder better than psi_*(H_sym(r)).
inline std::vector<DirichletWitness> find_dirichlet_witnesses(const Word& x_prefix, const IFSSpec& ifs,
                                                              const BigCount& h_max) {
  require(ifs.strong_separation, ErrorKind::Unsupported, "witness search needs strong separation");
  const Cylinder cyl = cylinder(x_prefix, ifs.ds);
  require(h_max >= 2 && to_real(cyl.width()) < detail::psi(h_max, ifs), ErrorKind::NeedsLongerPrefix,
          "prefix cylinder is wider than psi_*(H_max); a longer prefix is needed");
  std::vector<DirichletWitness> out;
  for (const FractalRational& fr : enumerate_fractal_rationals(ifs, h_max)) {
    const ExactRational bound = cyl.max_distance_to(fr.value);
    const Real p = detail::psi(fr.h_sym, ifs);
    if (to_real(bound) * (1 + detail::rounding_slack()) < p) out.push_back({fr.value, fr.h_sym, bound, p});
  }
  return out;
}

struct BARecord {
  ExactRational r;
  PreperiodicExpansion expansion;
  BigCount h_sym;
  BigCount h_std;
  std::size_t m = 0;
  bool resolved = false;
  /// Exact distance from r to the prefix cylinder.
  ExactRational lower_bound;
  /// kappa psi_*(H_sym), evaluated for H_sym >= 2.
  Real rhs;
  Real margin;
  bool ok = false;
  /// 1 when m <= i + j + l, 2 otherwise.
  int proof_case = 1;
  /// Case 2 arithmetic k^(m - (i+j) - l) <= i + j; nullopt when no certified order applies.
  std::optional<bool> dichotomy_holds;
};

struct BACertificate {
  Word prefix;
  OrderSet orders;
  int gap_bound = 0;
  ExactRational kappa;
  BigCount h_max;
  std::vector<BARecord> records;
  bool needs_longer_prefix = false;
  bool verdict = false;
};

/// Checks |x - r| >= kappa / (H_sym (log_b H_sym)^(1/delta)) with kappa = b^-(l+2),
/// l the largest gap of the prefix's certified orders, for every r of height <= h_max.
inline BACertificate verify_badly_approximable(const Word& x_prefix, const IFSSpec& ifs, const BigCount& h_max) {
  require(ifs.strong_separation, ErrorKind::Unsupported, "certificate needs strong separation");
  BACertificate cert;
  cert.prefix = x_prefix;
  cert.orders = debruijn_orders(x_prefix, ifs.ds);
  cert.gap_bound = gap_report(cert.orders).max_gap;
  const int b = ifs.ds.base();
  const int l = cert.gap_bound;
  cert.kappa = ExactRational(1, pow_big(b, static_cast<std::uint64_t>(l) + 2));
  cert.h_max = h_max;
  cert.verdict = true;
  if (h_max < 2) return cert;
  const Cylinder cyl = cylinder(x_prefix, ifs.ds);
  const Real kappa = to_real(cert.kappa);
  for (const FractalRational& fr : enumerate_fractal_rationals(ifs, h_max)) {
    BARecord rec;
    rec.r = fr.value;
    rec.expansion = fr.expansion;
    rec.h_sym = fr.h_sym;
    rec.h_std = standard_height(fr.value);
    while (rec.m < x_prefix.size() && x_prefix[rec.m] == fr.expansion.digit(rec.m + 1)) ++rec.m;
    rec.resolved = rec.m < x_prefix.size();
    rec.lower_bound = cyl.distance_to(fr.value);
    rec.rhs = kappa * detail::psi(fr.h_sym, ifs);
    rec.margin = to_real(rec.lower_bound) - rec.rhs;
    rec.ok = rec.resolved && to_real(rec.lower_bound) >= rec.rhs * (1 + detail::rounding_slack());
    if (rec.resolved) {
      // Separation gives a clean bound once the first disagreement is inside the prefix.
      require(rec.lower_bound >= ExactRational(1, pow_big(b, rec.m + 2)), ErrorKind::Contradiction,
              "interval distance below b^-(m+2) for " + to_decimal(fr.value));
    }
    const std::size_t total = fr.expansion.i() + fr.expansion.j();
    rec.proof_case = rec.m <= total + static_cast<std::size_t>(l) ? 1 : 2;
    if (rec.proof_case == 2 && rec.resolved) {
      // An order n in (m - total - l, m - total] forces m > k^n + n - 1.
      const long long hi = static_cast<long long>(rec.m) - static_cast<long long>(total);
      for (int n : cert.orders.orders) {
        if (n > hi - l && n <= hi) {
          const BigCount kn = pow_big(ifs.ds.k(), static_cast<std::uint64_t>(n));
          rec.dichotomy_holds = BigCount(rec.m) > kn + n - 1 &&
                                (total < static_cast<std::size_t>(l) ||
                                 pow_big(ifs.ds.k(), static_cast<std::uint64_t>(hi - l)) <= BigCount(total));
          break;
        }
      }
    }
    if (!rec.resolved) cert.needs_longer_prefix = true;
    if (!rec.ok || rec.dichotomy_holds == false) cert.verdict = false;
    cert.records.push_back(std::move(rec));
  }
  return cert;
}

}  // namespace dbseq
