#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dbseq/error.hpp"
#include "dbseq/numeric.hpp"

namespace dbseq {

using Digit = int;

/// A base b together with the admissible digit subset A. The same object
/// defines the word alphabet and the base-b fractal.
class DigitSystem {
 public:
  DigitSystem(int base, std::vector<Digit> digits) : base_(base), digits_(std::move(digits)) {
    require(base_ >= 2, ErrorKind::Domain, "base must be at least 2");
    std::sort(digits_.begin(), digits_.end());
    require(std::adjacent_find(digits_.begin(), digits_.end()) == digits_.end(),
            ErrorKind::Domain, "digits must be distinct");
    require(digits_.size() >= 2, ErrorKind::Domain, "at least two digits are required");
    require(digits_.front() >= 0 && digits_.back() < base_, ErrorKind::Domain,
            "every digit must lie in [0, base - 1]");
    index_.assign(static_cast<std::size_t>(base_), -1);
    for (std::size_t i = 0; i < digits_.size(); ++i) index_[digits_[i]] = static_cast<int>(i);
  }

  /// A = {0, ..., k-1} in base k.
  static DigitSystem full(int k) {
    std::vector<Digit> digits(static_cast<std::size_t>(std::max(k, 0)));
    for (int i = 0; i < k; ++i) digits[i] = i;
    return DigitSystem(k, std::move(digits));
  }

  int base() const noexcept { return base_; }
  int k() const noexcept { return static_cast<int>(digits_.size()); }
  const std::vector<Digit>& digits() const noexcept { return digits_; }

  bool contains(Digit d) const noexcept {
    return d >= 0 && d < base_ && index_[d] >= 0;
  }

  /// Position of `d` in the sorted digit list.
  int index_of(Digit d) const {
    require(contains(d), ErrorKind::InvalidWord,
            "digit " + std::to_string(d) + " is not in the digit set");
    return index_[d];
  }

  Digit digit_at(int index) const { return digits_.at(static_cast<std::size_t>(index)); }

  bool operator==(const DigitSystem& other) const {
    return base_ == other.base_ && digits_ == other.digits_;
  }

 private:
  int base_;
  std::vector<Digit> digits_;
  std::vector<int> index_;
};

/// Finite digit string. Letters are digit values, not characters.
struct Word {
  std::vector<Digit> letters;

  Word() = default;
  explicit Word(std::vector<Digit> l) : letters(std::move(l)) {}
  Word(std::initializer_list<Digit> l) : letters(l) {}

  std::size_t size() const noexcept { return letters.size(); }
  bool empty() const noexcept { return letters.empty(); }
  Digit operator[](std::size_t i) const { return letters[i]; }
  auto begin() const noexcept { return letters.begin(); }
  auto end() const noexcept { return letters.end(); }

  Word prefix(std::size_t n) const {
    return Word(std::vector<Digit>(letters.begin(),
                                   letters.begin() + static_cast<std::ptrdiff_t>(std::min(n, size()))));
  }

  bool starts_with(const Word& other) const {
    return other.size() <= size() && std::equal(other.begin(), other.end(), begin());
  }

  auto operator<=>(const Word&) const = default;
};

inline void validate_word(const Word& w, const DigitSystem& ds) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!ds.contains(w[i])) {
      fail(ErrorKind::InvalidWord, "letter " + std::to_string(w[i]) + " at position " +
                                       std::to_string(i + 1) + " is not in the digit set");
    }
  }
}

/// k^n + n - 1, or nullopt when it does not fit in 64 bits.
inline std::optional<std::uint64_t> debruijn_length(int k, int n) {
  try {
    return pow_u64(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(n)) +
           static_cast<std::uint64_t>(n) - 1;
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// The order n with |w| = k^n + n - 1, if any.
inline std::optional<int> order_for_length(std::size_t length, int k) {
  for (int n = 1;; ++n) {
    const auto len = debruijn_length(k, n);
    if (!len || *len > length) return std::nullopt;
    if (*len == length) return n;
  }
}

namespace detail {

inline bool windows_unique(const Word& w, std::size_t length, int n, const DigitSystem& ds) {
  const int k = ds.k();
  const std::uint64_t count = pow_u64(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(n));
  const std::uint64_t top = count / static_cast<std::uint64_t>(k);
  std::vector<bool> seen(count, false);
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < length; ++i) {
    code = (code % top) * static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(ds.index_of(w[i]));
    if (i + 1 >= static_cast<std::size_t>(n)) {
      if (seen[code]) return false;
      seen[code] = true;
    }
  }
  return true;
}

}  // namespace detail

/// True iff w has length k^n + n - 1 and every length-n string over A occurs
/// in it exactly once.
inline bool is_debruijn(const Word& w, int n, const DigitSystem& ds) {
  require(n >= 1, ErrorKind::Precondition, "order must be at least 1");
  validate_word(w, ds);
  const auto len = debruijn_length(ds.k(), n);
  if (!len || *len != w.size()) return false;
  // length k^n + n - 1 holds exactly k^n windows, so uniqueness gives coverage.
  return detail::windows_unique(w, w.size(), n, ds);
}

/// The orders certified by a finite word, plus the largest order its length can test.
struct OrderSet {
  std::vector<int> orders;
  int horizon = 0;

  bool contains(int n) const { return std::binary_search(orders.begin(), orders.end(), n); }
  bool operator==(const OrderSet&) const = default;
};

/// Every n with k^n + n - 1 <= |w| whose initial segment of that length is
/// de Bruijn of order n. Orders too long to test are absent, not failed.
inline OrderSet debruijn_orders(const Word& w, const DigitSystem& ds) {
  validate_word(w, ds);
  OrderSet result;
  for (int n = 1;; ++n) {
    const auto len = debruijn_length(ds.k(), n);
    if (!len || *len > w.size()) break;
    result.horizon = n;
    if (detail::windows_unique(w, static_cast<std::size_t>(*len), n, ds)) result.orders.push_back(n);
  }
  return result;
}

struct GapReport {
  int max_gap = 0;
  bool is_arithmetic = false;
  std::optional<int> gap;
};

/// The leading gap from 0 to the smallest order counts towards max_gap.
/// A singleton is an arithmetic progression without a common difference.
inline GapReport gap_report(const OrderSet& orders) {
  require(!orders.orders.empty(), ErrorKind::EmptyEvidence, "no certified orders");
  GapReport report;
  const auto& o = orders.orders;
  report.max_gap = o.front();
  for (std::size_t i = 1; i < o.size(); ++i) report.max_gap = std::max(report.max_gap, o[i] - o[i - 1]);
  report.is_arithmetic = true;
  for (std::size_t i = 2; i < o.size(); ++i) {
    if (o[i] - o[i - 1] != o[1] - o[0]) report.is_arithmetic = false;
  }
  if (report.is_arithmetic && o.size() >= 2) report.gap = o[1] - o[0];
  return report;
}

/// Extends a de Bruijn word of order m to length k^m + graph_order by
/// continuing it periodically with period k^m. The first and last
/// graph_order-letter blocks of the result coincide and no other block repeats.
inline Word wrap_word(const Word& w, int graph_order, const DigitSystem& ds) {
  validate_word(w, ds);
  const auto m = order_for_length(w.size(), ds.k());
  require(m.has_value() && is_debruijn(w, *m, ds), ErrorKind::NotDeBruijn,
          "word is not a de Bruijn sequence of any order");
  require(graph_order >= *m, ErrorKind::Precondition,
          "graph order must be at least the order of the word");
  const std::size_t period = w.size() - static_cast<std::size_t>(*m) + 1;
  for (int i = 0; i + 1 < *m; ++i) {
    require(w[static_cast<std::size_t>(i)] == w[period + static_cast<std::size_t>(i)],
            ErrorKind::NotDeBruijn, "first and last letters do not wrap");
  }
  std::vector<Digit> out;
  out.reserve(period + static_cast<std::size_t>(graph_order));
  for (std::size_t i = 0; i < period + static_cast<std::size_t>(graph_order); ++i) {
    out.push_back(w[i % period]);
  }
  return Word(std::move(out));
}

/// Lexicographically least de Bruijn word of order n: the least cyclic
/// sequence (concatenated Lyndon words, FKM order) followed by its first n-1 letters.
inline Word least_debruijn_word(const DigitSystem& ds, int n) {
  require(n >= 1, ErrorKind::Precondition, "order must be at least 1");
  const auto len = debruijn_length(ds.k(), n);
  require(len && *len <= (1u << 26), ErrorKind::Resource, "de Bruijn word too long");
  const int k = ds.k();
  std::vector<int> a(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> cyclic;
  // Iterative FKM generation of Lyndon words with length dividing n.
  int i = 1;
  cyclic.reserve(*len);
  while (true) {
    if (n % i == 0) {
      for (int j = 1; j <= i; ++j) cyclic.push_back(a[static_cast<std::size_t>(j)]);
    }
    i = n;
    while (i > 0 && a[static_cast<std::size_t>(i)] == k - 1) --i;
    if (i == 0) break;
    ++a[static_cast<std::size_t>(i)];
    for (int j = i + 1; j <= n; ++j) a[static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(j - i)];
  }
  std::vector<Digit> out;
  out.reserve(*len);
  for (int c : cyclic) out.push_back(ds.digit_at(c));
  for (int j = 0; j + 1 < n; ++j) out.push_back(out[static_cast<std::size_t>(j)]);
  return Word(std::move(out));
}

/// Plain digit string when the base is at most 10, comma-separated otherwise.
inline std::string format_word(const Word& w, int base = 10) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (base > 10 && i > 0) out.push_back(',');
    if (base > 10) {
      out += std::to_string(w[i]);
    } else {
      out.push_back(static_cast<char>('0' + w[i]));
    }
  }
  return out;
}

/// Accepts "00110" or "0,0,1,1,0"; surrounding whitespace and newlines are ignored.
inline Word parse_word(std::string_view text) {
  auto is_space = [](char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  std::vector<Digit> letters;
  if (text.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t comma = std::min(text.find(',', start), text.size());
      std::string_view item = text.substr(start, comma - start);
      while (!item.empty() && is_space(item.front())) item.remove_prefix(1);
      while (!item.empty() && is_space(item.back())) item.remove_suffix(1);
      require(!item.empty() && item.size() <= 9 &&
                  std::all_of(item.begin(), item.end(), [](char c) { return c >= '0' && c <= '9'; }),
              ErrorKind::Parse, "malformed digit '" + std::string(item) + "'");
      letters.push_back(std::stoi(std::string(item)));
      start = comma + 1;
    }
  } else {
    for (char c : text) {
      require(c >= '0' && c <= '9', ErrorKind::Parse,
              std::string("unexpected character '") + c + "' in word");
      letters.push_back(c - '0');
    }
  }
  return Word(std::move(letters));
}

}  // namespace dbseq
