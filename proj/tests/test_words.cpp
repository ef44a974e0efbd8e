#include <gtest/gtest.h>

#include "dbseq/words.hpp"
#include "oracles.hpp"

using namespace dbseq;

namespace {

const DigitSystem kBinary = DigitSystem::full(2);
const DigitSystem kTernary = DigitSystem::full(3);

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Contradiction;
}

}  // namespace

TEST(DigitSystem, SortsAndIndexes) {
  const DigitSystem ds(9, {7, 0, 2});
  EXPECT_EQ(ds.digits(), (std::vector<Digit>{0, 2, 7}));
  EXPECT_EQ(ds.k(), 3);
  EXPECT_EQ(ds.index_of(7), 2);
  EXPECT_FALSE(ds.contains(1));
  EXPECT_EQ(kind_of([&] { (void)ds.index_of(1); }), ErrorKind::InvalidWord);
}

TEST(DigitSystem, RejectsBadInput) {
  EXPECT_EQ(kind_of([] { DigitSystem(1, {0}); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { DigitSystem(3, {0, 0}); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { DigitSystem(3, {0, 3}); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { DigitSystem(3, {1}); }), ErrorKind::Domain);
}

TEST(IsDeBruijn, KnownWords) {
  EXPECT_TRUE(is_debruijn(parse_word("00110"), 2, kBinary));
  EXPECT_TRUE(is_debruijn(parse_word("00010020110120210221112122200"), 3, kTernary));
  EXPECT_FALSE(is_debruijn(parse_word("00110"), 1, kBinary));
  EXPECT_FALSE(is_debruijn(parse_word("00100"), 2, kBinary));
  EXPECT_TRUE(is_debruijn(parse_word("01"), 1, kBinary));
}

TEST(IsDeBruijn, Errors) {
  EXPECT_EQ(kind_of([] { (void)is_debruijn(parse_word("0012"), 2, kBinary); }), ErrorKind::InvalidWord);
  EXPECT_EQ(kind_of([] { (void)is_debruijn(parse_word("01"), 0, kBinary); }), ErrorKind::Precondition);
}

TEST(IsDeBruijn, MatchesOracleOnAllShortWords) {
  for (int k : {2, 3}) {
    const DigitSystem ds = DigitSystem::full(k);
    for (int n : {1, 2}) {
      const auto words = oracle::debruijn_words(k, n);
      for (const auto& w : words) EXPECT_TRUE(is_debruijn(w, n, ds));
    }
  }
  // Exhaustive agreement over every binary word of length 5.
  for (int mask = 0; mask < 32; ++mask) {
    Word w;
    for (int i = 4; i >= 0; --i) w.letters.push_back((mask >> i) & 1);
    EXPECT_EQ(is_debruijn(w, 2, kBinary), oracle::is_debruijn(w, 2, 2)) << format_word(w);
  }
}

TEST(Orders, PaperWord) {
  const OrderSet o = debruijn_orders(parse_word("00110"), kBinary);
  // "00" repeats inside the length-2 prefix, so order 1 is absent.
  EXPECT_EQ(o.orders, (std::vector<int>{2}));
  EXPECT_EQ(o.horizon, 2);
}

TEST(Orders, LongestPrefixes) {
  const OrderSet o = debruijn_orders(parse_word("0110"), kBinary);
  EXPECT_EQ(o.orders, (std::vector<int>{1}));
  EXPECT_EQ(o.horizon, 1);
  EXPECT_TRUE(debruijn_orders(Word{}, kBinary).orders.empty());
}

TEST(GapReport, Cases) {
  EXPECT_EQ(kind_of([] { (void)gap_report(OrderSet{}); }), ErrorKind::EmptyEvidence);
  const GapReport single = gap_report(OrderSet{{2}, 2});
  EXPECT_EQ(single.max_gap, 2);
  EXPECT_TRUE(single.is_arithmetic);
  EXPECT_FALSE(single.gap.has_value());
  const GapReport ap = gap_report(OrderSet{{1, 4, 7}, 7});
  EXPECT_EQ(ap.max_gap, 3);
  EXPECT_TRUE(ap.is_arithmetic);
  EXPECT_EQ(ap.gap, 3);
  const GapReport mixed = gap_report(OrderSet{{1, 2, 5}, 6});
  EXPECT_EQ(mixed.max_gap, 3);
  EXPECT_FALSE(mixed.is_arithmetic);
}

TEST(Wrap, PeriodicExtension) {
  EXPECT_EQ(wrap_word(parse_word("00110"), 2, kBinary), parse_word("001100"));
  EXPECT_EQ(wrap_word(parse_word("00110"), 3, kBinary), parse_word("0011001"));
  EXPECT_EQ(wrap_word(parse_word("01"), 2, kBinary), parse_word("0101"));
  EXPECT_EQ(kind_of([] { (void)wrap_word(parse_word("0010"), 2, kBinary); }), ErrorKind::NotDeBruijn);
  EXPECT_EQ(kind_of([] { (void)wrap_word(parse_word("00110"), 1, kBinary); }), ErrorKind::Precondition);
}

TEST(Wrap, OnlyFirstAndLastBlocksRepeat) {
  for (const auto& w : oracle::debruijn_words(2, 3)) {
    for (int n = 3; n <= 5; ++n) {
      const Word x = wrap_word(w, n, kBinary);
      ASSERT_EQ(x.size(), 8u + static_cast<std::size_t>(n));
      std::set<std::vector<int>> seen;
      for (std::size_t i = 0; i + static_cast<std::size_t>(n) < x.size(); ++i) {
        EXPECT_TRUE(seen.insert(std::vector<int>(x.begin() + static_cast<std::ptrdiff_t>(i),
                                                 x.begin() + static_cast<std::ptrdiff_t>(i) + n))
                        .second);
      }
      EXPECT_TRUE(std::equal(x.begin(), x.begin() + n, x.end() - n));
    }
  }
}

TEST(LeastWord, IsLeastAndDeBruijn) {
  EXPECT_EQ(least_debruijn_word(kBinary, 1), parse_word("01"));
  EXPECT_EQ(least_debruijn_word(kBinary, 2), parse_word("00110"));
  EXPECT_EQ(least_debruijn_word(kBinary, 3), parse_word("0001011100"));
  for (int k : {2, 3}) {
    for (int n : {1, 2}) {
      const auto all = oracle::debruijn_words(k, n);
      EXPECT_EQ(least_debruijn_word(DigitSystem::full(k), n), *std::min_element(all.begin(), all.end()));
    }
  }
  const DigitSystem cantor(3, {0, 2});
  EXPECT_EQ(least_debruijn_word(cantor, 2), parse_word("00220"));
  for (int n = 1; n <= 6; ++n) EXPECT_TRUE(is_debruijn(least_debruijn_word(DigitSystem::full(4), n), n, DigitSystem::full(4)));
}

TEST(Format, RoundTrip) {
  EXPECT_EQ(format_word(parse_word(" 0120\n")), "0120");
  EXPECT_EQ(parse_word("10,0,11"), (Word{10, 0, 11}));
  EXPECT_EQ(format_word(Word{10, 0, 11}, 12), "10,0,11");
  EXPECT_EQ(kind_of([] { (void)parse_word("0a1"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { (void)parse_word("1,,2"); }), ErrorKind::Parse);
}

TEST(Lengths, Law) {
  EXPECT_EQ(debruijn_length(2, 3), 10u);
  EXPECT_EQ(order_for_length(10, 2), 3);
  EXPECT_FALSE(order_for_length(9, 2).has_value());
  EXPECT_FALSE(debruijn_length(2, 70).has_value());
}
