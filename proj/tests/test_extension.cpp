#include <gtest/gtest.h>

#include <set>

#include "dbseq/extension.hpp"
#include "oracles.hpp"

using namespace dbseq;

namespace {

const DigitSystem kBinary = DigitSystem::full(2);
const DigitSystem kTernary = DigitSystem::full(3);
const DigitSystem kQuaternary = DigitSystem::full(4);

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Contradiction;
}

/// Order-target de Bruijn words that start with w wrapped to order target - 1,
/// from the brute-force list.
std::set<Word> brute_extensions(const Word& w, int k, int target) {
  const Word wrapped = wrap_word(w, target - 1, DigitSystem::full(k));
  std::set<Word> out;
  for (const auto& x : oracle::debruijn_words(k, target)) {
    if (x.starts_with(wrapped)) out.insert(x);
  }
  return out;
}

}  // namespace

TEST(Prepare, GammaLengthLaw) {
  for (int m : {1, 2, 3}) {
    for (int delta : {1, 2, 3}) {
      const ExtensionGraph ctx = prepare_extension(least_debruijn_word(kBinary, m), delta, kBinary);
      EXPECT_EQ(ctx.gamma.length(), std::size_t{1} << m);
      EXPECT_TRUE(ctx.gamma.is_closed());
      EXPECT_EQ(ctx.graph.edge_count(), (std::size_t{2} << ctx.graph_order) - (std::size_t{1} << m));
      EXPECT_TRUE(ctx.graph.is_balanced());
      EXPECT_EQ(ctx.root, ctx.gamma.vertices.front());
    }
  }
}

TEST(Extensions, MatchBruteForce) {
  // Every (w, delta) where the brute-force list is small enough.
  for (const auto& w : oracle::debruijn_words(2, 1)) {
    for (int delta : {1, 2, 3}) {
      const auto got = extensions(w, delta, kBinary);
      const std::set<Word> set_got(got.begin(), got.end());
      EXPECT_EQ(set_got.size(), got.size());
      EXPECT_EQ(set_got, brute_extensions(w, 2, 1 + delta)) << format_word(w) << " delta " << delta;
      EXPECT_EQ(count_extensions(w, delta, kBinary).count, BigCount(got.size()));
    }
  }
  for (const auto& w : oracle::debruijn_words(2, 2)) {
    const auto got = extensions(w, 1, kBinary);
    EXPECT_EQ(std::set<Word>(got.begin(), got.end()), brute_extensions(w, 2, 3));
  }
  for (const auto& w : oracle::debruijn_words(3, 1)) {
    const auto got = extensions(w, 1, kTernary);
    EXPECT_EQ(std::set<Word>(got.begin(), got.end()), brute_extensions(w, 3, 2));
  }
}

TEST(Extensions, BinaryStepThreeFromOrderOne) {
  const Word w = parse_word("01");
  const auto got = extensions(w, 3, kBinary);
  EXPECT_GE(got.size(), 4u);
  for (const auto& x : got) {
    EXPECT_TRUE(is_debruijn(x, 4, kBinary));
    EXPECT_TRUE(x.starts_with(w));
  }
  const ExtensionCount c = count_extensions(w, 3, kBinary);
  EXPECT_EQ(c.count, BigCount(got.size()));
  EXPECT_EQ(c.lower_bound, BigCount(4));
  EXPECT_TRUE(c.bound_holds);
}

TEST(Extensions, QuaternaryStepOneEqualsBest) {
  const Word w = least_debruijn_word(kQuaternary, 1);
  const ExtensionGraph ctx = prepare_extension(w, 1, kQuaternary);
  EXPECT_EQ(ctx.graph.edge_count(), 12u);
  const auto got = extensions(w, 1, kQuaternary);
  EXPECT_EQ(BigCount(got.size()), best_count(ctx.graph, ctx.root));
  for (const auto& x : got) EXPECT_TRUE(is_debruijn(x, 2, kQuaternary));
}

TEST(Extensions, TernaryStepTwoBound) {
  const ExtensionCount c = count_extensions(least_debruijn_word(kTernary, 1), 2, kTernary);
  EXPECT_EQ(c.remaining_edges, 24u);
  EXPECT_GE(c.count, 64);
  EXPECT_TRUE(c.bound_holds);
}

TEST(Extensions, BinaryOrderTwoToFive) {
  const ExtensionCount c = count_extensions(parse_word("00110"), 3, kBinary);
  EXPECT_EQ(c.remaining_edges, 28u);
  EXPECT_EQ(c.target_order, 5);
  EXPECT_GE(c.count, 16);
  EXPECT_TRUE(c.bound_holds);
}

TEST(Extensions, Errors) {
  EXPECT_EQ(kind_of([] { (void)count_extensions(parse_word("0010"), 1, kBinary); }), ErrorKind::NotDeBruijn);
  EXPECT_EQ(kind_of([] { (void)count_extensions(parse_word("0012"), 1, kBinary); }), ErrorKind::InvalidWord);
  EXPECT_EQ(kind_of([] { (void)extensions(least_debruijn_word(kBinary, 4), 2, kBinary); }), ErrorKind::Resource);
}

TEST(Decode, RoundTrip) {
  const Word w = least_debruijn_word(kTernary, 1);
  const ExtensionGraph ctx = prepare_extension(w, 1, kTernary);
  for_each_eulerian_path(ctx.graph, ctx.root, [&](const GraphPath& p) {
    const Word x = decode_extension(ctx, p);
    const auto back = encode_extension_prefix(ctx, x);
    EXPECT_TRUE(back.has_value());
    if (back) {
      EXPECT_EQ(back->edges, p.edges);
    }
    return true;
  });
}

TEST(Restricted, Sizes) {
  const auto s3 = restricted_extensions(least_debruijn_word(kTernary, 1), kTernary);
  EXPECT_EQ(s3.size(), 2u);
  const auto s4 = restricted_extensions(least_debruijn_word(kQuaternary, 1), kQuaternary);
  EXPECT_EQ(s4.size(), 48u);
  EXPECT_EQ(restricted_extension_count(4, 1), 48);
  const auto all = extensions(least_debruijn_word(kQuaternary, 1), 1, kQuaternary);
  const std::set<Word> all_set(all.begin(), all.end());
  for (const auto& x : s4) {
    EXPECT_TRUE(all_set.count(x));
    EXPECT_TRUE(is_debruijn(x, 2, kQuaternary));
  }
  EXPECT_EQ(std::set<Word>(s4.begin(), s4.end()).size(), 48u);
  EXPECT_EQ(kind_of([] { (void)restricted_extensions(parse_word("01"), kBinary); }), ErrorKind::Unsupported);
}

TEST(Restricted, PrefixBoundOnQuaternary) {
  const Word w = least_debruijn_word(kQuaternary, 1);
  const auto family = restricted_extensions(w, kQuaternary);
  // Every prefix of every member between w and the full word.
  for (const auto& member : family) {
    for (std::size_t len = w.size(); len <= member.size(); ++len) {
      const Word tau = member.prefix(len);
      std::size_t expected = 0;
      for (const auto& other : family) expected += other.starts_with(tau) ? 1 : 0;
      const auto got = count_restricted_extending(w, tau, kQuaternary);
      EXPECT_EQ(got.count, expected) << format_word(tau);
      EXPECT_TRUE(got.bound_holds) << format_word(tau);
      EXPECT_NE(got.graph_bound_holds, std::optional<bool>(false));
    }
  }
  // A prefix that leaves the family.
  Word off = w;
  off.letters.push_back(w.letters.back());
  EXPECT_EQ(count_restricted_extending(w, off, kQuaternary).count, 0);
}

TEST(Sampler, BinaryDepthTwo) {
  const SampleResult r = sample_uniform_debruijn(ExtensionSpec::defaults(kBinary), parse_word("01"), 2, 5);
  EXPECT_EQ(r.word.size(), 134u);
  EXPECT_EQ(debruijn_orders(r.word, kBinary).orders, (std::vector<int>{1, 4, 7}));
  EXPECT_EQ(r.orders, (std::vector<int>{1, 4, 7}));
  ASSERT_EQ(r.choice_set_sizes.size(), 2u);
  EXPECT_TRUE(r.choice_set_sizes[0].has_value());
}

TEST(Sampler, QuaternaryDepthThree) {
  for (auto mode : {SamplerMode::TreeRestricted, SamplerMode::UniformExact}) {
    ExtensionSpec spec = ExtensionSpec::defaults(kQuaternary);
    spec.mode = mode;
    const SampleResult r = sample_uniform_debruijn(spec, least_debruijn_word(kQuaternary, 1), 3, 1);
    const OrderSet o = debruijn_orders(r.word, kQuaternary);
    EXPECT_EQ(o.orders, (std::vector<int>{1, 2, 3, 4}));
  }
}

TEST(Sampler, TernaryBothSteps) {
  ExtensionSpec spec = ExtensionSpec::defaults(kTernary);
  EXPECT_EQ(spec.delta, 2);
  EXPECT_EQ(spec.mode, SamplerMode::UniformExact);
  const SampleResult r = sample_uniform_debruijn(spec, least_debruijn_word(kTernary, 1), 2, 3);
  EXPECT_EQ(debruijn_orders(r.word, kTernary).orders, (std::vector<int>{1, 3, 5}));
  spec.delta = 1;
  spec.mode = SamplerMode::TreeRestricted;
  const SampleResult s = sample_uniform_debruijn(spec, least_debruijn_word(kTernary, 1), 3, 3);
  EXPECT_EQ(debruijn_orders(s.word, kTernary).orders, (std::vector<int>{1, 2, 3, 4}));
  // |S'| = (k-1) (k-2)!^(k^m) = 2 at every step.
  for (const auto& size : s.choice_set_sizes) EXPECT_EQ(size, BigCount(2));
}

TEST(Sampler, DeterministicPerSeed) {
  const auto spec = ExtensionSpec::defaults(kBinary);
  const auto a = sample_uniform_debruijn(spec, parse_word("01"), 2, 42);
  const auto b = sample_uniform_debruijn(spec, parse_word("01"), 2, 42);
  EXPECT_EQ(a.word, b.word);
  std::set<Word> seen;
  for (std::uint64_t seed = 0; seed < 20; ++seed) seen.insert(sample_uniform_debruijn(spec, parse_word("01"), 2, seed).word);
  EXPECT_GT(seen.size(), 1u);
}

TEST(Sampler, SpecInvariantsAndBudget) {
  ExtensionSpec bad = ExtensionSpec::defaults(kBinary);
  bad.delta = 1;
  EXPECT_EQ(kind_of([&] { bad.validate(); }), ErrorKind::Precondition);
  bad.allow_any_delta = true;
  EXPECT_NO_THROW(bad.validate());
  ExtensionSpec tree = ExtensionSpec::defaults(kBinary);
  tree.mode = SamplerMode::TreeRestricted;
  EXPECT_EQ(kind_of([&] { tree.validate(); }), ErrorKind::Unsupported);
  // 2^20 vertices allow graph order 20; N = m + 2 <= 20 for m = 1, 4, ..., 16.
  EXPECT_EQ(max_safe_depth(2, 1, 3), 6);
  try {
    (void)sample_uniform_debruijn(ExtensionSpec::defaults(kBinary), parse_word("01"), 7, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Resource);
    EXPECT_NE(std::string(e.what()).find("largest safe depth is 6"), std::string::npos);
  }
}

TEST(TreeFlip, MissingStrings) {
  const ExtensionGraph small = prepare_extension(parse_word("01"), 3, kBinary);
  EXPECT_EQ(missing_strings(small), (std::vector<Word>{parse_word("00"), parse_word("11")}));
  const ExtensionGraph big = prepare_extension(parse_word("00110"), 3, kBinary);
  EXPECT_EQ(missing_strings(big).size(), 4u);
}

TEST(TreeFlip, FlipsAreValidAndLocal) {
  for (const Word& w : {parse_word("01"), parse_word("00110")}) {
    const ExtensionGraph ctx = prepare_extension(w, 3, kBinary);
    const auto trees = enumerate_arborescences(ctx.graph, ctx.root);
    const std::set<Arborescence> tree_set(trees.begin(), trees.end());
    const WordLabels& labels = *ctx.graph.labels();
    for (const Word& tau : missing_strings(ctx)) {
      for (const auto& t : trees) {
        const Arborescence flipped = tree_flip(ctx, t, tau);
        EXPECT_NE(flipped, t);
        EXPECT_TRUE(tree_set.count(flipped));
        // Agreement outside E_tau: only vertices a.tau may change.
        for (VertexId x = 0; x < ctx.graph.vertex_count(); ++x) {
          if (flipped.tree_edge[x] == t.tree_edge[x]) continue;
          const Word name = labels.word(x);
          EXPECT_TRUE(std::equal(tau.begin(), tau.end(), name.begin() + 1));
        }
      }
    }
  }
}

TEST(TreeFlip, FamilyIsInjective) {
  for (const Word& w : {parse_word("01"), parse_word("00110")}) {
    const ExtensionGraph ctx = prepare_extension(w, 3, kBinary);
    const auto family = flip_family(ctx, find_arborescence(ctx.graph, ctx.root));
    const std::size_t s = missing_strings(ctx).size();
    EXPECT_EQ(family.size(), std::size_t{1} << s);
    EXPECT_EQ(std::set<Arborescence>(family.begin(), family.end()).size(), family.size());
    for (const auto& t : family) EXPECT_TRUE(is_valid_arborescence(ctx.graph, t));
  }
}

TEST(TreeFlip, RejectsPresentString) {
  const ExtensionGraph ctx = prepare_extension(parse_word("01"), 3, kBinary);
  const Arborescence t = find_arborescence(ctx.graph, ctx.root);
  EXPECT_EQ(kind_of([&] { (void)tree_flip(ctx, t, parse_word("01")); }), ErrorKind::Precondition);
}
