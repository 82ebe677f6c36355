#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "fixtures.hpp"
#include "sproc/represent.hpp"

namespace sproc {
namespace {

using testing::bits;
using testing::BTree;

using ByteFn = StreamFunction<Byte, Byte>;
using ByteTx = StreamTransformer<Byte, Byte>;

const ByteFn kConst7 = [](const Stream<Byte>&) -> Byte { return 7; };
const ByteFn kHead = [](const Stream<Byte>& s) { return s.head(); };

TEST(ProbeTest, Examples) {
  auto c = probe(kConst7, {});
  ASSERT_TRUE(c.determined());
  EXPECT_EQ(*c.value, 7);
  EXPECT_EQ(c.inputs_read, 0u);

  EXPECT_FALSE(probe(kHead, {}).determined());

  auto i = probe<Byte, Byte>(testing::intro_function, {1, 1, 0});
  ASSERT_TRUE(i.determined());
  EXPECT_EQ(*i.value, 0);
  EXPECT_EQ(i.inputs_read, 3u);
}

TEST(ProbeTest, ReadsNeverExceedPrefix) {
  for (const auto& c : testing::discrete_suite()) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Byte> prefix(rng() % 8);
      for (auto& b : prefix) b = static_cast<Byte>(rng());
      auto o = probe(c.f, prefix);
      if (o.determined()) {
        EXPECT_LE(o.inputs_read, prefix.size()) << c.name;
      }
    }
  }
}

TEST(ProbeTest, UserExceptionsAreTagged) {
  ByteFn bad = [](const Stream<Byte>&) -> Byte { throw std::runtime_error("boom"); };
  EXPECT_THROW(probe(bad, {}), UserFunctionFailure);
}

TEST(RepTest, ConstantAndHead) {
  auto t = rep(kConst7, 0);
  ASSERT_TRUE(t.is_ret());
  EXPECT_EQ(t.value(), 7);

  auto h = rep(kHead, 1);
  ASSERT_TRUE(h.is_rd());
  for (int a = 0; a < 256; ++a) {
    auto leaf = h.step(static_cast<Byte>(a));
    ASSERT_TRUE(leaf.is_ret());
    EXPECT_EQ(leaf.value(), a);
  }
}

TEST(RepTest, RecoversIntroTree) {
  auto t = rep<Byte, Byte>(testing::intro_function, 3);
  for (std::size_t m = 0; m < 8; ++m) {
    std::vector<Byte> p{Byte((m >> 2) & 1), Byte((m >> 1) & 1), Byte(m & 1)};
    EXPECT_EQ(eat(t, prepend(p, repeat<Byte>(0))).value, testing::intro_oracle(p));
  }
  EXPECT_EQ(serialize(t, bits()), serialize(testing::intro_tree(), bits()));
}

TEST(RepTest, BudgetExceeded) {
  EXPECT_THROW(rep(kHead, 0), BudgetExceeded);
  ByteFn third = [](const Stream<Byte>& s) { return drop(s, 2).head(); };
  auto t = rep(third, 2);  // root and first level fine; third read is over budget
  try {
    eat(t, repeat<Byte>(0));
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.budget(), 2u);
    EXPECT_EQ(e.depth(), 2u);
  }
}

TEST(RepTest, InfiniteAlphabetBuildsBranchesLazily) {
  StreamFunction<std::uint64_t, std::uint64_t> f = [](const Stream<std::uint64_t>& s) {
    std::uint64_t a = s.head();
    return a % 2 ? a : a + s.tail().head();
  };
  auto t = rep(f, 4);
  auto in = from_function([](std::size_t n) { return std::uint64_t{1'000'000'000'000} + n; });
  EXPECT_EQ(eat(t, in).value, f(in));
  auto odd = cons<std::uint64_t>(12345678901, in);
  EXPECT_EQ(eat(t, odd).value, 12345678901u);
}

TEST(RepTest, RoundTripOnDiscreteSuite) {
  auto streams = test_streams(60, 5);
  for (const auto& c : testing::discrete_suite()) {
    auto t = rep(c.f, c.modulus_bound);
    for (const auto& s : streams) {
      auto p = take_prefix(s, c.modulus_bound + 2);
      ASSERT_EQ(eat(t, s).value, c.f(s)) << c.name;
      ASSERT_EQ(eat(t, s).value, c.oracle(p)) << c.name;
    }
  }
}

TEST(TauTest, Identity) {
  ByteTx id = [](const Stream<Byte>& s) { return s; };
  auto [first, rest] = tau(id);
  ASSERT_TRUE(first.is_rd());
  EXPECT_EQ(first.step(42).value(), 42);
  auto s = random_stream(3);
  EXPECT_EQ(take_prefix(rest(s), 10), take_prefix(s.tail(), 10));
}

TEST(TauTest, ConstantStream) {
  ByteTx nines = [](const Stream<Byte>&) { return repeat<Byte>(9); };
  auto [first, rest] = tau(nines);
  ASSERT_TRUE(first.is_ret());
  EXPECT_EQ(first.value(), 9);
  EXPECT_EQ(take_prefix(rest(random_stream(1)), 5), std::vector<Byte>(5, 9));
}

TEST(TauTest, DuplicateHeadReadsOnce) {
  ByteTx dup = as_function(procs::dup());
  auto [first, rest] = tau(dup);
  ASSERT_TRUE(first.is_rd());
  for (int a : {0, 17, 255}) {
    ASSERT_TRUE(first.step(Byte(a)).is_ret());
    EXPECT_EQ(first.step(Byte(a)).value(), a);
  }
  // tl · dup on 1,2,3,… is 1,2,2,3,3,…
  auto in = from_function([](std::size_t n) { return Byte(n + 1); });
  EXPECT_EQ(take_prefix(rest(in), 5), (std::vector<Byte>{1, 2, 2, 3, 3}));
}

TEST(RhoTest, Leaf) {
  ByteTx f = [](const Stream<Byte>& s) { return s.tail(); };
  auto r = rho(BTree::ret(3), f);
  ASSERT_TRUE(r.is_ret());
  EXPECT_EQ(r.value().first, 3);
  auto s = random_stream(8);
  EXPECT_EQ(take_prefix(r.value().second(s), 5), take_prefix(f(s), 5));
}

TEST(RhoTest, FastForwardsTheFunction) {
  ByteTx f = [](const Stream<Byte>& s) { return s; };
  auto r = rho(BTree::rd([](const Byte& a) { return BTree::ret(a); }), f);
  auto in = from_function([](std::size_t n) { return Byte(5 + n); });
  auto res = eat(r, in);
  EXPECT_EQ(res.value.first, 5);
  EXPECT_EQ(res.consumed, 1u);
  // second component is f · (5 ⊲)
  auto probe_in = random_stream(2);
  EXPECT_EQ(take_prefix(res.value.second(probe_in), 6), take_prefix(f(cons<Byte>(5, probe_in)), 6));
  EXPECT_EQ(take_prefix(res.rest, 2), (std::vector<Byte>{6, 7}));
}

TEST(RhoTest, ShapeOfIntroTree) {
  ByteTx f = [](const Stream<Byte>& s) { return s; };
  auto r = rho(testing::intro_tree(), f);
  EXPECT_EQ(depth(r, bits()), depth(testing::intro_tree(), bits()));
  EXPECT_EQ(depth(r, bits()), 3u);
}

TEST(RepInfTest, Identity) {
  ByteTx id = [](const Stream<Byte>& s) { return s; };
  auto p = rep_inf(id);
  for (const auto& s : test_streams(5, 9)) EXPECT_EQ(take_prefix(eat_inf(p, s), 40), take_prefix(s, 40));
}

TEST(RepInfTest, MapPlusOne) {
  ByteTx plus = [](const Stream<Byte>& s) { return smap([](Byte b) { return Byte(b + 1); }, s); };
  auto in = from_function([](std::size_t n) { return Byte(n + 1); });
  std::vector<Byte> expected;
  for (std::size_t n = 0; n < 40; ++n) expected.push_back(Byte(n + 2));
  EXPECT_EQ(take_prefix(eat_inf(rep_inf(plus), in), 40), expected);
}

TEST(RepInfTest, PairwiseSum) {
  auto cases = testing::hand_stream_suite();
  auto it = std::find_if(cases.begin(), cases.end(), [](const auto& c) { return c.name == "pairwise_sum"; });
  ASSERT_NE(it, cases.end());
  auto in = from_function([](std::size_t n) { return Byte(n + 1); });
  auto got = take_prefix(eat_inf(rep_inf(it->f), in), 20);
  for (std::size_t n = 0; n < got.size(); ++n) EXPECT_EQ(got[n], Byte((2 * n + 1) + (2 * n + 2)));
  EXPECT_EQ(got[0], 3);
  EXPECT_EQ(got[1], 7);
}

TEST(RepInfTest, BudgetExceededPerLayer) {
  // The k-th output needs the k-th input pair-summed with an input 10 ahead.
  ByteTx far = [](const Stream<Byte>& s) {
    return smap([](Byte b) { return b; }, drop(s, 10));
  };
  auto p = rep_inf(far, 4);
  EXPECT_THROW(eat_inf(p, repeat<Byte>(0)).head(), BudgetExceeded);
}

TEST(RhoTest, FirstCoordinateAndShapeLaw) {
  std::mt19937_64 rng(23);
  ByteTx fs[] = {[](const Stream<Byte>& s) { return s; }, [](const Stream<Byte>& s) { return s.tail(); },
                 [](const Stream<Byte>&) { return repeat<Byte>(1); }};
  for (int i = 0; i < 200; ++i) {
    auto t = tmap([](const std::pair<Byte, ByteProc>& l) { return l.first; }, random_layer(rng(), 4));
    const ByteTx& f = fs[rng() % 3];
    auto alpha = random_stream(rng());
    auto r = rho(t, f);
    ASSERT_EQ(depth(r, {0, 1, 2}), depth(t, {0, 1, 2}));
    ASSERT_EQ(eat(r, alpha).value.first, eat(t, alpha).value);
    ASSERT_EQ(eat(r, alpha).consumed, eat(t, alpha).consumed);
  }
}

}  // namespace
}  // namespace sproc
