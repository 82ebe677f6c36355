#pragma once

// Shared test material: the two small example trees over {0,1}, suites of
// discrete- and stream-valued functions written directly against head/tail,
// and brute-force oracles that never touch the processor machinery.

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sproc/sproc.hpp"

namespace sproc::testing {

using BTree = Tree<Byte, Byte>;

inline const std::vector<Byte>& bits() {
  static const std::vector<Byte> b{0, 1};
  return b;
}

/// Root reads a0: 0 → 0; else reads a1: 0 → 1; else reads a2: 0 → 0, 1 → 1.
inline BTree intro_tree() {
  return BTree::rd([](const Byte& a0) {
    if (a0 == 0) return BTree::ret(0);
    return BTree::rd([](const Byte& a1) {
      if (a1 == 0) return BTree::ret(1);
      return BTree::rd([](const Byte& a2) { return a2 == 0 ? BTree::ret(0) : BTree::ret(1); });
    });
  });
}

/// Same function, but the 1,1,0 leaf is replaced by a read whose branches
/// both answer 0.
inline BTree intro_tree_alt() {
  return BTree::rd([](const Byte& a0) {
    if (a0 == 0) return BTree::ret(0);
    return BTree::rd([](const Byte& a1) {
      if (a1 == 0) return BTree::ret(1);
      return BTree::rd([](const Byte& a2) {
        if (a2 != 0) return BTree::ret(1);
        return BTree::rd([](const Byte&) { return BTree::ret(0); });
      });
    });
  });
}

/// The function both trees denote, written against head/tail.
inline Byte intro_function(const Stream<Byte>& s) {
  if (s.head() == 0) return 0;
  Stream<Byte> s1 = s.tail();
  if (s1.head() == 0) return 1;
  return s1.tail().head() == 0 ? 0 : 1;
}

/// Same function on a plain vector.
inline Byte intro_oracle(const std::vector<Byte>& v) {
  if (v.at(0) == 0) return 0;
  if (v.at(1) == 0) return 1;
  return v.at(2) == 0 ? 0 : 1;
}

struct DiscreteCase {
  std::string name;
  StreamFunction<Byte, Byte> f;
  /// Same function on an explicit prefix long enough to determine it.
  std::function<Byte(const std::vector<Byte>&)> oracle;
  std::size_t modulus_bound;
};

/// Demand-driven discrete-valued functions with small moduli.
inline std::vector<DiscreteCase> discrete_suite() {
  std::vector<DiscreteCase> s;
  s.push_back({"const7", [](const Stream<Byte>&) -> Byte { return 7; }, [](const auto&) -> Byte { return 7; }, 0});
  s.push_back({"head", [](const Stream<Byte>& a) { return a.head(); }, [](const auto& v) { return v[0]; }, 1});
  s.push_back({"intro", intro_function, intro_oracle, 3});
  s.push_back({"third", [](const Stream<Byte>& a) { return drop(a, 2).head(); },
               [](const auto& v) { return v[2]; }, 3});
  s.push_back({"sum3",
               [](const Stream<Byte>& a) {
                 auto p = take_prefix(a, 3);
                 return static_cast<Byte>(p[0] + p[1] + p[2]);
               },
               [](const auto& v) { return static_cast<Byte>(v[0] + v[1] + v[2]); }, 3});
  // Reads as many items as the first item's low two bits say.
  s.push_back({"variable_depth",
               [](const Stream<Byte>& a) {
                 std::size_t n = a.head() & 3;
                 Byte acc = 0;
                 Stream<Byte> r = a.tail();
                 for (std::size_t i = 0; i < n; ++i) {
                   acc ^= r.head();
                   r = r.tail();
                 }
                 return acc;
               },
               [](const auto& v) {
                 Byte acc = 0;
                 for (std::size_t i = 0; i < std::size_t(v[0] & 3); ++i) acc ^= v[1 + i];
                 return acc;
               },
               4});
  // Index of the first item above 200 within the first 6, else 6.
  s.push_back({"first_large",
               [](const Stream<Byte>& a) {
                 Stream<Byte> r = a;
                 for (Byte i = 0; i < 6; ++i) {
                   if (r.head() > 200) return i;
                   r = r.tail();
                 }
                 return Byte{6};
               },
               [](const auto& v) {
                 for (Byte i = 0; i < 6; ++i)
                   if (v[i] > 200) return i;
                 return Byte{6};
               },
               6});
  s.push_back({"max_of_first_4",
               [](const Stream<Byte>& a) {
                 auto p = take_prefix(a, 4);
                 return *std::max_element(p.begin(), p.end());
               },
               [](const auto& v) { return std::max({v[0], v[1], v[2], v[3]}); }, 4});
  s.push_back({"parity_of_5",
               [](const Stream<Byte>& a) {
                 Byte acc = 0;
                 for (Byte b : take_prefix(a, 5)) acc ^= b & 1;
                 return acc;
               },
               [](const auto& v) {
                 Byte acc = 0;
                 for (int i = 0; i < 5; ++i) acc ^= v[i] & 1;
                 return acc;
               },
               5});
  s.push_back({"skip_then_head",
               [](const Stream<Byte>& a) { return a.head() < 128 ? a.tail().head() : a.head(); },
               [](const auto& v) { return v[0] < 128 ? v[1] : v[0]; }, 2});
  s.push_back({"lex_compare",
               [](const Stream<Byte>& a) {
                 // 1 if the stream starts with a strictly increasing run of 3.
                 auto p = take_prefix(a, 3);
                 return static_cast<Byte>(p[0] < p[1] && p[1] < p[2]);
               },
               [](const auto& v) { return static_cast<Byte>(v[0] < v[1] && v[1] < v[2]); }, 3});
  // Value of the k-th item, where k is the first item's value mod 4, read
  // lazily; exercises a branch that consumes a data-dependent amount.
  s.push_back({"indexed",
               [](const Stream<Byte>& a) { return drop(a.tail(), a.head() % 4).head(); },
               [](const auto& v) { return v[1 + v[0] % 4]; }, 5});
  return s;
}

struct StreamCase {
  std::string name;
  StreamTransformer<Byte, Byte> f;
  /// Output item n on input item function `in`, computed directly.
  std::function<Byte(const std::function<Byte(std::size_t)>& in, std::size_t n)> oracle;
};

/// Stream-valued functions written directly on streams (not via processors).
inline std::vector<StreamCase> hand_stream_suite() {
  std::vector<StreamCase> s;
  s.push_back({"identity", [](const Stream<Byte>& a) { return a; }, [](const auto& in, std::size_t n) { return in(n); }});
  s.push_back({"plus_one", [](const Stream<Byte>& a) { return smap([](Byte b) { return static_cast<Byte>(b + 1); }, a); },
               [](const auto& in, std::size_t n) { return static_cast<Byte>(in(n) + 1); }});
  s.push_back({"pairwise_sum",
               [](const Stream<Byte>& a) {
                 struct Go {
                   static Stream<Byte> at(Stream<Byte> s) {
                     return Stream<Byte>::defer([s] {
                       Byte x = s.head();
                       Stream<Byte> t = s.tail();
                       Byte y = t.head();
                       return std::pair<Byte, Stream<Byte>>(static_cast<Byte>(x + y), at(t.tail()));
                     });
                   }
                 };
                 return Go::at(a);
               },
               [](const auto& in, std::size_t n) { return static_cast<Byte>(in(2 * n) + in(2 * n + 1)); }});
  s.push_back({"tail", [](const Stream<Byte>& a) { return a.tail(); },
               [](const auto& in, std::size_t n) { return in(n + 1); }});
  s.push_back({"const9", [](const Stream<Byte>&) { return repeat<Byte>(9); },
               [](const auto&, std::size_t) { return Byte{9}; }});
  s.push_back({"interleave_zero",
               [](const Stream<Byte>& a) {
                 struct Go {
                   static Stream<Byte> at(Stream<Byte> s) {
                     return Stream<Byte>::defer([s] { return std::pair<Byte, Stream<Byte>>(s.head(), cons<Byte>(0, at(s.tail()))); });
                   }
                 };
                 return Go::at(a);
               },
               [](const auto& in, std::size_t n) { return n % 2 ? Byte{0} : in(n / 2); }});
  s.push_back({"head_forever",
               [](const Stream<Byte>& a) {
                 return Stream<Byte>::defer([a] { return std::pair<Byte, Stream<Byte>>(a.head(), repeat(a.head())); });
               },
               [](const auto& in, std::size_t) { return in(0); }});
  return s;
}

/// Registry processors lifted to stream functions through eat_inf, with
/// their own direct oracles.
inline std::vector<StreamCase> lifted_registry_suite() {
  std::vector<StreamCase> s;
  auto lift = [](const char* name, std::vector<std::int64_t> args) { return as_function(lookup(name, args)); };
  s.push_back({"reg:id", lift("id", {}), [](const auto& in, std::size_t n) { return in(n); }});
  s.push_back({"reg:dup", lift("dup", {}), [](const auto& in, std::size_t n) { return in(n / 2); }});
  s.push_back({"reg:incr", lift("incr", {}), [](const auto& in, std::size_t n) { return static_cast<Byte>(in(n) + 1); }});
  s.push_back({"reg:negate", lift("negate", {}), [](const auto& in, std::size_t n) { return static_cast<Byte>(0 - in(n)); }});
  s.push_back({"reg:parity", lift("parity", {}), [](const auto& in, std::size_t n) {
                 Byte acc = 0;
                 for (std::size_t i = 0; i <= n; ++i) acc ^= in(i) & 1;
                 return acc;
               }});
  s.push_back({"reg:scan_sum", lift("scan_sum", {}), [](const auto& in, std::size_t n) {
                 Byte acc = 0;
                 for (std::size_t i = 0; i <= n; ++i) acc += in(i);
                 return acc;
               }});
  s.push_back({"reg:drop_every(3)", lift("drop_every", {3}),
               [](const auto& in, std::size_t n) { return in(n / 2 * 3 + n % 2); }});
  s.push_back({"reg:window_sum(2)", lift("window_sum", {2}),
               [](const auto& in, std::size_t n) { return static_cast<Byte>(in(n) + in(n + 1)); }});
  s.push_back({"reg:window_sum(3)", lift("window_sum", {3}),
               [](const auto& in, std::size_t n) { return static_cast<Byte>(in(n) + in(n + 1) + in(n + 2)); }});
  s.push_back({"reg:pairwise_sum", lift("pairwise_sum", {}),
               [](const auto& in, std::size_t n) { return static_cast<Byte>(in(2 * n) + in(2 * n + 1)); }});
  s.push_back({"reg:delay(2,7)", lift("delay", {2, 7}),
               [](const auto& in, std::size_t n) { return n < 2 ? Byte{7} : in(n - 2); }});
  s.push_back({"reg:counter", lift("counter", {}), [](const auto&, std::size_t n) { return static_cast<Byte>(n); }});
  s.push_back({"reg:const(9)", lift("const", {9}), [](const auto&, std::size_t) { return Byte{9}; }});
  return s;
}

/// The stream n ↦ oracle(in, n).
inline Stream<Byte> oracle_stream(const StreamCase& c, std::function<Byte(std::size_t)> in) {
  auto oracle = c.oracle;
  return from_function([oracle, in](std::size_t n) { return oracle(in, n); });
}

/// Item function of a pure stream, for oracles.
inline std::function<Byte(std::size_t)> items_of(const Stream<Byte>& s) {
  return [s](std::size_t n) { return drop(s, n).head(); };
}

/// Every registry entry with its example arguments.
inline std::vector<std::pair<std::string, ByteProc>> registry_instances(std::uint64_t seed = 1) {
  std::vector<std::pair<std::string, ByteProc>> out;
  for (const auto& e : registry()) out.emplace_back(e.name, e.make(e.example_args, seed));
  return out;
}

}  // namespace sproc::testing
