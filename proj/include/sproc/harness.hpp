#pragma once

// Finite-depth bisimulation checks and consumption instrumentation.
//
// Equality of infinite streams is not decidable; these helpers compare
// prefixes of a configured depth over seeded random inputs plus a fixed set
// of adversarial ones (all zero, all 0xff, alternating).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sproc/combinators.hpp"
#include "sproc/compose.hpp"
#include "sproc/processor.hpp"
#include "sproc/represent.hpp"
#include "sproc/stream.hpp"
#include "sproc/tree.hpp"

namespace sproc {

inline constexpr std::size_t kDefaultCheckDepth = 50;
inline constexpr std::size_t kDefaultTrials = 100;
inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct Divergence {
  std::size_t position = 0;
  std::string lhs;
  std::string rhs;
  /// Index of the input stream (in test_streams order) that exposed it.
  std::size_t trial = 0;
};

struct AgreementReport {
  std::size_t depth_checked = 0;
  std::optional<Divergence> first_divergence;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  /// Set when a check aborted for a reason other than a value mismatch,
  /// e.g. BudgetExceeded from rep_inf.
  std::optional<std::string> error;

  bool ok() const noexcept { return !first_divergence && !error; }
};

/// One machine-readable line: `name seed=S depth=D trials=T result=...`.
inline std::string report_line(const std::string& name, const AgreementReport& r) {
  std::ostringstream os;
  os << name << " seed=" << r.seed << " depth=" << r.depth_checked << " trials=" << r.trials;
  if (r.error) {
    os << " result=error message=\"" << *r.error << '"';
  } else if (r.first_divergence) {
    const Divergence& d = *r.first_divergence;
    os << " result=diverge position=" << d.position << " trial=" << d.trial << " lhs=" << d.lhs << " rhs=" << d.rhs;
  } else {
    os << " result=pass";
  }
  return os.str();
}

namespace detail {

template <class X>
std::string show(const X& x) {
  std::ostringstream os;
  if constexpr (std::is_integral_v<X>)
    os << +x;
  else
    os << x;
  return os.str();
}

}  // namespace detail

/// Compares the first n items of both streams.  Running out of input on
/// either side counts as a divergence at that position.
template <class X>
AgreementReport agree(Stream<X> s1, Stream<X> s2, std::size_t n) {
  AgreementReport r;
  r.depth_checked = n;
  r.trials = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<X> a, b;
    try {
      a = s1.head();
      s1 = s1.tail();
    } catch (const EndOfSource&) {
    }
    try {
      b = s2.head();
      s2 = s2.tail();
    } catch (const EndOfSource&) {
    }
    if (!a || !b || !(*a == *b)) {
      r.first_divergence =
          Divergence{i, a ? detail::show(*a) : std::string("<end>"), b ? detail::show(*b) : std::string("<end>"), 0};
      return r;
    }
  }
  return r;
}

/// Pure byte stream with items drawn from a seeded hash of the position.
inline Stream<Byte> random_stream(std::uint64_t seed) {
  return from_function([seed](std::size_t n) {
    return static_cast<Byte>(detail::splitmix64(seed ^ detail::splitmix64(n)) >> 56);
  });
}

/// The adversarial streams followed by `trials` seeded random streams.
inline std::vector<Stream<Byte>> test_streams(std::size_t trials, std::uint64_t seed) {
  std::vector<Stream<Byte>> out;
  out.push_back(repeat<Byte>(0));
  out.push_back(repeat<Byte>(0xff));
  out.push_back(from_function([](std::size_t n) { return static_cast<Byte>(n % 2 ? 0xff : 0); }));
  for (std::size_t i = 0; i < trials; ++i) out.push_back(random_stream(detail::splitmix64(seed + i)));
  return out;
}

namespace detail {

inline void fold_into(AgreementReport& total, const AgreementReport& one, std::size_t trial) {
  if (total.ok() && !one.ok()) {
    total.first_divergence = one.first_divergence;
    if (total.first_divergence) total.first_divergence->trial = trial;
    total.error = one.error;
  }
}

}  // namespace detail

/// For each test stream α: agree(f(α), eat_inf(rep_inf(f), α), depth).
inline AgreementReport check_theorem2(const StreamTransformer<Byte, Byte>& f, std::size_t trials = kDefaultTrials,
                                      std::size_t depth = kDefaultCheckDepth, std::uint64_t seed = kDefaultSeed,
                                      std::size_t budget = kDefaultBudget) {
  AgreementReport total;
  total.depth_checked = depth;
  total.seed = seed;
  auto streams = test_streams(trials, seed);
  total.trials = streams.size();
  Proc<Byte, Byte> rep = rep_inf<Byte, Byte>(f, budget);
  for (std::size_t i = 0; i < streams.size() && total.ok(); ++i) {
    try {
      detail::fold_into(total, agree(f(streams[i]), eat_inf(rep, streams[i]), depth), i);
    } catch (const BudgetExceeded& e) {
      total.error = std::string("BudgetExceeded: ") + e.what();
    }
  }
  return total;
}

/// For each test stream α: agree(eat_inf(p © q, α), eat_inf(p, eat_inf(q, α)), depth).
template <class A, class B, class C>
AgreementReport check_composition(const Proc<B, C>& p, const Proc<A, B>& q, Priority op,
                                  const std::vector<Stream<A>>& streams, std::size_t depth) {
  AgreementReport total;
  total.depth_checked = depth;
  total.trials = streams.size();
  Proc<A, C> composite = compose(op, p, q);
  for (std::size_t i = 0; i < streams.size() && total.ok(); ++i)
    detail::fold_into(total, agree(eat_inf(composite, streams[i]), eat_inf(p, eat_inf(q, streams[i])), depth), i);
  return total;
}

inline AgreementReport check_composition(const ByteProc& p, const ByteProc& q, Priority op,
                                         std::size_t trials = kDefaultTrials, std::size_t depth = kDefaultCheckDepth,
                                         std::uint64_t seed = kDefaultSeed) {
  AgreementReport r = check_composition<Byte, Byte, Byte>(p, q, op, test_streams(trials, seed), depth);
  r.seed = seed;
  return r;
}

/// consumed[k] = inputs read before output k was emitted.
struct ConsumptionTrace {
  std::vector<std::size_t> consumed;

  bool monotone() const {
    for (std::size_t i = 1; i < consumed.size(); ++i)
      if (consumed[i] < consumed[i - 1]) return false;
    return true;
  }
};

template <class A, class B>
ConsumptionTrace trace_consumption(Proc<A, B> p, Stream<A> input, std::size_t n_outputs) {
  auto counter = std::make_shared<std::size_t>(0);
  Stream<B> out = eat_inf(std::move(p), counting(std::move(input), counter));
  ConsumptionTrace t;
  for (std::size_t i = 0; i < n_outputs; ++i) {
    out.head();
    t.consumed.push_back(*counter);
    out = out.tail();
  }
  return t;
}

/// Bounded structural equality over a finite alphabet sample.  Subtrees
/// deeper than `depth` are assumed equal.
template <class A, class B, class LeafEq>
bool same_tree(const Tree<A, B>& x, const Tree<A, B>& y, const std::vector<A>& alphabet, std::size_t depth,
               LeafEq leaf_eq) {
  if (x.id() == y.id()) return true;
  if (x.is_ret() != y.is_ret()) return false;
  if (x.is_ret()) return leaf_eq(x.value(), y.value());
  if (depth == 0) return true;
  for (const A& a : alphabet)
    if (!same_tree(x.step(a), y.step(a), alphabet, depth - 1, leaf_eq)) return false;
  return true;
}

/// Text form of the first `layers` layers of a processor, following every
/// leaf's continuation.  Used for determinism checks.
template <class A, class B>
std::string serialize_layers(const Proc<A, B>& p, const std::vector<A>& alphabet, std::size_t layers) {
  if (layers == 0) return "...";
  return serialize(p.out(), alphabet, [&](const std::pair<B, Proc<A, B>>& leaf) {
    return detail::show(leaf.first) + "," + serialize_layers(leaf.second, alphabet, layers - 1);
  });
}

}  // namespace sproc
