#pragma once

// Extracting representatives from executable stream functions.
//
// `rep` builds a reader tree for a discrete-valued function by probing it on
// trap streams: the function is run on a known prefix followed by a trap,
// and if it returns without touching the trap its value is determined by
// that prefix.  This is exact for functions that see their argument only
// through head/tail, since those reads happen in prefix order.  Functions
// must let the trap signal propagate; catching it breaks the contract.
//
// `rep_inf = unfold(rho · tau)` lifts this to stream-valued functions.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sproc/processor.hpp"
#include "sproc/stream.hpp"
#include "sproc/tree.hpp"

namespace sproc {

template <class A, class B>
using StreamFunction = std::function<B(const Stream<A>&)>;

template <class A, class B>
using StreamTransformer = std::function<Stream<B>(const Stream<A>&)>;

inline constexpr std::size_t kDefaultBudget = 4096;

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::size_t budget, std::size_t depth)
      : std::runtime_error("rep: value still undetermined after " + std::to_string(depth) +
                           " inputs (budget " + std::to_string(budget) +
                           "); function is discontinuous here or its modulus exceeds the budget"),
        budget_(budget),
        depth_(depth) {}

  std::size_t budget() const noexcept { return budget_; }
  std::size_t depth() const noexcept { return depth_; }

 private:
  std::size_t budget_;
  std::size_t depth_;
};

/// A probed function raised something other than the trap signal.
class UserFunctionFailure : public std::runtime_error {
 public:
  explicit UserFunctionFailure(const std::string& what) : std::runtime_error("user function failed: " + what) {}
};

template <class B>
struct ProbeOutcome {
  /// Set when the function returned within the prefix.
  std::optional<B> value;
  std::size_t inputs_read = 0;

  bool determined() const noexcept { return value.has_value(); }
};

namespace detail {

struct TrapSprung {};

template <class A>
Stream<A> trap_stream(std::shared_ptr<const std::vector<A>> prefix, std::size_t i,
                      std::shared_ptr<std::size_t> reads) {
  return Stream<A>::defer([prefix, i, reads] {
    if (i >= prefix->size()) throw TrapSprung{};
    *reads = i + 1;
    return std::pair<A, Stream<A>>((*prefix)[i], trap_stream(prefix, i + 1, reads));
  });
}

}  // namespace detail

/// Runs `f` on `prefix` followed by a trap.  Determined iff `f` returned
/// without demanding past the prefix.
template <class A, class B>
ProbeOutcome<B> probe(const StreamFunction<A, B>& f, const std::vector<A>& prefix) {
  auto reads = std::make_shared<std::size_t>(0);
  auto trap = detail::trap_stream<A>(std::make_shared<const std::vector<A>>(prefix), 0, reads);
  try {
    B b = f(trap);
    return {std::move(b), *reads};
  } catch (const detail::TrapSprung&) {
    return {std::nullopt, *reads};
  } catch (const std::exception& e) {
    throw UserFunctionFailure(e.what());
  }
}

namespace detail {

template <class A, class B>
Tree<A, B> rep_at(std::shared_ptr<const StreamFunction<A, B>> f, std::vector<A> prefix, std::size_t budget) {
  ProbeOutcome<B> o = probe(*f, prefix);
  if (o.determined()) return Tree<A, B>::ret(std::move(*o.value));
  if (prefix.size() >= budget) throw BudgetExceeded(budget, prefix.size());
  return Tree<A, B>::rd([f, prefix = std::move(prefix), budget](const A& a) {
    std::vector<A> next = prefix;
    next.push_back(a);
    return rep_at(f, std::move(next), budget);
  });
}

}  // namespace detail

/// A tree t with value(eat(t, α)) = f(α) for every α.  The root is probed
/// eagerly; each branch is built when first followed, so infinite alphabets
/// are fine.  BudgetExceeded is raised when a path would go deeper than
/// `budget` reads.
template <class A, class B>
Tree<A, B> rep(StreamFunction<A, B> f, std::size_t budget = kDefaultBudget) {
  return detail::rep_at<A, B>(std::make_shared<const StreamFunction<A, B>>(std::move(f)), {}, budget);
}

/// τ f = ⟨rep(hd · f), tl · f⟩
template <class A, class B>
std::pair<Tree<A, B>, StreamTransformer<A, B>> tau(const StreamTransformer<A, B>& f,
                                                   std::size_t budget = kDefaultBudget) {
  StreamFunction<A, B> first = [f](const Stream<A>& s) { return f(s).head(); };
  StreamTransformer<A, B> rest = [f](const Stream<A>& s) { return f(s).tail(); };
  return {rep<A, B>(std::move(first), budget), std::move(rest)};
}

/// Fast-forward:
///   ρ⟨Ret b, f⟩ = Ret⟨b, f⟩
///   ρ⟨Rd φ, f⟩  = Rd (a ↦ ρ⟨φ a, f · (a ⊲)⟩)
/// Written as a fold into functions of f; leaves are decorated, shape is kept.
template <class A, class B, class F>
Tree<A, std::pair<B, F>> rho(const Tree<A, B>& t, F f) {
  using R = Tree<A, std::pair<B, F>>;
  using Carrier = std::function<R(const F&)>;
  Carrier go = fold(
      [](const B& b) -> Carrier { return [b](const F& g) { return R::ret(std::pair<B, F>(b, g)); }; },
      [](std::function<Carrier(const A&)> sub) -> Carrier {
        return [sub = std::move(sub)](const F& g) {
          return R::rd([sub, g](const A& a) {
            F shifted = [g, a](const Stream<A>& s) { return g(cons(a, s)); };
            return sub(a)(shifted);
          });
        };
      },
      t);
  return go(f);
}

/// rep_∞ = unfold(ρ · τ).  eat_inf(rep_inf(f), α) = f(α).
template <class A, class B>
Proc<A, B> rep_inf(StreamTransformer<A, B> f, std::size_t budget = kDefaultBudget) {
  return unfold(
      [budget](const StreamTransformer<A, B>& g) {
        auto [head_tree, rest] = tau<A, B>(g, budget);
        return rho(head_tree, std::move(rest));
      },
      std::move(f));
}

/// The stream function a processor denotes.
template <class A, class B>
StreamTransformer<A, B> as_function(Proc<A, B> p) {
  return [p = std::move(p)](const Stream<A>& s) { return eat_inf(p, s); };
}

}  // namespace sproc
