#pragma once

// Well-founded reader trees T_A B = μX. B + X^A.
//
// A tree is either a leaf Ret(b) holding a result or a node Rd(φ) that reads
// one input a and continues with φ(a).  Branches are stored as functions so
// the alphabet may be infinite.  Trees are immutable and freely shareable;
// branch functions must be pure.
//
// Well-foundedness is a contract the host type cannot enforce.  Evaluators
// take an optional Fuel bound on the number of Rd steps; in debug builds the
// default overloads apply kDefaultFuel, in release builds they run unchecked.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sproc/pool.hpp"
#include "sproc/stream.hpp"

namespace sproc {

inline constexpr std::size_t kDefaultFuel = std::size_t{1} << 20;

#ifdef NDEBUG
inline constexpr bool kCheckFuel = false;
#else
inline constexpr bool kCheckFuel = true;
#endif

/// Raised when an evaluator walks more Rd nodes than its fuel allows, which
/// indicates a tree that is not well-founded along the explored path.
class FuelExhausted : public std::runtime_error {
 public:
  explicit FuelExhausted(std::size_t fuel)
      : std::runtime_error("fuel exhausted after " + std::to_string(fuel) +
                           " Rd steps; tree is not well-founded along this path") {}
};

/// Budget of Rd steps shared by one evaluation.
class Fuel {
 public:
  explicit Fuel(std::size_t steps) : initial_(steps), remaining_(steps) {}

  void burn() {
    if (remaining_ == 0) throw FuelExhausted(initial_);
    --remaining_;
  }
  std::size_t remaining() const noexcept { return remaining_; }

 private:
  std::size_t initial_;
  std::size_t remaining_;
};

template <class A, class B>
class Tree {
 public:
  using input_type = A;
  using value_type = B;
  using Branch = std::function<Tree(const A&)>;

  static Tree ret(B b) { return Tree(detail::make_node<RetNode>(std::move(b))); }

  /// Rd(φ).  φ is stored inline in the node, so any callable works.
  template <class F>
  static Tree rd(F phi) {
    return Tree(detail::make_node<RdNode<std::decay_t<F>>>(std::move(phi)));
  }

  bool is_ret() const noexcept { return node_->ret; }
  bool is_rd() const noexcept { return !node_->ret; }

  /// Leaf value; only valid on Ret.
  const B& value() const {
    if (!node_->ret) throw std::logic_error("Tree::value on an Rd node");
    return static_cast<const RetNode&>(*node_).value;
  }

  /// φ as a function object; only valid on Rd.
  Branch branch() const {
    if (node_->ret) throw std::logic_error("Tree::branch on a Ret node");
    return [n = node_](const A& a) { return n->step(a); };
  }

  /// φ(a); only valid on Rd.
  Tree step(const A& a) const {
    if (node_->ret) throw std::logic_error("Tree::step on a Ret node");
    return node_->step(a);
  }

  /// Identity of the underlying node, for sharing checks in tests.
  const void* id() const noexcept { return node_.get(); }

 private:
  struct Node {
    explicit Node(bool r) : ret(r) {}
    virtual ~Node() = default;
    virtual Tree step(const A&) const { throw std::logic_error("Tree::step on a Ret node"); }
    const bool ret;
  };
  struct RetNode final : Node {
    explicit RetNode(B b) : Node(true), value(std::move(b)) {}
    B value;
  };
  template <class F>
  struct RdNode final : Node {
    explicit RdNode(F f) : Node(false), phi(std::move(f)) {}
    Tree step(const A& a) const override { return phi(a); }
    F phi;
  };

  explicit Tree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

template <class A, class B>
Tree<A, std::decay_t<B>> ret(B&& b) {
  return Tree<A, std::decay_t<B>>::ret(std::forward<B>(b));
}

template <class A, class B>
Tree<A, B> rd(typename Tree<A, B>::Branch phi) {
  return Tree<A, B>::rd(std::move(phi));
}

/// Reads one item and returns it.
template <class A>
Tree<A, A> get() {
  return Tree<A, A>::rd([](const A& a) { return Tree<A, A>::ret(a); });
}

/// The unique algebra morphism out of [Ret | Rd]:
///   fold p g (Ret b) = p b
///   fold p g (Rd φ)  = g (a ↦ fold p g (φ a))
/// The function handed to g evaluates its subtree only when called.
template <class A, class B, class P, class G>
auto fold(P p, G g, const Tree<A, B>& t) -> std::invoke_result_t<P&, const B&> {
  using C = std::invoke_result_t<P&, const B&>;
  struct Go {
    std::shared_ptr<P> p;
    std::shared_ptr<G> g;
    C operator()(const Tree<A, B>& t) const {
      if (t.is_ret()) return (*p)(t.value());
      return (*g)(std::function<C(const A&)>([self = *this, t](const A& a) { return self(t.step(a)); }));
    }
  };
  return Go{std::make_shared<P>(std::move(p)), std::make_shared<G>(std::move(g))}(t);
}

/// fold with a bound on the number of Rd nodes along any evaluated path.
/// Raises FuelExhausted when a path goes deeper than `fuel`.
template <class A, class B, class P, class G>
auto fold(P p, G g, const Tree<A, B>& t, std::size_t fuel) -> std::invoke_result_t<P&, const B&> {
  using C = std::invoke_result_t<P&, const B&>;
  struct Go {
    std::shared_ptr<P> p;
    std::shared_ptr<G> g;
    std::size_t fuel;
    std::size_t left;
    C operator()(const Tree<A, B>& t) const {
      if (t.is_ret()) return (*p)(t.value());
      if (left == 0) throw FuelExhausted(fuel);
      Go below = *this;
      --below.left;
      return (*g)(std::function<C(const A&)>([below, t](const A& a) { return below(t.step(a)); }));
    }
  };
  return Go{std::make_shared<P>(std::move(p)), std::make_shared<G>(std::move(g)), fuel, fuel}(t);
}

namespace detail {
inline constexpr std::size_t kEagerFoldFuel = kCheckFuel ? kDefaultFuel : static_cast<std::size_t>(-1);
}

/// Result of running a tree against a stream: the value and the unconsumed
/// suffix.
template <class A, class B>
struct EatResult {
  B value;
  Stream<A> rest;
  std::size_t consumed = 0;
};

/// eat (Ret b) α = (b, α);  eat (Rd φ) α = eat (φ (hd α)) (tl α).
template <class A, class B>
EatResult<A, B> eat(Tree<A, B> t, Stream<A> s, Fuel& fuel) {
  std::size_t consumed = 0;
  while (t.is_rd()) {
    fuel.burn();
    t = t.step(s.head());
    s = s.tail();
    ++consumed;
  }
  return {t.value(), std::move(s), consumed};
}

template <class A, class B>
EatResult<A, B> eat(Tree<A, B> t, Stream<A> s) {
  if constexpr (kCheckFuel) {
    Fuel fuel(kDefaultFuel);
    return eat(std::move(t), std::move(s), fuel);
  } else {
    std::size_t consumed = 0;
    while (t.is_rd()) {
      t = t.step(s.head());
      s = s.tail();
      ++consumed;
    }
    return {t.value(), std::move(s), consumed};
  }
}

namespace detail {

template <class A, class B, class C, class F>
Tree<A, C> tmap_shared(const std::shared_ptr<const F>& f, const Tree<A, B>& t) {
  if (t.is_ret()) return Tree<A, C>::ret((*f)(t.value()));
  return Tree<A, C>::rd([f, t](const A& a) { return tmap_shared<A, B, C, F>(f, t.step(a)); });
}

}  // namespace detail

/// Relabels leaves; shape is preserved.  Same as
/// fold (Ret · f) Rd, written directly to keep one node per Rd.
template <class A, class B, class F>
auto tmap(F f, const Tree<A, B>& t) {
  using C = std::decay_t<std::invoke_result_t<F&, const B&>>;
  if (t.is_ret()) return Tree<A, C>::ret(f(t.value()));
  return detail::tmap_shared<A, B, C, F>(std::make_shared<const F>(std::move(f)), t);
}

/// Grafts k at every leaf: tbind (Ret b) k = k b, tbind (Rd φ) k = Rd (a ↦ tbind (φ a) k).
template <class A, class B, class K>
auto tbind(const Tree<A, B>& t, K k) {
  using R = std::invoke_result_t<K&, const B&>;
  return fold([k = std::move(k)](const B& b) -> R { return k(b); },
              [](std::function<R(const A&)> next) { return R::rd(std::move(next)); }, t);
}

/// Length of the longest path over a finite alphabet sample.
template <class A, class B>
std::size_t depth(const Tree<A, B>& t, const std::vector<A>& alphabet) {
  return fold([](const B&) -> std::size_t { return 0; },
              [&alphabet](const std::function<std::size_t(const A&)>& sub) {
                std::size_t best = 0;
                for (const A& a : alphabet) best = std::max(best, sub(a));
                return best + 1;
              },
              t, detail::kEagerFoldFuel);
}

/// Leaf count over a finite alphabet sample.
template <class A, class B>
std::size_t leaf_count(const Tree<A, B>& t, const std::vector<A>& alphabet) {
  return fold([](const B&) -> std::size_t { return 1; },
              [&alphabet](const std::function<std::size_t(const A&)>& sub) {
                std::size_t n = 0;
                for (const A& a : alphabet) n += sub(a);
                return n;
              },
              t, detail::kEagerFoldFuel);
}

/// Finite-alphabet adapter: Rd node backed by a table indexed by position in
/// `alphabet`.  Inputs outside the alphabet are an error.
template <class A, class B>
Tree<A, B> rd_table(std::vector<A> alphabet, std::vector<Tree<A, B>> children) {
  if (alphabet.size() != children.size()) throw std::invalid_argument("rd_table: size mismatch");
  return Tree<A, B>::rd([alphabet = std::move(alphabet), children = std::move(children)](const A& a) {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i] == a) return children[i];
    throw std::out_of_range("rd_table: input outside the tabulated alphabet");
  });
}

/// Rebuilds `t` with every Rd node materialized as a table over `alphabet`,
/// down to `max_depth`.  Deeper Rd nodes are kept as-is.
template <class A, class B>
Tree<A, B> materialize(const Tree<A, B>& t, const std::vector<A>& alphabet, std::size_t max_depth) {
  if (t.is_ret() || max_depth == 0) return t;
  std::vector<Tree<A, B>> kids;
  kids.reserve(alphabet.size());
  for (const A& a : alphabet) kids.push_back(materialize(t.step(a), alphabet, max_depth - 1));
  return rd_table(alphabet, std::move(kids));
}

/// Debug text form over a finite alphabet: `Ret(v)` / `Rd(a0:…, a1:…)`.
template <class A, class B, class Show>
std::string serialize(const Tree<A, B>& t, const std::vector<A>& alphabet, Show show) {
  std::ostringstream os;
  auto go = [&](auto& self, const Tree<A, B>& n) -> void {
    if (n.is_ret()) {
      os << "Ret(" << show(n.value()) << ')';
      return;
    }
    os << "Rd(";
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      if (i) os << ", ";
      os << +alphabet[i] << ':';
      self(self, n.step(alphabet[i]));
    }
    os << ')';
  };
  go(go, t);
  return os.str();
}

template <class A, class B>
std::string serialize(const Tree<A, B>& t, const std::vector<A>& alphabet) {
  return serialize(t, alphabet, [](const B& b) {
    std::ostringstream os;
    os << +b;
    return os.str();
  });
}

}  // namespace sproc
