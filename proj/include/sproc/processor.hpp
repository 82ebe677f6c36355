#pragma once

// Stream processors P_A B = νX. T_A(B × X).
//
// A processor is a suspended layer: a well-founded tree that reads some
// inputs and ends in a leaf carrying one output together with the processor
// that continues from there.  Layers are forced on demand and memoized, so a
// processor value can be run against many inputs without recomputation.
// Forcing is synchronized per processor node; everything else is immutable.

#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <utility>

#include "sproc/pool.hpp"
#include "sproc/stream.hpp"
#include "sproc/tree.hpp"

namespace sproc {

template <class A, class B>
class Proc {
 public:
  using input_type = A;
  using output_type = B;
  using Leaf = std::pair<B, Proc>;
  using Layer = Tree<A, Leaf>;

  /// A processor whose layer is computed by `thunk` on first demand.  The
  /// thunk is stored inline and dropped once it has run.
  template <class F>
  static Proc defer(F thunk) {
    return Proc(detail::make_node<ThunkNode<std::decay_t<F>>>(std::move(thunk)));
  }

  /// out⁻¹: wraps an already-built layer.
  static Proc of(Layer layer) {
    auto n = detail::make_node<Node>();
    n->layer.emplace(std::move(layer));
    return Proc(std::move(n));
  }

  /// The structure map out : P_A B → T_A(B × P_A B).  Forces and memoizes
  /// one layer; later calls return the same tree.
  const Layer& out() const {
    std::lock_guard<std::mutex> lock(node_->mu);
    if (!node_->layer) {
      node_->layer.emplace(node_->run());
      node_->release();
    }
    return *node_->layer;
  }

  bool forced() const {
    std::lock_guard<std::mutex> lock(node_->mu);
    return node_->layer.has_value();
  }

  const void* id() const noexcept { return node_.get(); }

 private:
  struct Node {
    virtual ~Node() = default;
    virtual Layer run() { throw std::logic_error("Proc: node has neither layer nor thunk"); }
    virtual void release() noexcept {}
    std::mutex mu;
    std::optional<Layer> layer;
  };

  template <class F>
  struct ThunkNode final : Node {
    explicit ThunkNode(F f) : thunk(std::move(f)) {}
    Layer run() override { return (*thunk)(); }
    void release() noexcept override { thunk.reset(); }
    std::optional<F> thunk;
  };

  explicit Proc(std::shared_ptr<Node> n) : node_(std::move(n)) {}
  std::shared_ptr<Node> node_;
};

template <class A, class B>
const typename Proc<A, B>::Layer& out(const Proc<A, B>& p) {
  return p.out();
}

namespace detail {

template <class Layer>
struct layer_traits;

template <class A, class B, class S>
struct layer_traits<Tree<A, std::pair<B, S>>> {
  using input = A;
  using output = B;
  using state = S;
};

template <class A, class B, class S, class Step>
Proc<A, B> unfold_shared(std::shared_ptr<const Step> step, S seed);

// tmap (1 × unfold step), sharing `step` rather than a fresh mapping functor.
template <class A, class B, class S, class Step>
typename Proc<A, B>::Layer unfold_layer(const std::shared_ptr<const Step>& step, const Tree<A, std::pair<B, S>>& t) {
  using Layer = typename Proc<A, B>::Layer;
  if (t.is_ret()) {
    const auto& [b, s] = t.value();
    return Layer::ret({b, unfold_shared<A, B, S, Step>(step, s)});
  }
  return Layer::rd([step, t](const A& a) { return unfold_layer<A, B, S, Step>(step, t.step(a)); });
}

template <class A, class B, class S, class Step>
Proc<A, B> unfold_shared(std::shared_ptr<const Step> step, S seed) {
  return Proc<A, B>::defer(
      [step = std::move(step), seed = std::move(seed)] { return unfold_layer<A, B, S, Step>(step, (*step)(seed)); });
}

}  // namespace detail

/// Coiteration of `step : S → T_A(B × S)` from `seed`.
///   out (unfold step s) = tmap (1 × unfold step) (step s)
/// `step` runs only when a layer is forced.
template <class S, class Step>
auto unfold(Step step, S seed) {
  using Layer = std::decay_t<std::invoke_result_t<const Step&, const S&>>;
  using T = detail::layer_traits<Layer>;
  static_assert(std::is_same_v<typename T::state, S>, "unfold: step must return Tree<A, pair<B, S>>");
  return detail::unfold_shared<typename T::input, typename T::output, S, Step>(
      std::make_shared<const Step>(std::move(step)), std::move(seed));
}

/// eat_∞ : P_A B → A^ω ⇒ B^ω.  Each demanded output forces one layer of the
/// processor and eats it against the remaining input.
template <class A, class B>
Stream<B> eat_inf(Proc<A, B> p, Stream<A> s) {
  return Stream<B>::defer([p = std::move(p), s = std::move(s)] {
    auto r = eat(p.out(), s);
    return std::pair<B, Stream<B>>(r.value.first, eat_inf(r.value.second, std::move(r.rest)));
  });
}

/// One-input-one-output machine lifted to a processor: each layer is
/// Rd(a ↦ Ret(b, next)) where (s', b) = step(s, a).
template <class A, class S, class Step>
auto mealy(Step step, S s0) {
  using R = std::invoke_result_t<const Step&, const S&, const A&>;
  using B = std::decay_t<typename R::second_type>;
  using L = Tree<A, std::pair<B, S>>;
  return unfold(
      [step = std::move(step)](const S& s) {
        return L::rd([step, s](const A& a) {
          auto [next, b] = step(s, a);
          return L::ret(std::pair<B, S>(std::move(b), std::move(next)));
        });
      },
      std::move(s0));
}

struct Unit {
  bool operator==(const Unit&) const = default;
};

/// Rd(a ↦ Ret(a, identity)).
template <class A>
Proc<A, A> identity() {
  using L = Tree<A, std::pair<A, Unit>>;
  return unfold([](Unit) { return L::rd([](const A& a) { return L::ret(std::pair<A, Unit>(a, Unit{})); }); },
                Unit{});
}

/// Ret(c, constant c); never reads.
template <class A, class B>
Proc<A, B> constant(B c) {
  using L = Tree<A, std::pair<B, Unit>>;
  return unfold([c](Unit) { return L::ret(std::pair<B, Unit>(c, Unit{})); }, Unit{});
}

}  // namespace sproc
