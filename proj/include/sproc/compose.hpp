#pragma once

// Composition of stream processors.
//
// The composite of a postponent p : P_B C after a preponent q : P_A B is the
// unfold of a coalgebra on pairs of already-forced layers
//
//   S = T_B(C × P_B C) × T_A(B × P_A B)
//
// Two coalgebras are provided.  The lazy one (chi) emits as soon as the
// postponent can and reads input only when both sides are reading.  The
// greedy one (chi_greedy) reads whenever the preponent can and emits only
// when both sides are writing.  They differ only in what happens when the
// postponent reaches a leaf.
//
// Both are nested structural recursions: outer on the postponent layer,
// inner on the preponent layer.  The outer step that feeds a preponent
// output into the postponent is a tail call, so the engine runs it as a
// loop; the inner recursion is lazy (one Rd per demanded input).  Neither
// grows the native stack with layer depth.  chi_fold / chi_greedy_fold are
// the same coalgebras written directly with `fold`; they recurse natively
// and exist as a reference form.

#include <functional>
#include <utility>

#include "sproc/processor.hpp"
#include "sproc/tree.hpp"

namespace sproc {

/// A pair of forced layers: the postponent's and the preponent's.
template <class A, class B, class C>
struct CompState {
  typename Proc<B, C>::Layer post;
  typename Proc<A, B>::Layer pre;
};

/// Which side wins when the postponent can write while the preponent reads.
enum class Priority {
  kPostponent,  // lazy
  kPreponent,   // greedy
};

template <class A, class B, class C>
using CompLayer = Tree<A, std::pair<C, CompState<A, B, C>>>;

namespace detail {

template <class A, class B, class C>
CompLayer<A, B, C> leaf_case(Priority prio, const std::pair<C, Proc<B, C>>& out_bc,
                             const typename Proc<A, B>::Layer& pre) {
  using Out = CompLayer<A, B, C>;
  using S = CompState<A, B, C>;
  if (prio == Priority::kPostponent) return Out::ret({out_bc.first, S{out_bc.second.out(), pre}});
  // p⟨c, p_bc⟩ = fold (⟨b, p_ab⟩ ↦ Ret⟨c, ⟨out p_bc, Ret⟨b, p_ab⟩⟩⟩) Rd
  return fold(
      [out_bc](const std::pair<B, Proc<A, B>>& bp) {
        return Out::ret({out_bc.first, S{out_bc.second.out(), Proc<A, B>::Layer::ret(bp)}});
      },
      [](std::function<Out(const A&)> k) { return Out::rd(std::move(k)); }, pre);
}

template <class A, class B, class C>
CompLayer<A, B, C> chi_engine(Priority prio, typename Proc<B, C>::Layer post, typename Proc<A, B>::Layer pre) {
  using Out = CompLayer<A, B, C>;
  for (;;) {
    if (post.is_ret()) return leaf_case<A, B, C>(prio, post.value(), pre);
    if (pre.is_ret()) {
      // χ⟨Rd φ, Ret⟨b, p_ab⟩⟩ = χ⟨φ b, out p_ab⟩
      const auto& [b, p_ab] = pre.value();
      post = post.step(b);
      pre = p_ab.out();
      continue;
    }
    // χ⟨Rd φ, Rd ψ⟩ = Rd (a ↦ χ⟨Rd φ, ψ a⟩)
    return Out::rd([prio, post, pre](const A& a) { return chi_engine<A, B, C>(prio, post, pre.step(a)); });
  }
}

}  // namespace detail

/// Lazy composition coalgebra χ.
///   χ⟨Ret⟨c, p_bc⟩, t_ab⟩     = Ret⟨c, ⟨out p_bc, t_ab⟩⟩
///   χ⟨Rd φ, Ret⟨b, p_ab⟩⟩     = χ⟨φ b, out p_ab⟩
///   χ⟨t_bc, Rd ψ⟩             = Rd (a ↦ χ⟨t_bc, ψ a⟩)
template <class A, class B, class C>
CompLayer<A, B, C> chi(const CompState<A, B, C>& s) {
  return detail::chi_engine<A, B, C>(Priority::kPostponent, s.post, s.pre);
}

/// Greedy composition coalgebra χ′.
///   χ′⟨t_bc, Rd ψ⟩                    = Rd (a ↦ χ′⟨t_bc, ψ a⟩)
///   χ′⟨Rd φ, Ret⟨b, p_ab⟩⟩            = χ′⟨φ b, out p_ab⟩
///   χ′⟨Ret⟨c, p_bc⟩, Ret⟨b, p_ab⟩⟩    = Ret⟨c, ⟨out p_bc, Ret⟨b, p_ab⟩⟩⟩
template <class A, class B, class C>
CompLayer<A, B, C> chi_greedy(const CompState<A, B, C>& s) {
  return detail::chi_engine<A, B, C>(Priority::kPreponent, s.post, s.pre);
}

/// χ or χ′ as `fold p g t_bc t_ab`, with the outer fold over the postponent
/// carrying functions of the preponent layer.
template <class A, class B, class C>
CompLayer<A, B, C> chi_fold(const CompState<A, B, C>& s, Priority prio = Priority::kPostponent) {
  using Out = CompLayer<A, B, C>;
  using Pre = typename Proc<A, B>::Layer;
  using Carrier = std::function<Out(const Pre&)>;
  auto p = [prio](const std::pair<C, Proc<B, C>>& cp) -> Carrier {
    return [prio, cp](const Pre& t_ab) { return detail::leaf_case<A, B, C>(prio, cp, t_ab); };
  };
  // g f = fold (⟨b, p_ab⟩ ↦ f b (out p_ab)) Rd
  auto g = [](std::function<Carrier(const B&)> f) -> Carrier {
    return [f = std::move(f)](const Pre& t_ab) {
      return fold([f](const std::pair<B, Proc<A, B>>& bp) { return f(bp.first)(bp.second.out()); },
                  [](std::function<Out(const A&)> k) { return Out::rd(std::move(k)); }, t_ab);
    };
  };
  return fold(p, g, s.post)(s.pre);
}

template <class A, class B, class C>
CompLayer<A, B, C> chi_greedy_fold(const CompState<A, B, C>& s) {
  return chi_fold(s, Priority::kPreponent);
}

/// p ⊗ q = (unfold χ)⟨out p, out q⟩.  Runs q first, then p.
template <class A, class B, class C>
Proc<A, C> compose_lazy(const Proc<B, C>& p, const Proc<A, B>& q) {
  return unfold([](const CompState<A, B, C>& s) { return chi(s); }, CompState<A, B, C>{p.out(), q.out()});
}

/// p ⊗′ q = (unfold χ′)⟨out p, out q⟩.
template <class A, class B, class C>
Proc<A, C> compose_greedy(const Proc<B, C>& p, const Proc<A, B>& q) {
  return unfold([](const CompState<A, B, C>& s) { return chi_greedy(s); }, CompState<A, B, C>{p.out(), q.out()});
}

template <class A, class B, class C>
Proc<A, C> compose(Priority prio, const Proc<B, C>& p, const Proc<A, B>& q) {
  return prio == Priority::kPostponent ? compose_lazy(p, q) : compose_greedy(p, q);
}

}  // namespace sproc
