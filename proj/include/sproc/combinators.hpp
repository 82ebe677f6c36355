#pragma once

// Concrete byte processors and the name registry used by the CLI.
//
// Every registered processor is productive with a recorded bound: its first
// n outputs need at most bound·n inputs.  Arithmetic wraps modulo 256.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sproc/processor.hpp"
#include "sproc/tree.hpp"

namespace sproc {

using Byte = std::uint8_t;
using ByteProc = Proc<Byte, Byte>;
using ByteLayer = ByteProc::Layer;

namespace procs {

inline ByteProc id() { return identity<Byte>(); }

/// Each input twice.
inline ByteProc dup() {
  using L = Tree<Byte, std::pair<Byte, std::optional<Byte>>>;
  return unfold(
      [](const std::optional<Byte>& pending) {
        if (pending) return L::ret({*pending, std::nullopt});
        return L::rd([](const Byte& a) { return L::ret({a, a}); });
      },
      std::optional<Byte>{});
}

template <class F>
ByteProc map(F f) {
  return mealy<Byte>([f](Unit, const Byte& a) { return std::pair<Unit, Byte>(Unit{}, static_cast<Byte>(f(a))); },
                     Unit{});
}

inline ByteProc incr() {
  return map([](Byte a) { return a + 1; });
}

/// Two's-complement negation.
inline ByteProc negate() {
  return map([](Byte a) { return 0 - a; });
}

/// Running xor of the low bit of each input.
inline ByteProc parity() {
  return mealy<Byte>(
      [](const Byte& acc, const Byte& a) {
        Byte next = acc ^ (a & 1);
        return std::pair<Byte, Byte>(next, next);
      },
      Byte{0});
}

/// Running sum.
inline ByteProc scan_sum() {
  return mealy<Byte>(
      [](const Byte& acc, const Byte& a) {
        Byte next = acc + a;
        return std::pair<Byte, Byte>(next, next);
      },
      Byte{0});
}

/// Emits the first k−1 items of every block of k and drops the last.
inline ByteProc drop_every(unsigned k) {
  if (k < 2) throw std::invalid_argument("drop_every: k must be at least 2");
  using L = Tree<Byte, std::pair<Byte, unsigned>>;
  // State: items already taken from the current block.
  return unfold(
      [k](const unsigned& taken) {
        if (taken + 1 < k) return L::rd([taken](const Byte& a) { return L::ret({a, taken + 1}); });
        return L::rd([](const Byte&) { return L::rd([](const Byte& a) { return L::ret({a, 1u}); }); });
      },
      0u);
}

namespace detail {

// Queue of the last few inputs.  Short windows live inline so that copying
// the state, which happens on every step, does not allocate.
class Window {
 public:
  std::size_t size() const { return big_.empty() ? n_ : big_.size(); }
  void push(Byte b, std::size_t k) {
    if (k <= kInline) {
      small_[n_++] = b;
    } else {
      big_.push_back(b);
    }
  }
  Byte pop_and_sum() {
    Byte sum = 0;
    if (big_.empty()) {
      for (std::size_t i = 0; i < n_; ++i) sum += small_[i];
      std::copy(small_.begin() + 1, small_.begin() + n_, small_.begin());
      --n_;
    } else {
      for (Byte b : big_) sum += b;
      big_.erase(big_.begin());
    }
    return sum;
  }

 private:
  static constexpr std::size_t kInline = 16;
  std::array<Byte, kInline> small_{};
  std::uint8_t n_ = 0;
  std::vector<Byte> big_;
};

using WindowLayer = Tree<Byte, std::pair<Byte, Window>>;

inline WindowLayer fill_window(Window w, std::size_t k) {
  if (w.size() == k) {
    Byte sum = w.pop_and_sum();
    return WindowLayer::ret({sum, std::move(w)});
  }
  return WindowLayer::rd([w = std::move(w), k](const Byte& a) {
    Window next = w;
    next.push(a, k);
    return fill_window(std::move(next), k);
  });
}

}  // namespace detail

/// Sums of each window of k consecutive inputs.  The first layer reads k.
inline ByteProc window_sum(std::size_t k) {
  if (k < 1) throw std::invalid_argument("window_sum: k must be at least 1");
  return unfold([k](const detail::Window& w) { return detail::fill_window(w, k); }, detail::Window{});
}

/// Sums of disjoint adjacent pairs: a0+a1, a2+a3, ….
inline ByteProc pairwise_sum() {
  using L = Tree<Byte, std::pair<Byte, Unit>>;
  return unfold(
      [](Unit) {
        return L::rd([](const Byte& a) {
          return L::rd([a](const Byte& b) { return L::ret({static_cast<Byte>(a + b), Unit{}}); });
        });
      },
      Unit{});
}

/// `pad` d times, then the input.
inline ByteProc delay(std::size_t d, Byte pad) {
  using L = Tree<Byte, std::pair<Byte, std::size_t>>;
  return unfold(
      [pad](const std::size_t& left) {
        if (left > 0) return L::ret({pad, left - 1});
        return L::rd([](const Byte& a) { return L::ret({a, std::size_t{0}}); });
      },
      d);
}

/// 0, 1, 2, … (mod 256), one input consumed per output.
inline ByteProc counter() {
  return mealy<Byte>(
      [](const Byte& n, const Byte&) { return std::pair<Byte, Byte>(static_cast<Byte>(n + 1), n); }, Byte{0});
}

inline ByteProc constant(Byte c) { return sproc::constant<Byte, Byte>(c); }

}  // namespace procs

// ---------------------------------------------------------------------------
// Random processors

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Which constructor the root of a random layer uses.
enum class RootShape { kAny, kRet, kRd };

inline ByteProc generator(std::uint64_t seed, std::size_t size);

namespace detail {

// Rd nodes branch on a % fanout, so layers are total over all bytes while
// staying small enough to compare structurally over {0, 1, 2}.
inline ByteLayer random_tree(std::mt19937_64& rng, std::size_t size, std::size_t level, RootShape shape) {
  bool read = level < size && (shape == RootShape::kRd || (shape == RootShape::kAny && rng() % 2 == 0));
  if (!read) {
    Byte b = static_cast<Byte>(rng());
    return ByteLayer::ret({b, generator(rng(), size)});
  }
  std::size_t fanout = 2 + rng() % 2;
  std::vector<ByteLayer> kids;
  for (std::size_t i = 0; i < fanout; ++i) kids.push_back(random_tree(rng, size, level + 1, RootShape::kAny));
  return ByteLayer::rd([kids = std::move(kids)](const Byte& a) { return kids[a % kids.size()]; });
}

}  // namespace detail

/// A random well-founded layer of depth at most `size`.  Leaves carry random
/// bytes and lazily built generator processors for the continuation.
/// kRd needs size ≥ 1.
inline ByteLayer random_layer(std::uint64_t seed, std::size_t size, RootShape shape = RootShape::kAny) {
  if (shape == RootShape::kRd && size == 0) throw std::invalid_argument("random_layer: Rd root needs size >= 1");
  std::mt19937_64 rng(detail::splitmix64(seed));
  return detail::random_tree(rng, size, 0, shape);
}

/// Deterministic pseudo-random productive processor.  Each layer is a random
/// tree of depth ≤ size; size 0 gives constant-emitter shaped layers.
inline ByteProc generator(std::uint64_t seed, std::size_t size) {
  return ByteProc::defer([seed, size] { return random_layer(seed, size); });
}

// ---------------------------------------------------------------------------
// Registry

class UnknownStage : public std::runtime_error {
 public:
  explicit UnknownStage(const std::string& name) : std::runtime_error("unknown stage '" + name + "'") {}
};

class BadStageArguments : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedProcessor {
  std::string name;
  std::string usage;
  std::size_t min_args = 0;
  std::size_t max_args = 0;
  /// Arguments used when tests enumerate the registry.
  std::vector<std::int64_t> example_args;
  /// Validates and builds.  `seed` only matters for generator-backed stages.
  std::function<ByteProc(const std::vector<std::int64_t>&, std::uint64_t)> make;
  /// Inputs per output: the first n outputs need at most bound·n inputs.
  std::function<std::size_t(const std::vector<std::int64_t>&)> bound;
};

namespace detail {

inline std::int64_t arg_in(const std::string& stage, const std::vector<std::int64_t>& args, std::size_t i,
                           std::int64_t lo, std::int64_t hi) {
  std::int64_t v = args.at(i);
  if (v < lo || v > hi)
    throw BadStageArguments(stage + ": argument " + std::to_string(i + 1) + " must be in [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "], got " + std::to_string(v));
  return v;
}

inline NamedProcessor nullary(std::string name, std::size_t bound, ByteProc (*make)()) {
  return {name, name, 0, 0, {}, [make](const auto&, std::uint64_t) { return make(); },
          [bound](const auto&) { return bound; }};
}

}  // namespace detail

inline const std::vector<NamedProcessor>& registry() {
  using Args = std::vector<std::int64_t>;
  static const std::vector<NamedProcessor> entries = [] {
    std::vector<NamedProcessor> r;
    r.push_back(detail::nullary("id", 1, &procs::id));
    r.push_back(detail::nullary("dup", 1, &procs::dup));
    r.push_back(detail::nullary("incr", 1, &procs::incr));
    r.push_back(detail::nullary("negate", 1, &procs::negate));
    r.push_back(detail::nullary("parity", 1, &procs::parity));
    r.push_back(detail::nullary("scan_sum", 1, &procs::scan_sum));
    r.push_back(detail::nullary("pairwise_sum", 2, &procs::pairwise_sum));
    r.push_back(detail::nullary("counter", 1, &procs::counter));
    r.push_back({"drop_every", "drop_every(k), 2 <= k <= 65536", 1, 1, {3},
                 [](const Args& a, std::uint64_t) {
                   return procs::drop_every(static_cast<unsigned>(detail::arg_in("drop_every", a, 0, 2, 65536)));
                 },
                 [](const Args&) -> std::size_t { return 2; }});
    r.push_back({"window_sum", "window_sum(k), 1 <= k <= 65536", 1, 1, {2},
                 [](const Args& a, std::uint64_t) {
                   return procs::window_sum(static_cast<std::size_t>(detail::arg_in("window_sum", a, 0, 1, 65536)));
                 },
                 [](const Args& a) { return static_cast<std::size_t>(a.at(0)); }});
    r.push_back({"delay", "delay(d, pad), 0 <= d <= 65536, 0 <= pad <= 255", 2, 2, {2, 7},
                 [](const Args& a, std::uint64_t) {
                   return procs::delay(static_cast<std::size_t>(detail::arg_in("delay", a, 0, 0, 65536)),
                                       static_cast<Byte>(detail::arg_in("delay", a, 1, 0, 255)));
                 },
                 [](const Args&) -> std::size_t { return 1; }});
    r.push_back({"const", "const(c), 0 <= c <= 255", 1, 1, {9},
                 [](const Args& a, std::uint64_t) {
                   return procs::constant(static_cast<Byte>(detail::arg_in("const", a, 0, 0, 255)));
                 },
                 [](const Args&) -> std::size_t { return 0; }});
    r.push_back({"random", "random(size), 0 <= size <= 8; layers drawn from --seed", 1, 1, {3},
                 [](const Args& a, std::uint64_t seed) {
                   return generator(seed, static_cast<std::size_t>(detail::arg_in("random", a, 0, 0, 8)));
                 },
                 [](const Args& a) { return static_cast<std::size_t>(std::max<std::int64_t>(a.at(0), 1)); }});
    return r;
  }();
  return entries;
}

inline const NamedProcessor& find_stage(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return e;
  throw UnknownStage(name);
}

/// Resolves and builds a registry processor.  Throws UnknownStage or
/// BadStageArguments.
inline ByteProc lookup(const std::string& name, const std::vector<std::int64_t>& args = {},
                       std::uint64_t seed = 0) {
  const NamedProcessor& e = find_stage(name);
  if (args.size() < e.min_args || args.size() > e.max_args)
    throw BadStageArguments(name + ": expected " +
                            (e.min_args == e.max_args ? std::to_string(e.min_args)
                                                      : std::to_string(e.min_args) + ".." + std::to_string(e.max_args)) +
                            " argument(s), got " + std::to_string(args.size()) + "; usage: " + e.usage);
  return e.make(args, seed);
}

}  // namespace sproc
