#pragma once

// Infinite streams A^ω exposed only through head/tail.
//
// A Stream is a cheap handle to a memoized cell.  Forcing a cell yields its
// item and the handle of the next cell; both are cached, so a stream value can
// be shared and re-read by any number of holders while the underlying source
// is pulled at most once per position.  Cells are forced strictly in prefix
// order because the only way to reach position n is through tail of n-1.
//
// Streams do not lock.  Concurrent demands on one stream value must be
// serialized by the caller; streams built from pure functions may be copied
// and consumed independently on different threads.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sproc/pool.hpp"

namespace sproc {

/// Raised when a finite backing source (stdin, a vector) runs dry.  Pure
/// streams never raise it.
class EndOfSource : public std::runtime_error {
 public:
  explicit EndOfSource(std::size_t position)
      : std::runtime_error("end of source at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

template <class A>
class Stream {
 public:
  using value_type = A;
  using Step = std::pair<A, Stream>;
  using Thunk = std::function<Step()>;

  /// Builds a stream whose first cell is computed by `thunk` on demand.
  /// The thunk is stored inline in the cell and dropped once it has run.
  template <class F>
  static Stream defer(F thunk) {
    return Stream(detail::make_node<ThunkCell<std::decay_t<F>>>(std::move(thunk)));
  }

  const A& head() const { return force().first; }
  Stream tail() const { return force().second; }

  /// True once the first item has been computed.
  bool forced() const noexcept { return cell_->step.has_value(); }

 private:
  struct Cell {
    std::optional<Step> step;

    Cell() = default;
    Cell(const Cell&) = delete;
    Cell& operator=(const Cell&) = delete;

    virtual Step run() = 0;
    virtual void release() noexcept = 0;

    // Unlink long forced chains iteratively so dropping the head of a
    // million-item stream does not recurse a million frames deep.
    virtual ~Cell() {
      if (!step) return;
      std::shared_ptr<Cell> next = std::move(step->second.cell_);
      step.reset();
      while (next && next.use_count() == 1 && next->step) {
        std::shared_ptr<Cell> after = std::move(next->step->second.cell_);
        next->step.reset();
        next = std::move(after);
      }
    }
  };

  template <class F>
  struct ThunkCell final : Cell {
    explicit ThunkCell(F f) : thunk(std::move(f)) {}
    Step run() override { return (*thunk)(); }
    void release() noexcept override { thunk.reset(); }
    std::optional<F> thunk;
  };

  explicit Stream(std::shared_ptr<Cell> cell) : cell_(std::move(cell)) {}

  const Step& force() const {
    Cell& c = *cell_;
    if (!c.step) {
      // A throwing thunk leaves the cell unforced; the next demand retries.
      c.step.emplace(c.run());
      c.release();
    }
    return *c.step;
  }

  std::shared_ptr<Cell> cell_;
};

template <class A>
A head(const Stream<A>& s) {
  return s.head();
}

template <class A>
Stream<A> tail(const Stream<A>& s) {
  return s.tail();
}

/// a ⊲ α
template <class A>
Stream<A> cons(A a, Stream<A> rest) {
  return Stream<A>::defer([a = std::move(a), rest = std::move(rest)]() mutable {
    return std::pair<A, Stream<A>>(a, rest);
  });
}

namespace detail {

template <class A, class G>
Stream<A> from_function_at(std::shared_ptr<const G> g, std::size_t n) {
  return Stream<A>::defer([g, n] {
    return std::pair<A, Stream<A>>((*g)(n), from_function_at<A, G>(g, n + 1));
  });
}

}  // namespace detail

/// The stream n ↦ g(n).
template <class G>
auto from_function(G g) {
  using A = std::decay_t<std::invoke_result_t<const G&, std::size_t>>;
  return detail::from_function_at<A, G>(std::make_shared<const G>(std::move(g)), 0);
}

template <class A>
Stream<A> repeat(A a) {
  return from_function([a](std::size_t) { return a; });
}

/// Pull-driven stream over an external source.  `pull` returns nullopt once
/// the source is exhausted; demanding past that point raises EndOfSource.
/// `pull` is invoked exactly once per position, in order.
template <class A>
Stream<A> from_source(std::function<std::optional<A>()> pull) {
  struct Reader {
    std::function<std::optional<A>()> pull;
    static Stream<A> at(std::shared_ptr<Reader> r, std::size_t n) {
      return Stream<A>::defer([r, n] {
        std::optional<A> item = r->pull();
        if (!item) throw EndOfSource(n);
        return std::pair<A, Stream<A>>(std::move(*item), at(r, n + 1));
      });
    }
  };
  return Reader::at(std::make_shared<Reader>(Reader{std::move(pull)}), 0);
}

/// The finite sequence `items` followed by EndOfSource.
template <class A>
Stream<A> from_vector(std::vector<A> items) {
  auto data = std::make_shared<const std::vector<A>>(std::move(items));
  auto pos = std::make_shared<std::size_t>(0);
  return from_source<A>([data, pos]() -> std::optional<A> {
    if (*pos >= data->size()) return std::nullopt;
    return (*data)[(*pos)++];
  });
}

/// prefix ++ rest
template <class A>
Stream<A> prepend(const std::vector<A>& prefix, Stream<A> rest) {
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) rest = cons(*it, std::move(rest));
  return rest;
}

/// [α₀, …, α_{n−1}]
template <class A>
std::vector<A> take_prefix(Stream<A> s, std::size_t n) {
  std::vector<A> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(s.head());
    s = s.tail();
  }
  return out;
}

template <class A>
Stream<A> drop(Stream<A> s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) s = s.tail();
  return s;
}

/// Unique map into the final (A ×)-coalgebra: the stream whose head is
/// step(seed).first and whose tail unfolds from step(seed).second.
template <class S, class Step>
auto unfold_stream(Step step, S seed) {
  using R = std::invoke_result_t<const Step&, const S&>;
  using A = std::decay_t<typename R::first_type>;
  struct Go {
    static Stream<A> at(std::shared_ptr<const Step> step, S seed) {
      return Stream<A>::defer([step, seed = std::move(seed)] {
        auto [a, next] = (*step)(seed);
        return std::pair<A, Stream<A>>(std::move(a), at(step, std::move(next)));
      });
    }
  };
  return Go::at(std::make_shared<const Step>(std::move(step)), std::move(seed));
}

/// Pointwise map; lazy.
template <class A, class F>
auto smap(F f, Stream<A> s) {
  using B = std::decay_t<std::invoke_result_t<F&, const A&>>;
  struct Go {
    static Stream<B> at(std::shared_ptr<F> f, Stream<A> s) {
      return Stream<B>::defer([f, s] {
        return std::pair<B, Stream<B>>((*f)(s.head()), at(f, s.tail()));
      });
    }
  };
  return Go::at(std::make_shared<F>(std::move(f)), std::move(s));
}

/// Wraps `s` so that every item pulled through the result bumps `*counter`.
template <class A>
Stream<A> counting(Stream<A> s, std::shared_ptr<std::size_t> counter) {
  return Stream<A>::defer([s = std::move(s), counter] {
    A a = s.head();
    ++*counter;
    return std::pair<A, Stream<A>>(std::move(a), counting(s.tail(), counter));
  });
}

}  // namespace sproc
