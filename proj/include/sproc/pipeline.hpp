#pragma once

// Pipeline expressions over registry processors and the byte-level driver
// behind the `sproc` command.
//
//   pipeline := stage ("|" stage)*
//   stage    := ident ("(" int ("," int)* ")")?
//
// Data flows left to right: `s1 | s2` feeds the output of s1 into s2, so it
// builds s2 © s1 with s1 as the preponent.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sproc/combinators.hpp"
#include "sproc/compose.hpp"
#include "sproc/harness.hpp"
#include "sproc/processor.hpp"
#include "sproc/stream.hpp"

namespace sproc {

struct Stage {
  std::string name;
  std::vector<std::int64_t> args;
  /// 1-based column of the stage name in the source text.
  std::size_t column = 0;
};

struct PipelineExpr {
  std::vector<Stage> stages;
  Priority mode = Priority::kPostponent;
};

class PipelineSyntaxError : public std::runtime_error {
 public:
  PipelineSyntaxError(std::size_t column, const std::string& msg)
      : std::runtime_error("syntax error at offset " + std::to_string(column) + ": " + msg), column_(column) {}

  /// 1-based column; text.size() + 1 means end of input.
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

namespace detail {

class PipelineParser {
 public:
  explicit PipelineParser(std::string_view text) : text_(text) {}

  PipelineExpr parse() {
    PipelineExpr expr;
    expr.stages.push_back(stage());
    skip_ws();
    while (pos_ < text_.size()) {
      expect('|', "expected '|' between stages");
      expr.stages.push_back(stage());
      skip_ws();
    }
    return expr;
  }

 private:
  std::size_t column() const { return pos_ + 1; }

  [[noreturn]] void fail(const std::string& msg) const { throw PipelineSyntaxError(column(), msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c, const char* msg) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(msg);
    ++pos_;
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  Stage stage() {
    skip_ws();
    Stage s;
    s.column = column();
    if (pos_ >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      fail("expected stage name");
    while (pos_ < text_.size() && ident_char(text_[pos_])) s.name += text_[pos_++];
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      s.args.push_back(integer());
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        s.args.push_back(integer());
        skip_ws();
      }
      expect(')', "expected ',' or ')'");
    }
    return s;
  }

  std::int64_t integer() {
    skip_ws();
    std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("expected integer");
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v > (INT64_MAX - 9) / 10) {
        pos_ = start;
        fail("integer out of range");
      }
      v = v * 10 + (text_[pos_++] - '0');
    }
    return negative ? -v : v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses pipeline text.  Throws PipelineSyntaxError.  Stage names are not
/// resolved here; see build_pipeline.
inline PipelineExpr parse_pipeline(std::string_view text) { return detail::PipelineParser(text).parse(); }

/// Resolves every stage and composes them left to right with `expr.mode`.
/// Throws UnknownStage or BadStageArguments.
inline ByteProc build_pipeline(const PipelineExpr& expr, std::uint64_t seed = 0) {
  ByteProc acc = lookup(expr.stages.at(0).name, expr.stages[0].args, seed);
  for (std::size_t i = 1; i < expr.stages.size(); ++i) {
    ByteProc next = lookup(expr.stages[i].name, expr.stages[i].args, detail::splitmix64(seed + i));
    acc = compose(expr.mode, next, acc);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Byte I/O

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ByteSource {
 public:
  virtual ~ByteSource() = default;
  /// Reads up to `cap` bytes; returns 0 at end of input.  Throws IoError.
  virtual std::size_t read(Byte* buf, std::size_t cap) = 0;
};

class ByteSink {
 public:
  virtual ~ByteSink() = default;
  virtual void write(const Byte* buf, std::size_t n) = 0;
  virtual void flush() = 0;
};

class IstreamSource : public ByteSource {
 public:
  explicit IstreamSource(std::istream& in) : in_(in) {}
  std::size_t read(Byte* buf, std::size_t cap) override {
    in_.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(cap));
    if (in_.bad()) throw IoError("read failed");
    return static_cast<std::size_t>(in_.gcount());
  }

 private:
  std::istream& in_;
};

class OstreamSink : public ByteSink {
 public:
  explicit OstreamSink(std::ostream& out) : out_(out) {}
  void write(const Byte* buf, std::size_t n) override {
    out_.write(reinterpret_cast<const char*>(buf), static_cast<std::streamsize>(n));
    if (!out_) throw IoError("write failed");
  }
  void flush() override {
    out_.flush();
    if (!out_) throw IoError("flush failed");
  }

 private:
  std::ostream& out_;
};

class VectorSource : public ByteSource {
 public:
  explicit VectorSource(std::vector<Byte> data) : data_(std::move(data)) {}
  std::size_t read(Byte* buf, std::size_t cap) override {
    std::size_t n = std::min(cap, data_.size() - pos_);
    std::copy_n(data_.data() + pos_, n, buf);
    pos_ += n;
    return n;
  }

 private:
  std::vector<Byte> data_;
  std::size_t pos_ = 0;
};

/// Buffered pull adapter from a ByteSource to a Stream.  Before blocking on
/// the source it calls `before_read`, which the driver uses to flush output.
class InputPump {
 public:
  InputPump(ByteSource& src, std::function<void()> before_read = {})
      : src_(src), before_read_(std::move(before_read)) {}

  std::optional<Byte> next() {
    if (pos_ == len_) {
      if (eof_) return std::nullopt;
      if (before_read_) before_read_();
      len_ = src_.read(buf_.data(), buf_.size());
      pos_ = 0;
      if (len_ == 0) {
        eof_ = true;
        return std::nullopt;
      }
    }
    ++consumed_;
    return buf_[pos_++];
  }

  std::size_t consumed() const noexcept { return consumed_; }

 private:
  ByteSource& src_;
  std::function<void()> before_read_;
  std::vector<Byte> buf_ = std::vector<Byte>(1 << 16);
  std::size_t pos_ = 0;
  std::size_t len_ = 0;
  bool eof_ = false;
  std::size_t consumed_ = 0;
};

struct RunOptions {
  /// Stop after this many outputs.
  std::optional<std::size_t> max_outputs;
  /// A processor denoting the same function as the one being run.  It is
  /// kept in step with the main output over the same input cells; when the
  /// input runs out, whatever further output it can still produce from the
  /// bytes already read is written too.  A greedy composite withholds its
  /// last outputs until it has read ahead, so run_pipeline passes the lazy
  /// twin here.  Move the options into run: like the main processor, a
  /// retained handle keeps every layer forced during the run alive.
  std::optional<ByteProc> finish_with;
};

struct RunResult {
  std::size_t outputs = 0;
  std::size_t consumed = 0;
  /// True when the run stopped because the next output needed input that
  /// the source did not have.
  bool input_exhausted = false;
};

/// Streams the pipeline's output to `sink` until the output limit is hit or
/// the input runs out.  Output produced before the shortfall is written.
/// Throws IoError.
inline RunResult run(ByteProc p, ByteSource& source, ByteSink& sink, RunOptions opts = {}) {
  std::vector<Byte> outbuf;
  outbuf.reserve(1 << 16);
  auto drain = [&] {
    if (!outbuf.empty()) {
      sink.write(outbuf.data(), outbuf.size());
      outbuf.clear();
    }
    sink.flush();
  };
  auto pump = std::make_shared<InputPump>(source, drain);
  Stream<Byte> in = from_source<Byte>([pump] { return pump->next(); });
  // Drive layers directly: each output is one eat of the current layer.
  struct Cursor {
    ByteProc proc;
    Stream<Byte> rest;
    Byte next() {
      auto r = eat(proc.out(), rest);
      proc = std::move(r.value.second);
      rest = std::move(r.rest);
      return r.value.first;
    }
  };
  std::optional<Cursor> twin;
  if (opts.finish_with) twin = Cursor{std::move(*opts.finish_with), in};
  Cursor main{std::move(p), std::move(in)};

  RunResult r;
  auto room = [&] { return !opts.max_outputs || r.outputs < *opts.max_outputs; };
  auto emit = [&](Byte b) {
    outbuf.push_back(b);
    ++r.outputs;
    if (outbuf.size() == outbuf.capacity()) {
      sink.write(outbuf.data(), outbuf.size());
      outbuf.clear();
    }
  };
  try {
    while (room()) {
      emit(main.next());
      if (twin) {
        try {
          twin->next();
        } catch (const EndOfSource&) {
          twin.reset();
        }
      }
    }
  } catch (const EndOfSource&) {
    r.input_exhausted = true;
    try {
      while (twin && room()) emit(twin->next());
    } catch (const EndOfSource&) {
    }
  }
  drain();
  r.consumed = pump->consumed();
  return r;
}

/// Builds `expr` and runs it.  Greedy pipelines finish with their lazy twin
/// so that end of input never hides output the bytes read already determine.
inline RunResult run_pipeline(const PipelineExpr& expr, std::uint64_t seed, ByteSource& source, ByteSink& sink,
                              RunOptions opts = {}) {
  if (expr.mode == Priority::kPreponent && !opts.finish_with) {
    PipelineExpr lazy = expr;
    lazy.mode = Priority::kPostponent;
    opts.finish_with = build_pipeline(lazy, seed);
  }
  return run(build_pipeline(expr, seed), source, sink, std::move(opts));
}

// ---------------------------------------------------------------------------
// Trace and bench

enum class EventKind { kRead, kEmit };

struct TraceEvent {
  EventKind kind;
  Byte value;  // input read or output emitted
  std::size_t consumed;
  std::size_t emitted;
};

inline std::ostream& operator<<(std::ostream& os, const TraceEvent& e) {
  os << (e.kind == EventKind::kRead ? "Rd  in=" : "Ret out=") << +e.value << " consumed=" << e.consumed
     << " emitted=" << e.emitted;
  return os;
}

struct TraceLog {
  std::vector<TraceEvent> events;
  bool input_exhausted = false;
};

/// Walks the processor layer by layer, logging every Rd node passed and
/// every Ret leaf reached, until `n_outputs` outputs or input shortfall.
inline TraceLog trace(ByteProc p, Stream<Byte> input, std::size_t n_outputs) {
  TraceLog log;
  std::size_t consumed = 0, emitted = 0;
  try {
    while (emitted < n_outputs) {
      ByteLayer t = p.out();
      while (t.is_rd()) {
        Byte a = input.head();
        input = input.tail();
        ++consumed;
        log.events.push_back({EventKind::kRead, a, consumed, emitted});
        t = t.step(a);
      }
      ++emitted;
      log.events.push_back({EventKind::kEmit, t.value().first, consumed, emitted});
      p = t.value().second;
    }
  } catch (const EndOfSource&) {
    log.input_exhausted = true;
  }
  return log;
}

struct BenchRow {
  Priority mode;
  /// inputs_for[i] is the inputs consumed before output checkpoints[i], or
  /// nullopt if the input ran out first.
  std::vector<std::optional<std::size_t>> inputs_for;
  double micros = 0;
};

inline const std::vector<std::size_t>& bench_checkpoints() {
  static const std::vector<std::size_t> c{1, 10, 100};
  return c;
}

/// Runs the pipeline under both composition modes over `input` and records
/// how many inputs each needed before outputs 1, 10 and 100.
inline std::vector<BenchRow> bench(PipelineExpr expr, const std::vector<Byte>& input, std::uint64_t seed = 0) {
  std::vector<BenchRow> rows;
  for (Priority mode : {Priority::kPostponent, Priority::kPreponent}) {
    expr.mode = mode;
    BenchRow row{mode, {}, 0};
    std::size_t want = bench_checkpoints().back();
    auto counter = std::make_shared<std::size_t>(0);
    auto start = std::chrono::steady_clock::now();
    Stream<Byte> out = eat_inf(build_pipeline(expr, seed), counting(from_vector(input), counter));
    std::vector<std::size_t> seen;
    try {
      while (seen.size() < want) {
        out.head();
        seen.push_back(*counter);
        out = out.tail();
      }
    } catch (const EndOfSource&) {
    }
    row.micros = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
    for (std::size_t k : bench_checkpoints())
      row.inputs_for.push_back(k <= seen.size() ? std::optional<std::size_t>(seen[k - 1]) : std::nullopt);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline const char* mode_name(Priority p) { return p == Priority::kPostponent ? "lazy" : "greedy"; }

inline std::ostream& print_bench(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "mode";
  for (std::size_t k : bench_checkpoints()) os << "\tin_for_out" << k;
  os << "\tmicros\n";
  for (const BenchRow& r : rows) {
    os << mode_name(r.mode);
    for (const auto& v : r.inputs_for) {
      os << '\t';
      if (v)
        os << *v;
      else
        os << "n/a";
    }
    os << '\t' << static_cast<long long>(r.micros) << '\n';
  }
  return os;
}

}  // namespace sproc
