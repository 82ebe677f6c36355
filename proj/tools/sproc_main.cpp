// sproc: run a pipeline of stream processors over stdin bytes.
//
//   printf 'abc' | sproc 'dup | window_sum(2)'
//   sproc --mode greedy --outputs 16 'const(9)' < /dev/null
//   sproc --trace --outputs 4 'id' < file
//   sproc --bench 'dup | dup' < file

#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sproc/sproc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

// read(2) returns whatever is available, so slow producers see output as soon
// as it exists instead of after a full buffer.
class FdSource : public sproc::ByteSource {
 public:
  explicit FdSource(int fd) : fd_(fd) {}
  std::size_t read(sproc::Byte* buf, std::size_t cap) override {
    for (;;) {
      ssize_t n = ::read(fd_, buf, cap);
      if (n >= 0) return static_cast<std::size_t>(n);
      if (errno != EINTR) throw sproc::IoError(std::string("read: ") + std::strerror(errno));
    }
  }

 private:
  int fd_;
};

class FdSink : public sproc::ByteSink {
 public:
  explicit FdSink(int fd) : fd_(fd) {}
  void write(const sproc::Byte* buf, std::size_t n) override {
    while (n > 0) {
      ssize_t w = ::write(fd_, buf, n);
      if (w < 0) {
        if (errno == EINTR) continue;
        throw sproc::IoError(std::string("write: ") + std::strerror(errno));
      }
      buf += w;
      n -= static_cast<std::size_t>(w);
    }
  }
  void flush() override {}

 private:
  int fd_;
};

std::vector<sproc::Byte> slurp(sproc::ByteSource& src) {
  std::vector<sproc::Byte> data;
  std::vector<sproc::Byte> chunk(1 << 16);
  while (std::size_t n = src.read(chunk.data(), chunk.size())) data.insert(data.end(), chunk.begin(), chunk.begin() + n);
  return data;
}

std::string stage_list() {
  std::string s;
  for (const auto& e : sproc::registry()) s += "  " + e.usage + "\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run a pipeline of stream processors over stdin bytes.\n\nStages:\n" + stage_list()};
  std::string text;
  std::string mode = "lazy";
  bool do_trace = false;
  bool do_bench = false;
  std::optional<std::size_t> outputs;
  std::uint64_t seed = 0;

  app.add_option("pipeline", text, "Stages joined by '|', data flowing left to right")->required();
  app.add_option("--mode", mode, "Composition operator")->check(CLI::IsMember({"lazy", "greedy"}));
  auto* trace_flag = app.add_flag("--trace", do_trace, "Print one line per Rd/Ret event instead of output bytes");
  app.add_flag("--bench", do_bench, "Compare inputs needed for outputs 1, 10, 100 under both modes")
      ->excludes(trace_flag);
  app.add_option("--outputs", outputs, "Stop after N outputs");
  app.add_option("--seed", seed, "Seed for random(size) stages");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  sproc::PipelineExpr expr;
  sproc::ByteProc proc = sproc::procs::constant(0);
  try {
    expr = sproc::parse_pipeline(text);
    expr.mode = mode == "greedy" ? sproc::Priority::kPreponent : sproc::Priority::kPostponent;
    proc = sproc::build_pipeline(expr, seed);
  } catch (const sproc::PipelineSyntaxError& e) {
    std::cerr << "sproc: " << e.what() << "\n  " << text << "\n  " << std::string(e.column() - 1, ' ') << "^\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "sproc: " << e.what() << '\n';
    return kExitUsage;
  }

  FdSource in(STDIN_FILENO);
  FdSink out(STDOUT_FILENO);
  try {
    if (do_trace) {
      sproc::InputPump pump(in);
      auto input = sproc::from_source<sproc::Byte>([&pump] { return pump.next(); });
      auto log = sproc::trace(std::move(proc), std::move(input), outputs.value_or(16));
      for (const auto& ev : log.events) std::cout << ev << '\n';
      if (log.input_exhausted) std::cout << "end of input\n";
      std::cout.flush();
      return kExitOk;
    }
    if (do_bench) {
      auto rows = sproc::bench(expr, slurp(in), seed);
      sproc::print_bench(std::cout, rows);
      return kExitOk;
    }
    sproc::RunOptions opts;
    opts.max_outputs = outputs;
    proc = sproc::procs::constant(0);  // release the probe build before running
    auto r = sproc::run_pipeline(expr, seed, in, out, opts);
    if (r.input_exhausted)
      std::cerr << "sproc: input ended after " << r.consumed << " bytes; " << r.outputs
                << " outputs written; 1 further output was demanded but needs more input\n";
  } catch (const sproc::IoError& e) {
    std::cerr << "sproc: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}
