// Composes two registry processors both ways and shows how much input each
// composite reads before its first few outputs.

#include <iostream>

#include "sproc/sproc.hpp"

int main() {
  using namespace sproc;
  ByteProc p = lookup("window_sum", {2});
  ByteProc q = lookup("dup");
  Stream<Byte> input = from_function([](std::size_t n) { return static_cast<Byte>(n + 1); });

  for (Priority mode : {Priority::kPostponent, Priority::kPreponent}) {
    ByteProc c = compose(mode, p, q);
    auto out = take_prefix(eat_inf(c, input), 8);
    auto trace = trace_consumption(c, input, 8);
    std::cout << mode_name(mode) << ": ";
    for (Byte b : out) std::cout << +b << ' ';
    std::cout << " | inputs read:";
    for (auto n : trace.consumed) std::cout << ' ' << n;
    std::cout << '\n';
  }

  // Recover a processor from the function it denotes.
  ByteProc back = rep_inf<Byte, Byte>(as_function(compose_lazy(p, q)));
  for (Byte b : take_prefix(eat_inf(back, input), 8)) std::cout << +b << ' ';
  std::cout << '\n';
}
