// Builds the small reader tree over {0,1} that answers 0, 1, 0, 1 along the
// paths 0…, 10…, 110…, 111…, prints it, and evaluates it on a few inputs.
// Then recovers an equivalent tree from a plain function by probing.

#include <iostream>
#include <vector>

#include "sproc/sproc.hpp"

using sproc::Byte;
using T = sproc::Tree<Byte, Byte>;

int main() {
  T t = T::rd([](const Byte& a0) {
    if (a0 == 0) return T::ret(0);
    return T::rd([](const Byte& a1) {
      if (a1 == 0) return T::ret(1);
      return T::rd([](const Byte& a2) { return T::ret(a2 == 0 ? 0 : 1); });
    });
  });

  const std::vector<Byte> bits{0, 1};
  std::cout << sproc::serialize(t, bits) << '\n';

  for (std::vector<Byte> prefix : {std::vector<Byte>{0}, {1, 0}, {1, 1, 0}, {1, 1, 1}}) {
    auto r = sproc::eat(t, sproc::prepend(prefix, sproc::repeat<Byte>(0)));
    std::cout << "f(";
    for (Byte b : prefix) std::cout << +b << ',';
    std::cout << "...) = " << +r.value << "  (read " << r.consumed << ")\n";
  }

  sproc::StreamFunction<Byte, Byte> f = [](const sproc::Stream<Byte>& s) -> Byte {
    if (s.head() == 0) return 0;
    auto s1 = s.tail();
    if (s1.head() == 0) return 1;
    return s1.tail().head() == 0 ? 0 : 1;
  };
  std::cout << sproc::serialize(sproc::rep(f, 8), bits) << '\n';
}
