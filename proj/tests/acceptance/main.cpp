#include <iostream>

#include "tamelab/acceptance.hpp"

int main() {
  tamelab::AcceptanceOptions options;
  bool ok = true;
  tamelab::run_acceptance(options, [&](const tamelab::CriterionResult& r) {
    std::cout << r.line() << " (" << r.seconds << " s)" << std::endl;
    ok = ok && r.pass;
  });
  return ok ? 0 : 1;
}
