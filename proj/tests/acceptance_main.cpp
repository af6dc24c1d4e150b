#include <cstdlib>
#include <iostream>
#include <string>

#include "perron/acceptance.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = perron::kAcceptanceSeed;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  int failed = 0;
  for (int id = 1; id <= perron::kAcceptanceCount; ++id) {
    const auto r = perron::run_check(id, seed);
    std::cout << perron::format_line(r) << std::endl;
    failed += !r.passed;
  }
  std::cout << (perron::kAcceptanceCount - failed) << "/" << perron::kAcceptanceCount << " criteria passed\n";
  return failed == 0 ? 0 : 4;
}
