#pragma once
#include <string>
#include <vector>

namespace qiren {

// Quick cross-implementation sanity checks, cheap enough to run on demand.
struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<Check> run_self_checks();

}  // namespace qiren
