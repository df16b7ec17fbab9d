#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qamp/corpus.hpp"

namespace qamp::suite {

struct Options {
  std::uint64_t seed = 20240817;
  int aux_states = 100;       // states per system, layer-projection bound
  int decay_states = 40;      // two-layer decay trials per system
  int decay_states_g3 = 12;   // general-ell decay trials per system
  int energy_states = 10;
  int detect_states = 20;
  int camp_assignments = 50;
};

struct Criterion {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the nine verification criteria over the pinned corpus; progress and
/// one result line per criterion go to `log` when non-null.
std::vector<Criterion> run_all(const Options& opt, std::ostream* log);

bool all_passed(const std::vector<Criterion>& results);
std::string to_json(const std::vector<Criterion>& results);

}  // namespace qamp::suite
