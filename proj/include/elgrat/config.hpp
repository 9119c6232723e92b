#ifndef ELGRAT_CONFIG_HPP
#define ELGRAT_CONFIG_HPP

#include <string>

#include "elgrat/adapt.hpp"

namespace elgrat {

enum class RunMode { Solve, Adapt, Study };

struct OutputConfig {
  std::string directory = "out";
  bool vtk = true;
  bool csv = true;
  bool matrix = false;
};

// A full run description, as read from a config file. See the README for the
// exact key grammar.
struct RunConfig {
  RunMode mode = RunMode::Adapt;
  Problem problem;
  AdaptConfig adapt;
  int study_levels = 4;  // study mode: meshes at h0 / 2^level
  OutputConfig output;
};

// Parse and fully validate a key = value config file. Unknown and duplicate
// keys are rejected; every diagnostic carries the file name and line number.
RunConfig load_config(const std::string& path);

}  // namespace elgrat

#endif
