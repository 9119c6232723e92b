#ifndef ELGRAT_CLI_HPP
#define ELGRAT_CLI_HPP

#include "elgrat/config.hpp"

namespace elgrat {

// Exact-solution oracle when one is known (flat surface at height zero under
// compressional incidence); empty otherwise.
ExactEvaluator exact_oracle(const Problem& problem);

// Execute one configured run and write its artifacts. Returns the process
// exit status: 0 on success, 2 when the adaptive loop stagnates, 1 on error.
// On error the partial MANIFEST notes the incompleteness.
int run(const RunConfig& config);

}  // namespace elgrat

#endif
