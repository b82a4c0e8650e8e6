/**
 * @file run.hpp
 * @brief Scenario execution: produces the CSV/JSON artifacts plus a
 *        manifest with the fully resolved parameters and checksums.
 *
 * Exit codes: 0 success, 3 internal invariant violation (e.g. calibration
 * failure), 4 unwritable output directory. Parse-time problems are the
 * caller's (exit 2 in the CLI).
 */

#ifndef CBW_RUN_HPP
#define CBW_RUN_HPP

#include <string>
#include <vector>

#include "cbw/scenario.hpp"

namespace cbw {

struct RunOutcome {
    int exit_code = 0;
    std::vector<std::string> artifacts;  ///< paths written (manifest last)
    std::string message;                 ///< failure detail when exit_code != 0
};

RunOutcome run_scenario(const Scenario& scenario);

}  // namespace cbw

#endif  // CBW_RUN_HPP
