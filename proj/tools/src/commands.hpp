#pragma once

#include "sievevar/intervals.hpp"
#include "sievevar/mc.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sievevar::app {

enum ExitCode : int { kOk = 0, kInternal = 1, kInputError = 2, kNumericalError = 3 };

/// Entry point shared by main() and in-process tests. `args` excludes the program name.
[[nodiscard]] int run_cli(const std::vector<std::string>& args, std::ostream& out,
                          std::ostream& err);

/// method,horizon,row,col,point,lower,upper
[[nodiscard]] std::string interval_csv(const std::vector<IntervalSet>& sets);
/// method,horizon,coverage,avg_length,replications,failures
[[nodiscard]] std::string mc_results_csv(const McSummary& summary);
/// method,horizon,row,col,coverage,avg_length
[[nodiscard]] std::string mc_entries_csv(const McSummary& summary);
/// method,horizon,kind,coverage
[[nodiscard]] std::string mc_flags_csv(const std::vector<CoverageFlag>& flags);

}  // namespace sievevar::app
