#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "zlab/ball.hpp"
#include "zlab/context.hpp"

namespace zlab {

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 2 a FAIL verdict, 3 INCONCLUSIVE or DIVERGENT_CLASSICAL only, 64 usage
/// error, 65 domain error, 73 output file not writable.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Probe value tokens: a rational or decimal (1, 0.5, 1/3), pi, pi<k>,
/// zeta<k>, zeta<k>sq. Throws DomainError for anything else.
Ball named_value(const std::string& token, const PrecisionContext& ctx);

}  // namespace zlab
