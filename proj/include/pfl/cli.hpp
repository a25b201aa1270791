#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pfl {

/// Exit codes: 0 valid/true/passed, 1 invalid/false/countermodel,
/// 2 usage or input error, 3 budget exceeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pfl
