#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sinai::cli {

/// Exit codes: 0 success, 1 invariant/IO failure, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sinai::cli
