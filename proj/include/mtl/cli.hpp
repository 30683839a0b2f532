#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace mtl {

// Runs one CLI invocation (args exclude the program name). Exit codes:
// 0 true/SAT/success, 1 false/UNSAT, 2 usage or format error, 3 budget exceeded.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in = std::cin);

}  // namespace mtl
