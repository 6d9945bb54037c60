#pragma once

#include "mdcust/metagraph.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace mdcust {

// `args` excludes the program name. Exit codes: 0 ok, 1 domain failure,
// 2 input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// One line per triple, cells in (source, target) order, e.g.
//   x1 -> x3 : <{x2}, {x4}, <e1>>
std::string format_matrix(const TripleMatrix& m, const std::string& target_filter = {});

} // namespace mdcust
