#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qce/core_model.hpp"

namespace qce {

/// Entry point of the `qce` tool; args[0] is the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a:step:b" (inclusive), "a,b,c" or a single value.
std::vector<double> parse_number_list(const std::vector<std::string>& items);

/// JSON instance files: {"M", "L", "total_power", "symbols": [...],
/// "channel": [[[re, im], ...], ...]} with one inner list per user.
ProblemInstance load_instance(const std::string& path);
void save_instance(const ProblemInstance& instance, const std::string& path);

}  // namespace qce
