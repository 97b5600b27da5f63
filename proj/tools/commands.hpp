#pragma once

#include "config.hpp"

namespace redopt::cli {

// Exit codes: 0 success, 2 config error, 3 numerical failure,
// 4 shooting non-convergence, 5 verification failure.
int cmd_simulate(const Config& cfg, const std::string& out_dir);
int cmd_reduce_compare(const Config& cfg, const std::string& out_dir);
int cmd_shoot(const Config& cfg, const std::string& out_dir);
int cmd_verify(const Config& cfg, const std::string& out_dir);
int cmd_list();

}  // namespace redopt::cli
