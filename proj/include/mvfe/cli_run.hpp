#pragma once

// Command-line front end, separated from argv parsing for testability.

#include "mvfe/series.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace mvfe {

struct RunConfig {
    std::string command;  // solve | verify | table
    std::string model;    // coin | mbm | polyomino | lmr | file:<path>
    std::map<std::string, std::uint32_t> caps;
    std::map<std::string, long> params;       // model parameters (L, R)
    std::string format = "human";             // human | csv | json
    std::string out_path;                     // empty: write to `out`
    std::map<std::string, long> specialize;   // evaluated before output
    unsigned threads = 1;
    std::string rows_var = "x";               // table command axes
    std::string cols_var = "q";
};

// Executes the command, writing results to `out` (or config.out_path) and
// error messages to `err`. Returns the process exit code: 0 success,
// 1 verification failure, 2 input error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mvfe
