#pragma once

#include "bathyflow/config.hpp"

namespace bathyflow {

/// Documented exit codes of every command.
enum ExitCode {
    kOk = 0,
    kConfigError = 1,   // unreadable/invalid config or missing artifacts
    kValidation = 2,    // parameter validation failed (incl. degenerate NF)
    kDivergence = 3,    // hierarchy contraction lost
    kVerifyFailed = 4,  // a gating verification property failed
    kInternal = 5,      // unexpected failure
};

/// Leveled stderr logging, controlled by the BATHYFLOW_LOG environment
/// variable: debug | info | warn (default) | error | off.
void logmsg(int level, const std::string& msg);  // 0=debug 1=info 2=warn 3=error

int cmd_solve(const RunConfig& cfg, const std::string& out_dir);
int cmd_verify(const RunConfig& cfg, const std::string& out_dir);
int cmd_nf(const RunConfig& cfg, const std::string& out_dir);
int cmd_trace(const RunConfig& cfg, const std::string& out_dir);
int cmd_report(const std::string& out_dir);

}  // namespace bathyflow
