#pragma once

// Library notices (fallbacks, dropped weights, retries). They go to the
// "qf" spdlog logger, whose level comes from QF_LOG, and are also kept so a
// caller can copy them into a report.

#include <string>
#include <vector>

namespace qf::log {

void notice(const std::string& message);
void debug(const std::string& message);

/// Notices recorded since the last call, oldest first.
std::vector<std::string> drain_notices();

/// Re-read QF_LOG (trace, debug, info, warn, error, off). Default: warn.
void configure_from_env();

}  // namespace qf::log
