#pragma once

#include <string>

namespace bookreel::log {

/// Reads BOOKREEL_LOG (trace, debug, info, warn, error, off). Unset means warn.
void init_from_env();

void debug(const std::string& msg);
void info(const std::string& msg);
void warn(const std::string& msg);

}  // namespace bookreel::log
