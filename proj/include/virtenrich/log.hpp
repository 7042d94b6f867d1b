#ifndef VIRTENRICH_LOG_HPP
#define VIRTENRICH_LOG_HPP

#include <string>

namespace virtenrich::log {

// Level comes from VIRT_ENRICH_LOG (error, info, debug); default is error.
void init_from_env();
void info(const std::string& message);
void debug(const std::string& message);
void error(const std::string& message);

}  // namespace virtenrich::log

#endif  // VIRTENRICH_LOG_HPP
