#include "virtenrich/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <mutex>
#include <string_view>

namespace virtenrich::log {
namespace {

std::shared_ptr<spdlog::logger> logger() {
  static std::once_flag once;
  static std::shared_ptr<spdlog::logger> instance;
  std::call_once(once, [] {
    instance = spdlog::stderr_color_mt("virtenrich");
    instance->set_pattern("[%l] %v");
    instance->set_level(spdlog::level::err);
  });
  return instance;
}

}  // namespace

void init_from_env() {
  const char* env = std::getenv("VIRT_ENRICH_LOG");
  const std::string_view level = env ? env : "error";
  if (level == "debug") {
    logger()->set_level(spdlog::level::debug);
  } else if (level == "info") {
    logger()->set_level(spdlog::level::info);
  } else {
    logger()->set_level(spdlog::level::err);
  }
}

void info(const std::string& message) { logger()->info(message); }
void debug(const std::string& message) { logger()->debug(message); }
void error(const std::string& message) { logger()->error(message); }

}  // namespace virtenrich::log
