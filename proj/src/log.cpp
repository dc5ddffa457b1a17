#include "qf/log.hpp"

#include <cstdlib>
#include <mutex>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

namespace qf::log {

namespace {

std::mutex mu;
std::vector<std::string> pending;

std::shared_ptr<spdlog::logger> logger() {
    static std::shared_ptr<spdlog::logger> lg = [] {
        auto l = spdlog::stderr_logger_mt("qf");
        l->set_pattern("[%l] %v");
        const char* env = std::getenv("QF_LOG");
        l->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
        return l;
    }();
    return lg;
}

}  // namespace

void notice(const std::string& message) {
    {
        std::lock_guard<std::mutex> lock(mu);
        if (pending.size() < 10000) pending.push_back(message);
    }
    logger()->info(message);
}

void debug(const std::string& message) { logger()->debug(message); }

std::vector<std::string> drain_notices() {
    std::lock_guard<std::mutex> lock(mu);
    std::vector<std::string> out;
    out.swap(pending);
    return out;
}

void configure_from_env() {
    const char* env = std::getenv("QF_LOG");
    logger()->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

}  // namespace qf::log
