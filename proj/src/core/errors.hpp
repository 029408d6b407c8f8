#pragma once

#include <stdexcept>
#include <string>

namespace wsod {

// Mirrors the process exit codes: 1 = runtime failure, 2 = configuration or
// validation error.
enum class ErrorKind { runtime = 1, config = 2 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_runtime(const std::string& msg) { throw Error(ErrorKind::runtime, msg); }
[[noreturn]] inline void fail_config(const std::string& msg) { throw Error(ErrorKind::config, msg); }

inline void require_config(bool cond, const std::string& msg) {
    if (!cond) fail_config(msg);
}

inline void require_runtime(bool cond, const std::string& msg) {
    if (!cond) fail_runtime(msg);
}

}  // namespace wsod
