#pragma once

#include <stdexcept>
#include <string>

namespace mlm {

/// Failure category. The CLI maps these onto its exit codes.
enum class ErrorKind { config, data, numerical };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void config_error(const std::string& what) {
    throw Error(ErrorKind::config, what);
}
[[noreturn]] inline void data_error(const std::string& what) {
    throw Error(ErrorKind::data, what);
}
[[noreturn]] inline void numerical_error(const std::string& what) {
    throw Error(ErrorKind::numerical, what);
}

}  // namespace mlm
