#pragma once

#include <stdexcept>
#include <string>

namespace trumor {

/// Caller supplied something outside an operation's domain.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Failure talking to an external service. `retriable()` separates
/// timeouts and connection failures from protocol errors.
class TransportError : public std::runtime_error {
public:
    TransportError(const std::string& what, bool retriable, int status = 0, std::string body = {})
        : std::runtime_error(what), retriable_(retriable), status_(status), body_(std::move(body)) {}

    bool retriable() const noexcept { return retriable_; }
    int status() const noexcept { return status_; }
    const std::string& body() const noexcept { return body_; }

private:
    bool retriable_;
    int status_;
    std::string body_;
};

}  // namespace trumor
