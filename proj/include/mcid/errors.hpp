#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>

namespace mcid {

// Malformed arguments, unknown vertices, violated preconditions.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A size guard was exceeded (enumeration blowup, model caps).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No finite-cost solution exists.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A backend was requested that is not configured or not applicable.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A model or solution failed an independent check.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Illegal action passed to the intervention environment.
class ActionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TimeoutError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cooperative wall-clock limit checked inside long-running searches.
class Deadline {
public:
    using Clock = std::chrono::steady_clock;

    Deadline() = default;

    static Deadline after(std::chrono::milliseconds budget) {
        Deadline d;
        d.at_ = Clock::now() + budget;
        return d;
    }

    [[nodiscard]] bool expired() const { return at_ && Clock::now() >= *at_; }

    void check() const {
        if (expired()) throw TimeoutError("time limit exceeded");
    }

private:
    std::optional<Clock::time_point> at_;
};

}  // namespace mcid
