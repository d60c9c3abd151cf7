#pragma once

#include <stdexcept>
#include <string>

namespace escwind {

// Argument outside the physical or tabulated domain (negative wind speed,
// tip-speed ratio outside the Cp surface, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A Cp surface that cannot be used: no unique interior maximum, Betz limit
// violated, malformed table.
class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Root finding failed (no equilibrium inside the search bracket, unstable root).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration values or malformed configuration text.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, int line = 0, const std::string& source = {})
        : std::runtime_error((source.empty() ? std::string() : source + ": ") +
                             (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                             what),
          line_(line), message_(what) {}

    int line() const noexcept { return line_; }
    // The message without the line prefix.
    const std::string& message() const noexcept { return message_; }

private:
    int line_;
    std::string message_;
};

// The ESC loop received a sample it cannot process; the loop must halt.
class EscFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Closed-loop simulation aborted; carries the model time of the failure.
class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, double time)
        : std::runtime_error("t = " + std::to_string(time) + " s: " + what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace escwind
