#pragma once

#include <stdexcept>
#include <string>

namespace asgem {

// Base for every error raised by the library. The CLI maps the concrete
// types onto process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument for a mathematical or physical operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class LookupError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), message_(what), line_(line) {}
    /// Rendered as "origin:line: what".
    ParseError(const std::string& origin, const std::string& what, int line)
        : Error(origin + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what), message_(what),
          line_(line) {}

    int line() const noexcept { return line_; }
    /// The message without location.
    const std::string& message() const noexcept { return message_; }

private:
    std::string message_;
    int line_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// The Stark beam sits on (or inside) a hyperfine resonance where the
// far-detuned expansion is meaningless.
class ResonanceError : public DomainError {
public:
    ResonanceError(const std::string& what, int twice_F, int twice_Fp)
        : DomainError(what), twice_F_(twice_F), twice_Fp_(twice_Fp) {}

    int twice_F() const noexcept { return twice_F_; }
    int twice_Fp() const noexcept { return twice_Fp_; }

private:
    int twice_F_;
    int twice_Fp_;
};

class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double t, double z)
        : Error(what), t_(t), z_(z) {}

    double t() const noexcept { return t_; }
    double z() const noexcept { return z_; }

private:
    double t_;
    double z_;
};

// The recorded window ends before the echo has decayed.
class TruncationError : public Error {
public:
    using Error::Error;
};

class CheckpointError : public Error {
public:
    using Error::Error;
};

} // namespace asgem
