#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace mpox {

// Raised when a rate expression breaks down (vanishing population denominators,
// invalid parameter domain). Carries the simulation time when known.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what, std::optional<double> time = std::nullopt)
        : std::runtime_error(what), time_(time) {}

    std::optional<double> time() const noexcept { return time_; }

private:
    std::optional<double> time_;
};

// A structural problem with a configuration document; `path` is a JSON path like $.sim.dt.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// A well-formed value that violates a model invariant (p outside [0,1], negative rate, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mpox
