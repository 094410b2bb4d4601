#pragma once

#include <stdexcept>
#include <string>

namespace acrank {

// Input that violates a documented precondition (bad file, bad dimensions, ...).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Data that makes the requested statistic undefined (e.g. Y constant in sample).
class DegenerateDataError : public std::runtime_error {
public:
    explicit DegenerateDataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace acrank
