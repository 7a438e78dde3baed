#pragma once

#include <stdexcept>
#include <string>

namespace subordinate {

/// A state, parameter or jump size outside the domain of a process family.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Evaluation or composition past the end of a simulated trajectory.
class HorizonError : public std::out_of_range {
public:
    explicit HorizonError(const std::string& what) : std::out_of_range(what) {}
};

/// A numerical routine was asked to do something it cannot bound,
/// e.g. uniformization of an unbounded-rate process without a state cap.
class ConfigurationError : public std::invalid_argument {
public:
    explicit ConfigurationError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace subordinate
