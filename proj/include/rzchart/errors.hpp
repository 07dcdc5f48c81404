#pragma once

#include <stdexcept>
#include <string>

namespace rzchart {

// Bad parameters or malformed input (maps to CLI exit 1, HTTP 400).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Valid-looking input outside the domain where the math is defined
// (maps to CLI exit 2, HTTP 422).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Operation not allowed in the current run state, e.g. ingesting into a
// completed run (HTTP 409).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rzchart
