// errors.hpp — Exception taxonomy shared by all modules.
//
// Mapping to CLI exit codes: config_error -> 2, the numeric family
// (truncation_error, convergence_error, contract_error, numeric_error) -> 3.

#pragma once

#include <stdexcept>
#include <string>

namespace rabicrit {

// Invalid configuration, schema violation, unknown preset/label.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Fock truncation insufficient or the +32 convergence probe failed.
struct truncation_error : std::runtime_error {
    explicit truncation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative procedure (integrator, steady-state search) did not converge.
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A documented precondition or invariant was violated by the caller.
struct contract_error : std::logic_error {
    explicit contract_error(const std::string& msg) : std::logic_error(msg) {}
};

// NaN/Inf inputs, overflow in a non-guarded evaluation path.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace rabicrit
