#pragma once

#include <stdexcept>
#include <string>

namespace riskfrac {

// Input violates a documented precondition (bad fraction, malformed
// distribution, unknown option).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A weighted objective that cannot be maximized on [0, 1).
class invalid_objective : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An exhaustive route would exceed its configured work cap.
class cap_exceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Trades cannot be mapped onto a bounded integer lattice, so the
// partial-sum dynamic program is unavailable.
class no_integer_scaling : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace riskfrac
