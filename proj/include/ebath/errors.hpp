#pragma once

#include <stdexcept>
#include <string>

namespace ebath {

// Invalid physical parameter or malformed input; message names the field.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation at a singular point (q = 0 and friends).
class singular_input_error : public std::invalid_argument {
public:
    explicit singular_input_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Quadrature / extrapolation / ODE failure. Carries the best estimate so a
// caller can decide whether to accept it anyway.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& msg, double best, double err)
        : std::runtime_error(msg), best_estimate(best), error_estimate(err) {}
    double best_estimate;
    double error_estimate;
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ebath
