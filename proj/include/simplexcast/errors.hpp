#pragma once

#include <stdexcept>
#include <string>

namespace simplexcast {

// Error taxonomy mirrored by the CLI exit codes:
//   usage (1) is handled by the argument parser; the library throws the
//   three below for data problems, numerical failures, and sampler
//   convergence failures respectively.

class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace simplexcast
