#pragma once

#include <stdexcept>
#include <string>

namespace eon {

/// Malformed input file (topology, config, replay workload).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a model invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoPathError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// NLI power reached or exceeded the launch power of a channel.
class NonPhysicalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfBandError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace eon
