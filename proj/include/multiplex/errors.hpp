#pragma once

#include <stdexcept>
#include <string>

namespace multiplex {

/// Invalid model configuration (bad JSON, violated invariants).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Mathematical domain violation (argument outside the supported regime).
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Request exceeds a configured resource cap (grid size, row cap).
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Seed graph with no links in either layer.
struct ZeroLinkSeed : ConfigError {
    ZeroLinkSeed() : ConfigError("seed graph has no links in either layer") {}
};

/// Seed graph whose total fitness is zero.
struct ZeroFitnessSeed : ConfigError {
    ZeroFitnessSeed() : ConfigError("seed graph has zero total fitness") {}
};

/// A statistical check was requested on too small a sample.
struct InsufficientSample : std::runtime_error {
    explicit InsufficientSample(const std::string& what) : std::runtime_error(what) {}
};

/// Mean-vs-fitness fit needs at least three adequately populated fitness values.
struct InsufficientThetaDiversity : InsufficientSample {
    InsufficientThetaDiversity()
        : InsufficientSample("need >= 3 distinct fitness values with >= 500 nodes each") {}
};

}  // namespace multiplex
