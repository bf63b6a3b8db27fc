#pragma once

#include <stdexcept>
#include <string>

namespace kh {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid input or precondition violation: wrong field, bad base polynomial,
// malformed text, division by zero, cardinality mismatch.  CLI exit code 2.
class config_error : public error {
public:
    explicit config_error(const std::string& msg) : error(msg) {}
};

// A computation ran out of certified data or exceeded a resource cap:
// truncated series exhausted, resolution beyond stored precision,
// discrepancy size cap, convergent index beyond the certified range.
// CLI exit code 3.
class precision_error : public error {
public:
    explicit precision_error(const std::string& msg) : error(msg) {}
};

} // namespace kh
