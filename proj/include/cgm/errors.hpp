#pragma once

#include <stdexcept>
#include <string>

namespace cgm {

// Error hierarchy used across the simulator and the algorithms.
// Everything derives from error so callers can catch the whole family.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Machine shape violates the configured n/p relation, or an experiment
// spec is inconsistent.
class config_error : public error {
public:
    explicit config_error(const std::string& what) : error(what) {}
};

// Processor index out of range.
class index_error : public error {
public:
    explicit index_error(const std::string& what) : error(what) {}
};

// Rank k outside 1..n.
class rank_error : public error {
public:
    explicit rank_error(const std::string& what) : error(what) {}
};

// Reduction or selection over no elements.
class empty_error : public error {
public:
    explicit empty_error(const std::string& what) : error(what) {}
};

// A data element is not a member of the declared support set.
class support_violation_error : public error {
public:
    explicit support_violation_error(const std::string& what) : error(what) {}
};

// Numeric argument outside its domain (t <= 0, key outside [0,1], ...).
class domain_error : public error {
public:
    explicit domain_error(const std::string& what) : error(what) {}
};

} // namespace cgm
