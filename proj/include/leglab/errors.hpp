/**
 * @file errors.hpp
 * @brief Error types shared across the library.
 *
 * Three failure classes are distinguished so the CLI can map them to exit
 * codes: domain errors (bad arguments, std::domain_error), resource-bound
 * errors (a configured cap would be exceeded), and internal consistency
 * errors (two computations that must agree by theorem disagree — a bug).
 */

#pragma once

#include <stdexcept>
#include <string>

namespace leglab {

/// A configured cap (field size, loop bound, enumeration bound) would be
/// exceeded.  The caller may retry with a larger bound.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

/// Two independently computed quantities that are equal by theorem differ.
/// This always signals a bug in the library, never bad user input.
class consistency_error : public std::logic_error {
public:
    explicit consistency_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace leglab
