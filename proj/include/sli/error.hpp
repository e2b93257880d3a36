#pragma once

#include <stdexcept>
#include <string>

namespace sli {

// Violated precondition or misuse of an in-process contract.
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Corrupt or inconsistent game structure (unreachable state, truncation
// where an exact answer was requested, bad node data).
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problem too large for the requested computation mode.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tree-format parse failure with source location.
struct ParseError : std::runtime_error {
    ParseError(int line, int column, const std::string& what)
        : std::runtime_error("parse error at line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + what),
          line(line),
          column(column) {}

    int line;
    int column;
};

}  // namespace sli
