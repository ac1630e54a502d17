#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fpsum {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input could not be parsed (population spec, decimal literal, grid syntax).
struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

/// Rational arithmetic left the representable int64 range.
struct RationalOverflow : Error {
    explicit RationalOverflow(const std::string& what) : Error(what) {}
};

/// Normalizing variance is numerically zero; standardized quantities undefined.
struct ZeroVariance : Error {
    explicit ZeroVariance(const std::string& what) : Error(what) {}
};

/// n = N requested by a module that needs q > 0.
struct DegenerateDesign : Error {
    explicit DegenerateDesign(const std::string& what) : Error(what) {}
};

/// A score-only operation was applied to a population with random elements.
struct NotScorePopulation : Error {
    explicit NotScorePopulation(const std::string& what) : Error(what) {}
};

/// All scores coincide; b^2 = 0.
struct ZeroSpread : Error {
    explicit ZeroSpread(const std::string& what) : Error(what) {}
};

/// Expansion order outside the implemented range.
struct UnsupportedOrder : Error {
    explicit UnsupportedOrder(const std::string& what) : Error(what) {}
};

/// Adaptive quadrature could not reach its error target.
struct QuadratureFailure : Error {
    explicit QuadratureFailure(const std::string& what) : Error(what) {}
};

/// Multi-index enumeration would exceed the configured cap.
struct CombinatorialOverflow : Error {
    explicit CombinatorialOverflow(const std::string& what) : Error(what) {}
};

/// Dynamic-programming state space exceeds the configured budget.
struct BudgetExceeded : Error {
    BudgetExceeded(const std::string& what, std::size_t cells)
        : Error(what), state_cells(cells) {}
    std::size_t state_cells;
};

/// Exhaustive enumeration refused (population too large).
struct TooLarge : Error {
    explicit TooLarge(const std::string& what) : Error(what) {}
};

}  // namespace fpsum
