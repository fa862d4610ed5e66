#ifndef TTAGG_ERRORS_HPP_
#define TTAGG_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ttagg {

// Bad input: shapes, ranges, malformed configuration.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Dense oracle refused because N^d exceeds the element budget.
class BudgetExceeded : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Non-finite values or other breakdowns during time stepping.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ttagg

#endif // TTAGG_ERRORS_HPP_
