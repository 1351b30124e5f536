#ifndef WELLDIST_ERRORS_HPP
#define WELLDIST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace welldist {

// Precondition / contract failures (bad arguments, mismatched bases, ...).
class contract_violation : public std::invalid_argument {
public:
  explicit contract_violation(const std::string& what) : std::invalid_argument(what) {}
};

// Out-of-range index accesses (prime indices, stage indices, ...).
class index_error : public std::out_of_range {
public:
  explicit index_error(const std::string& what) : std::out_of_range(what) {}
};

// Exceeded a configured memory / size budget.
class resource_error : public std::runtime_error {
public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Conversion target cannot represent the value.
class float_overflow_error : public std::overflow_error {
public:
  explicit float_overflow_error(const std::string& what) : std::overflow_error(what) {}
};

// A certified tail bound was requested but no growth rule is declared.
class tail_bound_unavailable : public std::logic_error {
public:
  explicit tail_bound_unavailable(const std::string& what) : std::logic_error(what) {}
};

// Malformed or unreadable state / report files.
class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace welldist

#endif // WELLDIST_ERRORS_HPP
