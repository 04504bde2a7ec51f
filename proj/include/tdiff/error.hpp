#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tdiff {

// Model parameters failed validation. Carries every problem found, not just the first.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

// A well-formed model was used outside the domain of a formula (e.g. q <= 0, wrong drift signs).
class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A computation left the range where double arithmetic is trustworthy.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tdiff
