#pragma once

#include <stdexcept>
#include <string>

namespace relaycap {

// Parameter outside the domain of a rate expression.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// No grid point satisfies the feasibility predicate.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An objective returned NaN or an infinity; always a formula-domain bug upstream.
class NonFiniteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or non-stochastic input document.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace relaycap
