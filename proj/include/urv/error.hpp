#ifndef URV_ERROR_HPP
#define URV_ERROR_HPP

#include <stdexcept>
#include <string>

namespace urv {

// Bad shapes, out-of-range parameters, non-finite entries.
class invalid_input : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Rank collapse, SVD sweep limit exceeded.
class numerical_failure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string& what)
{
    if (!cond) {
        throw invalid_input(what);
    }
}

} // namespace detail
} // namespace urv

#endif // URV_ERROR_HPP
