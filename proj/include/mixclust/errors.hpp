#ifndef MIXCLUST_ERRORS_HPP
#define MIXCLUST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mixclust {

/// File/stream failures. CLI maps these to exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative solver did not converge within its cap. CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mixclust

#endif
