#ifndef QMDOS_ERRORS_HPP
#define QMDOS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qmdos {

/// Argument outside the mathematical domain of a function (E outside [0,1],
/// a pole of the saddle functions, ...).
class domain_error : public std::domain_error {
public:
   using std::domain_error::domain_error;
};

/// Malformed request: non-integral alpha*J, undersampled histogram, n mismatch.
class parameter_error : public std::invalid_argument {
public:
   using std::invalid_argument::invalid_argument;
};

/// Two or more equal eigenvalues; the density formula needs distinct levels.
class degenerate_spectrum_error : public std::invalid_argument {
public:
   using std::invalid_argument::invalid_argument;
};

/// Too few data points for an extrapolation or rate estimate.
class insufficient_data_error : public std::invalid_argument {
public:
   using std::invalid_argument::invalid_argument;
};

/// Data that cannot be used, e.g. a zero value where a logarithm is needed.
class degenerate_data_error : public std::invalid_argument {
public:
   using std::invalid_argument::invalid_argument;
};

/// Root finder could not bracket or converge.
class solver_error : public std::runtime_error {
public:
   using std::runtime_error::runtime_error;
};

} // namespace qmdos

#endif // QMDOS_ERRORS_HPP
