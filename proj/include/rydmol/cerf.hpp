#ifndef RYDMOL_CERF_HPP_
#define RYDMOL_CERF_HPP_

#include "rydmol/types.hpp"

namespace rydmol {

/// Error function of a complex argument.
///
/// Relative accuracy better than 1e-12 everywhere the value is representable
/// in double precision (|z| <= 1e6 away from the imaginary axis). Inside the
/// sliver around the imaginary axis where |erf| would overflow
/// (Im(z)^2 - Re(z)^2 > 650) a NumericalError is thrown.
Complex cerf(Complex z);

/// erfc(z) = 1 - cerf(z), same domain restrictions.
Complex cerfc(Complex z);

}  // namespace rydmol

#endif
