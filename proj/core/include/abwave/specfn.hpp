#pragma once

namespace abwave::specfn {

/// Dawson's integral D(x) = exp(-x^2) * int_0^x exp(t^2) dt.
///
/// Three branches: Maclaurin series near the origin, Rybicki's
/// exponentially convergent Gaussian sum in the middle, and the asymptotic
/// series for |x| >= 10. Exactly odd. Throws DomainError for NaN/inf.
double dawson(double x);

/// Imaginary error function erfi(x) = -i erf(ix) = 2/sqrt(pi) exp(x^2) D(x).
///
/// Throws DomainError for non-finite input and OverflowError once the
/// result leaves the double range (|x| > ~26.6).
double erfi(double x);

/// exp(-x^2) * erfi(x), evaluated without forming either factor.
/// Bounded by ~1.08 everywhere and ~1/(sqrt(pi) x) for large |x|.
double erfi_damped(double x);

}  // namespace abwave::specfn
