#ifndef QMDOS_SADDLE_HPP
#define QMDOS_SADDLE_HPP

// Steepest-descent apparatus for the large-J behaviour of omega_J(alpha).
//
// After the contour-integral rewrite, omega_J(alpha) = oint g(l) exp(-J f(l)) dl
// with
//
//    f(l)  = log(l e^l / sinh l) + (alpha - 1) log(l e^-l / sinh l)
//    f'(l) = 2 - alpha + alpha (1/l - coth l)
//    g(l)  = alpha J sinh l (1 - l - l/tanh l) / (i pi (sinh l - l e^l))
//
// The functions are templates on the scalar so the same code runs for
// double, std::complex<double> and the Boost.Multiprecision real and complex
// types (mpfr, cpp_bin_float, cpp_complex). Elementary functions are found
// by ADL. Near l = 0 every function switches to a power series with no
// cancelling terms.

#include "qmdos/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>

namespace qmdos {

namespace detail {

using std::abs;

template <class Scalar>
using real_of_t = std::decay_t<decltype(abs(std::declval<Scalar>()))>;

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class Scalar>
constexpr bool is_complex_v =
    is_complex<Scalar>::value || !std::is_same_v<Scalar, real_of_t<Scalar>>;

/// Radius below which the series branches are used.
template <class Scalar>
real_of_t<Scalar> series_radius()
{
   return real_of_t<Scalar>(1) / 1000;
}

/// Enough terms for |l| < 1e-3 at any precision up to about 100 digits.
inline constexpr int series_terms = 18;

/// sinh(l)/l = sum_k l^(2k)/(2k+1)!
template <class Scalar>
Scalar sinhc_series(const Scalar& l)
{
   const Scalar l2 = l * l;
   Scalar term(1), sum(1);
   for (int k = 1; k <= series_terms; ++k) {
      term *= l2 / Scalar((2 * k) * (2 * k + 1));
      sum += term;
   }
   return sum;
}

/// (sinh l - l)/l^3 = sum_{k>=1} l^(2k-2)/(2k+1)!
template <class Scalar>
Scalar sinh_minus_l_series(const Scalar& l)
{
   const Scalar l2 = l * l;
   Scalar term(Scalar(1) / Scalar(6)), sum = term;
   for (int k = 2; k <= series_terms; ++k) {
      term *= l2 / Scalar((2 * k) * (2 * k + 1));
      sum += term;
   }
   return sum;
}

/// (l cosh l - sinh l)/l^3 = sum_{k>=1} 2k l^(2k-2)/(2k+1)!
template <class Scalar>
Scalar lcosh_minus_sinh_series(const Scalar& l)
{
   const Scalar l2 = l * l;
   Scalar fact(Scalar(1) / Scalar(6)), sum = Scalar(2) * fact;
   for (int k = 2; k <= series_terms; ++k) {
      fact *= l2 / Scalar((2 * k) * (2 * k + 1));
      sum += Scalar(2 * k) * fact;
   }
   return sum;
}

/// log(1 + u) for |u| well below 1e-5.
template <class Scalar>
Scalar log1p_small(const Scalar& u)
{
   Scalar power = u, sum(0);
   for (int m = 1; m <= 2 * series_terms; ++m) {
      sum += (m % 2 == 1 ? power : Scalar(-power)) / Scalar(m);
      power *= u;
   }
   return sum;
}

template <class Scalar>
bool is_tiny(const Scalar& l)
{
   return abs(l) < series_radius<Scalar>();
}

/// True when sinh(l) vanishes at l != 0, i.e. l = i pi k for an integer k != 0.
template <class Scalar>
bool at_sinh_zero(const Scalar& l)
{
   using R = real_of_t<Scalar>;
   if constexpr (!is_complex_v<Scalar>) {
      (void)l;
      return false;
   } else {
      using std::real;
      using std::imag;
      using std::round;
      const R pi = boost::math::constants::pi<R>();
      const R re = real(l);
      const R im = imag(l);
      const R k = round(R(im / pi));
      const R tol = 64 * std::numeric_limits<R>::epsilon() * (1 + abs(im));
      return k != 0 && abs(re) <= tol && abs(R(im - k * pi)) <= tol;
   }
}

template <class Scalar>
void check_pole(const Scalar& l, const char* what)
{
   if (at_sinh_zero(l))
      throw domain_error(std::string(what) + ": sinh(lambda) = 0 at a nonzero lambda");
}

} // namespace detail

/// Phase function f(l). Uses log(l/sinh l) = -log(sinh(l)/l) as a series near 0,
/// where f(l) = (2 - alpha) l - alpha l^2/6 + O(l^4).
template <class Scalar, class Alpha>
Scalar f_phase(const Scalar& lambda, const Alpha& alpha)
{
   using std::exp;
   using std::log;
   using std::sinh;
   const Scalar a(alpha);
   if (detail::is_tiny(lambda)) {
      const Scalar log_ratio = -detail::log1p_small(Scalar(detail::sinhc_series(lambda) - Scalar(1)));
      return (Scalar(2) - a) * lambda + a * log_ratio;
   }
   detail::check_pole(lambda, "f_phase");
   const Scalar sh = sinh(lambda);
   return log(Scalar(lambda * exp(lambda) / sh)) + (a - Scalar(1)) * log(Scalar(lambda * exp(-lambda) / sh));
}

/// 1/l - coth l, with the series -l/3 + l^3/45 - ... near 0.
template <class Scalar>
Scalar inv_minus_coth(const Scalar& lambda)
{
   using std::tanh;
   if (detail::is_tiny(lambda))
      return -lambda * detail::lcosh_minus_sinh_series(lambda) / detail::sinhc_series(lambda);
   detail::check_pole(lambda, "inv_minus_coth");
   return Scalar(1) / lambda - Scalar(1) / tanh(lambda);
}

template <class Scalar, class Alpha>
Scalar f_prime(const Scalar& lambda, const Alpha& alpha)
{
   const Scalar a(alpha);
   return Scalar(2) - a + a * inv_minus_coth(lambda);
}

/// f''(l) = alpha (1/sinh^2 l - 1/l^2); equals -alpha/3 at l = 0.
template <class Scalar, class Alpha>
Scalar f_second(const Scalar& lambda, const Alpha& alpha)
{
   using std::sinh;
   const Scalar a(alpha);
   if (detail::is_tiny(lambda)) {
      // (l^2 - sinh^2 l)/(l^2 sinh^2 l) = -(sinh l - l)/l^3 * (1 + sinh l/l) / (sinh l/l)^2
      const Scalar s = detail::sinhc_series(lambda);
      return -a * detail::sinh_minus_l_series(lambda) * (Scalar(1) + s) / (s * s);
   }
   detail::check_pole(lambda, "f_second");
   const Scalar sh = sinh(lambda);
   return a * (Scalar(1) / (sh * sh) - Scalar(1) / (lambda * lambda));
}

/// Prefactor g(l) of the Laplace-form integrand.
///
/// g = -i (alpha J / pi) N(l)/D(l) with N = sinh l (1 - l - l/tanh l) and
/// D = sinh l - l e^l. The ratio is formed in `Scalar` arithmetic; for a real
/// scalar the result is returned as std::complex<Scalar> (purely imaginary).
/// Near 0 numerator and denominator are both O(l^2) and the common l^2 is
/// divided out of their series before forming the ratio. A denominator that
/// evaluates to exactly zero away from the origin is reported as a domain error.
template <class Scalar, class Alpha>
auto g_prefactor(const Scalar& lambda, const Alpha& alpha, unsigned J)
{
   using std::exp;
   using std::sinh;
   using std::tanh;
   using R = detail::real_of_t<Scalar>;
   const R coefficient = -R(alpha) * R(J) / boost::math::constants::pi<R>();

   Scalar ratio;
   if (detail::is_tiny(lambda)) {
      // sinh l (1 - l) - l cosh l = (sinh l - l cosh l) - l sinh l = -l^3 C - l^2 S
      // sinh l - l e^l = (sinh l - l) - l (e^l - 1) = l^3 Sm - l^2 E1
      const Scalar S = detail::sinhc_series(lambda);
      const Scalar C = detail::lcosh_minus_sinh_series(lambda);
      const Scalar Sm = detail::sinh_minus_l_series(lambda);
      Scalar E1(1), term(1); // (e^l - 1)/l = sum l^j/(j+1)!
      for (int j = 1; j <= 2 * detail::series_terms; ++j) {
         term *= lambda / Scalar(j + 1);
         E1 += term;
      }
      ratio = (-S - lambda * C) / (lambda * Sm - E1);
   } else {
      detail::check_pole(lambda, "g_prefactor");
      const Scalar sh = sinh(lambda);
      const Scalar den = sh - lambda * exp(lambda);
      if (den == Scalar(0))
         throw domain_error("g_prefactor: sinh(lambda) - lambda e^lambda vanishes");
      ratio = sh * (Scalar(1) - lambda - lambda / tanh(lambda)) / den;
   }
   if constexpr (detail::is_complex_v<Scalar>) {
      return Scalar(R(0), coefficient) * ratio;
   } else {
      return std::complex<Scalar>(Scalar(0), coefficient * ratio);
   }
}

/// One point of the parametric family r = l e^-l / sinh l, s = l e^l / sinh l
/// that solves s e^r = r e^s with r != s.
template <class Complex>
struct ParametricPair {
   Complex lambda;
   Complex r;
   Complex s;
   /// |s e^r - r e^s|
   detail::real_of_t<Complex> residual;
};

template <class Complex>
ParametricPair<Complex> parametric_pair(const Complex& lambda)
{
   using std::abs;
   using std::exp;
   using std::sinh;
   ParametricPair<Complex> p{lambda, Complex(1), Complex(1), {}};
   if (lambda != Complex(0)) {
      detail::check_pole(lambda, "parametric_pair");
      // l / sinh l, via the series near the removable point
      const Complex ratio =
          detail::is_tiny(lambda) ? Complex(Complex(1) / detail::sinhc_series(lambda)) : Complex(lambda / sinh(lambda));
      p.r = ratio * exp(-lambda);
      p.s = ratio * exp(lambda);
   }
   p.residual = abs(Complex(p.s * exp(p.r) - p.r * exp(p.s)));
   return p;
}

/// Real saddle point of f and the quantities derived from it.
template <class Real>
struct SaddleResult {
   Real alpha;
   Real lambda0;
   Real f_at_saddle;
   Real f_second_at_saddle;
   /// Exponential decay rate of omega_J(alpha): f(lambda0).
   Real predicted_rate;
   /// Leading coefficient of omega_J(2) ~ c sqrt(J); only for alpha = 2.
   std::optional<Real> prefactor_alpha2;
   int iterations = 0;
};

/// Gaussian steepest-descent coefficient at a saddle with f(l0) = 0:
/// omega_J ~ |g(l0)| sqrt(2 pi / (J |f''(l0)|)), divided by sqrt(J).
template <class Real>
Real gaussian_prefactor(const Real& alpha, const Real& lambda0)
{
   using std::abs;
   using std::sqrt;
   const Real pi = boost::math::constants::pi<Real>();
   using std::imag;
   const Real g_per_J = abs(Real(imag(g_prefactor(lambda0, alpha, 1u))));
   return g_per_J * sqrt(Real(2) * pi / abs(f_second(lambda0, alpha)));
}

/// Solves f'(l) = 0 on the real axis for alpha >= 2.
///
/// alpha = 2 gives l0 = 0 exactly. For alpha > 2 the root lies on the
/// negative axis (1/l - coth l < 0 for l > 0); it is bracketed in
/// [-10, -1e-6] and refined by safeguarded Newton steps using f''.
template <class Real>
SaddleResult<Real> solve_saddle(const Real& alpha)
{
   using std::abs;
   if (alpha < 2)
      throw parameter_error("solve_saddle needs alpha >= 2");

   SaddleResult<Real> res;
   res.alpha = alpha;
   if (alpha == 2) {
      res.lambda0 = Real(0);
      res.f_at_saddle = f_phase(res.lambda0, alpha);
      res.f_second_at_saddle = f_second(res.lambda0, alpha);
      res.predicted_rate = res.f_at_saddle;
      res.prefactor_alpha2 = gaussian_prefactor(alpha, res.lambda0);
      return res;
   }

   Real lo(-10), hi = Real(-1) / Real(1000000);
   Real f_lo = f_prime(lo, alpha), f_hi = f_prime(hi, alpha);
   if ((f_lo > 0) == (f_hi > 0)) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "solve_saddle: no sign change of f' in bracket [-10, -1e-6] for alpha = " << alpha;
      throw solver_error(msg.str());
   }

   const Real tol = 4 * std::numeric_limits<Real>::epsilon();
   Real x = (lo + hi) / 2;
   int it = 0;
   for (; it < 500; ++it) {
      const Real fx = f_prime(x, alpha);
      if (fx == 0)
         break;
      if ((fx > 0) == (f_lo > 0)) {
         lo = x;
         f_lo = fx;
      } else {
         hi = x;
      }
      const Real step = fx / f_second(x, alpha);
      Real next = x - step;
      if (!(next > lo && next < hi))
         next = (lo + hi) / 2;
      if (abs(Real(next - x)) <= tol * (1 + abs(x))) {
         x = next;
         break;
      }
      x = next;
   }
   res.lambda0 = x;
   res.iterations = it;
   res.f_at_saddle = f_phase(x, alpha);
   res.f_second_at_saddle = f_second(x, alpha);
   res.predicted_rate = res.f_at_saddle;
   return res;
}

/// Leading asymptotic estimate of omega_J(alpha).
///
/// alpha = 2: c sqrt(J) with c from the Gaussian saddle integral.
/// alpha > 2: exp(-f(l0) J), the rate only; the prefactor is not known.
template <class Real>
Real predict_omega(const Real& alpha, unsigned J)
{
   using std::exp;
   using std::sqrt;
   const SaddleResult<Real> s = solve_saddle(alpha);
   if (s.prefactor_alpha2)
      return *s.prefactor_alpha2 * sqrt(Real(J));
   return exp(-s.predicted_rate * Real(J));
}

} // namespace qmdos

#endif // QMDOS_SADDLE_HPP
