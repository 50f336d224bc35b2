#ifndef QMDOS_SPECTRAL_HPP
#define QMDOS_SPECTRAL_HPP

// Exact density of states mu(E) of the uniform measure on unit-norm pure
// states, for a nondegenerate spectrum E_0 < ... < E_n.
//
// For a general spectrum
//
//    mu(E) = (-1)^n n! sum_k delta_int(E_k - E, n) prod_{l != k} 1/(E_l - E_k)
//
// (the pi^n of the unnormalised density cancels against the volume pi^n/n!
// of the unit sphere, so no transcendental ever appears). For the rescaled
// linear spectrum E_k = k/n this reduces to
//
//    mu_n(E) = (-1)^(n+1) n^2 sum_{k=0}^{floor(nE)} (-1)^k (k - nE)^(n-1) / (k!(n-k)!)
//
// on E in [0,1]. Everything here is exact rational arithmetic.
//
// Knot convention: 0^0 = 1, so delta_int(0, 1) = 1. mu is supported on the
// closed interval [E_0, E_n]; at the lower end point the k = 0 term (which
// is only nonzero for n = 1) is dropped and at E = 1 the linear sum stops at
// k = n - 1. Both choices only matter for n = 1, where they make the density
// identically 1 on [0,1]; for n >= 2 mu is continuous and they change nothing.

#include "qmdos/rational.hpp"

#include <span>
#include <utility>
#include <vector>

namespace qmdos {

/// Distinct energy levels in increasing order, at least two of them.
class Spectrum {
public:
   /// Sorts the levels. Throws degenerate_spectrum_error on repeated levels
   /// and parameter_error when fewer than two levels are given.
   explicit Spectrum(std::vector<BigRational> levels);

   /// The rescaled linear spectrum {0, 1/n, ..., 1}.
   static Spectrum linear(unsigned n);

   /// Number of levels minus one.
   unsigned n() const { return static_cast<unsigned>(levels_.size() - 1); }
   const std::vector<BigRational>& levels() const { return levels_; }
   const BigRational& min() const { return levels_.front(); }
   const BigRational& max() const { return levels_.back(); }

private:
   std::vector<BigRational> levels_;
};

/// n-fold integral of the delta function: 0 for x < 0, x^(n-1)/(n-1)! for x >= 0.
BigRational delta_int(const BigRational& x, unsigned n);

/// Normalised density of states for an arbitrary nondegenerate spectrum.
BigRational mu_general(const Spectrum& spectrum, const BigRational& E);

/// Normalised density for the linear spectrum rescaled to [0,1].
/// Throws domain_error for E outside [0,1] and parameter_error for n = 0.
BigRational mu_linear(unsigned n, const BigRational& E);

/// Exact polynomial pieces of mu_n on the knots 0, 1/n, ..., 1.
///
/// pieces[j][m] is the coefficient of E^m on [j/n, (j+1)/n].
struct PiecewisePolynomial {
   std::vector<BigRational> knots;
   std::vector<std::vector<BigRational>> pieces;

   /// Index of the piece used at E (the right one at interior knots).
   std::size_t piece_index(const BigRational& E) const;

   /// Throws domain_error outside [knots.front(), knots.back()].
   BigRational operator()(const BigRational& E) const;

   /// Exact integral over [a, b], pieces clipped to the support.
   BigRational integrate(const BigRational& a, const BigRational& b) const;

   /// Exact integral over the whole support.
   BigRational integrate() const;
};

/// Horner evaluation of an exact polynomial.
BigRational evaluate_polynomial(std::span<const BigRational> coefficients, const BigRational& x);

PiecewisePolynomial piecewise_mu(unsigned n);

/// Exact integral of mu_n over [0,1] from the antiderivative of each summand
/// on each piece; equals 1. piecewise_mu(n).integrate() is an independent
/// route to the same number through the expanded coefficients.
BigRational integrate_mu(unsigned n);

/// (sum_k C(n,k) (-1)^k k^n, (-1)^n n!). The two entries are equal.
std::pair<BigInt, BigInt> discrete_difference_identity(unsigned n);

} // namespace qmdos

#endif // QMDOS_SPECTRAL_HPP
