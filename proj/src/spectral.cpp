#include "qmdos/spectral.hpp"

#include "qmdos/errors.hpp"

#include <algorithm>
#include <string>

namespace qmdos {

Spectrum::Spectrum(std::vector<BigRational> levels) : levels_(std::move(levels))
{
   if (levels_.size() < 2)
      throw parameter_error("a spectrum needs at least two levels");
   std::sort(levels_.begin(), levels_.end());
   if (std::adjacent_find(levels_.begin(), levels_.end()) != levels_.end())
      throw degenerate_spectrum_error("spectrum has repeated eigenvalues");
}

Spectrum Spectrum::linear(unsigned n)
{
   if (n == 0)
      throw parameter_error("linear spectrum needs n >= 1");
   std::vector<BigRational> levels;
   levels.reserve(n + 1);
   for (unsigned k = 0; k <= n; ++k)
      levels.emplace_back(BigInt(k), BigInt(n));
   return Spectrum(std::move(levels));
}

BigRational delta_int(const BigRational& x, unsigned n)
{
   if (n == 0)
      throw parameter_error("delta_int needs n >= 1");
   if (x < 0)
      return BigRational(0);
   return pow(x, n - 1) / BigRational(factorial(n - 1));
}

BigRational mu_general(const Spectrum& spectrum, const BigRational& E)
{
   const auto& levels = spectrum.levels();
   const unsigned n = spectrum.n();
   if (E < spectrum.min() || E > spectrum.max())
      return BigRational(0);

   BigRational sum = 0;
   for (unsigned k = 0; k <= n; ++k) {
      const BigRational x = levels[k] - E;
      if (x < 0 || (x == 0 && k == 0))
         continue;
      BigRational denom = 1;
      for (unsigned l = 0; l <= n; ++l)
         if (l != k)
            denom *= levels[l] - levels[k];
      sum += delta_int(x, n) / denom;
   }
   sum *= BigRational(factorial(n));
   return n % 2 == 0 ? sum : BigRational(-sum);
}

BigRational mu_linear(unsigned n, const BigRational& E)
{
   if (n == 0)
      throw parameter_error("mu_linear needs n >= 1");
   if (E < 0 || E > 1)
      throw domain_error("mu_linear: E = " + to_string(E) + " lies outside [0,1]");

   const BigInt& p = numerator(E);
   const BigInt& q = denominator(E);
   const BigInt last = std::min(floor(E * n), BigInt(n - 1));
   const unsigned kmax = last.convert_to<unsigned>();
   const std::vector<BigInt> binom = binomial_row(n);
   const BigInt np = p * n;

   // n! q^(n-1) mu / ((-1)^(n+1) n^2) as an integer
   BigInt sum = 0;
   for (unsigned k = 0; k <= kmax; ++k) {
      BigInt term = binom[k] * pow(BigInt(q * k - np), n - 1);
      if (k % 2 == 0)
         sum += term;
      else
         sum -= term;
   }
   BigRational mu(sum * n * n, factorial(n) * pow(q, n - 1));
   return n % 2 == 1 ? mu : BigRational(-mu);
}

BigRational evaluate_polynomial(std::span<const BigRational> coefficients, const BigRational& x)
{
   BigRational acc = 0;
   for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
      acc = acc * x + *it;
   return acc;
}

std::size_t PiecewisePolynomial::piece_index(const BigRational& E) const
{
   // first knot strictly greater than E, minus one; clamp at the right end
   const auto it = std::upper_bound(knots.begin(), knots.end(), E);
   const auto idx = static_cast<std::size_t>(it - knots.begin());
   return std::min(idx == 0 ? 0 : idx - 1, pieces.size() - 1);
}

BigRational PiecewisePolynomial::operator()(const BigRational& E) const
{
   if (E < knots.front() || E > knots.back())
      throw domain_error("piecewise polynomial evaluated outside its support at " + to_string(E));
   return evaluate_polynomial(pieces[piece_index(E)], E);
}

BigRational PiecewisePolynomial::integrate(const BigRational& a, const BigRational& b) const
{
   if (b < a)
      return -integrate(b, a);
   BigRational total = 0;
   for (std::size_t j = 0; j < pieces.size(); ++j) {
      const BigRational lo = std::max(a, knots[j]);
      const BigRational hi = std::min(b, knots[j + 1]);
      if (!(lo < hi))
         continue;
      // antiderivative sum_m c_m x^(m+1)/(m+1), differenced
      BigRational hi_pow = hi, lo_pow = lo, piece_sum = 0;
      for (std::size_t m = 0; m < pieces[j].size(); ++m) {
         if (pieces[j][m] != 0)
            piece_sum += pieces[j][m] * (hi_pow - lo_pow) / BigRational(m + 1);
         hi_pow *= hi;
         lo_pow *= lo;
      }
      total += piece_sum;
   }
   return total;
}

BigRational PiecewisePolynomial::integrate() const
{
   return integrate(knots.front(), knots.back());
}

PiecewisePolynomial piecewise_mu(unsigned n)
{
   if (n == 0)
      throw parameter_error("piecewise_mu needs n >= 1");

   PiecewisePolynomial result;
   result.knots.reserve(n + 1);
   for (unsigned j = 0; j <= n; ++j)
      result.knots.emplace_back(BigInt(j), BigInt(n));

   // Coefficient of E^m on piece j is scale[m] * partial[m], with
   //   partial[m] = sum_{k<=j} (-1)^k C(n,k) k^(n-1-m)   (0^0 = 1)
   //   scale[m]   = (-1)^(n+1) n^2 C(n-1,m) (-n)^m / n!
   const std::vector<BigInt> binom_n = binomial_row(n);
   const std::vector<BigInt> binom_m = binomial_row(n - 1);
   const BigInt n_fact = factorial(n);
   std::vector<BigRational> scale(n);
   BigInt neg_n_pow = 1;
   for (unsigned m = 0; m < n; ++m) {
      BigInt num = binom_m[m] * neg_n_pow * n * n;
      if (n % 2 == 0)
         num = -num;
      scale[m] = BigRational(num, n_fact);
      neg_n_pow *= -static_cast<long>(n);
   }

   std::vector<BigInt> partial(n, BigInt(0));
   std::vector<BigInt> k_pows(n);
   result.pieces.reserve(n);
   for (unsigned j = 0; j < n; ++j) {
      // k_pows[e] = j^e
      k_pows[0] = 1;
      for (unsigned e = 1; e < n; ++e)
         k_pows[e] = k_pows[e - 1] * j;
      for (unsigned m = 0; m < n; ++m) {
         const BigInt term = binom_n[j] * k_pows[n - 1 - m];
         if (j % 2 == 0)
            partial[m] += term;
         else
            partial[m] -= term;
      }
      std::vector<BigRational> coeffs(n);
      for (unsigned m = 0; m < n; ++m)
         coeffs[m] = scale[m] * partial[m];
      result.pieces.push_back(std::move(coeffs));
   }
   return result;
}

BigRational integrate_mu(unsigned n)
{
   if (n == 0)
      throw parameter_error("integrate_mu needs n >= 1");
   // On piece j every summand (k - nE)^(n-1) has antiderivative
   // -(k - nE)^n / n^2, so the integral of piece j is
   //   (-1)^n / n! * sum_{k<=j} (-1)^k C(n,k) [(k-j-1)^n - (k-j)^n]
   // and the whole computation stays in integers until the final division.
   const std::vector<BigInt> binom = binomial_row(n);
   std::vector<BigInt> powers(n + 2); // powers[d] = (-d)^n
   for (unsigned d = 0; d <= n + 1; ++d)
      powers[d] = pow(BigInt(-static_cast<long>(d)), n);

   BigInt total = 0;
   for (unsigned j = 0; j < n; ++j) {
      BigInt piece = 0;
      for (unsigned k = 0; k <= j; ++k) {
         const BigInt term = binom[k] * (powers[j + 1 - k] - powers[j - k]);
         if (k % 2 == 0)
            piece += term;
         else
            piece -= term;
      }
      total += piece;
   }
   BigRational result(total, factorial(n));
   return n % 2 == 0 ? result : BigRational(-result);
}

std::pair<BigInt, BigInt> discrete_difference_identity(unsigned n)
{
   if (n == 0)
      throw parameter_error("discrete_difference_identity needs n >= 1");
   const std::vector<BigInt> binom = binomial_row(n);
   BigInt lhs = 0;
   for (unsigned k = 0; k <= n; ++k) {
      const BigInt term = binom[k] * pow(BigInt(k), n);
      if (k % 2 == 0)
         lhs += term;
      else
         lhs -= term;
   }
   BigInt rhs = factorial(n);
   if (n % 2 == 1)
      rhs = -rhs;
   return {lhs, rhs};
}

} // namespace qmdos
