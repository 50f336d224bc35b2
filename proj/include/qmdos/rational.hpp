#ifndef QMDOS_RATIONAL_HPP
#define QMDOS_RATIONAL_HPP

// Exact scalar types shared by every module.
//
// BigInt and BigRational are GMP-backed; BigRational is always kept in
// lowest terms with a positive denominator (mpq canonical form), so
// equality comparison is structural.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qmdos {

using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
using BigRational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

/// Working precision for float projections of exact values (64 decimal digits).
using HighFloat =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<64>,
                                  boost::multiprecision::et_off>;

/// Parses "p", "p/q", or a finite decimal literal such as "2.5" into an
/// exact rational. Throws parameter_error on anything else (including q = 0).
BigRational parse_rational(std::string_view text);

/// "p/q" form, or "p" when the denominator is 1.
std::string to_string(const BigRational& q);

/// Decimal rendering with `digits` significant digits, locale independent.
std::string to_decimal(const BigRational& q, int digits);

/// floor(q) as an arbitrary-precision integer.
BigInt floor(const BigRational& q);

/// Table of exact factorials 0!, 1!, ..., n!.
class FactorialTable {
public:
   explicit FactorialTable(unsigned n);

   const BigInt& operator[](unsigned k) const { return table_.at(k); }
   unsigned size() const { return static_cast<unsigned>(table_.size()); }

   /// Binomial coefficient C(n, k) for k <= n <= size()-1; 0 for k > n.
   BigInt binomial(unsigned n, unsigned k) const;

private:
   std::vector<BigInt> table_;
};

/// Row n of Pascal's triangle, C(n, 0) ... C(n, n).
std::vector<BigInt> binomial_row(unsigned n);

BigInt factorial(unsigned n);

/// base^exp with the convention 0^0 = 1.
BigInt pow(const BigInt& base, unsigned exp);
BigRational pow(const BigRational& base, unsigned exp);

} // namespace qmdos

#endif // QMDOS_RATIONAL_HPP
