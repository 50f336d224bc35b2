#include "qmdos/rational.hpp"

#include "qmdos/errors.hpp"

#include <algorithm>
#include <cctype>
#include <ios>

namespace qmdos {

namespace {

bool all_digits(std::string_view s)
{
   return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

BigInt parse_integer(std::string_view s, std::string_view whole)
{
   bool negative = false;
   if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
      negative = s.front() == '-';
      s.remove_prefix(1);
   }
   if (!all_digits(s))
      throw parameter_error("not a rational literal: '" + std::string(whole) + "'");
   BigInt v{std::string(s)};
   return negative ? BigInt(-v) : v;
}

} // namespace

BigRational parse_rational(std::string_view text)
{
   if (const auto slash = text.find('/'); slash != std::string_view::npos) {
      const BigInt num = parse_integer(text.substr(0, slash), text);
      const BigInt den = parse_integer(text.substr(slash + 1), text);
      if (den == 0)
         throw parameter_error("zero denominator in '" + std::string(text) + "'");
      return BigRational(num, den);
   }
   if (const auto dot = text.find('.'); dot != std::string_view::npos) {
      const std::string_view frac = text.substr(dot + 1);
      std::string_view head = text.substr(0, dot);
      if (!all_digits(frac))
         throw parameter_error("not a rational literal: '" + std::string(text) + "'");
      const bool negative = !head.empty() && head.front() == '-';
      if (head.empty() || head == "-" || head == "+")
         head = negative ? "-0" : "0";
      const BigInt int_part = parse_integer(head, text);
      BigInt scale = pow(BigInt(10), static_cast<unsigned>(frac.size()));
      BigInt frac_part{std::string(frac)};
      BigInt num = abs(int_part) * scale + frac_part;
      return BigRational(negative ? BigInt(-num) : num, scale);
   }
   return BigRational(parse_integer(text, text));
}

std::string to_string(const BigRational& q)
{
   if (denominator(q) == 1)
      return numerator(q).str();
   return numerator(q).str() + "/" + denominator(q).str();
}

std::string to_decimal(const BigRational& q, int digits)
{
   if (q == 0)
      return "0";
   boost::multiprecision::mpfr_float f;
   f.precision(static_cast<unsigned>(digits) + 10);
   f = q;
   return f.str(digits, std::ios_base::fmtflags(0));
}

BigInt floor(const BigRational& q)
{
   BigInt quotient, remainder;
   const BigInt& num = numerator(q);
   const BigInt& den = denominator(q);
   mpz_fdiv_qr(quotient.backend().data(), remainder.backend().data(), num.backend().data(), den.backend().data());
   return quotient;
}

FactorialTable::FactorialTable(unsigned n)
{
   table_.reserve(n + 1);
   table_.emplace_back(1);
   for (unsigned k = 1; k <= n; ++k)
      table_.push_back(table_.back() * k);
}

BigInt FactorialTable::binomial(unsigned n, unsigned k) const
{
   if (k > n)
      return BigInt(0);
   return table_.at(n) / (table_.at(k) * table_.at(n - k));
}

std::vector<BigInt> binomial_row(unsigned n)
{
   std::vector<BigInt> row(n + 1);
   row[0] = 1;
   for (unsigned k = 1; k <= n; ++k)
      row[k] = row[k - 1] * (n - k + 1) / k;
   return row;
}

BigInt factorial(unsigned n)
{
   BigInt r;
   mpz_fac_ui(r.backend().data(), n);
   return r;
}

BigInt pow(const BigInt& base, unsigned exp)
{
   return boost::multiprecision::pow(base, exp);
}

BigRational pow(const BigRational& base, unsigned exp)
{
   return BigRational(pow(numerator(base), exp), pow(denominator(base), exp));
}

} // namespace qmdos
