#ifndef QMDOS_ASYMPTOTICS_HPP
#define QMDOS_ASYMPTOTICS_HPP

// omega_J(alpha) = mu_{alpha J}(1/alpha)
//               = alpha^2 J^2 sum_{k=0}^{J} (-1)^k (J-k)^(alpha J - 1) / (k! (alpha J - k)!)
//
// For 2 <= alpha <= e the individual terms are exponentially large while the
// sum is O(sqrt J) (alpha = 2) or exponentially small (alpha > 2), so the
// sums are done in exact rational arithmetic and only projected to floating
// point afterwards. The projection type `Real` is a template parameter
// (default: 64-digit MPFR) because the magnitudes span hundreds of decades.

#include "qmdos/errors.hpp"
#include "qmdos/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace qmdos {

/// Rational alpha >= 2; E = 1/alpha, n = alpha J.
class AlphaParam {
public:
   explicit AlphaParam(BigRational value);

   const BigRational& value() const { return value_; }

   /// Whether alpha J is an integer.
   bool admits(unsigned J) const;

   /// n = alpha J; throws parameter_error if it is not a positive integer.
   unsigned levels_for(unsigned J) const;

private:
   BigRational value_;
};

/// Exact value of the omega sum together with its largest term in modulus.
struct OmegaSum {
   BigRational value;
   BigRational max_term;
};

OmegaSum omega_sum(const AlphaParam& alpha, unsigned J);

inline BigRational omega_j(const AlphaParam& alpha, unsigned J)
{
   return omega_sum(alpha, J).value;
}

/// Float projection of an exact rational. MPFR types round correctly.
template <class Real>
Real project(const BigRational& q)
{
   if constexpr (std::is_constructible_v<Real, BigRational>)
      return Real(q);
   else
      return q.template convert_to<Real>();
}

template <class Real = HighFloat>
struct SeriesRow {
   unsigned J;
   BigRational omega_exact;
   Real omega_float;
   /// max_k |term_k| of the same sum; the cancellation diagnostic.
   Real max_term_float;
};

template <class Real = HighFloat>
struct SeriesTable {
   AlphaParam alpha;
   std::vector<SeriesRow<Real>> rows;
};

/// Exact omega sums for every J; each J must satisfy alpha J in Z.
/// Duplicates are dropped and rows come out in increasing J.
std::vector<std::pair<unsigned, OmegaSum>> omega_sums(const AlphaParam& alpha, std::vector<unsigned> Js);

template <class Real = HighFloat>
SeriesTable<Real> build_series(const AlphaParam& alpha, std::vector<unsigned> Js)
{
   SeriesTable<Real> table{alpha, {}};
   for (auto& [J, sum] : omega_sums(alpha, std::move(Js))) {
      Real value = project<Real>(sum.value);
      Real max_term = project<Real>(sum.max_term);
      table.rows.push_back({J, std::move(sum.value), std::move(value), std::move(max_term)});
   }
   return table;
}

/// J = start, start + step, ..., <= stop.
std::vector<unsigned> j_grid(unsigned start, unsigned stop, unsigned step);

/// Extrapolates value(J) to J -> infinity assuming an asymptotic series in
/// 1/J, using the last `order + 1` points of the sequence (Neville's scheme
/// in x = 1/J evaluated at x = 0). Indices must be strictly increasing.
///
/// The update T' = T_j + (T_j - T_i) / (x_i/x_j - 1) leaves a constant
/// sequence unchanged bit for bit.
template <class Real>
Real richardson(std::span<const std::pair<unsigned, Real>> sequence, unsigned order)
{
   if (order == 0)
      throw parameter_error("richardson: order must be positive");
   if (sequence.size() <= order)
      throw insufficient_data_error("richardson: need more than " + std::to_string(order) + " points, have " +
                                    std::to_string(sequence.size()));
   for (std::size_t i = 1; i < sequence.size(); ++i)
      if (sequence[i].first <= sequence[i - 1].first)
         throw parameter_error("richardson: indices must be strictly increasing");

   const auto tail = sequence.subspan(sequence.size() - order - 1);
   std::vector<Real> t;
   t.reserve(tail.size());
   for (const auto& [index, value] : tail)
      t.push_back(value);

   // Column m of the tableau overwrites t[m..]; t[i] combines points i-m..i.
   for (unsigned m = 1; m <= order; ++m) {
      for (std::size_t i = tail.size() - 1; i >= m; --i) {
         // x_{i-m}/x_i = J_i / J_{i-m}
         const Real ratio = Real(tail[i].first) / Real(tail[i - m].first);
         t[i] = t[i] + (t[i] - t[i - 1]) / (ratio - Real(1));
      }
   }
   return t.back();
}

template <class Real>
Real richardson(const std::vector<std::pair<unsigned, Real>>& sequence, unsigned order)
{
   return richardson(std::span<const std::pair<unsigned, Real>>(sequence), order);
}

/// Exponential decay rate of |omega_J| from a table of at least three rows.
///
/// Adjacent rows give r = log(|w_J|/|w_J'|)/(J' - J), which for
/// w_J ~ C J^p e^{-f J} equals f - p/m + O(m^-3) at the midpoint m = (J+J')/2.
/// One Richardson step in 1/m over the last two r removes the 1/m term.
template <class Real>
Real measure_decay_rate(const SeriesTable<Real>& table)
{
   using std::abs;
   using std::log;
   const auto& rows = table.rows;
   if (rows.size() < 3)
      throw insufficient_data_error("measure_decay_rate: need at least 3 rows, have " + std::to_string(rows.size()));
   for (const auto& row : rows)
      if (row.omega_float == 0)
         throw degenerate_data_error("measure_decay_rate: omega_J is zero at J = " + std::to_string(row.J));

   std::vector<std::pair<unsigned, Real>> rates;
   for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      const Real log_ratio = log(Real(abs(rows[i].omega_float))) - log(Real(abs(rows[i + 1].omega_float)));
      // the index 2m = J + J' keeps the abscissa integral; 1/(2m) is a rescaled 1/m
      rates.emplace_back(rows[i].J + rows[i + 1].J, log_ratio / Real(rows[i + 1].J - rows[i].J));
   }
   return richardson(rates, 1);
}

/// max |term| / |omega| per row; infinity when omega is exactly zero.
template <class Real>
std::vector<std::pair<unsigned, Real>> cancellation_profile(const SeriesTable<Real>& table)
{
   using std::abs;
   if (table.rows.empty())
      throw insufficient_data_error("cancellation_profile: empty table");
   std::vector<std::pair<unsigned, Real>> profile;
   profile.reserve(table.rows.size());
   for (const auto& row : table.rows) {
      if (row.omega_float == 0)
         profile.emplace_back(row.J, std::numeric_limits<Real>::infinity());
      else
         profile.emplace_back(row.J, Real(row.max_term_float / abs(row.omega_float)));
   }
   return profile;
}

} // namespace qmdos

#endif // QMDOS_ASYMPTOTICS_HPP
