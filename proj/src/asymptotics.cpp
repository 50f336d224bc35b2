#include "qmdos/asymptotics.hpp"

#include "qmdos/detail/parallel.hpp"

namespace qmdos {

AlphaParam::AlphaParam(BigRational value) : value_(std::move(value))
{
   if (value_ < 2)
      throw parameter_error("alpha must be >= 2, got " + to_string(value_));
}

bool AlphaParam::admits(unsigned J) const
{
   return J > 0 && denominator(BigRational(value_ * J)) == 1;
}

unsigned AlphaParam::levels_for(unsigned J) const
{
   if (!admits(J))
      throw parameter_error("alpha J must be a positive integer (alpha = " + to_string(value_) +
                            ", J = " + std::to_string(J) + ")");
   return numerator(BigRational(value_ * J)).convert_to<unsigned>();
}

OmegaSum omega_sum(const AlphaParam& alpha, unsigned J)
{
   const unsigned n = alpha.levels_for(J);
   const std::vector<BigInt> binom = binomial_row(n);

   // sum_k (-1)^k C(n,k) (J-k)^(n-1), then scale by alpha^2 J^2 / n!
   BigInt sum = 0, largest = 0;
   for (unsigned k = 0; k <= J; ++k) {
      const BigInt term = binom[k] * pow(BigInt(J - k), n - 1);
      if (k % 2 == 0)
         sum += term;
      else
         sum -= term;
      if (term > largest)
         largest = term;
   }
   const BigRational scale = alpha.value() * alpha.value() * BigRational(BigInt(J) * J, factorial(n));
   return {scale * sum, scale * largest};
}

std::vector<std::pair<unsigned, OmegaSum>> omega_sums(const AlphaParam& alpha, std::vector<unsigned> Js)
{
   std::sort(Js.begin(), Js.end());
   Js.erase(std::unique(Js.begin(), Js.end()), Js.end());
   for (unsigned J : Js)
      (void)alpha.levels_for(J);

   std::vector<std::pair<unsigned, OmegaSum>> out(Js.size());
   detail::parallel_for(Js.size(), [&](std::size_t i) { out[i] = {Js[i], omega_sum(alpha, Js[i])}; });
   return out;
}

std::vector<unsigned> j_grid(unsigned start, unsigned stop, unsigned step)
{
   if (start == 0 || step == 0)
      throw parameter_error("j_grid: start and step must be positive");
   std::vector<unsigned> grid;
   for (unsigned J = start; J <= stop; J += step)
      grid.push_back(J);
   return grid;
}

} // namespace qmdos
