#include "qmdos/montecarlo.hpp"

#include "qmdos/detail/parallel.hpp"
#include "qmdos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmdos {

std::mt19937_64 substream_engine(std::uint64_t seed, std::uint64_t chunk)
{
   std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
   return std::mt19937_64(seq);
}

EnergySampler::EnergySampler(const Spectrum& spectrum)
{
   const BigRational width = spectrum.max() - spectrum.min();
   levels_.reserve(spectrum.levels().size());
   for (const auto& level : spectrum.levels())
      levels_.push_back(BigRational((level - spectrum.min()) / width).convert_to<double>());
}

EmpiricalDensity build_histogram(unsigned n, std::uint64_t N, unsigned bins, std::uint64_t seed)
{
   return build_histogram(Spectrum::linear(n), N, bins, seed);
}

EmpiricalDensity build_histogram(const Spectrum& spectrum, std::uint64_t N, unsigned bins, std::uint64_t seed)
{
   if (bins == 0)
      throw parameter_error("build_histogram: bins must be positive");
   if (N < std::uint64_t(bins) * 100)
      throw parameter_error("build_histogram: " + std::to_string(N) + " samples is fewer than 100 per bin for " +
                            std::to_string(bins) + " bins");

   const EnergySampler sampler(spectrum);
   const std::uint64_t chunks = (N + mc_chunk_size - 1) / mc_chunk_size;

   struct ChunkResult {
      std::vector<std::uint64_t> counts;
      double energy_sum = 0;
   };
   std::vector<ChunkResult> partial(chunks);
   detail::parallel_for(chunks, [&](std::size_t c) {
      auto engine = substream_engine(seed, c);
      const std::uint64_t begin = c * mc_chunk_size;
      const std::uint64_t end = std::min(N, begin + mc_chunk_size);
      ChunkResult& out = partial[c];
      out.counts.assign(bins, 0);
      for (std::uint64_t i = begin; i < end; ++i) {
         const double e = sampler(engine);
         out.energy_sum += e;
         const auto bin = std::min(static_cast<unsigned>(e * bins), bins - 1);
         ++out.counts[bin];
      }
   });

   EmpiricalDensity density;
   density.n = spectrum.n();
   density.sample_count = N;
   density.seed = seed;
   density.counts.assign(bins, 0);
   double energy_sum = 0;
   for (const auto& chunk : partial) {
      for (unsigned b = 0; b < bins; ++b)
         density.counts[b] += chunk.counts[b];
      energy_sum += chunk.energy_sum;
   }
   density.mean = energy_sum / static_cast<double>(N);
   density.bin_edges.resize(bins + 1);
   for (unsigned b = 0; b <= bins; ++b)
      density.bin_edges[b] = static_cast<double>(b) / bins;
   density.normalized_heights.resize(bins);
   const double norm = static_cast<double>(N) * density.bin_width();
   for (unsigned b = 0; b < bins; ++b)
      density.normalized_heights[b] = static_cast<double>(density.counts[b]) / norm;
   return density;
}

double mass_between(const EmpiricalDensity& density, double lo, double hi)
{
   std::uint64_t inside = 0;
   for (unsigned b = 0; b < density.bins(); ++b) {
      const double centre = 0.5 * (density.bin_edges[b] + density.bin_edges[b + 1]);
      if (centre >= lo && centre <= hi)
         inside += density.counts[b];
   }
   return static_cast<double>(inside) / static_cast<double>(density.sample_count);
}

std::vector<BigRational> exact_bin_averages(unsigned n, unsigned bins)
{
   if (bins == 0)
      throw parameter_error("exact_bin_averages: bins must be positive");
   const PiecewisePolynomial mu = piecewise_mu(n);
   std::vector<BigRational> averages(bins);
   for (unsigned b = 0; b < bins; ++b) {
      const BigRational lo{BigInt(b), BigInt(bins)};
      const BigRational hi{BigInt(b + 1), BigInt(bins)};
      averages[b] = mu.integrate(lo, hi) * bins;
   }
   return averages;
}

DensityComparison compare_density(const EmpiricalDensity& empirical, unsigned n, double tolerance)
{
   if (empirical.n != n)
      throw parameter_error("compare_density: histogram was built for n = " + std::to_string(empirical.n) +
                            ", compared against n = " + std::to_string(n));
   const unsigned bins = empirical.bins();
   const auto exact = exact_bin_averages(n, bins);

   DensityComparison report;
   report.tolerance = tolerance;
   report.degrees_of_freedom = bins - 1;
   report.exact_heights.reserve(bins);
   const double N = static_cast<double>(empirical.sample_count);
   for (unsigned b = 0; b < bins; ++b) {
      const double height = exact[b].convert_to<double>();
      report.exact_heights.push_back(height);
      report.sup_deviation = std::max(report.sup_deviation, std::abs(empirical.normalized_heights[b] - height));
      const double expected = N * height * empirical.bin_width();
      if (expected > 0) {
         const double diff = static_cast<double>(empirical.counts[b]) - expected;
         report.chi_square += diff * diff / expected;
      }
   }
   report.pass = report.sup_deviation <= tolerance;
   return report;
}

} // namespace qmdos
