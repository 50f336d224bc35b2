#ifndef QMDOS_MONTECARLO_HPP
#define QMDOS_MONTECARLO_HPP

// Sampling check of mu(E): draw pure states uniformly from the unit sphere
// of C^(n+1), record <H> = sum_k p_k E_k with p_k = |Z_k|^2 / sum_l |Z_l|^2,
// and histogram the result.
//
// Random streams are counter based: sample i belongs to chunk i / chunk_size
// and chunk c draws from its own engine seeded with (seed, c). Chunks are
// distributed over threads and their histograms summed, so the counts depend
// only on (seed, n, N, bins) and never on the thread count.

#include "qmdos/rational.hpp"
#include "qmdos/spectral.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace qmdos {

inline constexpr std::uint64_t mc_chunk_size = std::uint64_t(1) << 16;

/// Engine for substream `chunk` of the stream identified by `seed`.
std::mt19937_64 substream_engine(std::uint64_t seed, std::uint64_t chunk);

/// Draws <H> for uniformly distributed unit states. Levels are rescaled
/// affinely so that E_0 -> 0 and E_n -> 1.
class EnergySampler {
public:
   explicit EnergySampler(const Spectrum& spectrum);

   unsigned n() const { return static_cast<unsigned>(levels_.size() - 1); }

   /// One draw, from 2(n+1) standard normals (real and imaginary parts).
   template <class Engine>
   double operator()(Engine& engine) const
   {
      std::normal_distribution<double> normal;
      double weight_sum = 0, energy_sum = 0;
      for (double level : levels_) {
         const double re = normal(engine);
         const double im = normal(engine);
         const double p = re * re + im * im;
         weight_sum += p;
         energy_sum += p * level;
      }
      return energy_sum / weight_sum;
   }

   /// Squared-modulus weights p_0..p_n of one state (sum to 1).
   template <class Engine>
   std::vector<double> weights(Engine& engine) const
   {
      std::normal_distribution<double> normal;
      std::vector<double> p(levels_.size());
      double total = 0;
      for (double& w : p) {
         const double re = normal(engine);
         const double im = normal(engine);
         w = re * re + im * im;
         total += w;
      }
      for (double& w : p)
         w /= total;
      return p;
   }

private:
   std::vector<double> levels_;
};

template <class Engine>
double sample_energy(const Spectrum& spectrum, Engine& engine)
{
   return EnergySampler(spectrum)(engine);
}

struct EmpiricalDensity {
   unsigned n = 0;
   std::vector<double> bin_edges;
   std::vector<std::uint64_t> counts;
   /// counts / (N * bin_width)
   std::vector<double> normalized_heights;
   std::uint64_t sample_count = 0;
   std::uint64_t seed = 0;
   /// Sample mean of <H>.
   double mean = 0;

   unsigned bins() const { return static_cast<unsigned>(counts.size()); }
   double bin_width() const { return 1.0 / bins(); }
};

/// Histogram of N draws of <H> for the linear spectrum with n+1 levels.
/// Throws parameter_error when N < 100 * bins.
EmpiricalDensity build_histogram(unsigned n, std::uint64_t N, unsigned bins, std::uint64_t seed);

/// Same for an arbitrary spectrum (rescaled to [0,1]).
EmpiricalDensity build_histogram(const Spectrum& spectrum, std::uint64_t N, unsigned bins, std::uint64_t seed);

/// Fraction of samples in bins whose centres lie in [lo, hi].
double mass_between(const EmpiricalDensity& density, double lo, double hi);

/// Exact mean of mu_n over each of `bins` equal bins of [0,1], from the
/// antiderivatives of the polynomial pieces.
std::vector<BigRational> exact_bin_averages(unsigned n, unsigned bins);

struct DensityComparison {
   /// max over bins of |height - exact bin average|
   double sup_deviation = 0;
   double chi_square = 0;
   unsigned degrees_of_freedom = 0;
   double tolerance = 0;
   bool pass = false;
   std::vector<double> exact_heights;
};

/// Compares an empirical density with the exact mu_n. Throws
/// parameter_error if the histogram was built for a different n.
DensityComparison compare_density(const EmpiricalDensity& empirical, unsigned n, double tolerance = 0.05);

} // namespace qmdos

#endif // QMDOS_MONTECARLO_HPP
