#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmdos/errors.hpp"
#include "qmdos/spectral.hpp"
#include "test_support.hpp"

#include <random>

using namespace qmdos;

namespace {

BigRational R(long p, long q = 1)
{
   return BigRational(BigInt(p), BigInt(q));
}

// Three-level oracle: a flat distribution on the 2-simplex projects onto the
// triangular density with end points a < c and mode b.
BigRational triangular_density(const BigRational& a, const BigRational& b, const BigRational& c, const BigRational& E)
{
   if (E < a || E > c)
      return R(0);
   if (E <= b)
      return 2 * (E - a) / ((b - a) * (c - a));
   return 2 * (c - E) / ((c - b) * (c - a));
}

// Composite Simpson rule for mu_n on [0,1], knots aligned with the panels.
double simpson_integral(unsigned n, unsigned panels_per_piece)
{
   const unsigned panels = n * panels_per_piece * 2;
   double sum = 0;
   for (unsigned i = 0; i <= panels; ++i) {
      const double w = (i == 0 || i == panels) ? 1 : (i % 2 == 1 ? 4 : 2);
      sum += w * mu_linear(n, R(i, panels)).convert_to<double>();
   }
   return sum / (3.0 * panels);
}

} // namespace

TEST_CASE("Spectrum validation")
{
   CHECK_THROWS_AS(Spectrum({R(0), R(1, 2), R(1, 2)}), degenerate_spectrum_error);
   CHECK_THROWS_AS(Spectrum({R(1)}), parameter_error);
   const Spectrum unsorted({R(1), R(0), R(1, 3)});
   CHECK(unsorted.levels() == std::vector<BigRational>{R(0), R(1, 3), R(1)});
   CHECK(unsorted.n() == 2);
   const Spectrum lin = Spectrum::linear(4);
   CHECK(lin.levels() == std::vector<BigRational>{R(0), R(1, 4), R(1, 2), R(3, 4), R(1)});
   CHECK_THROWS_AS(Spectrum::linear(0), parameter_error);
}

TEST_CASE("delta_int")
{
   CHECK(delta_int(R(-1), 3) == 0);
   CHECK(delta_int(R(2), 3) == 2);
   CHECK(delta_int(R(0), 1) == 1);
   CHECK(delta_int(R(0), 2) == 0);
   CHECK(delta_int(R(3, 2), 4) == R(27, 8) / 6);
   CHECK_THROWS_AS(delta_int(R(1), 0), parameter_error);
}

TEST_CASE("mu_general examples")
{
   CHECK(mu_general(Spectrum({R(0), R(1)}), R(1, 4)) == 1);
   CHECK(mu_general(Spectrum({R(0), R(1, 2), R(1)}), R(1, 2)) == 2);
   CHECK(mu_general(Spectrum({R(0), R(1)}), R(2)) == 0);
   CHECK(mu_general(Spectrum({R(0), R(1)}), R(-1, 3)) == 0);
   // closed support for n = 1
   CHECK(mu_general(Spectrum({R(0), R(1)}), R(0)) == 1);
   CHECK(mu_general(Spectrum({R(0), R(1)}), R(1)) == 1);
}

TEST_CASE("mu_general matches the triangular density for three levels")
{
   std::mt19937_64 rng(11);
   for (int trial = 0; trial < 40; ++trial) {
      std::vector<BigRational> levels;
      while (levels.size() < 3) {
         const BigRational x = test::random_rational(rng, R(-3), R(3), 13);
         if (std::find(levels.begin(), levels.end(), x) == levels.end())
            levels.push_back(x);
      }
      const Spectrum s(levels);
      const auto& L = s.levels();
      for (int i = 0; i < 10; ++i) {
         const BigRational E = test::random_rational(rng, L[0] - 1, L[2] + 1, 29);
         REQUIRE(mu_general(s, E) == triangular_density(L[0], L[1], L[2], E));
      }
   }
}

TEST_CASE("mu_general transforms as a density under affine maps")
{
   std::mt19937_64 rng(5);
   for (int trial = 0; trial < 20; ++trial) {
      const unsigned n = 1 + trial % 6;
      std::vector<BigRational> levels;
      while (levels.size() < n + 1) {
         const BigRational x = test::random_rational(rng, R(0), R(4), 11);
         if (std::find(levels.begin(), levels.end(), x) == levels.end())
            levels.push_back(x);
      }
      const BigRational scale = test::random_rational(rng, R(1, 2), R(3), 7);
      const BigRational shift = test::random_rational(rng, R(-2), R(2), 7);
      std::vector<BigRational> moved;
      for (const auto& x : levels)
         moved.push_back(scale * x + shift);
      const Spectrum a(levels), b(moved);
      for (int i = 0; i < 5; ++i) {
         const BigRational E = test::random_rational(rng, a.min(), a.max(), 31);
         const BigRational lhs = mu_general(b, scale * E + shift) * scale;
         REQUIRE(lhs == mu_general(a, E));
         REQUIRE(mu_general(a, E) >= 0);
      }
   }
}

TEST_CASE("mu_linear examples")
{
   CHECK(mu_linear(1, R(1, 4)) == 1);
   CHECK(mu_linear(2, R(1, 4)) == 1);
   CHECK(mu_linear(2, R(1, 2)) == 2);
   CHECK(mu_linear(1, R(0)) == 1);
   CHECK(mu_linear(1, R(1)) == 1);
   CHECK(mu_linear(3, R(1, 2)) == R(9, 4));
}

TEST_CASE("mu_linear domain")
{
   CHECK_THROWS_AS(mu_linear(3, R(-1, 5)), domain_error);
   CHECK_THROWS_AS(mu_linear(3, R(6, 5)), domain_error);
   CHECK_THROWS_AS(mu_linear(0, R(1, 2)), parameter_error);
}

TEST_CASE("mu_linear for n = 2 is the triangle 4E, 4 - 4E")
{
   std::mt19937_64 rng(3);
   for (int i = 0; i < 200; ++i) {
      const BigRational E = test::random_rational(rng, R(0), R(1));
      const BigRational expected = E <= R(1, 2) ? 4 * E : 4 - 4 * E;
      REQUIRE(mu_linear(2, E) == expected);
   }
}

TEST_CASE("support: mu_n(0) = mu_n(1) = 0 for n >= 2")
{
   for (unsigned n = 2; n <= 30; ++n) {
      CHECK(mu_linear(n, R(0)) == 0);
      CHECK(mu_linear(n, R(1)) == 0);
   }
}

TEST_CASE("symmetry mu_n(E) = mu_n(1 - E), exact")
{
   std::mt19937_64 rng(17);
   for (unsigned n = 1; n <= 25; ++n)
      for (int i = 0; i < 12; ++i) {
         const BigRational E = test::random_rational(rng, R(0), R(1));
         REQUIRE(mu_linear(n, E) == mu_linear(n, 1 - E));
      }
}

TEST_CASE("consistency: mu_general on the linear spectrum equals mu_linear")
{
   std::mt19937_64 rng(23);
   for (unsigned n = 1; n <= 14; ++n) {
      const Spectrum s = Spectrum::linear(n);
      for (unsigned j = 0; j <= n; ++j)
         REQUIRE(mu_general(s, R(j, n)) == mu_linear(n, R(j, n)));
      for (int i = 0; i < 10; ++i) {
         const BigRational E = test::random_rational(rng, R(0), R(1));
         REQUIRE(mu_general(s, E) == mu_linear(n, E));
      }
   }
}

TEST_CASE("the unscaled summand summed over k = 0..n vanishes")
{
   // sum_k (-1)^k (k - E)^(n-1) / (k!(n-k)!) is an n-th difference of a
   // polynomial of degree n-1
   std::mt19937_64 rng(29);
   for (unsigned n = 1; n <= 12; ++n) {
      const FactorialTable fact(n);
      for (int i = 0; i < 8; ++i) {
         const BigRational E = test::random_rational(rng, R(-2), R(n + 2));
         BigRational sum = 0;
         for (unsigned k = 0; k <= n; ++k) {
            BigRational term = pow(BigRational(k - E), n - 1) / BigRational(fact[k] * fact[n - k]);
            sum += k % 2 == 0 ? term : BigRational(-term);
         }
         REQUIRE(sum == 0);
      }
   }
}

TEST_CASE("piecewise_mu examples")
{
   const auto p1 = piecewise_mu(1);
   REQUIRE(p1.pieces.size() == 1);
   CHECK(p1.pieces[0] == std::vector<BigRational>{R(1)});

   const auto p2 = piecewise_mu(2);
   REQUIRE(p2.pieces.size() == 2);
   CHECK(p2.knots == std::vector<BigRational>{R(0), R(1, 2), R(1)});
   CHECK(p2.pieces[0] == std::vector<BigRational>{R(0), R(4)});
   CHECK(p2.pieces[1] == std::vector<BigRational>{R(4), R(-4)});

   CHECK(piecewise_mu(3)(R(1, 2)) == mu_linear(3, R(1, 2)));
   CHECK_THROWS_AS(piecewise_mu(3)(R(3, 2)), domain_error);
   CHECK_THROWS_AS(piecewise_mu(0), parameter_error);
}

TEST_CASE("piecewise_mu agrees with mu_linear everywhere")
{
   std::mt19937_64 rng(31);
   for (unsigned n = 1; n <= 20; ++n) {
      const auto p = piecewise_mu(n);
      for (const auto& knot : p.knots)
         REQUIRE(p(knot) == mu_linear(n, knot));
      for (int i = 0; i < 10; ++i) {
         const BigRational E = test::random_rational(rng, R(0), R(1));
         REQUIRE(p(E) == mu_linear(n, E));
      }
   }
}

TEST_CASE("adjacent pieces agree at shared knots for n >= 2")
{
   for (unsigned n = 2; n <= 20; ++n) {
      const auto p = piecewise_mu(n);
      for (std::size_t j = 0; j + 1 < p.pieces.size(); ++j)
         REQUIRE(evaluate_polynomial(p.pieces[j], p.knots[j + 1]) ==
                 evaluate_polynomial(p.pieces[j + 1], p.knots[j + 1]));
   }
}

TEST_CASE("integrate_mu examples and normalization")
{
   CHECK(integrate_mu(1) == 1);
   CHECK(integrate_mu(2) == 1);
   CHECK(integrate_mu(50) == 1);
   for (unsigned n = 1; n <= 120; ++n)
      REQUIRE(integrate_mu(n) == 1);
   CHECK_THROWS_AS(integrate_mu(0), parameter_error);
}

TEST_CASE("both integration routes give exactly 1")
{
   for (unsigned n = 1; n <= 40; ++n)
      REQUIRE(piecewise_mu(n).integrate() == integrate_mu(n));
}

TEST_CASE("Simpson quadrature of mu_n is 1 to quadrature accuracy")
{
   // pieces are polynomials of degree n-1 <= 3, integrated exactly by Simpson
   for (unsigned n = 1; n <= 4; ++n)
      CHECK(simpson_integral(n, 2) == doctest::Approx(1.0).epsilon(1e-14));
   for (unsigned n = 5; n <= 12; ++n)
      CHECK(simpson_integral(n, 64) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("partial integrals over arbitrary windows")
{
   const auto p2 = piecewise_mu(2);
   CHECK(p2.integrate(R(0), R(1, 2)) == R(1, 2));
   CHECK(p2.integrate(R(1, 4), R(3, 4)) == R(3, 4));
   CHECK(p2.integrate(R(-1), R(2)) == 1);
   CHECK(p2.integrate(R(3, 4), R(1, 4)) == R(-3, 4));
}

TEST_CASE("discrete difference identity")
{
   CHECK(discrete_difference_identity(1) == std::pair<BigInt, BigInt>(-1, -1));
   CHECK(discrete_difference_identity(2) == std::pair<BigInt, BigInt>(2, 2));
   CHECK(discrete_difference_identity(3) == std::pair<BigInt, BigInt>(-6, -6));
   for (unsigned n = 1; n <= 120; ++n) {
      const auto [lhs, rhs] = discrete_difference_identity(n);
      REQUIRE(lhs == rhs);
   }
   CHECK_THROWS_AS(discrete_difference_identity(0), parameter_error);
}

TEST_CASE("peak height grows with n")
{
   BigRational previous = 0;
   for (unsigned n = 2; n <= 20; n += 2) {
      const BigRational peak = mu_linear(n, R(1, 2));
      CHECK(peak > previous);
      previous = peak;
   }
}
