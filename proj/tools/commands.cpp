#include "commands.hpp"

#include "qmdos/asymptotics.hpp"
#include "qmdos/errors.hpp"
#include "qmdos/montecarlo.hpp"
#include "qmdos/saddle.hpp"
#include "qmdos/spectral.hpp"
#include "qmdos/detail/parallel.hpp"

#include <CLI11.hpp>

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <locale>
#include <map>
#include <sstream>

namespace qmdos::cli {

namespace {

using nlohmann::json;

std::string render(const BigRational& q, int digits)
{
   return to_decimal(q, digits);
}

std::string render(const HighFloat& x, int digits)
{
   return x.str(digits, std::ios_base::fmtflags(0));
}

std::string render(double x, int digits = 17)
{
   std::ostringstream os;
   os.imbue(std::locale::classic());
   os << std::setprecision(digits) << x;
   return os.str();
}

HighFloat sqrt_12_over_pi()
{
   return sqrt(HighFloat(12) / boost::math::constants::pi<HighFloat>());
}

unsigned points_or(const RunConfig& cfg, unsigned fallback)
{
   const unsigned points = cfg.points == 0 ? fallback : cfg.points;
   if (points < 2)
      throw parameter_error("--points must be at least 2");
   return points;
}

std::vector<BigRational> uniform_grid(unsigned points)
{
   std::vector<BigRational> grid;
   grid.reserve(points);
   for (unsigned i = 0; i < points; ++i)
      grid.emplace_back(BigInt(i), BigInt(points - 1));
   return grid;
}

/// mu_n on the grid, one column per n, evaluated in parallel.
std::vector<std::vector<BigRational>> density_columns(const std::vector<unsigned>& ns,
                                                      const std::vector<BigRational>& grid)
{
   std::vector<std::vector<BigRational>> columns(ns.size(), std::vector<BigRational>(grid.size()));
   detail::parallel_for(grid.size(), [&](std::size_t i) {
      for (std::size_t c = 0; c < ns.size(); ++c)
         columns[c][i] = mu_linear(ns[c], grid[i]);
   });
   return columns;
}

std::vector<unsigned> j_list(const RunConfig& cfg, unsigned default_step)
{
   const unsigned step = cfg.jstep == 0 ? default_step : cfg.jstep;
   const auto grid = j_grid(step, cfg.jmax, step);
   if (grid.empty())
      throw parameter_error("--jmax is smaller than the J step " + std::to_string(step));
   return grid;
}

struct Check {
   std::string name;
   bool pass = false;
   std::string residual;
   std::string detail;
};

} // namespace

void write_csv(std::ostream& out, const Table& table)
{
   auto write_row = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
         if (i)
            out << ',';
         const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
         if (quote) {
            out << '"';
            for (char ch : cells[i])
               out << (ch == '"' ? "\"\"" : std::string(1, ch));
            out << '"';
         } else {
            out << cells[i];
         }
      }
      out << '\n';
   };
   write_row(table.columns);
   for (const auto& row : table.rows)
      write_row(row);
}

json table_to_json(const Table& table)
{
   json rows = json::array();
   for (const auto& row : table.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < table.columns.size() && i < row.size(); ++i)
         obj[table.columns[i]] = row[i];
      rows.push_back(std::move(obj));
   }
   return {{"columns", table.columns}, {"rows", std::move(rows)}};
}

json config_echo(const RunConfig& cfg)
{
   return {{"command", cfg.command},
           {"n", cfg.n},
           {"alpha", cfg.alpha},
           {"jmax", cfg.jmax},
           {"jstep", cfg.jstep},
           {"order", cfg.order},
           {"max_n", cfg.max_n},
           {"points", cfg.points},
           {"samples", cfg.samples},
           {"bins", cfg.bins},
           {"seed", cfg.seed},
           {"precision_digits", cfg.precision_digits},
           {"tolerance", cfg.tolerance},
           {"richardson_tolerance", cfg.richardson_tolerance},
           {"format", cfg.format == Format::csv ? "csv" : "json"}};
}

CommandResult cmd_density(const RunConfig& cfg)
{
   const auto grid = uniform_grid(points_or(cfg, 101));
   const auto columns = density_columns({cfg.n}, grid);
   CommandResult result;
   result.table.columns = {"E", "mu"};
   for (std::size_t i = 0; i < grid.size(); ++i)
      result.table.rows.push_back({render(grid[i], cfg.precision_digits), render(columns[0][i], cfg.precision_digits)});
   return result;
}

CommandResult cmd_figure1(const RunConfig& cfg)
{
   const std::vector<unsigned> ns{3, 6, 9};
   const auto grid = uniform_grid(points_or(cfg, 501));
   const auto columns = density_columns(ns, grid);
   CommandResult result;
   result.table.columns = {"E", "mu_n3", "mu_n6", "mu_n9"};
   for (std::size_t i = 0; i < grid.size(); ++i) {
      std::vector<std::string> row{render(grid[i], cfg.precision_digits)};
      for (const auto& column : columns)
         row.push_back(render(column[i], cfg.precision_digits));
      result.table.rows.push_back(std::move(row));
   }
   json peaks = json::object();
   for (std::size_t c = 0; c < ns.size(); ++c)
      peaks["n" + std::to_string(ns[c])] = to_string(mu_linear(ns[c], BigRational(1, 2)));
   result.extra["peaks_at_half"] = peaks;
   return result;
}

CommandResult cmd_normalize(const RunConfig& cfg)
{
   CommandResult result;
   result.table.columns = {"n", "integral", "exact_one"};
   std::vector<BigRational> integrals(cfg.max_n);
   detail::parallel_for(cfg.max_n, [&](std::size_t i) { integrals[i] = integrate_mu(static_cast<unsigned>(i + 1)); });
   for (unsigned n = 1; n <= cfg.max_n; ++n) {
      const bool ok = integrals[n - 1] == 1;
      if (!ok)
         result.status = exit_verification_failed;
      result.table.rows.push_back({std::to_string(n), to_string(integrals[n - 1]), ok ? "true" : "false"});
   }
   return result;
}

CommandResult cmd_identity(const RunConfig& cfg)
{
   CommandResult result;
   result.table.columns = {"n", "lhs", "rhs", "equal"};
   for (unsigned n = 1; n <= cfg.max_n; ++n) {
      const auto [lhs, rhs] = discrete_difference_identity(n);
      if (lhs != rhs)
         result.status = exit_verification_failed;
      result.table.rows.push_back({std::to_string(n), lhs.str(), rhs.str(), lhs == rhs ? "true" : "false"});
   }
   return result;
}

CommandResult cmd_omega_series(const RunConfig& cfg)
{
   const AlphaParam alpha(parse_rational(cfg.alpha));
   const unsigned step = denominator(alpha.value()).convert_to<unsigned>();
   const auto table = build_series(alpha, j_list(cfg, step));
   const auto profile = cancellation_profile(table);
   CommandResult result;
   result.table.columns = {"J", "n", "omega", "omega_over_sqrt_J", "max_term", "cancellation_ratio", "omega_exact"};
   for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const auto& row = table.rows[i];
      result.table.rows.push_back({std::to_string(row.J), std::to_string(alpha.levels_for(row.J)),
                                   render(row.omega_float, cfg.precision_digits),
                                   render(HighFloat(row.omega_float / sqrt(HighFloat(row.J))), cfg.precision_digits),
                                   render(row.max_term_float, cfg.precision_digits),
                                   render(profile[i].second, cfg.precision_digits), to_string(row.omega_exact)});
   }
   return result;
}

CommandResult cmd_richardson(const RunConfig& cfg)
{
   const AlphaParam alpha(parse_rational(cfg.alpha));
   const auto table = build_series(alpha, j_list(cfg, 4));
   std::vector<std::pair<unsigned, HighFloat>> sequence;
   json seq = json::array();
   for (const auto& row : table.rows) {
      sequence.emplace_back(row.J, row.omega_float / sqrt(HighFloat(row.J)));
      seq.push_back({{"J", row.J}, {"omega_over_sqrt_J", render(sequence.back().second, cfg.precision_digits)}});
   }
   const HighFloat reference = alpha.value() == 2 ? sqrt_12_over_pi() : HighFloat(0);
   CommandResult result;
   result.table.columns = {"order", "estimate", "reference", "abs_error"};
   for (unsigned order = 1; order <= cfg.order; ++order) {
      const HighFloat estimate = richardson(sequence, order);
      result.table.rows.push_back({std::to_string(order), render(estimate, cfg.precision_digits),
                                   render(reference, cfg.precision_digits),
                                   render(HighFloat(abs(estimate - reference)), 6)});
   }
   result.extra["sequence"] = std::move(seq);
   return result;
}

CommandResult cmd_saddle(const RunConfig& cfg)
{
   const HighFloat alpha = project<HighFloat>(parse_rational(cfg.alpha));
   const auto s = solve_saddle(alpha);
   const auto g = g_prefactor(s.lambda0, alpha, 1u);
   CommandResult result;
   result.table.columns = {"alpha",          "lambda0",     "f_lambda0",          "f_second_lambda0",
                           "f_prime_residual", "predicted_rate", "g_over_J_imag", "prefactor_alpha2"};
   const int d = cfg.precision_digits;
   result.table.rows.push_back({render(alpha, d), render(s.lambda0, d), render(s.f_at_saddle, d),
                                render(s.f_second_at_saddle, d), render(HighFloat(abs(f_prime(s.lambda0, alpha))), 6),
                                render(s.predicted_rate, d), render(HighFloat(g.imag()), d),
                                s.prefactor_alpha2 ? render(*s.prefactor_alpha2, d) : std::string()});
   return result;
}

CommandResult cmd_montecarlo(const RunConfig& cfg)
{
   const auto empirical = build_histogram(cfg.n, cfg.samples, cfg.bins, cfg.seed);
   const auto report = compare_density(empirical, cfg.n, cfg.tolerance);
   CommandResult result;
   result.table.columns = {"bin_lo", "bin_hi", "count", "height", "exact"};
   for (unsigned b = 0; b < empirical.bins(); ++b)
      result.table.rows.push_back({render(BigRational(BigInt(b), BigInt(cfg.bins)), 15),
                                   render(BigRational(BigInt(b + 1), BigInt(cfg.bins)), 15),
                                   std::to_string(empirical.counts[b]), render(empirical.normalized_heights[b], 12),
                                   render(report.exact_heights[b], 12)});
   result.extra["comparison"] = {{"sup_deviation", report.sup_deviation},
                                 {"chi_square", report.chi_square},
                                 {"degrees_of_freedom", report.degrees_of_freedom},
                                 {"tolerance", report.tolerance},
                                 {"pass", report.pass},
                                 {"sample_mean", empirical.mean}};
   result.status = report.pass ? exit_ok : exit_verification_failed;
   return result;
}

CommandResult cmd_verify_all(const RunConfig& cfg)
{
   std::vector<Check> checks;
   const std::vector<BigRational> probes{BigRational(0),    BigRational(1, 7), BigRational(1, 4), BigRational(1, 3),
                                         BigRational(2, 5), BigRational(1, 2), BigRational(5, 8), BigRational(1)};

   {
      unsigned failures = 0;
      for (unsigned n = 1; n <= cfg.max_n; ++n)
         failures += integrate_mu(n) != 1;
      checks.push_back({"normalization", failures == 0, std::to_string(failures) + " failing n",
                        "integral of mu_n over [0,1] equals 1 exactly for n = 1.." + std::to_string(cfg.max_n)});
   }
   {
      const unsigned top = std::min(cfg.max_n, 30u);
      unsigned failures = 0;
      for (unsigned n = 1; n <= top; ++n)
         failures += piecewise_mu(n).integrate() != 1;
      checks.push_back({"normalization_piecewise_route", failures == 0, std::to_string(failures) + " failing n",
                        "integral of the expanded polynomial pieces for n = 1.." + std::to_string(top)});
   }
   {
      unsigned failures = 0;
      for (unsigned n = 1; n <= cfg.max_n; ++n) {
         const auto [lhs, rhs] = discrete_difference_identity(n);
         failures += lhs != rhs;
      }
      checks.push_back({"discrete_difference_identity", failures == 0, std::to_string(failures) + " failing n",
                        "sum C(n,k)(-1)^k k^n = (-1)^n n! for n = 1.." + std::to_string(cfg.max_n)});
   }
   {
      const unsigned top = std::min(cfg.max_n, 25u);
      unsigned failures = 0;
      for (unsigned n = 1; n <= top; ++n)
         for (const auto& E : probes)
            failures += mu_linear(n, E) != mu_linear(n, BigRational(1 - E));
      checks.push_back({"symmetry", failures == 0, std::to_string(failures) + " mismatches",
                        "mu_n(E) = mu_n(1-E) at probe energies, n = 1.." + std::to_string(top)});
   }
   {
      const unsigned top = std::min(cfg.max_n, 12u);
      unsigned failures = 0;
      for (unsigned n = 1; n <= top; ++n) {
         const Spectrum spectrum = Spectrum::linear(n);
         for (const auto& E : probes)
            failures += mu_general(spectrum, E) != mu_linear(n, E);
      }
      checks.push_back({"general_linear_bridge", failures == 0, std::to_string(failures) + " mismatches",
                        "mu_general on {0,1/n,...,1} equals mu_linear, n = 1.." + std::to_string(top)});
   }
   {
      const std::vector<std::pair<BigRational, std::vector<unsigned>>> cases{
          {BigRational(2), {1, 2, 3, 4, 5, 6, 7, 8}},
          {BigRational(5, 2), {2, 4, 6}},
          {BigRational(3), {1, 2, 3, 4, 5}},
          {BigRational(4), {1, 2, 3, 4}}};
      unsigned failures = 0;
      for (const auto& [a, Js] : cases) {
         const AlphaParam alpha(a);
         for (unsigned J : Js)
            failures += omega_j(alpha, J) != mu_linear(alpha.levels_for(J), BigRational(1 / a));
      }
      checks.push_back({"omega_mu_bridge", failures == 0, std::to_string(failures) + " mismatches",
                        "omega_J(alpha) = mu_{alpha J}(1/alpha) exactly"});
   }
   {
      double worst = 0;
      for (int ix = -8; ix <= 8; ++ix)
         for (int iy = -8; iy <= 8; ++iy) {
            const std::complex<double> lambda(ix / 4.0, iy / 4.0);
            worst = std::max(worst, parametric_pair(lambda).residual);
         }
      checks.push_back({"parametric_residual", worst < 1e-10, render(worst, 6),
                        "max |s e^r - r e^s| over a 17x17 grid in |Re|,|Im| <= 2"});
   }
   {
      const AlphaParam alpha(2);
      const auto table = build_series(alpha, j_grid(4, cfg.jmax, 4));
      std::vector<std::pair<unsigned, HighFloat>> sequence;
      for (const auto& row : table.rows)
         sequence.emplace_back(row.J, row.omega_float / sqrt(HighFloat(row.J)));
      const HighFloat estimate = richardson(sequence, 4);
      const HighFloat error = abs(estimate - sqrt_12_over_pi());
      checks.push_back({"richardson_constant", error <= cfg.richardson_tolerance, render(error, 6),
                        "order-4 estimate " + render(estimate, 15) + " vs 2 sqrt(3)/sqrt(pi) = " +
                            render(sqrt_12_over_pi(), 15) + " (reported 1.9544100476)"});
   }
   {
      const auto s = solve_saddle(HighFloat(2));
      const HighFloat second_err = abs(s.f_second_at_saddle + HighFloat(2) / 3);
      const auto g = g_prefactor(HighFloat(0), HighFloat(2), 7u);
      const HighFloat g_err = abs(HighFloat(g.imag() + HighFloat(14) / boost::math::constants::pi<HighFloat>()));
      const bool ok = s.lambda0 == 0 && s.f_at_saddle == 0 && second_err < 1e-12 && g_err < 1e-12 && abs(g.real()) < 1e-12;
      checks.push_back({"saddle_alpha2", ok, render(HighFloat(std::max(second_err, g_err)), 6),
                        "lambda0 = 0, f = 0, f'' = -2/3, g(0) = -2iJ/pi"});
   }
   {
      const auto table = build_series(AlphaParam(3), j_grid(10, 60, 10));
      const HighFloat measured = measure_decay_rate(table);
      const HighFloat predicted = solve_saddle(HighFloat(3)).predicted_rate;
      const HighFloat rel = abs(measured - predicted) / predicted;
      checks.push_back({"decay_rate_alpha3", rel < 0.02, render(rel, 6),
                        "measured " + render(measured, 10) + " vs f(lambda0) = " + render(predicted, 10)});
   }

   CommandResult result;
   result.table.columns = {"check", "status", "residual", "detail"};
   bool all = true;
   json list = json::array();
   for (const auto& c : checks) {
      all = all && c.pass;
      result.table.rows.push_back({c.name, c.pass ? "pass" : "fail", c.residual, c.detail});
      list.push_back({{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}, {"detail", c.detail}});
   }
   result.extra["checks"] = std::move(list);
   result.extra["all_pass"] = all;
   result.status = all ? exit_ok : exit_verification_failed;
   return result;
}

CommandResult dispatch(const RunConfig& cfg)
{
   if (cfg.command == "density")
      return cmd_density(cfg);
   if (cfg.command == "figure1")
      return cmd_figure1(cfg);
   if (cfg.command == "normalize")
      return cmd_normalize(cfg);
   if (cfg.command == "identity")
      return cmd_identity(cfg);
   if (cfg.command == "omega-series")
      return cmd_omega_series(cfg);
   if (cfg.command == "richardson")
      return cmd_richardson(cfg);
   if (cfg.command == "saddle")
      return cmd_saddle(cfg);
   if (cfg.command == "montecarlo")
      return cmd_montecarlo(cfg);
   if (cfg.command == "verify-all")
      return cmd_verify_all(cfg);
   throw parameter_error("unknown command '" + cfg.command + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
   RunConfig cfg;
   CLI::App app{"Exact density of states of the quantum microcanonical ensemble", "qmdos"};
   app.require_subcommand(1, 1);

   const std::vector<std::pair<std::string, std::string>> commands{
       {"density", "mu_n(E) on a uniform grid of [0,1]"},
       {"figure1", "mu_3, mu_6, mu_9 on a shared grid"},
       {"normalize", "exact integral of mu_n for n = 1..max-n"},
       {"identity", "n-th discrete difference of k^n for n = 1..max-n"},
       {"omega-series", "exact omega_J(alpha) with cancellation diagnostics"},
       {"richardson", "Richardson limit of omega_J(alpha)/sqrt(J)"},
       {"saddle", "real saddle point of the phase function"},
       {"montecarlo", "histogram of <H> over random pure states vs exact mu_n"},
       {"verify-all", "run every identity check and report"}};

   const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};
   CLI::Option* format_opt = nullptr;
   for (const auto& [name, help] : commands) {
      CLI::App* sub = app.add_subcommand(name, help);
      sub->callback([&cfg, name = name] { cfg.command = name; });
      sub->add_option("--n", cfg.n, "number of levels minus one")->check(CLI::PositiveNumber);
      sub->add_option("--alpha", cfg.alpha, "alpha as an exact rational, e.g. 5/2");
      sub->add_option("--jmax", cfg.jmax, "largest J")->check(CLI::PositiveNumber);
      sub->add_option("--jstep", cfg.jstep, "J spacing")->check(CLI::PositiveNumber);
      sub->add_option("--order", cfg.order, "Richardson order")->check(CLI::PositiveNumber);
      sub->add_option("--max-n", cfg.max_n, "largest n for normalize/identity/verify-all")->check(CLI::PositiveNumber);
      sub->add_option("--points", cfg.points, "grid points including both end points")->check(CLI::PositiveNumber);
      sub->add_option("--samples", cfg.samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
      sub->add_option("--bins", cfg.bins, "histogram bins")->check(CLI::PositiveNumber);
      sub->add_option("--seed", cfg.seed, "random seed");
      sub->add_option("--precision-digits", cfg.precision_digits, "significant digits in output")
          ->check(CLI::Range(1, 1000));
      sub->add_option("--tolerance", cfg.tolerance, "sup-norm tolerance for montecarlo")->check(CLI::PositiveNumber);
      sub->add_option("--richardson-tol", cfg.richardson_tolerance, "tolerance of the Richardson check in verify-all")
          ->check(CLI::NonNegativeNumber);
      sub->add_option("-o,--output", cfg.output_path, "output file (default: stdout or $QMDOS_OUTPUT_DIR)");
      auto* opt = sub->add_option("--format", cfg.format, "csv or json")
                      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
      if (name == "verify-all")
         format_opt = opt;
   }

   try {
      app.parse(argc, argv);
   } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? exit_ok : exit_usage;
   }
   if (cfg.command == "verify-all" && format_opt && format_opt->count() == 0)
      cfg.format = Format::json;

   CommandResult result;
   try {
      (void)parse_rational(cfg.alpha);
      result = dispatch(cfg);
   } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << '\n';
      return exit_usage;
   } catch (const std::domain_error& e) {
      err << "error: " << e.what() << '\n';
      return exit_usage;
   } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return exit_verification_failed;
   }

   std::string path = cfg.output_path;
   if (path.empty()) {
      if (const char* dir = std::getenv("QMDOS_OUTPUT_DIR"); dir && *dir)
         path = (std::filesystem::path(dir) / (cfg.command + (cfg.format == Format::csv ? ".csv" : ".json"))).string();
   }
   std::ofstream file;
   if (!path.empty()) {
      file.open(path);
      if (!file) {
         err << "error: cannot open output file '" << path << "'\n";
         return exit_usage;
      }
   }
   std::ostream& sink = path.empty() ? out : file;
   sink.imbue(std::locale::classic());
   if (cfg.format == Format::csv) {
      write_csv(sink, result.table);
   } else {
      json doc = table_to_json(result.table);
      doc["config"] = config_echo(cfg);
      for (auto& [key, value] : result.extra.items())
         doc[key] = value;
      doc["status"] = result.status;
      sink << doc.dump(2) << '\n';
   }
   if (!sink) {
      err << "error: failed writing output\n";
      return exit_usage;
   }
   return result.status;
}

} // namespace qmdos::cli
