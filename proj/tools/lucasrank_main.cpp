// Command-line front end: parses flags into a RunConfig and hands off to
// lucas::run. All computation lives in the headers so tests can drive the
// same code paths in-process.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "lucas/cli.hpp"

namespace {

struct Cli {
  lucas::RunConfig cfg;
  std::string format = "json";
  double epsilon = 0.0;
  bool epsilon_set = false;
};

void add_common(CLI::App* cmd, Cli& c) {
  cmd->add_option("--a1", c.cfg.a1, "first recurrence coefficient");
  cmd->add_option("--a2", c.cfg.a2, "second recurrence coefficient");
  cmd->add_option("--output", c.cfg.output, "write records to this file");
  cmd->add_option("--format", c.format, "report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--threads", c.cfg.threads,
                  "worker threads (0 = LUCASRANK_THREADS or hardware)");
  cmd->add_flag("--timing", c.cfg.timing,
                "measure runtime_ms (default stamps 0 for reproducible output)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lucas sequence rank-of-appearance toolkit"};
  app.require_subcommand(1);
  Cli c;

  auto* rank = app.add_subcommand("rank", "z, ell and L of a single m");
  rank->add_option("--m", c.cfg.m, "evaluation point")->required();
  add_common(rank, c);

  auto* sieve = app.add_subcommand("sieve", "build and save a prime rank table");
  sieve->add_option("--limit", c.cfg.limit, "tabulate primes up to this bound")
      ->required();
  sieve->add_option("--out-table", c.cfg.out_table, "output path")->required();
  add_common(sieve, c);

  auto* qgamma = app.add_subcommand("qgamma", "count primes of small rank");
  qgamma->add_option("--x", c.cfg.x, "count primes <= x (default 1000)");
  qgamma->add_option("--gamma", c.cfg.gamma, "rank exponent in (0, 1] (default 1/3)");
  qgamma->add_option("--rank-table", c.cfg.rank_table, "use this saved table");
  add_common(qgamma, c);

  auto* moments = app.add_subcommand("moments", "sum of g(n)^k up to x");
  moments->add_option("--x", c.cfg.x, "upper limit (default 1000)");
  moments->add_option("--k", c.cfg.k, "moment order (default 1)");
  add_common(moments, c);

  auto* logm = app.add_subcommand("logmoments",
                                  "sum of (log g(n))^lambda with decade means");
  logm->add_option("--x", c.cfg.x, "upper limit (default 1000)");
  logm->add_option("--lambda", c.cfg.lambda, "log-moment order (default 1)");
  add_common(logm, c);

  auto* dist = app.add_subcommand("dist", "count n <= x with g(n) > y");
  dist->add_option("--x", c.cfg.x, "upper limit (default 1000)");
  dist->add_option("--y", c.cfg.y, "threshold (default 2)");
  add_common(dist, c);

  auto* tails_ell = app.add_subcommand("tails-ell", "partial tail of sum 1/ell");
  auto* tails_L = app.add_subcommand("tails-L", "partial tail of sum 1/L");
  for (auto* t : {tails_ell, tails_L}) {
    t->add_option("--x", c.cfg.x, "tail starts past x (default 100)");
    t->add_option("--X", c.cfg.horizon, "summation horizon (default 100*x)");
    t->add_option("--epsilon", c.epsilon, "slack in the reference curve")
        ->each([&c](const std::string&) { c.epsilon_set = true; });
    t->add_flag("--exact", c.cfg.exact, "carry an exact rational total (<= 10^4 terms)");
    t->add_option("--rank-table", c.cfg.rank_table, "use this saved table");
    add_common(t, c);
  }

  auto* part = app.add_subcommand("partition",
                                  "classify n <= x by greatest prime factor");
  part->add_option("--x", c.cfg.x, "upper limit (default 10000)");
  part->add_option("--k", c.cfg.k, "mass moment order (default 1)");
  part->add_option("--y", c.cfg.y,
                   "smoothness cut (default exp(sqrt(log x log log x)/2))");
  part->add_option("--rank-table", c.cfg.rank_table, "use this saved table");
  add_common(part, c);

  auto* ratio = app.add_subcommand("ratio-density",
                                   "density of n with L(n) > C * ell(n)");
  ratio->add_option("--x", c.cfg.x, "upper limit (default 1000)");
  ratio->add_option("--C", c.cfg.C, "ratio threshold (default 2)");
  ratio->add_option("--rank-table", c.cfg.rank_table, "use this saved table");
  add_common(ratio, c);

  auto* alpha = app.add_subcommand(
      "alpha", "Dirichlet series of n/L(n): direct sum vs Euler product");
  alpha->add_option("--s", c.cfg.s, "evaluation point, s > 2/3 (default 2)");
  alpha->add_option("--N", c.cfg.N, "direct-sum horizon (default 10^6)");
  alpha->add_option("--P", c.cfg.P, "Euler-product prime horizon (default 10^5)");
  alpha->add_option("--rank-table", c.cfg.rank_table, "use this saved table");
  add_common(alpha, c);

  auto* psi = app.add_subcommand("psi", "count y-smooth n <= x");
  psi->add_option("--x", c.cfg.x, "upper limit (default 1000)");
  psi->add_option("--y", c.cfg.y, "smoothness bound (default floor(sqrt(x)))");
  add_common(psi, c);

  auto* verify = app.add_subcommand(
      "verify", "run every fast path against its slow reference");
  verify->add_option("--limit", c.cfg.limit, "check values up to this bound (default 2000)");
  add_common(verify, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  c.cfg.command = app.get_subcommands().front()->get_name();
  c.cfg.format = c.format == "csv" ? lucas::ReportFormat::csv
                                   : lucas::ReportFormat::json;
  if (c.epsilon_set) c.cfg.epsilon = c.epsilon;

  std::ofstream file;
  if (!c.cfg.output.empty()) {
    file.open(c.cfg.output, std::ios::trunc);
    if (!file) {
      std::cerr << "error: cannot open " << c.cfg.output << " for writing\n";
      return 1;
    }
  }
  std::ostream& out = c.cfg.output.empty() ? std::cout : file;
  return lucas::run(c.cfg, out, std::cerr);
}
