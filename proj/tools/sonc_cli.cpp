#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace sonc::cli;

int main(int argc, char** argv) {
  CLI::App app{"Lower bounds and exact nonnegativity certificates for sparse polynomials"};
  app.require_subcommand(1);

  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string batch;

  BoundArgs bound;
  auto* b = app.add_subcommand("bound", "SOCP lower bound for the minimum of f");
  b->add_option("input", bound.input, "polynomial JSON file");
  b->add_option("--batch", batch, "process every polynomial file in a directory");
  b->add_option("--workers", workers, "worker threads for --batch")->check(CLI::PositiveNumber);
  b->add_option("--delta-socp", bound.delta_socp, "solver tolerance")->capture_default_str();
  b->add_option("--dump-socp", bound.dump_socp, "write the SOCP problem as JSON");
  b->add_flag("--json", bound.json, "machine-readable report");

  CertifyArgs cert;
  auto* c = app.add_subcommand("certify", "exact rational certificate that f - xi is nonnegative");
  c->add_option("input", cert.input, "polynomial JSON file");
  c->add_option("--batch", batch, "process every polynomial file in a directory");
  c->add_option("--workers", workers, "worker threads for --batch")->check(CLI::PositiveNumber);
  c->add_option("-o,--output", cert.output, "certificate path (default <input>.cert.json)");
  auto* xi_opt = c->add_option("--xi", cert.xi, "rational value to certify (default 0)");
  c->add_flag("--auto-margin", cert.auto_margin, "certify the SOCP bound minus the margin")->excludes(xi_opt);
  c->add_option("--margin", cert.margin, "margin below the SOCP bound")->capture_default_str();
  c->add_option("--delta-socp", cert.delta_socp, "solver tolerance")->capture_default_str();
  c->add_option("--delta-round", cert.delta_round, "rounding precision")->capture_default_str();
  c->add_flag("--odd-mode", cert.odd_mode, "mediated sets with odd denominators");
  c->add_option("--dump-socp", cert.dump_socp, "write the SOCP problem as JSON");
  c->add_flag("--json", cert.json, "machine-readable report");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "exact check of a certificate");
  v->add_option("poly", ver.poly, "polynomial JSON file")->required();
  v->add_option("certificate", ver.certificate, "certificate JSON file")->required();
  v->add_flag("--json", ver.json, "machine-readable report");

  GenArgs gen;
  std::string cls = "standard-simplex";
  auto* g = app.add_subcommand("gen", "random benchmark instance");
  g->add_option("-n", gen.spec.n, "number of variables")->capture_default_str();
  g->add_option("-d", gen.spec.d, "degree (even)")->capture_default_str();
  g->add_option("-t", gen.spec.t, "number of terms")->capture_default_str();
  g->add_option("--class", cls, "standard-simplex | general-simplex | arbitrary-polytope")->capture_default_str();
  g->add_option("-l", gen.spec.l, "minimum number of interior terms (arbitrary-polytope)");
  g->add_option("--seed", gen.spec.seed, "random seed")->capture_default_str();
  g->add_option("--max-square-coef", gen.spec.max_square_coef)->capture_default_str();
  g->add_option("--max-inner-coef", gen.spec.max_inner_coef)->capture_default_str();
  g->add_flag("--interior", gen.spec.interior, "place f strictly inside the SONC cone");
  g->add_option("-o,--output", gen.output, "output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (b->parsed()) {
      if (!batch.empty())
        return run_batch(batch, workers, std::cout, [&](const std::string& path, std::ostream& out) {
          BoundArgs a = bound;
          a.input = path;
          a.dump_socp.clear();
          return cmd_bound(a, out);
        });
      if (bound.input.empty()) throw CLI::RequiredError("input");
      return cmd_bound(bound, std::cout);
    }
    if (c->parsed()) {
      if (!batch.empty())
        return run_batch(batch, workers, std::cout, [&](const std::string& path, std::ostream& out) {
          CertifyArgs a = cert;
          a.input = path;
          a.output.clear();
          a.dump_socp.clear();
          return cmd_certify(a, out);
        });
      if (cert.input.empty()) throw CLI::RequiredError("input");
      return cmd_certify(cert, std::cout);
    }
    if (v->parsed()) return cmd_verify(ver, std::cout);
    if (g->parsed()) {
      gen.spec.cls = sonc::parse_instance_class(cls);
      return cmd_gen(gen, std::cout);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const sonc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_error;
  }
  return exit_ok;
}
