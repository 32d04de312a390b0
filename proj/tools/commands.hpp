#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "sonc/certify.hpp"
#include "sonc/generate.hpp"

namespace sonc::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_error = 1,
  exit_boundary_failure = 2,
  exit_solver_failure = 3,
  exit_rejected = 4,
};

struct BoundArgs {
  std::string input;
  double delta_socp = 1e-8;
  std::string dump_socp;
  bool json = false;
};

struct CertifyArgs {
  std::string input;
  std::string output;  // defaults to <input>.cert.json
  double delta_socp = 1e-8;
  double delta_round = 1e-5;
  std::optional<std::string> xi;
  bool auto_margin = false;
  double margin = 1e-4;
  bool odd_mode = false;
  std::string dump_socp;
  bool json = false;
};

struct VerifyArgs {
  std::string poly;
  std::string certificate;
  bool json = false;
};

struct GenArgs {
  InstanceSpec spec;
  std::string output;  // stdout when empty
};

int cmd_bound(const BoundArgs& args, std::ostream& out);
int cmd_certify(const CertifyArgs& args, std::ostream& out);
int cmd_verify(const VerifyArgs& args, std::ostream& out);
int cmd_gen(const GenArgs& args, std::ostream& out);

/// Runs body on every *.json file of dir with a bounded worker pool. Reports are printed
/// in file order; the worst exit code is returned.
int run_batch(const std::string& dir, int workers, std::ostream& out,
              const std::function<int(const std::string& path, std::ostream& out)>& body);

std::string default_certificate_path(const std::string& input);

}  // namespace sonc::cli
