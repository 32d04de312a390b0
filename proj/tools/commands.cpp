#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

namespace sonc::cli {

namespace {

/// Ordered key=value report, printed as lines or as one JSON object.
class Report {
 public:
  void set(const std::string& key, const std::string& value) { fields_.emplace_back(key, nlohmann::json(value)); }
  /// Rounded to microseconds.
  void set_seconds(const std::string& key, double value) {
    fields_.emplace_back(key, nlohmann::json(std::round(value * 1e6) / 1e6));
  }
  void set(const std::string& key, std::size_t value) { fields_.emplace_back(key, nlohmann::json(value)); }
  void set(const std::string& key, int value) { fields_.emplace_back(key, nlohmann::json(value)); }

  void print(std::ostream& out, bool as_json) const {
    if (as_json) {
      nlohmann::ordered_json j;
      for (const auto& [k, v] : fields_) j[k] = v;
      out << j.dump() << "\n";
      return;
    }
    for (const auto& [k, v] : fields_) out << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }

 private:
  std::vector<std::pair<std::string, nlohmann::json>> fields_;
};

std::string format_double(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

int exit_for(CertifyStatus s) {
  switch (s) {
    case CertifyStatus::ok: return exit_ok;
    case CertifyStatus::boundary_failure: return exit_boundary_failure;
    case CertifyStatus::solver_failure: return exit_solver_failure;
    case CertifyStatus::cover_failure: return exit_error;
  }
  return exit_error;
}

}  // namespace

std::string default_certificate_path(const std::string& input) {
  std::filesystem::path p(input);
  return (p.parent_path() / (p.stem().string() + ".cert.json")).string();
}

int cmd_bound(const BoundArgs& args, std::ostream& out) {
  Report r;
  r.set("input", args.input);
  SparsePoly f;
  try {
    f = read_poly_file(args.input);
  } catch (const Error& e) {
    r.set("phase", std::string("parse"));
    r.set("error", std::string(e.what()));
    r.print(out, args.json);
    return exit_error;
  }
  BoundResult b;
  try {
    b = lower_bound(f, args.delta_socp, args.dump_socp);
  } catch (const Error& e) {
    r.set("phase", std::string("pipeline"));
    r.set("error", std::string(e.what()));
    r.print(out, args.json);
    return exit_error;
  }
  r.set("status", to_string(b.status));
  if (has_solution(b.status)) r.set("bound", format_double(b.xi));
  r.set("circuits", b.plan.circuits.size());
  r.set("triples", b.plan.triple_count());
  r.set("iterations", b.solution.iterations);
  r.set_seconds("time_cover", b.seconds_cover);
  r.set_seconds("time_mediated", b.seconds_mediated);
  r.set_seconds("time_assemble", b.seconds_assemble);
  r.set_seconds("time_solve", b.seconds_solve);
  if (!args.dump_socp.empty()) r.set("socp_dump", args.dump_socp);
  r.print(out, args.json);
  return has_solution(b.status) ? exit_ok : exit_solver_failure;
}

int cmd_certify(const CertifyArgs& args, std::ostream& out) {
  Report r;
  r.set("input", args.input);
  SparsePoly f;
  CertifyOptions opt;
  try {
    f = read_poly_file(args.input);
    opt.delta_hat = args.delta_round;
    opt.delta_tilde = args.delta_socp;
    opt.odd_mode = args.odd_mode;
    if (args.xi) opt.xi = parse_rational(*args.xi);
    opt.auto_margin = args.auto_margin && !args.xi;
    opt.margin = args.margin;
    opt.dump_path = args.dump_socp;
  } catch (const Error& e) {
    r.set("phase", std::string("parse"));
    r.set("error", std::string(e.what()));
    r.print(out, args.json);
    return exit_error;
  }
  CertifyResult res;
  try {
    res = exact_sobs(f, opt);
  } catch (const Error& e) {
    r.set("phase", std::string("pipeline"));
    r.set("error", std::string(e.what()));
    r.print(out, args.json);
    return exit_error;
  }
  r.set("status", to_string(res.status));
  r.set("xi", to_string(res.xi));
  if (res.xi_socp) r.set("bound", format_double(*res.xi_socp));
  r.set("solver_status", to_string(res.solver_status));
  r.set("attempts", res.attempts);
  r.set("triples", res.triples);
  r.set_seconds("time_cover", res.seconds_cover);
  r.set_seconds("time_mediated", res.seconds_mediated);
  r.set_seconds("time_assemble", res.seconds_assemble);
  r.set_seconds("time_solve", res.seconds_solve);
  r.set_seconds("time_certify", res.seconds_certify);
  if (!res.message.empty()) r.set("message", res.message);
  if (res.certificate) {
    std::string path = args.output.empty() ? default_certificate_path(args.input) : args.output;
    try {
      write_certificate_file(*res.certificate, path);
    } catch (const Error& e) {
      r.set("error", std::string(e.what()));
      r.print(out, args.json);
      return exit_error;
    }
    r.set("certificate", path);
    r.set("bit_size", bit_size(*res.certificate));
  }
  r.print(out, args.json);
  return exit_for(res.status);
}

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  Report r;
  r.set("poly", args.poly);
  r.set("certificate", args.certificate);
  VerifyResult v;
  try {
    SparsePoly f = read_poly_file(args.poly);
    SobsCertificate c = read_certificate_file(args.certificate);
    v = verify_certificate(f, c);
    r.set("xi", to_string(c.xi));
  } catch (const Error& e) {
    r.set("error", std::string(e.what()));
    r.print(out, args.json);
    return exit_error;
  }
  r.set("accepted", std::string(v.accepted ? "yes" : "no"));
  if (!v.accepted) {
    r.set("reason", to_string(v.reason));
    if (!v.detail.empty()) r.set("detail", v.detail);
  }
  r.print(out, args.json);
  return v.accepted ? exit_ok : exit_rejected;
}

int cmd_gen(const GenArgs& args, std::ostream& out) {
  try {
    SparsePoly f = generate_instance(args.spec);
    if (args.output.empty()) {
      out << poly_to_json(f, 1) << "\n";
    } else {
      write_poly_file(f, args.output);
      out << "output=" << args.output << "\nterms=" << f.size() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_error;
  }
  return exit_ok;
}

int run_batch(const std::string& dir, int workers, std::ostream& out,
              const std::function<int(const std::string& path, std::ostream& out)>& body) {
  std::vector<std::string> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto& p = entry.path();
    if (entry.is_regular_file() && p.extension() == ".json" && p.string().find(".cert.") == std::string::npos)
      files.push_back(p.string());
  }
  if (ec) {
    std::cerr << "error: cannot read directory " << dir << ": " << ec.message() << "\n";
    return exit_error;
  }
  std::sort(files.begin(), files.end());
  std::vector<std::string> reports(files.size());
  std::vector<int> codes(files.size(), exit_ok);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < files.size();) {
      std::ostringstream s;
      codes[i] = body(files[i], s);
      reports[i] = s.str();
    }
  };
  const int count = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(files.size(), 1)));
  std::vector<std::thread> pool;
  for (int w = 0; w < count; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  int worst = exit_ok;
  for (std::size_t i = 0; i < files.size(); ++i) {
    out << reports[i];
    out << "exit=" << codes[i] << "\n\n";
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

}  // namespace sonc::cli
