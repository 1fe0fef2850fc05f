#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace waveuio::cli {

/// Process exit codes. Every outcome of every command maps to exactly one.
enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kInfeasible = 2,         // synthesize: no scalar-M observer
  kCertificateFailed = 3,  // certify: check failed / search infeasible
  kDiverged = 4,           // simulate: integration blew up
};

struct SynthesizeArgs {
  std::filesystem::path system;
  double alpha_scale = 1.0;
  std::filesystem::path out = "observer.json";
};

int cmd_synthesize(const SynthesizeArgs& args, std::ostream& out, std::ostream& err);

struct CertifyArgs {
  std::filesystem::path system;
  std::filesystem::path observer;
  std::string mode = "check";  // "check" | "search"
  std::optional<std::filesystem::path> certificate;  // check mode
  std::optional<std::filesystem::path> ranges;       // search mode
  std::optional<double> mu;                          // overrides the certificate's mu
  unsigned threads = 0;
  std::filesystem::path out = "certificate.json";
};

int cmd_certify(const CertifyArgs& args, std::ostream& out, std::ostream& err);

struct SimulateArgs {
  std::filesystem::path system;
  std::filesystem::path observer;
  std::string scenario;  // scenario.json path or built-in name
  std::filesystem::path out_dir = ".";
  std::optional<long> nx;
  std::optional<double> dt;
  std::optional<double> tfinal;
  bool override_cfl = false;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);

struct ReportArgs {
  std::filesystem::path series;
};

int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to the matching command.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace waveuio::cli
