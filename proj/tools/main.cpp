#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kd/errors.hpp"
#include "kd/report.hpp"

namespace {

struct Options {
  std::string input;
  std::string json_path;
  std::string format = "text";
  kd::PipelineConfig config;
};

void add_pipeline_options(CLI::App* sub, Options& o, bool with_verify) {
  sub->add_option("ode-file", o.input, "ODE file (text or JSON tensor form)")->required();
  sub->add_option("--max-degree", o.config.max_dp_degree, "maximum total degree of Darboux polynomials")
      ->check(CLI::PositiveNumber);
  sub->add_option("--max-exp", o.config.max_exp, "maximum exponent in cofactor candidates")->check(CLI::PositiveNumber);
  sub->add_option("--candidate-cap", o.config.candidate_cap, "maximum number of cofactor candidates")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--no-prune", [&o](std::int64_t) { o.config.prune = false; }, "solve every candidate symbolically");
  sub->add_option("--seed", o.config.seed, "seed for randomized probes and sample points");
  sub->add_option("--json", o.json_path, "also write the JSON report to this file");
  sub->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"text", "json"}));
  if (with_verify) sub->add_flag("--verify", o.config.verify, "run numeric and sampling checks");
}

int finish(const kd::StructureReport& report, const Options& o) {
  if (!o.json_path.empty()) {
    std::ofstream out(o.json_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << o.json_path << "\n";
      return 1;
    }
    out << kd::emit_report(report, kd::ReportFormat::Json);
  }
  std::cout << kd::emit_report(report, o.format == "json" ? kd::ReportFormat::Json : kd::ReportFormat::Text);
  for (const auto& e : report.errors) {
    std::cerr << "error [" << e.stage << "] " << e.kind << ": " << e.message << "\n";
  }
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kahan discretization, Darboux polynomials and integrals of quadratic ODEs"};
  app.require_subcommand(1);
  Options o;

  struct Entry {
    const char* name;
    const char* help;
    kd::Stage stage;
  };
  const Entry stages[] = {
      {"kahan", "build the Kahan map and its Jacobian", kd::Stage::Kahan},
      {"factor", "factor the Jacobian determinant", kd::Stage::Factor},
      {"darboux", "search Darboux polynomials of the map", kd::Stage::Darboux},
      {"structure", "continuum limits, integrals, measures and solution", kd::Stage::Structure},
      {"run", "full pipeline", kd::Stage::Structure},
  };
  std::vector<std::pair<CLI::App*, kd::Stage>> pipeline;
  for (const auto& s : stages) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_pipeline_options(sub, o, true);
    pipeline.emplace_back(sub, s.stage);
  }

  std::string report_path;
  auto* verify = app.add_subcommand("verify", "re-check the certificates of a JSON report");
  verify->add_option("report", report_path, "JSON report written by --json")->required()->check(CLI::ExistingFile);
  verify->add_option("--json", o.json_path, "write the updated JSON report to this file");
  verify->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"text", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      std::ifstream in(report_path, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      auto report = kd::read_report(ss.str());
      kd::run_verification(report);
      return finish(report, o);
    }
    for (const auto& [sub, stage] : pipeline) {
      if (!sub->parsed()) continue;
      o.config.ode_path = o.input;
      o.config.last_stage = stage;
      o.config.format = o.format == "json" ? kd::ReportFormat::Json : kd::ReportFormat::Text;
      return finish(kd::run_pipeline(o.config), o);
    }
  } catch (const kd::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
