// fpv: verify floating-point peephole optimizations with an SMT solver.

#include "fpv/driver.hpp"
#include "fpv/fpsem.hpp"
#include "fpv/parser.hpp"
#include "fpv/precond.hpp"
#include "fpv/smt.hpp"
#include "fpv/typer.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<std::string> split(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty())
      out.push_back(item);
  return out;
}

/// "half,single" replaces the defaults; "+fp8" adds to them.
void apply_fp_widths(const std::string &spec, fpv::WidthConfig &w) {
  std::string list = spec;
  if (!list.empty() && list[0] == '+')
    list.erase(0, 1);
  else
    w.fp_formats.clear();
  for (auto &name : split(list)) {
    auto f = fpv::format_by_name(name);
    if (!f)
      throw CLI::ValidationError("--fp-widths", "unknown format '" + name + "'");
    w.fp_formats.push_back(*f);
  }
}

void apply_int_widths(const std::string &spec, fpv::WidthConfig &w) {
  std::string list = spec;
  if (!list.empty() && list[0] == '+')
    list.erase(0, 1);
  else
    w.int_widths.clear();
  for (auto &item : split(list)) {
    unsigned v = 0;
    try {
      v = std::stoul(item);
    } catch (const std::exception &) {
    }
    if (v < 1 || v > 64)
      throw CLI::ValidationError("--int-widths", "bad width '" + item + "'");
    w.int_widths.push_back(v);
  }
}

std::string read_all(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Verify floating-point peephole optimizations"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string fp_widths, int_widths, format = "text", output;
  std::string solver = fpv::default_solver_command(), solver_input = "stdin";
  fpv::VerifyConfig cfg;

  auto *verify = app.add_subcommand("verify", "verify every transform");
  verify->add_option("files", files, "corpus files")->required();
  verify->add_option("--timeout", cfg.solver.timeout_s,
                     "seconds per solver query")
      ->capture_default_str();
  verify->add_option("--solver", solver,
                     "solver command (default $FPV_SOLVER or 'z3 -in')");
  verify->add_option("--solver-input", solver_input,
                     "how the script reaches the solver")
      ->check(CLI::IsMember({"stdin", "file"}));
  verify->add_option("--fp-widths", fp_widths,
                     "formats, e.g. half,single,double or +fp8");
  verify->add_option("--int-widths", int_widths, "integer widths, e.g. 8,16");
  verify->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"text", "json"}));
  verify->add_flag("--brute-force", cfg.brute_force,
                   "cross-check every transform against the oracle at fp8");
  verify->add_option("--dump-smt", cfg.dump_dir,
                     "directory for queries and solver transcripts");
  verify->add_option("--jobs,-j", cfg.jobs, "parallel solver processes")
      ->check(CLI::PositiveNumber);
  verify->add_option("--output,-o", output, "write the report here");

  std::string print_file;
  auto *print = app.add_subcommand("print", "parse and pretty-print a corpus");
  print->add_option("file", print_file)->required();

  std::string emit_file;
  auto *emit_cmd = app.add_subcommand("emit", "print the solver queries");
  emit_cmd->add_option("file", emit_file)->required();
  emit_cmd->add_option("--fp-widths", fp_widths, "formats");
  emit_cmd->add_option("--int-widths", int_widths, "integer widths");

  try {
    app.parse(argc, argv);
    if (!fp_widths.empty())
      apply_fp_widths(fp_widths, cfg.widths);
    if (!int_widths.empty())
      apply_int_widths(int_widths, cfg.widths);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (*print) {
      std::cout << fpv::pretty_print(fpv::parse_corpus(read_all(print_file)))
                << "\n";
      return 0;
    }
    if (*emit_cmd) {
      for (auto &t : fpv::parse_corpus(read_all(emit_file))) {
        auto c = fpv::gen_constraints(t);
        for (auto &ta : fpv::enumerate_assignments(c, cfg.widths))
          for (auto &cca : fpv::enumerate_cc(t))
            std::cout << fpv::emit(fpv::build_query(t, ta, cca)) << "\n";
      }
      return 0;
    }

    cfg.solver.command = solver;
    cfg.solver.input = solver_input == "file" ? fpv::SolverConfig::Input::File
                                              : fpv::SolverConfig::Input::Stdin;
    fpv::Report r = fpv::verify_files(files, cfg);
    std::string text = fpv::render(r, format == "json"
                                          ? fpv::ReportFormat::Json
                                          : fpv::ReportFormat::Text);
    if (output.empty()) {
      std::cout << text;
    } else {
      std::ofstream(output) << text;
    }
    return fpv::exit_code(r);
  } catch (const fpv::ParseError &e) {
    std::cerr << "error: " << e.line() << ":" << e.column() << ": "
              << e.message() << "\n";
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 3;
}
