// Command-line front end: solve, transform, classify, bench, gen.
//
// Exit codes: 0 success, 2 no unique solution / singular operator or factor,
// 3 spurious solution / not convergent / capacity exceeded, 4 I/O, parse or
// shape error in an input file, 5 bad flags.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tcs/tcs.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSingular = 2;
constexpr int kExitNotSolved = 3;
constexpr int kExitIo = 4;
constexpr int kExitFlags = 5;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const tcs::SingularOperator*>(&e) || dynamic_cast<const tcs::SingularMatrix*>(&e)) {
    return kExitSingular;
  }
  if (dynamic_cast<const tcs::SpuriousSolution*>(&e) || dynamic_cast<const tcs::NotConvergent*>(&e) ||
      dynamic_cast<const tcs::CapacityError*>(&e)) {
    return kExitNotSolved;
  }
  if (dynamic_cast<const std::invalid_argument*>(&e)) return kExitFlags;
  return kExitIo;
}

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const tcs::NoUniqueSolution*>(&e)) return "NoUniqueSolution";
  if (dynamic_cast<const tcs::SingularOperator*>(&e)) return "SingularOperator";
  if (dynamic_cast<const tcs::SingularMatrix*>(&e)) return "SingularMatrix";
  if (dynamic_cast<const tcs::SpuriousSolution*>(&e)) return "SpuriousSolution";
  if (dynamic_cast<const tcs::NotConvergent*>(&e)) return "NotConvergent";
  if (dynamic_cast<const tcs::CapacityError*>(&e)) return "CapacityError";
  if (dynamic_cast<const tcs::ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const tcs::ValueError*>(&e)) return "ValueError";
  if (dynamic_cast<const tcs::DimensionError*>(&e)) return "DimensionError";
  if (dynamic_cast<const tcs::UnsupportedShape*>(&e)) return "UnsupportedShape";
  if (dynamic_cast<const tcs::IoError*>(&e)) return "IoError";
  return "Error";
}

int fail(const std::exception& e) {
  std::cerr << "error: " << error_kind(e) << ": " << e.what() << "\n";
  return exit_code_for(e);
}

struct ProblemFiles {
  std::string a, b, c;
  std::string format = "native";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--a", a, "matrix A")->required();
    cmd->add_option("--b", b, "matrix B")->required();
    cmd->add_option("--c", c, "matrix C")->required();
    cmd->add_option("--format", format, "input format")->capture_default_str()->check(CLI::IsMember({"native", "mm"}));
  }

  tcs::TcsProblem load() const {
    const auto fmt = format == "mm" ? tcs::MatrixFormat::MatrixMarket : tcs::MatrixFormat::Native;
    return tcs::TcsProblem(tcs::read_matrix_file(a, fmt), tcs::read_matrix_file(b, fmt),
                           tcs::read_matrix_file(c, fmt));
  }
};

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

void print_report(const tcs::SolveReport& r, const std::string& status, bool as_json) {
  const double ms = std::chrono::duration<double, std::milli>(r.wall_time).count();
  if (as_json) {
    nlohmann::json j;
    j["status"] = status;
    j["method"] = tcs::to_string(r.method_used);
    j["stein_solver"] = tcs::to_string(r.stein_solver_used);
    j["residual_original"] = r.residual_original;
    j["residual_reduced"] = r.residual_reduced;
    j["rho_estimate"] = r.spectral_radius_estimate;
    j["iterations"] = r.iterations;
    j["wall_time_ms"] = ms;
    j["warnings"] = join(r.warnings, "; ");
    std::cout << j.dump() << "\n";
    return;
  }
  std::cout << "status: " << status << "\n"
            << "method: " << tcs::to_string(r.method_used) << "\n"
            << "stein_solver: " << tcs::to_string(r.stein_solver_used) << "\n"
            << "residual_original: " << r.residual_original << "\n"
            << "residual_reduced: " << r.residual_reduced << "\n"
            << "rho_estimate: " << r.spectral_radius_estimate << "\n"
            << "iterations: " << r.iterations << "\n"
            << "wall_time_ms: " << ms << "\n";
  for (const auto& w : r.warnings) std::cout << "warning: " << w << "\n";
}

std::string format_residual(double r) {
  if (std::isnan(r)) return "nan";
  std::ostringstream s;
  s.precision(17);
  s << r;
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"T-congruence Sylvester equation solver (A X + X^T B = C)"};
  app.require_subcommand(1);

  // solve
  ProblemFiles solve_in;
  std::string solve_out;
  std::string method = "auto";
  std::string stein = "auto";
  std::string report_kind = "text";
  tcs::SolveOptions opts;
  auto* solve = app.add_subcommand("solve", "solve A X + X^T B = C");
  solve_in.add_to(solve);
  solve->add_option("--out", solve_out, "write X here");
  solve->add_option("--method", method)->capture_default_str()
      ->check(CLI::IsMember({"lyapunov-a", "lyapunov-b", "sylvester", "oracle", "auto"}));
  solve->add_option("--stein-solver", stein)->capture_default_str()->check(CLI::IsMember({"direct", "smith", "auto"}));
  solve->add_option("--tol", opts.tol)->capture_default_str()->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", opts.max_iter)->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  solve->add_option("--report", report_kind)->capture_default_str()->check(CLI::IsMember({"text", "json"}));

  // transform
  ProblemFiles tr_in;
  std::string form;
  std::string tr_prefix;
  auto* transform = app.add_subcommand("transform", "write the reduced equation matrices");
  tr_in.add_to(transform);
  transform->add_option("--form", form)->required()->check(CLI::IsMember({"stein-a", "stein-b", "sylvester"}));
  transform->add_option("--out-prefix", tr_prefix)->required();

  // classify
  ProblemFiles cl_in;
  auto* classify = app.add_subcommand("classify", "Unique / InfinitelyMany / None by numerical rank");
  cl_in.add_to(classify);

  // bench
  std::vector<std::size_t> n_list{4, 8, 16, 32, 64};
  std::size_t seeds = 10;
  double bench_rho = 0.8;
  std::string csv_path;
  auto* bench = app.add_subcommand("bench", "time the dense oracle against the Smith pipeline");
  bench->add_option("--n-list", n_list)->capture_default_str()->delimiter(',')->check(CLI::Range(std::size_t{1}, tcs::kOracleCap));
  bench->add_option("--seeds", seeds)->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  bench->add_option("--rho", bench_rho)->capture_default_str()->check(CLI::Range(0.0, 0.999));
  bench->add_option("--csv", csv_path);

  // gen
  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  double gen_rho = 0.8;
  std::string gen_prefix;
  auto* gen = app.add_subcommand("gen", "write a reproducible instance PREFIX.{A,B,C,Xtrue}");
  gen->add_option("--n", gen_n)->required()->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
  gen->add_option("--seed", gen_seed)->required();
  gen->add_option("--rho", gen_rho)->capture_default_str()->check(CLI::Range(0.0, 1e6));
  gen->add_option("--out-prefix", gen_prefix)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFlags;
  }

  try {
    if (*solve) {
      opts.method = *tcs::parse_method(method);
      opts.stein_solver = *tcs::parse_stein_solver(stein);
      const tcs::TcsProblem p = solve_in.load();
      const bool as_json = report_kind == "json";
      try {
        const tcs::SolveReport rep = tcs::solve_tcs(p, opts);
        if (!solve_out.empty()) tcs::write_matrix_file(solve_out, rep.x);
        print_report(rep, "ok", as_json);
      } catch (const tcs::SpuriousSolution& e) {
        print_report(e.report(), "spurious", as_json);
        return fail(e);
      }
      return kExitOk;
    }

    if (*transform) {
      const tcs::TcsProblem p = tr_in.load();
      if (form == "sylvester") {
        const tcs::SylvesterForm f = tcs::to_sylvester(p);
        tcs::write_matrix_file(tr_prefix + ".negM", f.neg_m);
        tcs::write_matrix_file(tr_prefix + ".MinvT", f.m_inv_t);
        tcs::write_matrix_file(tr_prefix + ".Qprime", f.q_prime);
      } else {
        const tcs::SteinForm s = form == "stein-a" ? tcs::to_stein_via_a(p) : tcs::to_stein_via_b(p);
        tcs::write_matrix_file(tr_prefix + ".M", s.m_coef);
        tcs::write_matrix_file(tr_prefix + ".Q", s.q);
      }
      return kExitOk;
    }

    if (*classify) {
      const tcs::TcsProblem p = cl_in.load();
      const tcs::Classification c = tcs::classify_solvability(p);
      std::cout << tcs::to_string(c.kind) << "\n"
                << "rank_operator: " << c.rank_operator << " / " << c.dim << "\n"
                << "rank_augmented: " << c.rank_augmented << "\n";
      return kExitOk;
    }

    if (*bench) {
      std::ofstream file;
      if (!csv_path.empty()) {
        file.open(csv_path, std::ios::trunc);
        if (!file) throw tcs::IoError("cannot open '" + csv_path + "' for writing");
      }
      std::ostream& out = csv_path.empty() ? std::cout : file;
      out << "n,seed,method,wall_time_ms,residual\n";
      for (std::size_t n : n_list) {
        std::vector<double> oracle_ms, pipeline_ms;
        for (std::uint64_t seed = 0; seed < seeds; ++seed) {
          for (const tcs::BenchRow& row : tcs::bench_cell(n, seed, bench_rho)) {
            out << row.n << "," << row.seed << "," << row.method << "," << row.wall_time_ms << ","
                << format_residual(row.residual) << "\n";
            (row.method == "oracle" ? oracle_ms : pipeline_ms).push_back(row.wall_time_ms);
          }
        }
        std::sort(oracle_ms.begin(), oracle_ms.end());
        std::sort(pipeline_ms.begin(), pipeline_ms.end());
        const double om = oracle_ms[oracle_ms.size() / 2];
        const double pm = pipeline_ms[pipeline_ms.size() / 2];
        std::cerr << "n=" << n << " median oracle " << om << " ms, pipeline " << pm
                  << " ms, ratio " << (pm > 0 ? om / pm : 0.0) << "\n";
      }
      return kExitOk;
    }

    if (*gen) {
      const tcs::Instance inst = tcs::generate_instance({.n = gen_n, .seed = gen_seed, .rho = gen_rho});
      tcs::write_matrix_file(gen_prefix + ".A", inst.problem.a());
      tcs::write_matrix_file(gen_prefix + ".B", inst.problem.b());
      tcs::write_matrix_file(gen_prefix + ".C", inst.problem.c());
      tcs::write_matrix_file(gen_prefix + ".Xtrue", inst.x_true);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    return fail(e);
  }
  return kExitFlags;
}
