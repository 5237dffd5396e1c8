// dnorm — approximate the diamond norm of a super-operator given in
// Stinespring form, convert between channel representations, and run the
// built-in acceptance suite.
//
//   dnorm compute  --input channel.json --epsilon 1e-3 --method convex
//   dnorm convert  --input channel.json --from stinespring --to natural --output nat.json
//   dnorm selftest --scale quick
//
// Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
// 2 validation error, 3 solver budget/precision error (the best-so-far
// record is still printed, flagged "uncertified").

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dnorm/instances.hpp"
#include "dnorm/io.hpp"
#include "dnorm/selftest.hpp"
#include "dnorm/solver.hpp"
#include "dnorm/superop.hpp"
#include "dnorm/verify.hpp"
#include "dnorm/version.hpp"

namespace {

using namespace dnorm;

class WallTimer {
 public:
  WallTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void print_record(const ResultRecord& record, const std::string& format) {
  if (format == "json") {
    std::cout << result_to_json(record).dump(2) << "\n";
    return;
  }
  std::cout << "value        " << record.value << "\n"
            << "epsilon      " << record.epsilon << "\n"
            << "method       " << record.method << "\n"
            << "iterations   " << record.iterations << "\n"
            << "wall_time_s  " << record.wall_time_s << "\n";
  if (record.m) {
    std::cout << "M            " << *record.m << "\n"
              << "alpha        " << *record.alpha << "\n"
              << "eps_prime    " << *record.eps_prime << "\n";
  }
  if (record.uncertified) std::cout << "uncertified  true\n";
  std::cout << "tool_version " << record.tool_version << "\n";
}

// U and V for the unitary-formula method: either JSON-encoded matrices in
// the metadata ("unitary_u"/"unitary_v"), or recovered from the two ancilla
// branches of a difference-form pair.
std::pair<CMatrix, CMatrix> unitaries_for_formula(const ChannelFile& file) {
  const auto u_it = file.metadata.find("unitary_u");
  const auto v_it = file.metadata.find("unitary_v");
  if (u_it != file.metadata.end() && v_it != file.metadata.end()) {
    const Json ju = Json::parse(u_it->second);
    const Json jv = Json::parse(v_it->second);
    CMatrix u = cmatrix_from_json(ju, "metadata unitary_u");
    CMatrix v = cmatrix_from_json(jv, "metadata unitary_v");
    if (!is_unitary(u) || !is_unitary(v)) {
      throw std::invalid_argument("unitary-formula: metadata matrices are not unitary");
    }
    return {std::move(u), std::move(v)};
  }
  if (file.dim_a == 2) {
    const Eigen::Index n = file.dim_v;
    CMatrix u(n, n), v(n, n), cu(n, n), cv(n, n);
    for (Eigen::Index row = 0; row < n; ++row) {
      u.row(row) = file.b.row(row * 2 + 0);
      v.row(row) = file.b.row(row * 2 + 1);
      cu.row(row) = file.c.row(row * 2 + 0);
      cv.row(row) = file.c.row(row * 2 + 1);
    }
    if (is_unitary(u) && is_unitary(v) && spectral_norm(cu - u) < 1e-10 &&
        spectral_norm(cv + v) < 1e-10) {
      return {std::move(u), std::move(v)};
    }
  }
  throw std::invalid_argument(
      "unitary-formula: supply metadata unitary_u/unitary_v or a unitary difference pair");
}

int cmd_compute(const std::string& input, double epsilon, const std::string& method,
                unsigned long long seed, const std::string& format, bool timing,
                const std::string& mode) {
  ResultRecord record;
  record.epsilon = epsilon;
  record.method = method;
  try {
    const ChannelFile file = channel_from_json(load_json_file(input));
    const StinespringPair pair = file.pair();
    WallTimer timer;
    if (method == "convex") {
      SolverConfig cfg;
      cfg.seed = seed;
      cfg.mode = mode == "membership" ? SolverMode::membership_only
                                      : SolverMode::separation_cuts;
      try {
        const DiamondResult res = diamond_norm(pair, epsilon, cfg);
        record.value = res.value;
        record.iterations = res.report.iterations;
        record.m = res.constants.m;
        record.alpha = res.constants.alpha;
        record.eps_prime = res.constants.eps_prime;
      } catch (const BudgetExceededError& e) {
        record.value = std::max(0.0, -e.best.opt_value);
        record.iterations = e.best.iterations;
        record.uncertified = true;
        record.wall_time_s = timing ? timer.seconds() : 0.0;
        std::cerr << "dnorm: " << e.what() << "\n";
        print_record(record, format);
        return 3;
      } catch (const PrecisionError& e) {
        record.uncertified = true;
        record.wall_time_s = timing ? timer.seconds() : 0.0;
        std::cerr << "dnorm: " << e.what() << "\n";
        print_record(record, format);
        return 3;
      }
    } else if (method == "bruteforce") {
      BruteForceConfig cfg;
      cfg.seed = seed;
      record.value = bruteforce_diamond(pair, cfg);
      record.iterations = cfg.restarts;
    } else {  // unitary-formula
      const auto [u, v] = unitaries_for_formula(file);
      record.value = unitary_diamond(u, v);
      record.iterations = 0;
    }
    record.wall_time_s = timing ? timer.seconds() : 0.0;
    print_record(record, format);
    return 0;
  } catch (const Json::exception& e) {
    std::cerr << "dnorm: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "dnorm: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "dnorm: " << e.what() << "\n";
    return 2;
  }
}

int cmd_convert(const std::string& input, const std::string& from, const std::string& to,
                const std::string& output) {
  try {
    NaturalRep natural;
    std::optional<StinespringPair> pair;
    if (from == "stinespring") {
      const ChannelFile file = channel_from_json(load_json_file(input));
      pair = file.pair();
      natural = natural_from_stinespring(*pair);
    } else {
      natural = natural_from_json(load_json_file(input));
    }

    if (to == "natural") {
      save_json_file(output, natural_to_json(natural));
    } else if (to == "stinespring") {
      const StinespringPair out_pair =
          pair && from == "stinespring" ? *pair : stinespring_from_natural(natural);
      save_json_file(output, channel_to_json(channel_from_pair(out_pair)));
    } else {  // choi
      save_json_file(output, choi_to_json(choi_from_natural(natural)));
    }
    return 0;
  } catch (const Json::exception& e) {
    std::cerr << "dnorm: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "dnorm: " << e.what() << "\n";
    return 2;
  }
}

int cmd_selftest(const std::string& scale) {
  const bool fault = std::getenv("DNORM_FAULT_INJECT") != nullptr;
  if (fault) std::cerr << "dnorm: fault injection enabled\n";
  const auto results = run_acceptance(
      scale == "full" ? SelftestScale::full : SelftestScale::quick, fault);
  return print_acceptance(results, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diamond-norm approximation for super-operators in Stinespring form"};
  app.set_version_flag("--version", dnorm::kVersion);
  app.require_subcommand(1);

  // compute
  std::string input, method = "convex", format = "json", mode = "separation";
  double epsilon = 1e-3;
  unsigned long long seed = 1;
  bool timing = false;
  CLI::App* compute = app.add_subcommand("compute", "approximate the diamond norm");
  compute->add_option("--input", input, "channel file (JSON)")->required();
  compute->add_option("--epsilon", epsilon, "additive accuracy target")
      ->check(CLI::PositiveNumber);
  compute->add_option("--method", method, "convex | bruteforce | unitary-formula")
      ->check(CLI::IsMember({"convex", "bruteforce", "unitary-formula"}));
  compute->add_option("--seed", seed, "seed for randomized methods");
  compute->add_option("--output", format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));
  compute->add_flag("--timing", timing,
                    "include measured wall time (off keeps output reproducible)");
  compute->add_option("--mode", mode, "separation | membership (convex method)")
      ->check(CLI::IsMember({"separation", "membership"}));

  // convert
  std::string conv_input, conv_from = "stinespring", conv_to = "natural", conv_output;
  CLI::App* convert = app.add_subcommand("convert", "convert between representations");
  convert->add_option("--input", conv_input, "input file")->required();
  convert->add_option("--from", conv_from, "stinespring | natural")
      ->check(CLI::IsMember({"stinespring", "natural"}));
  convert->add_option("--to", conv_to, "stinespring | natural | choi")
      ->check(CLI::IsMember({"stinespring", "natural", "choi"}));
  convert->add_option("--output", conv_output, "output file")->required();

  // selftest
  std::string scale = "quick";
  CLI::App* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  selftest->add_option("--scale", scale, "quick | full")
      ->check(CLI::IsMember({"quick", "full"}));

  CLI11_PARSE(app, argc, argv);

  if (compute->parsed()) {
    return cmd_compute(input, epsilon, method, seed, format, timing, mode);
  }
  if (convert->parsed()) {
    return cmd_convert(conv_input, conv_from, conv_to, conv_output);
  }
  return cmd_selftest(scale);
}
