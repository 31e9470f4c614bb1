#include "scm/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "scm/aggregation.hpp"
#include "scm/apa.hpp"
#include "scm/birkhoff.hpp"
#include "scm/cdf.hpp"
#include "scm/core.hpp"
#include "scm/detail/numeric.hpp"
#include "scm/errors.hpp"
#include "scm/generators.hpp"
#include "scm/io.hpp"
#include "scm/recovery.hpp"
#include "scm/sparsify.hpp"

namespace scm::cli {

namespace {

void emit(const std::string& out_path, const std::string& text,
          std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    io::write_file(out_path, text);
  }
}

std::string six(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<double> parse_reals(const std::string& text) {
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  std::vector<double> values;
  double v = 0.0;
  while (in >> v) values.push_back(v);
  if (!in.eof()) throw IoError("parameter file contains non-numeric data");
  return values;
}

struct Options {
  std::string matrix_path;
  std::string model_path;
  std::string model_b_path;
  std::string params_path;
  std::string out_path;
  std::string family;
  std::string apa_what;
  bool percent = false;
  bool normalized = false;
  bool no_signature = false;
  bool search = false;
  double epsilon = 0.0;
  double epsilon0 = 0.25;
  double epsilon_floor = 1e-3;
  double tol = 1e-9;
  double delta = 0.5;
  int k = 0;
  int n = 0;
  std::uint64_t seed = 0;
};

core::StochasticMatrix load_matrix(const Options& opt) {
  return io::parse_stochastic_matrix(io::read_file(opt.matrix_path),
                                     opt.percent);
}

core::SparseChoiceModel load_model(const std::string& path) {
  return io::parse_model(io::read_file(path));
}

int cmd_marginals(const Options& opt, std::ostream& out) {
  const auto model = load_model(opt.model_path).normalized();
  emit(opt.out_path, io::format_matrix(core::marginals(model)), out);
  return 0;
}

int cmd_decompose(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto d = load_matrix(opt);
  const auto dec = birkhoff::decompose(d, opt.tol);
  std::string text;
  for (const auto& [sigma, w] : dec.terms) {
    text += sigma.to_string() + ' ' + six(w) + '\n';
  }
  emit(opt.out_path, text, out);
  err << "terms: " << dec.terms.size() << "\nresidual: " << dec.residual_norm
      << "\n";
  return 0;
}

int cmd_sparsify(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto d = load_matrix(opt);
  const auto model = sparsify::sample_sparsify(d, opt.epsilon, opt.seed);
  emit(opt.out_path, io::format_model(model), out);
  err << "samples: " << sparsify::sample_budget(d.n(), opt.epsilon)
      << "\nsupport: " << model.support_size() << "\n";
  return 0;
}

int cmd_recover(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto d = load_matrix(opt);
  std::optional<recovery::RecoveryResult> res;
  if (opt.search) {
    res = recovery::recover_search(d, opt.epsilon0, opt.epsilon_floor);
  } else {
    if (opt.k < 1) throw ParameterError("recover requires --k >= 1");
    if (opt.epsilon <= 0.0) {
      throw ParameterError("recover requires --epsilon in (0, 1/2)");
    }
    if (opt.no_signature) {
      recovery::NoSignatureStats stats;
      res = recovery::recover_without_signature(d, opt.k, opt.epsilon, &stats);
      err << "vectors: " << stats.vectors_enumerated << "\n";
    } else {
      res = recovery::recover(d, opt.k, opt.epsilon);
    }
  }
  if (!res) {
    err << "no model found\n";
    return 1;
  }
  emit(opt.out_path, io::format_model(res->model), out);
  err << "epsilon: " << res->epsilon_used << "\niterations: " << res->iterations
      << "\nsupport: " << res->model.support_size()
      << "\nmixture_mass: " << res->total_mass
      << "\nlinf_error: " << res->achieved_linf
      << "\nlinf_error_unnormalized: " << res->achieved_linf_unnormalized
      << "\n";
  if (res->signature_set) {
    err << "signature_cells:";
    for (const auto& cell : res->signature_set->cells) {
      err << " (" << cell.row << "," << cell.col << ")";
    }
    err << "\n";
  }
  return 0;
}

int cmd_fit(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto d = load_matrix(opt);
  if (opt.epsilon <= 0.0) throw ParameterError("fit requires --epsilon > 0");
  const auto fit = recovery::greedy_fit(d, opt.epsilon);
  emit(opt.out_path, io::format_model(fit.model), out);
  err << "heuristic: greedy (no recovery guarantee)\nsupport: "
      << fit.model.support_size() << "\nl2_error: " << fit.achieved_l2
      << "\nsignature: " << (fit.signature_holds ? "yes" : "no") << "\n";
  return 0;
}

int cmd_hare(const Options& opt, std::ostream& out) {
  const auto model = load_model(opt.model_path);
  const auto trace = aggregation::hare(model);
  std::string text;
  text += "winner: " + std::to_string(trace.winner) + '\n';
  text += "ranking: " + trace.ranking.to_string() + '\n';
  int round = 0;
  for (const auto& r : trace.rounds) {
    text += "round " + std::to_string(++round) + ':';
    for (const auto& [candidate, mass] : r.first_place) {
      text += ' ' + std::to_string(candidate) + '=' + six(mass);
    }
    text += " -> eliminate " + std::to_string(r.eliminated) + '\n';
  }
  emit(opt.out_path, text, out);
  return 0;
}

int cmd_gen(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.n < 1) throw ParameterError("gen requires --n >= 1");
  core::SparseChoiceModel model(1, {{core::Permutation::identity(1), 1.0}});
  if (opt.family == "mnl" || opt.family == "expfam") {
    if (opt.params_path.empty()) {
      throw ParameterError("gen --family " + opt.family +
                           " requires --params");
    }
    const std::string text = io::read_file(opt.params_path);
    if (opt.family == "mnl") {
      auto weights = parse_reals(text);
      if (static_cast<int>(weights.size()) != opt.n) {
        throw ParameterError("expected " + std::to_string(opt.n) +
                             " weights, file has " +
                             std::to_string(weights.size()));
      }
      model = generators::exact_distribution(
          generators::MNLParams(std::move(weights)));
    } else {
      core::Matrix theta = io::parse_matrix(text);
      if (theta.n() != opt.n) {
        throw ParameterError("expected a " + std::to_string(opt.n) + "x" +
                             std::to_string(opt.n) + " parameter matrix");
      }
      model = generators::exact_distribution(
          generators::ExpFamParams(std::move(theta)));
    }
  } else if (opt.family == "random") {
    const auto cap = detail::factorial_capped(opt.n);
    const auto def = std::min<std::uint64_t>(2 * static_cast<std::uint64_t>(opt.n), cap);
    const int k = opt.k > 0 ? opt.k : static_cast<int>(def);
    model = generators::random_sparse_model(opt.n, k, opt.seed);
  } else {
    throw ParameterError("unknown family \"" + opt.family + "\"");
  }
  emit(opt.out_path, io::format_model(model), out);
  err << "support: " << model.support_size() << "\n";
  return 0;
}

int cmd_check_condition(const Options& opt, std::ostream& out) {
  const std::string text = io::read_file(opt.params_path);
  generators::ConditionReport report{false, 0.0, 0.0, ""};
  if (opt.family == "mnl") {
    report = generators::condition_check(
        generators::MNLParams(parse_reals(text)), opt.delta);
  } else if (opt.family == "expfam") {
    report = generators::condition_check(
        generators::ExpFamParams(io::parse_matrix(text)));
  } else {
    throw ParameterError("unknown family \"" + opt.family + "\"");
  }
  out << "satisfied: " << (report.satisfied ? "yes" : "no")
      << "\nratio: " << report.ratio << "\nthreshold: " << report.threshold
      << "\n" << report.detail << "\n";
  return report.satisfied ? 0 : 1;
}

int cmd_cdf_compare(const Options& opt, std::ostream& out) {
  const auto a = load_model(opt.model_path);
  const auto b = load_model(opt.model_b_path);
  emit(opt.out_path, cdf::format_cdf_csv(cdf::cdf_compare(a, b)), out);
  return 0;
}

int cmd_apa(const Options& opt, std::ostream& out) {
  if (opt.apa_what == "model") {
    emit(opt.out_path, io::format_model(apa::model()), out);
  } else if (opt.normalized) {
    emit(opt.out_path, io::format_matrix(apa::table1_normalized()), out);
  } else {
    emit(opt.out_path, io::format_matrix(apa::table1()), out);
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"sparse choice models from first-order marginals"};
  app.name("scm");
  app.require_subcommand(1);
  Options opt;

  const auto add_matrix = [&](CLI::App* sub) {
    sub->add_option("--matrix", opt.matrix_path, "matrix file")->required();
    sub->add_flag("--percent", opt.percent,
                  "entries are percentages; divide by 100 and rebalance");
    sub->add_option("--out", opt.out_path, "write output here (default stdout)");
  };

  auto* marginals = app.add_subcommand("marginals", "marginal matrix of a model");
  marginals->add_option("--model", opt.model_path, "model file")->required();
  marginals->add_option("--out", opt.out_path, "write output here (default stdout)");

  auto* decompose = app.add_subcommand(
      "decompose", "Birkhoff decomposition of a doubly stochastic matrix");
  add_matrix(decompose);
  decompose->add_option("--tol", opt.tol, "residual tolerance");

  auto* sparsify_cmd =
      app.add_subcommand("sparsify", "sampling sparsifier for a marginal matrix");
  add_matrix(sparsify_cmd);
  sparsify_cmd->add_option("--epsilon", opt.epsilon, "target accuracy")->required();
  sparsify_cmd->add_option("--seed", opt.seed, "rng seed");

  auto* recover = app.add_subcommand(
      "recover", "signature-family recovery via multiplicative weights");
  add_matrix(recover);
  recover->add_option("--k", opt.k, "support size to try");
  recover->add_option("--epsilon", opt.epsilon, "feasibility tolerance");
  recover->add_flag("--no-signature", opt.no_signature,
                    "quantized-probability variant without signature cells");
  recover->add_flag("--search", opt.search, "search over k, then shrink epsilon");
  recover->add_option("--epsilon0", opt.epsilon0, "starting epsilon for --search");
  recover->add_option("--epsilon-floor", opt.epsilon_floor,
                      "stop shrinking epsilon here in --search");

  auto* fit = app.add_subcommand("fit", "greedy heuristic fit (no guarantee)");
  add_matrix(fit);
  fit->add_option("--epsilon", opt.epsilon, "l2 stopping error")->required();

  auto* hare = app.add_subcommand("hare", "Hare-system winner and ranking");
  hare->add_option("--model", opt.model_path, "model file")->required();
  hare->add_option("--out", opt.out_path, "write output here (default stdout)");

  auto* gen = app.add_subcommand("gen", "generate a model");
  gen->add_option("--family", opt.family, "mnl, expfam, or random")->required();
  gen->add_option("--n", opt.n, "number of items")->required();
  gen->add_option("--params", opt.params_path,
                  "mnl: one weight per item; expfam: NxN matrix");
  gen->add_option("--k", opt.k, "support size for --family random");
  gen->add_option("--seed", opt.seed, "rng seed");
  gen->add_option("--out", opt.out_path, "write output here (default stdout)");

  auto* check = app.add_subcommand("check-condition",
                                   "sparsification regularity check");
  check->add_option("--family", opt.family, "mnl or expfam")->required();
  check->add_option("--params", opt.params_path, "parameter file")->required();
  check->add_option("--delta", opt.delta, "mnl tail exponent");

  auto* cdfc = app.add_subcommand("cdf-compare",
                                  "CDFs of two models over all permutations");
  cdfc->add_option("--model-a", opt.model_path, "first model file")->required();
  cdfc->add_option("--model-b", opt.model_b_path, "second model file")->required();
  cdfc->add_option("--out", opt.out_path, "write CSV here (default stdout)");

  auto* apa_cmd = app.add_subcommand("apa", "bundled election-study fixture");
  apa_cmd->add_option("what", opt.apa_what, "marginals or model")
      ->required()
      ->check(CLI::IsMember({"marginals", "model"}));
  apa_cmd->add_flag("--normalized", opt.normalized,
                    "balance the marginal matrix before printing");
  apa_cmd->add_option("--out", opt.out_path, "write output here (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(marginals)) return cmd_marginals(opt, out);
    if (app.got_subcommand(decompose)) return cmd_decompose(opt, out, err);
    if (app.got_subcommand(sparsify_cmd)) return cmd_sparsify(opt, out, err);
    if (app.got_subcommand(recover)) return cmd_recover(opt, out, err);
    if (app.got_subcommand(fit)) return cmd_fit(opt, out, err);
    if (app.got_subcommand(hare)) return cmd_hare(opt, out);
    if (app.got_subcommand(gen)) return cmd_gen(opt, out, err);
    if (app.got_subcommand(check)) return cmd_check_condition(opt, out);
    if (app.got_subcommand(cdfc)) return cmd_cdf_compare(opt, out);
    if (app.got_subcommand(apa_cmd)) return cmd_apa(opt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  err << "no subcommand given\n";
  return 2;
}

}  // namespace scm::cli
