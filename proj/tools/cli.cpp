#include "cli.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "discode/error.hpp"
#include "discode/io.hpp"
#include "discode/metrics.hpp"
#include "discode/scoring.hpp"
#include "discode/selfcheck.hpp"
#include "discode/synth.hpp"

namespace discode::cli {

namespace {

using json = nlohmann::ordered_json;

struct ScoreFlags {
  std::string in, out;
  std::string method = "discode";
  std::string solver;
  std::string divergence = "wkl";
  std::optional<double> div_order;
  double alpha_sigma2 = 0.1;
  double prior_var = 1.0;
  bool use_features = false;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  bool lenient = false;
  int max_iters = 10;
  double lr = 1e-3;
  double tolerance = 1e-10;
};

struct EvalFlags {
  std::string scored, labels, out;
  double tie_credit = 0.0;
  bool lenient = false;
};

struct SynthFlags {
  SynthConfig config;
  std::string scale = "decimal-0-1";
  std::string out, truth;
};

struct SelfCheckFlags {
  SelfCheckOptions options;
};

int fail(std::ostream& err, ErrorKind kind, const std::string& message) {
  std::string flat = message;
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  err << "discode: error[" << error_kind_name(kind) << "]: " << flat << "\n";
  return kind == ErrorKind::Config ? kUsage : kFailure;
}

int cmd_score(const ScoreFlags& f, std::ostream& out, std::ostream& err) {
  ScoringConfig config;
  config.alpha.sigma2 = f.alpha_sigma2;
  config.alpha.validate();
  config.prior_var = f.prior_var;
  config.use_features = f.use_features;

  const auto kind = parse_divergence_kind(f.divergence);
  switch (kind) {
    case DivergenceKind::Renyi: config.divergence = DivergenceSpec::renyi(f.div_order.value_or(0.5)); break;
    case DivergenceKind::Beta: config.divergence = DivergenceSpec::beta(f.div_order.value_or(2.0)); break;
    case DivergenceKind::KL: config.divergence = DivergenceSpec::kl(); break;
    case DivergenceKind::JensenShannon: config.divergence = DivergenceSpec::jensen_shannon(); break;
    case DivergenceKind::WeightedKL: config.divergence = DivergenceSpec::weighted_kl(0.5); break;
  }
  config.divergence.validate();

  std::string solver = f.solver;
  if (solver.empty()) solver = kind == DivergenceKind::WeightedKL ? "analytic" : "converged";
  if (solver == "analytic") {
    if (kind != DivergenceKind::WeightedKL) {
      throw Error(ErrorKind::Config, "--solver analytic conflicts with --divergence " + f.divergence +
                                         " (closed form exists only for wkl)");
    }
    config.solve.mode = SolveMode::Analytic;
  } else if (solver == "converged") {
    config.solve.mode = SolveMode::NumericConverged;
  } else {
    config.solve.mode = SolveMode::NumericFidelity;
  }
  config.solve.max_iters = f.max_iters;
  config.solve.learning_rate = f.lr;
  config.solve.tolerance = f.tolerance;
  config.solve.validate();

  const Method method = parse_method(f.method);
  const auto read = io::read_records(f.in, f.lenient ? io::ParseMode::Lenient : io::ParseMode::Strict);
  const auto results = score_records(read.items, method, config, f.jobs);

  json provenance = json::object();
  provenance["method"] = f.method;
  if (method == Method::Discode) {
    provenance["solver"] = solver;
    provenance["divergence"] = f.divergence;
    if (kind == DivergenceKind::Renyi || kind == DivergenceKind::Beta) provenance["div_order"] = config.divergence.order;
    provenance["alpha_sigma2"] = f.alpha_sigma2;
    provenance["prior_var"] = f.prior_var;
    provenance["use_features"] = f.use_features;
  }
  io::write_results(f.out, results, provenance);

  std::size_t warnings = 0;
  for (const auto& r : results) warnings += r.warnings.size();
  out << "scored " << results.size() << " records (" << warnings << " warnings) -> " << f.out << "\n";
  if (read.skipped > 0) {
    for (const auto& p : read.problems) err << "discode: skipped " << p << "\n";
    err << "discode: error[input]: skipped " << read.skipped << " invalid lines\n";
    return kSkipped;
  }
  return kOk;
}

int cmd_eval(const EvalFlags& f, std::ostream& out, std::ostream& err) {
  const auto mode = f.lenient ? io::ParseMode::Lenient : io::ParseMode::Strict;
  const auto scored = io::read_results(f.scored, mode);
  const auto labels = io::read_labels(f.labels, mode);

  std::map<std::string, double> score_by_id;
  for (const auto& r : scored.items) score_by_id[r.id] = r.score;

  std::vector<LabeledScore> graded;
  std::vector<PreferencePair> pairs;
  std::size_t unmatched = 0;
  auto lookup = [&](const std::string& id, double& value) {
    const auto it = score_by_id.find(id);
    if (it == score_by_id.end()) {
      ++unmatched;
      return false;
    }
    value = it->second;
    return true;
  };
  for (const auto& label : labels.items) {
    if (const auto* g = std::get_if<io::GradedLabel>(&label)) {
      double predicted;
      if (lookup(g->id, predicted)) graded.push_back({g->id, predicted, g->human});
    } else {
      const auto& p = std::get<io::PreferenceLabel>(label);
      double a, b;
      const bool has_a = lookup(p.score_a_id, a);
      const bool has_b = lookup(p.score_b_id, b);
      if (has_a && has_b) pairs.push_back({p.id, a, b, p.preferred});
    }
  }
  if (unmatched > 0 && !f.lenient) {
    throw Error(ErrorKind::Input, std::to_string(unmatched) + " label ids did not match any scored id");
  }

  json metrics = json::object();
  std::ostringstream table;
  table << std::left << std::setw(10) << "metric" << std::right << std::setw(12) << "value" << std::setw(10) << "n"
        << "\n";
  auto row = [&](const std::string& name, double value, std::size_t n) {
    table << std::left << std::setw(10) << name << std::right << std::setw(12) << std::fixed << std::setprecision(4)
          << value << std::setw(10) << n << "\n";
  };
  if (!graded.empty()) {
    const double tb = kendall_tau_b(graded);
    const double tc = kendall_tau_c(graded);
    row("tau_b", tb, graded.size());
    row("tau_c", tc, graded.size());
    metrics["tau_b"] = tb;
    metrics["tau_c"] = tc;
    metrics["n_graded"] = graded.size();
  }
  if (!pairs.empty()) {
    const double acc = pairwise_accuracy(pairs, f.tie_credit);
    row("accuracy", acc, pairs.size());
    metrics["accuracy"] = acc;
    metrics["n_pairs"] = pairs.size();
    metrics["tie_credit"] = f.tie_credit;
  }
  if (graded.empty() && pairs.empty()) throw Error(ErrorKind::Input, "no labels joined against scored results");
  metrics["unmatched"] = unmatched;
  out << table.str();

  if (!f.out.empty()) {
    io::LineWriter w(f.out);
    w.write(metrics.dump());
    w.close();
  }
  const std::size_t skipped = scored.skipped + labels.skipped;
  if (skipped > 0 || unmatched > 0) {
    err << "discode: error[input]: skipped " << skipped << " invalid lines, " << unmatched << " unmatched ids\n";
    return kSkipped;
  }
  return kOk;
}

int cmd_synth(SynthFlags f, std::ostream& out) {
  f.config.scale = parse_scale_kind(f.scale);
  const auto corpus = generate_corpus(f.config);
  io::write_records(f.out, corpus.records);
  if (!f.truth.empty()) {
    io::LineWriter w(f.truth);
    for (std::size_t i = 0; i < corpus.records.size(); ++i) {
      w.write(io::label_to_line(io::GradedLabel{corpus.records[i].id, corpus.truths[i]}));
    }
    w.close();
  }
  out << "generated " << corpus.records.size() << " records -> " << f.out << "\n";
  return kOk;
}

int cmd_selfcheck(const SelfCheckFlags& f, std::ostream& out) {
  const auto checks = run_selfcheck(f.options);
  bool ok = true;
  out << std::left << std::setw(32) << "check" << std::setw(6) << "result" << std::right << std::setw(14) << "worst"
      << std::setw(12) << "bound" << std::setw(8) << "n" << "\n";
  for (const auto& c : checks) {
    ok = ok && c.passed;
    out << std::left << std::setw(32) << c.name << std::setw(6) << (c.passed ? "PASS" : "FAIL") << std::right
        << std::setw(14) << std::scientific << std::setprecision(3) << c.worst << std::setw(12) << c.threshold
        << std::setw(8) << c.instances << "\n";
  }
  out << (ok ? "all checks passed" : "selfcheck FAILED") << "\n";
  return ok ? kOk : kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive score decoding for judge-model score distributions", "discode"};
  app.require_subcommand(1);

  ScoreFlags score;
  auto* sc = app.add_subcommand("score", "Score a record file");
  sc->add_option("--in", score.in, "Input records (JSONL)")->required();
  sc->add_option("--out", score.out, "Output results (JSONL)")->required();
  sc->add_option("--method", score.method)->check(CLI::IsMember({"raw", "smoothing", "discode"}))
      ->envname("DISCODE_METHOD")->capture_default_str();
  sc->add_option("--solver", score.solver, "analytic (default for wkl) or converged/fidelity")
      ->check(CLI::IsMember({"analytic", "converged", "fidelity"}))->envname("DISCODE_SOLVER");
  sc->add_option("--divergence", score.divergence)->check(CLI::IsMember({"wkl", "kl", "js", "renyi", "beta"}))
      ->envname("DISCODE_DIVERGENCE")->capture_default_str();
  sc->add_option("--div-order", score.div_order, "Renyi lambda (0.5) or beta (2.0)");
  sc->add_option("--alpha-sigma2", score.alpha_sigma2)->envname("DISCODE_ALPHA_SIGMA2")->capture_default_str();
  sc->add_option("--prior-var", score.prior_var)->envname("DISCODE_PRIOR_VAR")->capture_default_str();
  sc->add_flag("--use-features", score.use_features, "Decode through the exported head features");
  sc->add_option("--jobs", score.jobs)->check(CLI::PositiveNumber)->envname("DISCODE_JOBS");
  sc->add_flag("--lenient", score.lenient, "Skip invalid lines instead of aborting");
  sc->add_option("--max-iters", score.max_iters, "Fidelity solver steps")->capture_default_str();
  sc->add_option("--lr", score.lr, "Fidelity solver learning rate")->capture_default_str();
  sc->add_option("--tolerance", score.tolerance, "Converged solver loss tolerance")->capture_default_str();

  EvalFlags eval;
  auto* ev = app.add_subcommand("eval", "Evaluate scored results against human labels");
  ev->add_option("--scored", eval.scored, "Scored results (JSONL)")->required();
  ev->add_option("--labels", eval.labels, "Labels (JSONL)")->required();
  ev->add_option("--out", eval.out, "Metrics JSON output");
  ev->add_option("--tie-credit", eval.tie_credit)->check(CLI::Range(0.0, 1.0))->envname("DISCODE_TIE_CREDIT")
      ->capture_default_str();
  ev->add_flag("--lenient", eval.lenient);

  SynthFlags synth;
  auto* sy = app.add_subcommand("synth", "Generate a biased synthetic corpus");
  sy->add_option("--n", synth.config.n_records)->capture_default_str();
  sy->add_option("--scale", synth.scale)
      ->check(CLI::IsMember({"decimal-0-1", "discrete-1-5", "discrete-0-9", "letter-A-E"}))->capture_default_str();
  sy->add_option("--sigma", synth.config.truth_sigma, "Spread of the clean distribution")->capture_default_str();
  sy->add_option("--bias", synth.config.bias_weight, "Mass moved to the bias target")->capture_default_str();
  sy->add_option("--temperature", synth.config.temperature)->capture_default_str();
  sy->add_option("--seed", synth.config.seed)->envname("DISCODE_SEED")->capture_default_str();
  sy->add_option("--bias-target", synth.config.bias_index, "Candidate index receiving the bias")
      ->capture_default_str();
  sy->add_flag("--continuous", synth.config.continuous_means, "Draw true means over the continuous range");
  sy->add_option("--out", synth.out, "Records output (JSONL)")->required();
  sy->add_option("--truth", synth.truth, "Ground-truth label output (JSONL)");

  SelfCheckFlags check;
  auto* ck = app.add_subcommand("selfcheck", "Validate the closed-form solver on random instances");
  ck->add_option("--seed", check.options.seed)->envname("DISCODE_SEED")->capture_default_str();
  ck->add_option("--instances", check.options.instances)->check(CLI::PositiveNumber)->capture_default_str();
  ck->add_option("--corrupt-alpha", check.options.alpha_corruption)->group("");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    return fail(err, ErrorKind::Config, msg);
  }

  try {
    if (sc->parsed()) return cmd_score(score, out, err);
    if (ev->parsed()) return cmd_eval(eval, out, err);
    if (sy->parsed()) return cmd_synth(synth, out);
    return cmd_selfcheck(check, out);
  } catch (const Error& e) {
    return fail(err, e.kind(), e.what());
  } catch (const std::exception& e) {
    return fail(err, ErrorKind::Input, e.what());
  }
}

}  // namespace discode::cli
