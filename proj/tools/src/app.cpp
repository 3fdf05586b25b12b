#include <ostream>

#include "CLI11.hpp"
#include "internal.hpp"
#include "mdl/cli/cli.hpp"

namespace mdl::cli {

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::range:
    case ErrorCode::parse:
      return exit_usage;
    case ErrorCode::infeasible:
      return exit_infeasible;
    case ErrorCode::cap_exceeded:
      return exit_cap;
    case ErrorCode::non_convergence:
      return exit_non_convergence;
    case ErrorCode::empty_result:
      return exit_empty;
  }
  return exit_internal;
}

const char* version() noexcept { return MDL_VERSION; }

namespace {

void add_method(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--method", c.method, "Complexity computation: exact, types or mc")
      ->check(CLI::IsMember({"exact", "types", "mc"}))
      ->capture_default_str();
  cmd->add_option("--draws", c.mc_draws, "Monte-Carlo draws")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Seed for Monte-Carlo draws and synthetic data")->capture_default_str();
}

void add_gene_options(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--matrix", c.matrix_path, "Expression matrix (genes as rows)")->required();
  cmd->add_option("--labels", c.labels_path, "Sample labels: id, class[, train|test]")->required();
  cmd->add_option("--m", c.m_range, "Moment counts to sweep, e.g. 1..7")->capture_default_str();
  cmd->add_flag("--include-m0", c.include_m0, "Add the intercept-only baseline to the sweep");
  cmd->add_flag("!--no-intercept", c.intercept, "Drop the per-class intercept feature");
  cmd->add_option("--quantize", c.quantize, "quantile or equal-width")
      ->check(CLI::IsMember({"quantile", "equal-width"}))
      ->capture_default_str();
  cmd->add_flag("!--no-clamp", c.clamp, "Skip clamping to [100, 16000]");
  cmd->add_flag("!--no-filter", c.filter, "Skip the fold and range filters");
  cmd->add_flag("!--no-log", c.log10, "Skip the log10 transform");
  cmd->add_option("--epsilon", c.epsilon, "Classifier probability floor")->capture_default_str();
  add_method(cmd, c);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Maximum-entropy models selected by normalized maximum likelihood", "maxent-mdl"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", c.json_output, "Emit JSON instead of text or CSV");
  app.add_flag("--bits", c.bits, "Display codelengths in bits");
  app.add_option("--out", c.out_dir, "Write artifacts to this directory");
  app.add_option("--workers", c.workers, "Worker threads for per-gene work")->capture_default_str();

  auto* fit = app.add_subcommand("fit", "Fit the maximum-entropy distribution to moments or a sample");
  fit->add_option("--alphabet", c.alphabet, "Comma-separated symbols");
  fit->add_option("--mean", c.means, "Target moment E[x^k], repeat for k = 1, 2, ...")->delimiter(',');
  fit->add_option("--sample", c.sample_path, "Sample file; moments are taken from it");
  fit->add_option("--m", c.m, "Moment count with --sample")->capture_default_str();

  auto* nml = app.add_subcommand("nml", "NML codelength of a sample, or of labels given a covariate");
  nml->add_option("--sample", c.sample_path, "Sample (or label) file")->required();
  nml->add_option("--given", c.given_path, "Covariate file; switches to the conditional model");
  nml->add_option("--alphabet", c.alphabet, "Comma-separated symbols of the sample or covariate");
  nml->add_option("--classes", c.classes, "Comma-separated class labels");
  nml->add_option("--m", c.m, "Moment count")->capture_default_str();
  nml->add_flag("!--no-intercept", c.intercept, "Conditional model without per-class intercepts");
  add_method(nml, c);

  auto* select = app.add_subcommand("select", "Choose among moment feature sets");
  select->add_option("--sample", c.sample_path, "Sample file")->required();
  select->add_option("--alphabet", c.alphabet, "Comma-separated symbols");
  select->add_option("--criterion", c.criterion, "nml or minimax")
      ->check(CLI::IsMember({"nml", "minimax"}))
      ->capture_default_str();
  select->add_option("--candidate", c.candidates, "id:p1,p2 uses features x^p1, x^p2; repeatable");
  select->add_option("--m-max", c.m_max, "Without --candidate, compare m = 0..m-max")->capture_default_str();
  add_method(select, c);

  auto* genes = app.add_subcommand("genes", "Gene ranking and classification pipeline");
  genes->require_subcommand(1);
  auto* rank = genes->add_subcommand("rank", "Rank genes by minimum conditional NML");
  add_gene_options(rank, c);
  rank->add_option("--levels", c.levels, "Quantization levels")->capture_default_str();
  auto* classify = genes->add_subcommand("classify", "Train on the top genes and evaluate");
  add_gene_options(classify, c);
  classify->add_option("--levels", c.levels, "Quantization levels")->capture_default_str();
  classify->add_option("--top", c.top_g, "Number of top-ranked genes")->capture_default_str();
  auto* sweep = genes->add_subcommand("sweep", "Accuracy and mean NML against the level count");
  add_gene_options(sweep, c);
  sweep->add_option("--levels", c.levels, "Level counts, e.g. 2..8")->capture_default_str();
  sweep->add_option("--top", c.top_g, "Number of top-ranked genes")->capture_default_str();
  auto* curve = genes->add_subcommand("curve", "Accuracy against the number of genes");
  add_gene_options(curve, c);
  curve->add_option("--levels", c.levels, "Quantization levels")->capture_default_str();
  curve->add_option("--max-genes", c.max_genes, "Largest gene count")->capture_default_str();
  curve->add_option("--fixed-m", c.fixed_m, "Fixed moment counts to compare against")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Write a synthetic two-class expression data set");
  synth->add_option("--informative", c.informative, "Informative genes")->capture_default_str();
  synth->add_option("--noise", c.noise, "Noise genes")->capture_default_str();
  synth->add_option("--states", c.states, "Latent states of informative genes")->capture_default_str();
  synth->add_option("--seed", c.seed, "Generator seed")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  if (fit->parsed()) c.command = "fit";
  if (nml->parsed()) c.command = "nml";
  if (select->parsed()) c.command = "select";
  if (synth->parsed()) c.command = "synth";
  for (auto* sub : {rank, classify, sweep, curve})
    if (sub->parsed()) c.command = "genes " + sub->get_name();

  Stage stage{"validating arguments"};
  try {
    if (c.command == "fit") return cmd_fit(c, stage, out);
    if (c.command == "nml") return cmd_nml(c, stage, out);
    if (c.command == "select") return cmd_select(c, stage, out);
    if (c.command == "synth") return cmd_synth(c, stage, out);
    return cmd_genes(c, stage, out);
  } catch (const Error& e) {
    err << "maxent-mdl " << c.command << ": " << stage.name << ": " << to_string(e.code()) << ": " << e.what()
        << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "maxent-mdl " << c.command << ": " << stage.name << ": internal error: " << e.what() << "\n";
    return exit_internal;
  }
}

}  // namespace mdl::cli
