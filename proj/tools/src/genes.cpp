#include <algorithm>
#include <memory>
#include <ostream>
#include <sstream>

#include "internal.hpp"
#include "mdl/error.hpp"
#include "mdl/pipeline/sweep.hpp"

namespace mdl::cli {

namespace {

struct GeneInputs {
  InputFile matrix_file;
  InputFile labels_file;
  ExpressionMatrix matrix;  // preprocessed
};

GeneInputs load(const RunConfig& config, Stage& stage) {
  stage.name = "reading input";
  if (config.matrix_path.empty() || config.labels_path.empty())
    throw Error(ErrorCode::invalid_argument, "genes commands need --matrix and --labels");
  GeneInputs in;
  in.matrix_file = read_input(config.matrix_path);
  in.labels_file = read_input(config.labels_path);
  std::istringstream m(in.matrix_file.bytes), l(in.labels_file.bytes);
  const ExpressionMatrix raw = parse_matrix(m, l, config.matrix_path, config.labels_path);
  stage.name = "preprocessing";
  PreprocessOptions p;
  p.clamp = config.clamp;
  p.filter = config.filter;
  p.log10 = config.log10;
  in.matrix = preprocess(raw, p);
  return in;
}

ExperimentConfig experiment(const RunConfig& config) {
  ExperimentConfig ec;
  const auto q = parse_quantize_method(config.quantize);
  if (!q) throw Error(ErrorCode::invalid_argument, "unknown --quantize '" + config.quantize + "'");
  ec.quantize = *q;

  auto ms = parse_counts(config.m_range, "--m");
  GeneSelectionConfig& s = ec.selection;
  s.include_m0 = config.include_m0;
  if (!ms.empty() && ms.front() == 0) {
    s.include_m0 = true;
    ms.erase(ms.begin());
  }
  if (ms.empty()) throw Error(ErrorCode::invalid_argument, "--m must contain a positive moment count");
  if (ms.back() - ms.front() + 1 != ms.size())
    throw Error(ErrorCode::invalid_argument, "--m must be a contiguous range");
  s.m_min = ms.front();
  s.m_max = ms.back();
  s.intercept = config.intercept;
  s.method = config.comp_method();
  s.comp.mc_draws = config.mc_draws;
  s.comp.seed = config.seed;

  ec.classifier.epsilon = config.epsilon;
  ec.workers = std::max<std::size_t>(1, config.workers);
  ec.memo = std::make_shared<ComplexityMemo>();
  return ec;
}

std::size_t single_level(const RunConfig& config) {
  const auto k = parse_counts(config.levels, "--levels");
  if (k.size() != 1) throw Error(ErrorCode::invalid_argument, "this command takes a single --levels value");
  return k.front();
}

std::vector<GeneSelection> rank(const GeneInputs& in, const ExperimentConfig& ec, std::size_t levels, Stage& stage,
                                QuantizedMatrix& q, Partition& p) {
  stage.name = "quantizing";
  q = quantize_matrix(in.matrix, levels, ec.quantize);
  p = partition(in.matrix);
  stage.name = "ranking genes";
  return rank_genes(q, in.matrix.gene_ids, p.train, p.train_labels, in.matrix.classes(), ec.selection, ec.workers,
                    ec.memo.get());
}

std::string nml_cell(const MPoint& pt, const Units& u) {
  return pt.report ? fixed(u(pt.report->nml_nats)) : std::string();
}

int genes_rank(const RunConfig& config, Stage& stage, std::ostream& out) {
  const Units u{config.bits};
  const GeneInputs in = load(config, stage);
  const ExperimentConfig ec = experiment(config);
  QuantizedMatrix q;
  Partition p;
  const auto ranked = rank(in, ec, single_level(config), stage, q, p);
  const std::vector<const InputFile*> inputs{&in.matrix_file, &in.labels_file};
  const auto ms = ec.selection.m_values();

  stage.name = "writing";
  if (config.json_output) {
    json j = envelope(config, inputs);
    json genes = json::array();
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      const auto& g = ranked[r];
      json row{{"rank", r + 1}, {"gene_id", g.gene_id}};
      row["chosen_m"] = g.chosen_m ? json(*g.chosen_m) : json(nullptr);
      json curve = json::array();
      for (const auto& pt : g.curve) {
        json c{{"m", pt.m}};
        if (pt.report) {
          c[u.key("err")] = u(pt.report->err_nats);
          c[u.key("comp")] = u(pt.report->comp_nats);
          c[u.key("nml")] = u(pt.report->nml_nats);
        } else {
          c["error"] = pt.error;
        }
        curve.push_back(c);
      }
      row["curve"] = curve;
      row[u.key("min_nml")] = u(g.min_nml_nats);
      genes.push_back(row);
    }
    j["genes"] = genes;
    emit(config, "ranking.json", j.dump(2) + "\n", out);
    return 0;
  }

  std::string table = csv_preamble(config, inputs) + "rank,gene_id,chosen_m";
  for (std::size_t m : ms) table += "," + u.key("nml") + "_m" + std::to_string(m);
  table += "," + u.key("min_nml") + "\n";
  std::string curves = csv_preamble(config, inputs) + "gene_id,m," + u.key("err") + "," + u.key("comp") + "," +
                       u.key("nml") + ",error\n";
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const auto& g = ranked[r];
    table += std::to_string(r + 1) + "," + g.gene_id + "," + (g.chosen_m ? std::to_string(*g.chosen_m) : "");
    for (const auto& pt : g.curve) table += "," + nml_cell(pt, u);
    table += "," + fixed(u(g.min_nml_nats)) + "\n";
    for (const auto& pt : g.curve) {
      curves += g.gene_id + "," + std::to_string(pt.m) + ",";
      if (pt.report) {
        curves += fixed(u(pt.report->err_nats)) + "," + fixed(u(pt.report->comp_nats)) + "," +
                  fixed(u(pt.report->nml_nats)) + ",\n";
      } else {
        std::string e = pt.error;
        std::replace(e.begin(), e.end(), ',', ';');
        curves += ",,," + e + "\n";
      }
    }
  }
  emit(config, "ranking.csv", table, out);
  if (!config.out_dir.empty()) emit(config, "curves.csv", curves, out);
  return 0;
}

int genes_classify(const RunConfig& config, Stage& stage, std::ostream& out) {
  const GeneInputs in = load(config, stage);
  const ExperimentConfig ec = experiment(config);
  QuantizedMatrix q;
  Partition p;
  const auto ranked = rank(in, ec, single_level(config), stage, q, p);
  stage.name = "training classifier";
  const std::size_t top = std::min(config.top_g, ranked.size());
  const auto clf = build_classifier(q, p.train, p.train_labels, in.matrix.classes(), ranked, top, ec.classifier);
  stage.name = "evaluating";
  const Evaluation e = evaluate(clf, q, p.eval, p.eval_labels);

  json j = envelope(config, {&in.matrix_file, &in.labels_file});
  j["eval_split"] = p.eval_is_test ? "test" : "train";
  j["classes"] = in.matrix.class_labels;
  j["accuracy"] = e.accuracy;
  j["correct"] = e.correct;
  j["total"] = e.total;
  json confusion = json::array();
  for (std::size_t t = 0; t < clf.classes; ++t) {
    json row = json::array();
    for (std::size_t c = 0; c < clf.classes; ++c) row.push_back(e.confusion[t * clf.classes + c]);
    confusion.push_back(row);
  }
  j["confusion"] = confusion;
  json genes = json::array();
  for (const auto& g : clf.genes) genes.push_back({{"gene_id", g.gene_id}, {"m", g.m}});
  j["genes"] = genes;
  j["seed"] = config.seed;
  emit(config, "evaluation.json", j.dump(2) + "\n", out);
  return 0;
}

int genes_sweep(const RunConfig& config, Stage& stage, std::ostream& out) {
  const Units u{config.bits};
  const GeneInputs in = load(config, stage);
  const ExperimentConfig ec = experiment(config);
  const auto levels = parse_counts(config.levels, "--levels");
  stage.name = "sweeping level counts";
  const SweepResult r = run_quantization_sweep(in.matrix, levels, config.top_g, ec);
  const std::vector<const InputFile*> inputs{&in.matrix_file, &in.labels_file};

  if (config.json_output) {
    json j = envelope(config, inputs);
    json rows = json::array();
    for (const auto& row : r.rows)
      rows.push_back({{"levels", row.levels},
                      {u.key("mean_nml"), u(row.mean_nml_nats)},
                      {"accuracy", row.accuracy},
                      {"correct", row.correct},
                      {"total", row.total},
                      {"top_genes", row.top_genes}});
    j["rows"] = rows;
    j["nml_argmin_levels"] = r.nml_argmin_levels;
    j["accuracy_argmax_levels"] = r.accuracy_argmax_levels;
    j["co_extremum"] = r.co_extremum;
    emit(config, "sweep.json", j.dump(2) + "\n", out);
    return 0;
  }
  std::string csv = csv_preamble(config, inputs) + "levels," + u.key("mean_nml") + ",accuracy,correct,total\n";
  for (const auto& row : r.rows)
    csv += std::to_string(row.levels) + "," + fixed(u(row.mean_nml_nats)) + "," + fixed(row.accuracy) + "," +
           std::to_string(row.correct) + "," + std::to_string(row.total) + "\n";
  csv += "# nml_argmin_levels " + std::to_string(r.nml_argmin_levels) + "\n# accuracy_argmax_levels";
  for (std::size_t k : r.accuracy_argmax_levels) csv += " " + std::to_string(k);
  csv += "\n# co_extremum " + std::string(r.co_extremum ? "1" : "0") + "\n";
  emit(config, "sweep.csv", csv, out);
  return 0;
}

int genes_curve(const RunConfig& config, Stage& stage, std::ostream& out) {
  const GeneInputs in = load(config, stage);
  const ExperimentConfig ec = experiment(config);
  const auto fixed_m = parse_counts(config.fixed_m, "--fixed-m");
  const std::size_t max_genes = std::min(config.max_genes, in.matrix.genes());
  stage.name = "building classifier curve";
  const ClassifierCurve c = run_classifier_curve(in.matrix, single_level(config), max_genes, fixed_m, ec);
  const std::vector<const InputFile*> inputs{&in.matrix_file, &in.labels_file};

  if (config.json_output) {
    json j = envelope(config, inputs);
    j["levels"] = c.levels;
    j["fixed_m"] = c.fixed_m;
    json rows = json::array();
    for (const auto& row : c.rows)
      rows.push_back({{"genes", row.genes}, {"nml_accuracy", row.nml_accuracy}, {"fixed_accuracy", row.fixed_accuracy}});
    j["rows"] = rows;
    emit(config, "curve.json", j.dump(2) + "\n", out);
    return 0;
  }
  std::string csv = csv_preamble(config, inputs) + "genes,nml_accuracy";
  for (std::size_t m : c.fixed_m) csv += ",m" + std::to_string(m) + "_accuracy";
  csv += "\n";
  for (const auto& row : c.rows) {
    csv += std::to_string(row.genes) + "," + fixed(row.nml_accuracy);
    for (double a : row.fixed_accuracy) csv += "," + fixed(a);
    csv += "\n";
  }
  emit(config, "curve.csv", csv, out);
  return 0;
}

}  // namespace

int cmd_genes(const RunConfig& config, Stage& stage, std::ostream& out) {
  if (config.command == "genes rank") return genes_rank(config, stage, out);
  if (config.command == "genes classify") return genes_classify(config, stage, out);
  if (config.command == "genes sweep") return genes_sweep(config, stage, out);
  if (config.command == "genes curve") return genes_curve(config, stage, out);
  throw Error(ErrorCode::invalid_argument, "unknown command '" + config.command + "'");
}

}  // namespace mdl::cli
