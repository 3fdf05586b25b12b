#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "internal.hpp"
#include "mdl/conditional.hpp"
#include "mdl/error.hpp"
#include "mdl/features.hpp"
#include "mdl/maxent.hpp"
#include "mdl/pipeline/synthetic.hpp"
#include "mdl/selection.hpp"

namespace mdl::cli {

namespace {

CompOptions comp_options(const RunConfig& config) {
  CompOptions o;
  o.mc_draws = config.mc_draws;
  o.seed = config.seed;
  return o;
}

json report_json(const CodelengthReport& r, const Units& u) {
  json j;
  j[u.key("err")] = u(r.err_nats);
  j[u.key("comp")] = u(r.comp_nats);
  j[u.key("nml")] = u(r.nml_nats);
  j["method"] = to_string(r.method);
  if (r.mc_stderr_nats) j[u.key("mc_stderr")] = u(*r.mc_stderr_nats);
  return j;
}

// Columns x^p for the listed powers.
FeatureTable power_features(const Alphabet& alphabet, const std::vector<std::size_t>& powers) {
  std::vector<double> values;
  values.reserve(alphabet.size() * powers.size());
  for (std::size_t j = 0; j < alphabet.size(); ++j)
    for (std::size_t p : powers) {
      const double v = std::pow(alphabet[j], static_cast<double>(p));
      if (!std::isfinite(v)) throw Error(ErrorCode::range, "x^" + std::to_string(p) + " overflows");
      values.push_back(v);
    }
  return FeatureTable(alphabet.size(), powers.size(), std::move(values));
}

std::vector<Candidate> parse_candidates(const RunConfig& config, const Alphabet& alphabet) {
  std::vector<Candidate> out;
  if (config.candidates.empty()) {
    for (std::size_t m = 0; m <= config.m_max; ++m)
      out.push_back({"m" + std::to_string(m), build_moment_features(alphabet, m)});
    return out;
  }
  std::set<std::string> ids;
  for (const auto& entry : config.candidates) {
    const auto colon = entry.find(':');
    if (colon == std::string::npos || colon == 0)
      throw Error(ErrorCode::parse, "--candidate '" + entry + "': expected id:p1,p2,...");
    const std::string id = entry.substr(0, colon);
    if (!ids.insert(id).second) throw Error(ErrorCode::invalid_argument, "duplicate candidate id '" + id + "'");
    const std::string rest = entry.substr(colon + 1);
    std::vector<std::size_t> powers;
    if (!rest.empty()) powers = parse_counts(rest, "--candidate " + id);
    if (std::find(powers.begin(), powers.end(), std::size_t{0}) != powers.end())
      throw Error(ErrorCode::invalid_argument, "--candidate " + id + ": powers start at 1");
    out.push_back({id, power_features(alphabet, powers)});
  }
  return out;
}

std::string text_lines(const json& j) {
  std::string s;
  for (const auto& [k, v] : j.items()) {
    s += k + "\t";
    if (v.is_number_float()) {
      s += fixed(v.get<double>());
    } else if (v.is_string()) {
      s += v.get<std::string>();
    } else if (v.is_array()) {
      bool first = true;
      for (const auto& e : v) {
        if (!first) s += " ";
        first = false;
        s += e.is_number_float() ? fixed(e.get<double>()) : e.dump();
      }
    } else {
      s += v.dump();
    }
    s += "\n";
  }
  return s;
}

}  // namespace

int cmd_fit(const RunConfig& config, Stage& stage, std::ostream& out) {
  const Units u{config.bits};
  std::vector<const InputFile*> inputs;
  InputFile sample_file;
  std::optional<Alphabet> alphabet;
  std::optional<FeatureTable> features;
  MomentVector moments;

  stage.name = "reading input";
  if (!config.sample_path.empty()) {
    if (!config.means.empty()) throw Error(ErrorCode::invalid_argument, "give either --sample or --mean, not both");
    sample_file = read_input(config.sample_path);
    inputs.push_back(&sample_file);
    const auto values = numbers(sample_file);
    alphabet = make_alphabet(config.alphabet, values);
    const Sample sample = to_sample(*alphabet, values, config.sample_path);
    features = build_moment_features(*alphabet, config.m);
    stage.name = "computing moments";
    moments = empirical_moments(sample, *features);
  } else {
    if (config.alphabet.empty()) throw Error(ErrorCode::invalid_argument, "--mean needs --alphabet");
    alphabet = make_alphabet(config.alphabet, {});
    features = build_moment_features(*alphabet, config.means.size());
    moments.means = config.means;
  }

  stage.name = "fitting";
  const MaxEntDistribution dist = fit_maxent(*features, moments);

  json body;
  std::vector<double> symbols(alphabet->symbols().begin(), alphabet->symbols().end());
  body["alphabet"] = symbols;
  body["moments"] = moments.means;
  body["probs"] = dist.probs;
  body["lambdas"] = dist.lambdas;
  body[u.key("entropy")] = u(dist.entropy_nats);
  body["reduced_support"] = dist.reduced_support;
  body["max_residual"] = dist.max_residual;
  body["iterations"] = dist.iterations;

  if (config.json_output) {
    json j = envelope(config, inputs);
    j["result"] = body;
    emit(config, "fit.json", j.dump(2) + "\n", out);
  } else {
    emit(config, "fit.txt", text_lines(body), out);
  }
  return 0;
}

int cmd_nml(const RunConfig& config, Stage& stage, std::ostream& out) {
  const Units u{config.bits};
  const CompOptions opts = comp_options(config);
  const CompMethod method = config.comp_method();

  stage.name = "reading input";
  const InputFile sample_file = read_input(config.sample_path);
  std::vector<const InputFile*> inputs{&sample_file};
  InputFile given_file;
  json body;

  if (config.given_path.empty()) {
    const auto values = numbers(sample_file);
    const Alphabet alphabet = make_alphabet(config.alphabet, values);
    const Sample sample = to_sample(alphabet, values, config.sample_path);
    const FeatureTable features = build_moment_features(alphabet, config.m);
    stage.name = "computing codelength";
    const CodelengthReport r = nml_codelength(features, sample, method, opts);
    body["model"] = "generative";
    body["n"] = sample.size();
    body["alphabet_size"] = alphabet.size();
    body["m"] = config.m;
    body.update(report_json(r, u));
    body[u.key("uncompressed")] = u(static_cast<double>(sample.size()) * std::log(static_cast<double>(alphabet.size())));
  } else {
    given_file = read_input(config.given_path);
    inputs.push_back(&given_file);
    const auto label_tokens = tokens(sample_file);
    std::vector<std::string> names;
    if (!config.classes.empty()) {
      std::string cur;
      for (char ch : config.classes + ",") {
        if (ch == ',') {
          names.push_back(cur);
          cur.clear();
        } else {
          cur += ch;
        }
      }
    } else {
      names = label_tokens;
      std::sort(names.begin(), names.end());
      names.erase(std::unique(names.begin(), names.end()), names.end());
      if (names.size() < 2)
        throw Error(ErrorCode::invalid_argument, "the labels hold fewer than two classes; pass --classes");
    }
    const ClassSet classes(names);
    std::vector<std::size_t> labels;
    for (const auto& t : label_tokens) {
      const auto c = classes.index_of(t);
      if (!c) throw Error(ErrorCode::invalid_argument, config.sample_path + ": unknown class '" + t + "'");
      labels.push_back(*c);
    }
    const auto xs = numbers(given_file);
    if (xs.size() != labels.size())
      throw Error(ErrorCode::invalid_argument, "labels and covariate differ in length (" +
                                                   std::to_string(labels.size()) + " vs " +
                                                   std::to_string(xs.size()) + ")");
    const Alphabet alphabet = make_alphabet(config.alphabet, xs);
    const Sample x = to_sample(alphabet, xs, config.given_path);
    const CondFeatureTable features = build_cond_moment_features(alphabet, classes, config.m, config.intercept);
    stage.name = "computing conditional codelength";
    const CodelengthReport r = cond_nml(features, x, labels, method, opts);
    body["model"] = "conditional";
    body["n"] = x.size();
    body["levels"] = alphabet.size();
    body["classes"] = classes.labels();
    body["m"] = config.m;
    body["intercept"] = config.intercept;
    body.update(report_json(r, u));
    body[u.key("uncompressed")] = u(static_cast<double>(x.size()) * std::log(static_cast<double>(classes.size())));
  }
  json j = envelope(config, inputs);
  j["result"] = body;
  emit(config, "nml.json", j.dump(2) + "\n", out);
  return 0;
}

int cmd_select(const RunConfig& config, Stage& stage, std::ostream& out) {
  const Units u{config.bits};
  stage.name = "reading input";
  const InputFile sample_file = read_input(config.sample_path);
  const std::vector<const InputFile*> inputs{&sample_file};
  const auto values = numbers(sample_file);
  const Alphabet alphabet = make_alphabet(config.alphabet, values);
  const Sample sample = to_sample(alphabet, values, config.sample_path);
  const auto candidates = parse_candidates(config, alphabet);

  stage.name = "selecting";
  SelectionResult result;
  if (config.criterion == "nml") {
    result = select_by_nml(candidates, sample, config.comp_method(), comp_options(config));
  } else if (config.criterion == "minimax") {
    result = select_by_minimax(candidates, sample);
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown --criterion '" + config.criterion + "'");
  }

  json rows = json::array();
  std::string csv = csv_preamble(config, inputs);
  csv += "id,features," + u.key("err") + "," + u.key("comp") + "," + u.key("nml") + "," + u.key("entropy") + "," +
         u.key("score") + ",chosen,error\n";
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    const bool chosen = i == result.chosen;
    json row;
    row["id"] = r.id;
    row["features"] = r.num_features;
    if (r.report) {
      row[u.key("err")] = u(r.report->err_nats);
      row[u.key("comp")] = u(r.report->comp_nats);
      row[u.key("nml")] = u(r.report->nml_nats);
    }
    if (r.entropy_nats) row[u.key("entropy")] = u(*r.entropy_nats);
    if (r.score) row[u.key("score")] = u(*r.score);
    row["chosen"] = chosen;
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(row);

    auto opt = [&](bool has, double v) { return has ? fixed(u(v)) : std::string(); };
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    csv += r.id + "," + std::to_string(r.num_features) + "," + opt(r.report.has_value(), r.report ? r.report->err_nats : 0) +
           "," + opt(r.report.has_value(), r.report ? r.report->comp_nats : 0) + "," +
           opt(r.report.has_value(), r.report ? r.report->nml_nats : 0) + "," +
           opt(r.entropy_nats.has_value(), r.entropy_nats.value_or(0)) + "," +
           opt(r.score.has_value(), r.score.value_or(0)) + "," + (chosen ? "1" : "0") + "," + err + "\n";
  }
  if (config.json_output) {
    json j = envelope(config, inputs);
    j["criterion"] = to_string(result.criterion);
    j["chosen"] = result.chosen_id();
    j["candidates"] = rows;
    emit(config, "select.json", j.dump(2) + "\n", out);
  } else {
    csv += "# chosen " + result.chosen_id() + "\n";
    emit(config, "select.csv", csv, out);
  }
  return 0;
}

int cmd_synth(const RunConfig& config, Stage& stage, std::ostream& out) {
  stage.name = "generating";
  SyntheticConfig sc;
  sc.informative = config.informative;
  sc.noise = config.noise;
  sc.states = config.states;
  sc.seed = config.seed;
  const SyntheticData data = make_synthetic(sc);
  const ExpressionMatrix& m = data.matrix;

  stage.name = "writing";
  std::string matrix = "gene";
  for (const auto& s : m.sample_ids) matrix += "\t" + s;
  matrix += "\n";
  for (std::size_t g = 0; g < m.genes(); ++g) {
    matrix += m.gene_ids[g];
    for (std::size_t s = 0; s < m.samples(); ++s) matrix += "\t" + fixed(m.value(g, s), 6);
    matrix += "\n";
  }
  std::string labels = "sample\tclass\tsplit\n";
  for (std::size_t s = 0; s < m.samples(); ++s)
    labels += m.sample_ids[s] + "\t" + m.class_labels[m.labels[s]] + "\t" + to_string(m.split[s]) + "\n";

  if (config.out_dir.empty()) throw Error(ErrorCode::invalid_argument, "synth needs --out");
  emit(config, "matrix.tsv", matrix, out);
  emit(config, "labels.tsv", labels, out);
  json j = envelope(config, {});
  j["genes"] = m.genes();
  j["samples"] = m.samples();
  j["informative"] = std::count(data.informative.begin(), data.informative.end(), 1);
  emit(config, "synth.json", j.dump(2) + "\n", out);
  return 0;
}

}  // namespace mdl::cli
