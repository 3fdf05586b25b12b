#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdl/alphabet.hpp"
#include "mdl/codelength.hpp"

namespace mdl::cli {

using json = nlohmann::ordered_json;

// Everything the user asked for, validated before any computation and echoed
// into every artifact. Worker count and output directory are left out of the
// echo: they do not change results.
struct RunConfig {
  std::string command;  // "fit", "nml", "select", "genes rank", ...

  std::string sample_path;
  std::string given_path;
  std::string matrix_path;
  std::string labels_path;
  std::string out_dir;

  std::string alphabet;       // comma list; empty means the sample's distinct values
  std::vector<double> means;  // fit: target moments E[x], E[x^2], ...
  std::size_t m = 1;
  bool intercept = true;
  std::string classes;  // comma list; empty means the labels' distinct values

  std::string method = "types";
  std::size_t mc_draws = 10000;
  std::uint64_t seed = 0;

  std::string criterion = "nml";
  std::vector<std::string> candidates;  // "id:p1,p2"
  std::size_t m_max = 3;                // default nested candidates m = 0..m_max

  std::string levels = "5";  // single count, or list / range for the sweep
  std::string m_range = "1..7";
  bool include_m0 = false;
  std::string quantize = "quantile";
  bool clamp = true;
  bool filter = true;
  bool log10 = true;
  std::size_t top_g = 25;
  std::size_t max_genes = 130;
  std::string fixed_m = "1,2,3";
  double epsilon = 1e-6;

  std::size_t informative = 30;
  std::size_t noise = 70;
  std::size_t states = 5;

  bool json_output = false;
  bool bits = false;
  std::size_t workers = 1;

  json echo() const;
  CompMethod comp_method() const;
};

// Display units. Values stay in nats internally.
struct Units {
  bool bits = false;
  double operator()(double nats) const;
  std::string key(const std::string& base) const;  // "nml" -> "nml_nats" or "nml_bits"
  const char* name() const noexcept { return bits ? "bits" : "nats"; }
};

struct InputFile {
  std::string path;
  std::string bytes;
  std::string digest() const;  // FNV-1a 64, hex
};

InputFile read_input(const std::string& path);

// Whitespace- or comma-separated tokens; '#' starts a comment.
std::vector<std::string> tokens(const InputFile& file);
std::vector<double> numbers(const InputFile& file);

// "5", "2,3,5", "2..8" or "1..3,5".
std::vector<std::size_t> parse_counts(const std::string& text, const std::string& what);
std::vector<double> parse_reals(const std::string& text, const std::string& what);

// Alphabet from an explicit list, or the sorted distinct values.
Alphabet make_alphabet(const std::string& list, const std::vector<double>& values);
Sample to_sample(const Alphabet& alphabet, const std::vector<double>& values, const std::string& what);

// Artifact framing shared by every command.
json envelope(const RunConfig& config, const std::vector<const InputFile*>& inputs);
std::string csv_preamble(const RunConfig& config, const std::vector<const InputFile*>& inputs);
std::string fixed(double value, int digits = 9);
std::string general(double value);

// Writes `text` to out_dir/name, or to `out` when there is no directory.
void emit(const RunConfig& config, const std::string& name, const std::string& text, std::ostream& out);

// Stage reported when a command fails.
struct Stage {
  std::string name;
};

int cmd_fit(const RunConfig& config, Stage& stage, std::ostream& out);
int cmd_nml(const RunConfig& config, Stage& stage, std::ostream& out);
int cmd_select(const RunConfig& config, Stage& stage, std::ostream& out);
int cmd_synth(const RunConfig& config, Stage& stage, std::ostream& out);
int cmd_genes(const RunConfig& config, Stage& stage, std::ostream& out);

}  // namespace mdl::cli
