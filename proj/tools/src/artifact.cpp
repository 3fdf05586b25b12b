#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>

#include "internal.hpp"
#include "mdl/cli/cli.hpp"
#include "mdl/error.hpp"
#include "mdl/numeric.hpp"

namespace mdl::cli {

json RunConfig::echo() const {
  json j;
  j["command"] = command;
  if (command == "fit") {
    j["sample"] = sample_path;
    j["alphabet"] = alphabet;
    j["means"] = means;
    j["m"] = m;
  } else if (command == "nml") {
    j["sample"] = sample_path;
    j["given"] = given_path;
    j["alphabet"] = alphabet;
    j["classes"] = classes;
    j["m"] = m;
    j["intercept"] = intercept;
    j["method"] = method;
    j["mc_draws"] = mc_draws;
    j["seed"] = seed;
  } else if (command == "select") {
    j["sample"] = sample_path;
    j["alphabet"] = alphabet;
    j["criterion"] = criterion;
    j["candidates"] = candidates;
    j["m_max"] = m_max;
    j["method"] = method;
    j["mc_draws"] = mc_draws;
    j["seed"] = seed;
  } else if (command == "synth") {
    j["informative"] = informative;
    j["noise"] = noise;
    j["states"] = states;
    j["seed"] = seed;
  } else {
    j["matrix"] = matrix_path;
    j["labels"] = labels_path;
    j["levels"] = levels;
    j["m"] = m_range;
    j["include_m0"] = include_m0;
    j["intercept"] = intercept;
    j["method"] = method;
    j["mc_draws"] = mc_draws;
    j["seed"] = seed;
    j["quantize"] = quantize;
    j["clamp"] = clamp;
    j["filter"] = filter;
    j["log10"] = log10;
    if (command == "genes classify" || command == "genes sweep") j["top"] = top_g;
    if (command == "genes curve") {
      j["max_genes"] = max_genes;
      j["fixed_m"] = fixed_m;
    }
    if (command != "genes rank") j["epsilon"] = epsilon;
  }
  j["units"] = bits ? "bits" : "nats";
  return j;
}

CompMethod RunConfig::comp_method() const {
  if (method == "exact") return CompMethod::exact_enum;
  if (method == "types") return CompMethod::type_class;
  if (method == "mc") return CompMethod::monte_carlo;
  throw Error(ErrorCode::invalid_argument, "unknown --method '" + method + "' (expected exact, types or mc)");
}

double Units::operator()(double nats) const { return bits ? nats / std::numbers::ln2 : nats; }

std::string Units::key(const std::string& base) const { return base + (bits ? "_bits" : "_nats"); }

std::string InputFile::digest() const {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64({p, bytes.size()})));
  return buf;
}

json envelope(const RunConfig& config, const std::vector<const InputFile*>& inputs) {
  json j;
  j["tool"] = "maxent-mdl";
  j["version"] = version();
  j["config"] = config.echo();
  json in = json::array();
  for (const auto* f : inputs) in.push_back({{"path", f->path}, {"fnv1a64", f->digest()}});
  j["inputs"] = in;
  return j;
}

std::string csv_preamble(const RunConfig& config, const std::vector<const InputFile*>& inputs) {
  std::string s = "# maxent-mdl " + std::string(version()) + "\n";
  s += "# config " + config.echo().dump() + "\n";
  for (const auto* f : inputs) s += "# input " + f->path + " fnv1a64=" + f->digest() + "\n";
  return s;
}

std::string fixed(double value, int digits) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::string general(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void emit(const RunConfig& config, const std::string& name, const std::string& text, std::ostream& out) {
  if (config.out_dir.empty()) {
    out << text;
    return;
  }
  std::filesystem::create_directories(config.out_dir);
  const auto path = std::filesystem::path(config.out_dir) / name;
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Error(ErrorCode::invalid_argument, "cannot write " + path.string());
  out << "wrote " << path.string() << "\n";
}

}  // namespace mdl::cli
