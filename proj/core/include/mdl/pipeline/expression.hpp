#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mdl {

enum class Split { train, test };

const char* to_string(Split split) noexcept;

// Genes x samples expression values with per-sample class labels.
struct ExpressionMatrix {
  std::vector<std::string> gene_ids;
  std::vector<std::string> sample_ids;
  std::vector<double> values;  // gene-major: values[g * samples() + s]
  std::vector<std::size_t> labels;
  // Class label names; index order is the sorted order of the names.
  std::vector<std::string> class_labels;
  std::vector<Split> split;

  std::size_t genes() const noexcept { return gene_ids.size(); }
  std::size_t samples() const noexcept { return sample_ids.size(); }
  std::size_t classes() const noexcept { return class_labels.size(); }
  double value(std::size_t g, std::size_t s) const { return values[g * samples() + s]; }
  std::span<const double> row(std::size_t g) const {
    return std::span<const double>(values).subspan(g * samples(), samples());
  }

  std::vector<std::size_t> columns(Split which) const;
};

// Throws ErrorCode::invalid_argument when dimensions, labels or the split are
// inconsistent, or when there is no train column.
void validate(const ExpressionMatrix& matrix);

// Matrix text: header row of sample ids (first cell is ignored), then one row
// per gene starting with its id. Labels text: sample id, class label and an
// optional train/test column, with an optional header line. Delimiters are
// detected per file among tab and comma. The names are used in messages.
ExpressionMatrix parse_matrix(std::istream& matrix, std::istream& labels, const std::string& matrix_name = "matrix",
                              const std::string& labels_name = "labels");

ExpressionMatrix load_matrix(const std::string& path, const std::string& labels_path);

struct PreprocessOptions {
  bool clamp = true;
  double floor = 100.0;
  double ceiling = 16000.0;
  bool filter = true;
  double min_fold = 5.0;     // genes with max / min <= min_fold are dropped
  double min_range = 500.0;  // genes with max - min <= min_range are dropped
  bool log10 = true;
};

// Clamp, filter on train columns, then log-transform. Throws
// ErrorCode::empty_result if every gene is filtered out.
ExpressionMatrix preprocess(const ExpressionMatrix& matrix, const PreprocessOptions& options = {});

}  // namespace mdl
