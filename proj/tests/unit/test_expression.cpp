#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mdl/error.hpp"
#include "mdl/pipeline/expression.hpp"

namespace {

using mdl::ExpressionMatrix;
using mdl::Split;

const char* kMatrix =
    "gene\ts1\ts2\ts3\ts4\n"
    "g1\t100\t200\t300\t400\n"
    "g2\t1.5e3\t2E3\t+50\t7\n"
    "g3\t1\t2\t3\t4\n";

const char* kLabels =
    "sample\tclass\tsplit\n"
    "s1\tALL\ttrain\n"
    "s2\tAML\ttrain\n"
    "s3\tALL\tTEST\n"
    "s4\tAML\ttest\n";

ExpressionMatrix parse(const std::string& m, const std::string& l) {
  std::istringstream a(m), b(l);
  return mdl::parse_matrix(a, b);
}

mdl::ErrorCode code_of(const std::string& m, const std::string& l) {
  try {
    parse(m, l);
  } catch (const mdl::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return mdl::ErrorCode::invalid_argument;
}

TEST(ParseMatrix, Fixture) {
  const auto m = parse(kMatrix, kLabels);
  EXPECT_EQ(m.genes(), 3u);
  EXPECT_EQ(m.samples(), 4u);
  EXPECT_EQ(m.class_labels, (std::vector<std::string>{"ALL", "AML"}));
  EXPECT_EQ(m.labels, (std::vector<std::size_t>{0, 1, 0, 1}));
  EXPECT_EQ(m.columns(Split::train), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(m.columns(Split::test), (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(m.value(1, 0), 1500.0);
  EXPECT_EQ(m.value(1, 1), 2000.0);
  EXPECT_EQ(m.value(1, 2), 50.0);
}

TEST(ParseMatrix, CommaDelimitedWithoutLabelHeaderOrSplit) {
  const auto m = parse("id,a,b\nx,1,2\n", "a,pos\nb,neg\n");
  EXPECT_EQ(m.class_labels, (std::vector<std::string>{"neg", "pos"}));
  EXPECT_EQ(m.labels, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(m.split, (std::vector<Split>{Split::train, Split::train}));
}

TEST(ParseMatrix, MissingLabelNamesTheSample) {
  try {
    parse(kMatrix, "s1\tALL\ns2\tAML\ns3\tALL\n");
    FAIL();
  } catch (const mdl::Error& e) {
    EXPECT_EQ(e.code(), mdl::ErrorCode::parse);
    EXPECT_NE(std::string(e.what()).find("s4"), std::string::npos);
  }
}

TEST(ParseMatrix, ErrorsCarryLineAndColumn) {
  try {
    parse("g\ta\tb\nx\t1\tfoo\n", "a\t0\nb\t1\n");
    FAIL();
  } catch (const mdl::Error& e) {
    EXPECT_EQ(e.code(), mdl::ErrorCode::parse);
    EXPECT_NE(std::string(e.what()).find("matrix:2:"), std::string::npos) << e.what();
  }
}

TEST(ParseMatrix, Rejections) {
  EXPECT_EQ(code_of("g\ta\tb\nx\t1\n", "a\t0\nb\t1\n"), mdl::ErrorCode::parse);
  EXPECT_EQ(code_of("g\ta\ta\nx\t1\t2\n", "a\t0\n"), mdl::ErrorCode::parse);
  EXPECT_EQ(code_of("g\ta\tb\nx\t1\t2\n", "a\t0\nb\t1\nc\t1\n"), mdl::ErrorCode::parse);
  EXPECT_EQ(code_of("g\ta\tb\nx\t1\t2\n", "a\t0\nb\t0\n"), mdl::ErrorCode::invalid_argument);
  EXPECT_EQ(code_of("g\ta\tb\nx\t1\t2\n", "a\t0\ttest\nb\t1\ttest\n"), mdl::ErrorCode::invalid_argument);
  EXPECT_EQ(code_of("g\ta\tb\nx\t1\tinf\n", "a\t0\nb\t1\n"), mdl::ErrorCode::parse);
  EXPECT_EQ(code_of("", "a\t0\n"), mdl::ErrorCode::parse);
}

TEST(LoadMatrix, MissingFile) {
  EXPECT_THROW(mdl::load_matrix("/nonexistent/m.tsv", "/nonexistent/l.tsv"), mdl::Error);
}

ExpressionMatrix two_row(double lo, double hi) {
  ExpressionMatrix m;
  m.gene_ids = {"g"};
  m.sample_ids = {"a", "b", "c"};
  m.values = {lo, hi, (lo + hi) / 2};
  m.labels = {0, 1, 0};
  m.class_labels = {"x", "y"};
  m.split = {Split::train, Split::train, Split::train};
  return m;
}

TEST(Preprocess, ClampBeforeLog) {
  auto m = two_row(50, 16000);
  const auto p = mdl::preprocess(m);
  EXPECT_NEAR(p.value(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(p.value(0, 1), std::log10(16000.0), 1e-15);
  auto big = two_row(100, 50000);
  EXPECT_NEAR(mdl::preprocess(big).value(0, 1), std::log10(16000.0), 1e-15);
}

TEST(Preprocess, RangeAndFoldFilters) {
  EXPECT_THROW(mdl::preprocess(two_row(1000, 1400)), mdl::Error);  // range 400
  EXPECT_THROW(mdl::preprocess(two_row(1000, 4000)), mdl::Error);  // fold 4
  const auto kept = mdl::preprocess(two_row(100, 16000));
  EXPECT_EQ(kept.genes(), 1u);
  for (double v : kept.values) {
    EXPECT_GE(v, 2.0);
    EXPECT_LE(v, std::log10(16000.0));
  }
}

TEST(Preprocess, FilterLooksAtTrainColumnsOnly) {
  auto m = two_row(1000, 1100);
  m.values[2] = 16000;  // only the test column varies
  m.split[2] = Split::test;
  EXPECT_THROW(mdl::preprocess(m), mdl::Error);
  mdl::PreprocessOptions o;
  o.filter = false;
  EXPECT_EQ(mdl::preprocess(m, o).genes(), 1u);
}

TEST(Preprocess, EmptyResultCode) {
  try {
    mdl::preprocess(two_row(1000, 1400));
  } catch (const mdl::Error& e) {
    EXPECT_EQ(e.code(), mdl::ErrorCode::empty_result);
  }
}

}  // namespace
