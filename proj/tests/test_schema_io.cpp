#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "deeprules/dataset_io.hpp"
#include "deeprules/errors.hpp"
#include "deeprules/schema.hpp"

using namespace deeprules;

namespace {

const std::filesystem::path kData = DEEPRULES_DATA_DIR;

OneHotDataset parse(const std::string& text, CsvOptions options = {}) {
  std::istringstream in(text);
  return parse_nominal_csv(in, options, "test.csv");
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("deeprules_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Schema, BooleanAttributesGetLiteralAndNegation) {
  const Schema s = Schema::booleans(3);
  ASSERT_EQ(s.literal_count(), 6u);
  EXPECT_EQ(s.literal_name(0), "a");
  EXPECT_EQ(s.literal_name(1), "not a");
  EXPECT_EQ(s.literal_name(5), "not c");
  EXPECT_EQ(s.attribute_of(3), 1u);
  EXPECT_EQ(s.value_of(3), 1u);
}

TEST(Schema, NominalLiteralsNameTheValue) {
  const Schema s({{"tl", {"b", "o", "x"}, false}, {"y", {"1", "0"}, true}});
  EXPECT_EQ(s.literal_name(2), "tl=x");
  EXPECT_EQ(s.first_column(1), 3u);
  EXPECT_EQ(s.find_value(0, "o"), std::optional<std::size_t>(1));
  EXPECT_FALSE(s.find_value(0, "?"));
}

TEST(Schema, RejectsSingleValueAttributes) {
  EXPECT_THROW(Schema({{"a", {"x"}, false}}), std::invalid_argument);
}

TEST(Schema, EnumerateAssignmentsIsOneHotAndBounded) {
  const Schema s({{"p", {"u", "v", "w"}, false}, {"q", {"1", "0"}, true}});
  const BitMatrix all = s.enumerate_assignments();
  ASSERT_EQ(all.rows(), 6u);
  for (std::size_t r = 0; r < all.rows(); ++r) {
    std::size_t set = 0;
    for (std::size_t c = 0; c < all.cols(); ++c) set += all.get(r, c);
    EXPECT_EQ(set, 2u);
  }
  EXPECT_THROW(Schema::booleans(12).enumerate_assignments(1000), ResourceLimitError);
}

TEST(Csv, MultiClassTargetIsMostFrequentVersusRest) {
  std::string text = "f,cls\n";
  for (int i = 0; i < 5; ++i) text += "u,A\n";
  for (int i = 0; i < 3; ++i) text += "v,B\n";
  for (int i = 0; i < 2; ++i) text += "w,C\n";
  const OneHotDataset d = parse(text);
  EXPECT_EQ(d.positive_class, "A");
  EXPECT_EQ(d.y.count(), 5u);
  EXPECT_EQ(d.size() - d.y.count(), 5u);
  d.validate();
}

TEST(Csv, ZeroOneColumnsBecomeBooleanAndConstantColumnsAreDropped) {
  const OneHotDataset d = parse("a,k,b,class\n1,z,x,1\n0,z,y,0\n1,z,y,1\n");
  ASSERT_EQ(d.schema.attribute_count(), 2u);
  EXPECT_TRUE(d.schema.attributes()[0].boolean);
  EXPECT_EQ(d.schema.attributes()[1].name, "b");
  EXPECT_EQ(d.schema.literal_name(1), "not a");
}

TEST(Csv, ClassColumnCanBeChosen) {
  CsvOptions o;
  o.class_column = 0;
  const OneHotDataset d = parse("party,v\nd,y\nr,n\nd,n\n", o);
  EXPECT_EQ(d.positive_class, "d");
  EXPECT_EQ(d.schema.attributes()[0].name, "v");
}

TEST(Csv, MissingTokenPolicy) {
  const std::string text = "v,c\ny,1\n?,0\nn,1\n";
  EXPECT_EQ(parse(text).schema.attributes()[0].values.size(), 3u);
  CsvOptions o;
  o.missing = MissingValuePolicy::Reject;
  EXPECT_THROW(parse(text, o), ParseError);
}

TEST(Csv, MalformedInputReportsLocation) {
  EXPECT_THROW(parse(""), ParseError);
  try {
    parse("a,c\nx,1\ny\n");
    FAIL() << "ragged row accepted";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("test.csv:3"), std::string::npos) << e.what();
  }
}

TEST(Csv, FixedSchemaRejectsUnseenValues) {
  const OneHotDataset d = parse("a,c\nx,1\ny,0\n");
  CsvOptions o;
  o.schema = d.schema;
  EXPECT_NO_THROW(parse("a,c\ny,1\n", o));
  EXPECT_THROW(parse("a,c\nz,1\n", o), ParseError);
}

TEST(Csv, WriteThenReadRoundTrips) {
  const OneHotDataset d = parse("a,b,c\n1,x,yes\n0,y,no\n1,y,yes\n0,x,no\n");
  std::ostringstream out;
  write_dataset_csv(d, out);
  CsvOptions o;
  o.positive_class = d.positive_class;
  const OneHotDataset back = parse(out.str(), o);
  EXPECT_EQ(back.schema, d.schema);
  EXPECT_EQ(back.x, d.x);
  EXPECT_EQ(back.y, d.y);
}

TEST(Csv, MetadataSidecarRoundTripsAndSetsPositiveClass) {
  const auto dir = temp_dir("meta");
  const auto csv = dir / "d.csv";
  std::ofstream(csv) << "a,class\nx,0\ny,1\nx,0\n";
  DatasetMetadata meta;
  meta.seed = 5;
  meta.generator_seed = 99;
  meta.attempts = 2;
  meta.n_vars = 1;
  meta.positive_ratio = 1.0 / 3.0;
  meta.rule_count = 1;
  meta.positive_class = "1";
  write_metadata(metadata_path_for(csv), meta);
  EXPECT_EQ(metadata_path_for(csv).filename(), "d.meta.json");
  EXPECT_EQ(read_metadata(metadata_path_for(csv)), meta);
  // Without the sidecar "0" would win as the majority class.
  EXPECT_EQ(load_dataset(csv).y.count(), 1u);
  EXPECT_THROW(load_dataset(dir / "missing.csv"), FileError);
}

TEST(UciFixtures, PositiveRatiosMatchClassBalance) {
  const OneHotDataset ttt = load_dataset(kData / "uci" / "tic-tac-toe.csv");
  EXPECT_EQ(ttt.size(), 958u);
  EXPECT_NEAR(ttt.positive_ratio(), 0.6534, 5e-5);
  ttt.validate();

  const OneHotDataset vote = load_dataset(kData / "uci" / "vote.csv");
  EXPECT_EQ(vote.size(), 435u);
  EXPECT_NEAR(vote.positive_ratio(), 0.6138, 5e-5);
  vote.validate();

  const OneHotDataset car = load_dataset(kData / "uci" / "car-evaluation.csv");
  EXPECT_NEAR(car.positive_ratio(), 0.7002, 5e-5);
}

TEST(OneHotDataset, SubsetKeepsOrder) {
  const OneHotDataset d = parse("a,c\nx,1\ny,0\nx,1\n");
  const OneHotDataset s = d.subset({1, 0});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_FALSE(s.y.get(0));
  EXPECT_TRUE(s.y.get(1));
  EXPECT_EQ(s.x.row(0)[0], d.x.row(1)[0]);
}
