#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "xlex/attribution.hpp"
#include "xlex/error.hpp"

using namespace xlex;
namespace oracle = xlex::testkit::oracle;

namespace {
std::vector<AttributionRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_attribution_file(in, "fixture");
}
}  // namespace

TEST(ParseAttribution, SingleRow) {
  const auto records = parse("sentence_id,token,value\n0,profit,0.31\n");
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0], (AttributionRecord{0, "profit", 0.31}));
}

TEST(ParseAttribution, OutOfRange) {
  EXPECT_THROW(parse("sentence_id,token,value\n0,profit,1.5\n"), ValueOutOfRange);
  EXPECT_THROW(parse("sentence_id,token,value\n0,profit,-1.01\n"), ValueOutOfRange);
  EXPECT_NO_THROW(parse("sentence_id,token,value\n0,profit,-1\n0,x,1.0000000001\n"));
}

TEST(ParseAttribution, CheckedInFixtureKeepsOrder) {
  const auto records = read_attribution_file(XLEX_FIXTURE_DIR "/attributions_small.csv");
  ASSERT_EQ(records.size(), 6u);
  EXPECT_EQ(records[0].token, "Profit");
  EXPECT_EQ(records[3], (AttributionRecord{1, "Losses", -0.42}));
  EXPECT_EQ(records[5].sentence_id, 1);
}

TEST(ParseAttribution, MalformedRowsReportLine) {
  const char* bad[] = {
      "sentence_id,token,value\n0,profit\n",
      "sentence_id,token,value\n0,profit,0.1\nx,loss,0.2\n",
      "sentence_id,token,value\n0,profit,0.1\n-1,loss,0.2\n",
      "sentence_id,token,value\n0,,0.1\n",
      "sentence_id,token,value\n0,profit,abc\n",
      "id,token,value\n0,profit,0.1\n",
  };
  for (const char* text : bad) {
    try {
      parse(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const MalformedRow& e) {
      EXPECT_GE(e.line(), 1u);
      EXPECT_EQ(e.source(), "fixture");
    }
  }
  try {
    parse("sentence_id,token,value\n0,profit,0.1\n1,loss,oops\n");
    ADD_FAILURE() << "bad value accepted";
  } catch (const MalformedRow& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParseAttribution, EmptyAndQuotedTokens) {
  EXPECT_TRUE(parse("").empty());
  EXPECT_TRUE(parse("sentence_id,token,value\n").empty());
  const auto r = parse("sentence_id,token,value\n3,\",\",-0.25\n");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].token, ",");
}

TEST(ParseAttribution, WriteThenParse) {
  std::mt19937_64 rng(11);
  const auto vocab = testkit::synthetic_vocab(40);
  const auto records = testkit::random_records(rng, vocab, 300);
  std::stringstream buf;
  write_attribution_file(buf, records);
  const auto back = parse_attribution_file(buf);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(back[i].token, records[i].token);
    EXPECT_NEAR(back[i].value, records[i].value, 1e-12);
  }
}

TEST(SplitByPolarity, SignSplitAndAbs) {
  const std::vector<AttributionRecord> in = {{0, "Gain", 0.2}, {0, "loss", -0.3}};
  const auto split = split_by_polarity(in);
  ASSERT_EQ(split.positive.size(), 1u);
  ASSERT_EQ(split.negative.size(), 1u);
  EXPECT_EQ(split.positive[0].word, "gain");
  EXPECT_EQ(split.positive[0].value, 0.2);
  EXPECT_EQ(split.negative[0].word, "loss");
  EXPECT_EQ(split.negative[0].value, 0.3);
}

TEST(SplitByPolarity, ZeroDropped) {
  const std::vector<AttributionRecord> in = {{0, "flat", 0.0}};
  const auto split = split_by_polarity(in);
  EXPECT_TRUE(split.positive.empty());
  EXPECT_TRUE(split.negative.empty());
}

TEST(SplitByPolarity, ConservesNonzeroRecords) {
  std::mt19937_64 rng(3);
  const auto vocab = testkit::synthetic_vocab(30);
  for (int trial = 0; trial < 20; ++trial) {
    const auto records = testkit::random_records(rng, vocab, 100);
    const auto split = split_by_polarity(records);
    std::size_t zeros = 0;
    for (const auto& r : records) zeros += r.value == 0.0;
    EXPECT_EQ(split.positive.size() + split.negative.size() + zeros, records.size());
  }
}

TEST(AccumulateWordStats, HandArithmetic) {
  const std::vector<WeightedWord> raw = {{"gain", 0.2}, {"gain", 0.4}};
  const auto table = accumulate_word_stats(raw);
  ASSERT_EQ(table.size(), 1u);
  const auto& g = table.at("gain");
  EXPECT_EQ(g.count, 2);
  EXPECT_NEAR(g.shap_sum, 0.6, 1e-15);
  EXPECT_NEAR(g.shap_avg, 0.3, 1e-15);
  EXPECT_EQ(g.shap_max, 0.4);
  EXPECT_EQ(g.shap_min, 0.2);
}

TEST(AccumulateWordStats, SingletonAndEmpty) {
  const std::vector<WeightedWord> one = {{"x", 0.5}};
  EXPECT_EQ(accumulate_word_stats(one).at("x"), (WordStats{1, 0.5, 0.5, 0.5, 0.5}));
  EXPECT_TRUE(accumulate_word_stats({}).empty());
}

TEST(AccumulateWordStats, MatchesGroupByOracle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::uniform_int_distribution<int> word(0, 60);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<WeightedWord> raw(std::uniform_int_distribution<int>(0, 1000)(rng));
    for (auto& w : raw) w = {"w" + std::to_string(word(rng)), value(rng)};
    const auto table = accumulate_word_stats(raw);
    const auto expected = oracle::group_by(raw);
    ASSERT_EQ(table.size(), expected.size());
    for (const auto& e : expected) {
      const auto& got = table.at(e.word);
      EXPECT_EQ(got.count, e.count);
      EXPECT_TRUE(oracle::close(got.shap_sum, e.sum));
      EXPECT_EQ(got.shap_max, e.max);
      EXPECT_EQ(got.shap_min, e.min);
      // Row invariants.
      EXPECT_LE(got.shap_min, got.shap_avg);
      EXPECT_LE(got.shap_avg, got.shap_max);
      EXPECT_LE(std::abs(got.shap_avg * static_cast<double>(got.count) - got.shap_sum),
                1e-9 * std::max(1.0, got.shap_sum));
    }
  }
}

TEST(AccumulateWordStats, OrderIndependent) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::vector<WeightedWord> raw(500);
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = {"w" + std::to_string(i % 13), value(rng)};
  const auto reference = accumulate_word_stats(raw);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(raw.begin(), raw.end(), rng);
    EXPECT_EQ(accumulate_word_stats(raw), reference);
  }
}

TEST(Postprocess, FiltersInvalidWords) {
  const auto res = testkit::mini_resources();
  WordStatsTable table{{"of", {1, 0.1, 0.1, 0.1, 0.1}}, {"profit", {2, 0.5, 0.25, 0.3, 0.2}}};
  const auto out = postprocess(table, res);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.at("profit"), table.at("profit"));

  WordStatsTable short_word{{"qx", {1, 0.1, 0.1, 0.1, 0.1}}};
  EXPECT_TRUE(postprocess(short_word, res).empty());
}

TEST(Postprocess, TenWordsFourInvalid) {
  const auto res = testkit::mini_resources();
  WordStatsTable table;
  const char* words[] = {"profit", "loss", "gain", "market", "rose", "fell",
                         "the", "of", "zzzz", "ab"};
  double v = 0.01;
  for (const char* w : words) {
    table[w] = {3, 3 * v, v, v * 1.5, v * 0.5};
    v += 0.01;
  }
  const auto out = postprocess(table, res);
  ASSERT_EQ(out.size(), 6u);
  for (const auto& [w, s] : out) EXPECT_EQ(s, table.at(w));  // bit-identical
  EXPECT_EQ(postprocess(out, res), out);                      // idempotent
}
