#include <cstdlib>
#include <set>

#include <gtest/gtest.h>

#include "pipeline_support.hpp"
#include "stocksent/cli.hpp"
#include "stocksent/correlate.hpp"
#include "test_support.hpp"

using namespace stocksent;
using namespace stocksent::test_support;
namespace fs = std::filesystem;

namespace {

fs::path fixture(const std::string& name) { return fs::path(STOCKSENT_FIXTURE_DIR) / name; }

fs::path write_config(const fs::path& dir, const nlohmann::json& j) {
  const auto path = dir / "config.json";
  write_file_atomic(path, j.dump(2));
  return path;
}

nlohmann::json live_source(bool live) {
  nlohmann::json s = {{"id", "api"},
                      {"channel", "news_api"},
                      {"endpoint", "https://api.example/q"},
                      {"query_template", "?s={ticker}&k={token}"},
                      {"auth_env", "STOCKSENT_TEST_UNSET_TOKEN"}};
  if (live) s["live"] = true;
  return s;
}

}  // namespace

TEST(Cli, UnknownCommandPrintsUsageAndExits2) {
  const auto r = run({"frobnicate"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unknown command 'frobnicate'"), std::string::npos);
  EXPECT_NE(r.err.find("Usage:"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
}

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("prepare-benchmark"), std::string::npos);
}

TEST(Cli, IndicatorsMovingAverageOnFourBars) {
  const auto dir = temp_dir("cli_ind");
  const auto r = run({"indicators", "--prices", fixture("bars4.csv").string(), "--spec", "ma:window=2", "--out",
                      dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(read_file(dir / "indicators_TEST.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"date", "ma(window=2)"}));
  EXPECT_EQ(rows[1][1], "");
  EXPECT_DOUBLE_EQ(parse_double(rows[2][1]), 1.5);
  EXPECT_DOUBLE_EQ(parse_double(rows[3][1]), 2.5);
  EXPECT_DOUBLE_EQ(parse_double(rows[4][1]), 3.5);
}

TEST(Cli, RepeatedSpecFlagsAddColumns) {
  const auto dir = temp_dir("cli_ind2");
  const auto r = run({"--spec", "ma:window=2", "--spec", "roc:window=1", "indicators", "--prices",
                      fixture("bars4.csv").string(), "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(read_file(dir / "indicators_TEST.csv"));
  EXPECT_EQ(rows[0].size(), 3u);
}

TEST(Cli, ValidationListsEveryViolation) {
  const auto dir = temp_dir("cli_val");
  const auto cfg = write_config(dir, {{"prices", "missing.csv"},
                                      {"prep_modes", {{"twitter", "lm"}}},
                                      {"from", "2021-02-01"},
                                      {"to", "2021-01-01"}});
  const auto r = run({"--config", cfg.string(), "--spec", "nosuch:window=3", "indicators"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("error (config)"), std::string::npos);
  EXPECT_NE(r.err.find("price file not found"), std::string::npos);
  EXPECT_NE(r.err.find("twitter documents require 'twitter'"), std::string::npos);
  EXPECT_NE(r.err.find("is after --to"), std::string::npos);
  EXPECT_NE(r.err.find("nosuch"), std::string::npos);
}

TEST(Cli, ConfigRejectsUnknownKeysAndResolvesRelativePaths) {
  const auto dir = temp_dir("cli_cfg");
  EXPECT_THROW(cli::config_from_json({{"pricez", "x"}}, dir), Error);
  const auto c = cli::config_from_json({{"prices", "p.csv"}, {"data_dir", "d"}}, dir);
  EXPECT_EQ(c.prices, dir / "p.csv");
  EXPECT_EQ(c.lexicon, dir / "d" / "lexicon_lm_sample.csv");
  EXPECT_EQ(c.prep_mode(Source::twitter), textprep::Mode::twitter);
  EXPECT_EQ(c.prep_mode(Source::news_archive), textprep::Mode::lm);
}

TEST(Cli, ExitCodesByErrorKind) {
  EXPECT_EQ(cli::exit_code(ErrorKind::config), 3);
  EXPECT_EQ(cli::exit_code(ErrorKind::data), 4);
  EXPECT_EQ(cli::exit_code(ErrorKind::io), 5);
  EXPECT_EQ(cli::exit_code(ErrorKind::retryable), 6);
  EXPECT_EQ(cli::exit_code(ErrorKind::auth), 7);
  EXPECT_EQ(cli::exit_code(ErrorKind::unsupported), 8);
}

TEST(Cli, MissingTokenIsAnAuthError) {
  ::unsetenv("STOCKSENT_TEST_UNSET_TOKEN");
  const auto dir = temp_dir("cli_auth");
  const auto cfg = write_config(dir, {{"tickers", {"GS"}},
                                      {"from", "2021-01-04"},
                                      {"to", "2021-01-05"},
                                      {"sources", nlohmann::json::array({live_source(true)})}});
  const auto r = run({"--config", cfg.string(), "--corpus", (dir / "corpus").string(), "ingest"});
  EXPECT_EQ(r.code, 7) << r.err;
  EXPECT_NE(r.err.find("STOCKSENT_TEST_UNSET_TOKEN"), std::string::npos);
}

TEST(Cli, LiveFetchingIsOffByDefault) {
  const auto dir = temp_dir("cli_live");
  const auto cfg = write_config(dir, {{"tickers", {"GS"}},
                                      {"from", "2021-01-04"},
                                      {"to", "2021-01-05"},
                                      {"sources", nlohmann::json::array({live_source(false)})}});
  const auto r = run({"--config", cfg.string(), "--corpus", (dir / "corpus").string(), "ingest"});
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_NE(r.err.find("needs a fixture, or live = true"), std::string::npos);
}

TEST(Cli, PrepareBenchmarkNamesExpectedLayout) {
  const auto dir = temp_dir("cli_bench");
  const auto r = run({"prepare-benchmark", "--phrasebank", (dir / "nope").string(), "--out", dir.string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("Sentences_66Agree.txt"), std::string::npos);
  EXPECT_NE(r.err.find("no FiQA files"), std::string::npos);
}

TEST(Cli, ReportNeedsCorrelationTable) {
  const auto dir = temp_dir("cli_report");
  const auto r = run({"report", "--out", dir.string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("run 'correlate' first"), std::string::npos);
}

TEST(Cli, BadChannelIsAConfigError) {
  const auto dir = temp_dir("cli_chan");
  ASSERT_EQ(run_pipeline(dir).code, 0);
  const auto r = run({"--config", (mini_fixture() / "config.json").string(), "--out", (dir / "out").string(),
                      "--channel", "weather", "correlate"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("weather"), std::string::npos);
}

// ---- mini fixture pipeline ----

TEST(CliPipeline, CorrelateDjiaNewsArchiveMatchesOracle) {
  const auto dir = temp_dir("cli_e2e");
  const auto p = run_pipeline(dir);
  ASSERT_EQ(p.code, 0) << p.err;
  const auto r = run({"--config", (mini_fixture() / "config.json").string(), "--corpus", (dir / "corpus").string(),
                      "--out", (dir / "out").string(), "--ticker", "DJIA", "--channel", "news_archive", "correlate"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = correlate::report_from_csv(r.out);
  ASSERT_EQ(report.rows.size(), 1u);
  const auto& row = report.rows[0];
  EXPECT_EQ(row.ticker, "DJIA");
  EXPECT_EQ(row.channel, "news_archive_sentiment");
  EXPECT_EQ(row.n_days, 17u);
  // Frozen from tests/oracle/spearman_oracle.py on this fixture's daily signals.
  ASSERT_TRUE(row.rho);
  EXPECT_NEAR(*row.rho, 0.11702730637281414, 1e-12);
}

TEST(CliPipeline, RerunIsByteIdentical) {
  const auto a = temp_dir("cli_det_a");
  const auto b = temp_dir("cli_det_b");
  ASSERT_EQ(run_pipeline(a, {"--permutations", "200"}).code, 0);
  ASSERT_EQ(run_pipeline(b, {"--permutations", "200"}).code, 0);
  const auto sa = snapshot(a / "out");
  EXPECT_EQ(sa, snapshot(b / "out"));
  EXPECT_EQ(snapshot(a / "corpus"), snapshot(b / "corpus"));
  for (const char* f : {"sentiment_signals.csv", "emotion_vectors.jsonl", "emotion_signals.csv", "correlation.csv",
                        "report.txt"})
    EXPECT_TRUE(sa.count(f)) << f;

  // Rerunning in place leaves everything unchanged, including the corpus (ingest dedups).
  ASSERT_EQ(run_pipeline(a, {"--permutations", "200"}).code, 0);
  EXPECT_EQ(snapshot(a / "out"), sa);
  EXPECT_EQ(snapshot(a / "corpus"), snapshot(b / "corpus"));
}

TEST(CliPipeline, ReadCommandsDoNotTouchInputs) {
  const auto dir = temp_dir("cli_ro");
  ASSERT_EQ(run_pipeline(dir).code, 0);
  const auto corpus = snapshot(dir / "corpus");
  const auto fixture_files = snapshot(mini_fixture());
  const std::vector<std::string> base = {"--config", (mini_fixture() / "config.json").string(), "--corpus",
                                         (dir / "corpus").string(), "--out", (dir / "out2").string()};
  for (const char* step : {"sentiment", "emotion", "correlate", "report"}) {
    auto args = base;
    args.push_back(step);
    ASSERT_EQ(run(args).code, 0) << step;
  }
  EXPECT_EQ(snapshot(dir / "corpus"), corpus);
  EXPECT_EQ(snapshot(mini_fixture()), fixture_files);
  EXPECT_EQ(read_file(dir / "out2" / "report.txt"), read_file(dir / "out" / "report.txt"));
}

TEST(CliPipeline, WeightedEngagementAddsTwitterChannelOnly) {
  const auto dir = temp_dir("cli_weighted");
  const auto p = run_pipeline(dir, {"--weighted-engagement"});
  ASSERT_EQ(p.code, 0) << p.err;
  const auto signals = correlate::signals_from_csv(read_file(dir / "out" / "sentiment_signals.csv"));
  std::set<std::string> channels;
  for (const auto& s : signals) channels.insert(s.channel);
  EXPECT_TRUE(channels.count("twitter_sentiment_weighted"));
  EXPECT_FALSE(channels.count("news_archive_sentiment_weighted"));
  const auto report = read_file(dir / "out" / "report.txt");
  EXPECT_NE(report.find("Twitter-sentiment (weighted)"), std::string::npos);
}

TEST(CliPipeline, EmotionUsesTwitterDocumentsOnly) {
  const auto dir = temp_dir("cli_emo");
  ASSERT_EQ(run_pipeline(dir).code, 0);
  const auto vectors = read_file(dir / "out" / "emotion_vectors.jsonl");
  std::size_t docs = 0;
  for (const auto& line : split(vectors, '\n'))
    if (!trim(line).empty()) docs += nlohmann::json::parse(line).at("doc_count").get<std::size_t>();
  const auto store = ingest::CorpusStore::open_read_only(dir / "corpus");
  EXPECT_EQ(docs, store.load(std::nullopt, Source::twitter).size());
}

TEST(CliPipeline, LagShiftsTheJoin) {
  const auto dir = temp_dir("cli_lag");
  ASSERT_EQ(run_pipeline(dir).code, 0);
  const std::vector<std::string> base = {"--config", (mini_fixture() / "config.json").string(), "--out",
                                         (dir / "out").string(), "--ticker", "GS", "--channel", "twitter"};
  auto args0 = base, args1 = base;
  args0.push_back("correlate");
  args1.insert(args1.end(), {"--lag", "1", "correlate"});
  const auto r0 = correlate::report_from_csv(run(args0).out);
  const auto r1 = correlate::report_from_csv(run(args1).out);
  ASSERT_EQ(r0.rows.size(), 1u);
  ASSERT_EQ(r1.rows.size(), 1u);
  EXPECT_NE(r0.rows[0].rho, r1.rows[0].rho);
}

TEST(CorpusStore, ReadOnlyOpenRefusesWrites) {
  const auto dir = temp_dir("store_ro");
  EXPECT_THROW(ingest::CorpusStore::open_read_only(dir / "none"), Error);
  { ingest::CorpusStore store(dir / "c"); }
  auto store = ingest::CorpusStore::open_read_only(dir / "c");
  TextDocument d{"x", Date(2021, 1, 4), "GS", Source::news_api, "text", std::nullopt};
  try {
    store.add(std::vector{d});
    FAIL() << "expected a throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported);
  }
}
