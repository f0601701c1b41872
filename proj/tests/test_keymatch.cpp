#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stocksent/error.hpp"
#include "stocksent/keymatch.hpp"

using namespace stocksent;
using namespace stocksent::keymatch;

namespace {

const std::filesystem::path kData = STOCKSENT_DATA_DIR;

const std::vector<TickerProfile>& profiles() {
  static const auto p = load_profiles(kData / "profiles.csv");
  return p;
}

std::string random_word(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 12), ch(0, 5);
  std::string s(static_cast<std::size_t>(len(rng)), 'a');
  for (auto& c : s) c = "abcd e"[ch(rng)];
  return s;
}

}  // namespace

TEST(Cosine, Examples) {
  EXPECT_DOUBLE_EQ(cosine_sim("Dow Jones", "Dow Jones"), 1.0);
  EXPECT_EQ(cosine_sim("abcdef", "uvwxyz"), 0.0);
  // "goldman sachs" has 11 distinct trigrams, all inside the 17 distinct trigrams of
  // "goldman sachs group": 11 / sqrt(11 * 17).
  EXPECT_NEAR(cosine_sim("Goldman Sachs", "Goldman Sachs Group"), std::sqrt(11.0 / 17.0), 1e-15);
  // "microsoft" (7 trigrams) inside "microsoft corp" (12): 7 / sqrt(84).
  EXPECT_NEAR(cosine_sim("Microsoft Corp", "Microsoft"), 7.0 / std::sqrt(84.0), 1e-15);
  EXPECT_DOUBLE_EQ(cosine_sim("GS", "gs"), 1.0);
  EXPECT_DOUBLE_EQ(cosine_sim("aaaa", "aaaaaa"), 1.0);  // proportional multisets
  EXPECT_THROW(cosine_sim("", "x"), Error);
}

TEST(EditDistance, Examples) {
  EXPECT_EQ(edit_distance("Microsoft Corp", "Microsoft"), 5u);
  EXPECT_EQ(edit_distance("kitten", "sitting"), 3u);
  EXPECT_EQ(edit_distance("", "abc"), 3u);
  EXPECT_EQ(edit_distance("Intel", "INTEL"), 0u);
}

TEST(KeymatchProperty, SymmetryAndTriangle) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    auto a = random_word(rng), b = random_word(rng), c = random_word(rng);
    EXPECT_DOUBLE_EQ(cosine_sim(a, b), cosine_sim(b, a));
    EXPECT_GE(cosine_sim(a, b), 0.0);
    EXPECT_LE(cosine_sim(a, b), 1.0);
    EXPECT_EQ(edit_distance(a, b), edit_distance(b, a));
    EXPECT_LE(edit_distance(a, c), edit_distance(a, b) + edit_distance(b, c));
  }
}

TEST(MatchTicker, Examples) {
  auto m = match_ticker(std::vector<std::string>{"Microsoft Corp"}, profiles());
  ASSERT_TRUE(m);
  EXPECT_EQ(m->ticker, "MSFT");
  EXPECT_EQ(m->alias, "Microsoft Corporation");
  std::vector<TickerProfile> single{{"MSFT", {"Microsoft"}}};
  auto by_cosine = match_ticker(std::vector<std::string>{"Microsoft Corp"}, single);
  ASSERT_TRUE(by_cosine);
  EXPECT_NEAR(by_cosine->cosine, 7.0 / std::sqrt(84.0), 1e-15);  // qualifies on cosine, not on distance 5
  EXPECT_EQ(by_cosine->distance, 5u);
  EXPECT_FALSE(match_ticker(std::vector<std::string>{"weather report"}, profiles()));
  MatchOptions strict{1.0, 0};
  auto exact = match_ticker(std::vector<std::string>{"Chevron"}, profiles(), strict);
  ASSERT_TRUE(exact);
  EXPECT_EQ(exact->ticker, "CVX");
  EXPECT_EQ(exact->distance, 0u);
  EXPECT_THROW(match_ticker(std::vector<std::string>{"x"}, std::vector<TickerProfile>{}), Error);
}

TEST(MatchTicker, TieBreakIsAlphabetical) {
  std::vector<TickerProfile> p{{"ZZZ", {"acme corp"}}, {"AAA", {"acme inc"}}};
  auto m = match_ticker(std::vector<std::string>{"acme"}, p, {0.0, 100});
  ASSERT_TRUE(m);
  // Both aliases share the same trigram overlap with "acme"; cosine decides first.
  const double za = cosine_sim("acme", "acme corp"), aa = cosine_sim("acme", "acme inc");
  EXPECT_EQ(m->ticker, za > aa ? "ZZZ" : "AAA");
  std::vector<TickerProfile> same{{"ZZZ", {"acme x"}}, {"AAA", {"acme y"}}};
  EXPECT_EQ(match_ticker(std::vector<std::string>{"acme"}, same, {0.0, 100})->ticker, "AAA");
}

TEST(MatchTicker, LoweringThresholdNeverLosesMatch) {
  std::mt19937_64 rng(4);
  std::vector<std::string> pool{"Goldman", "Microsft", "Intel Corp", "Nike shoes", "Dow", "Boeing 737", "rain"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> kw{pool[pick(rng)], pool[pick(rng)]};
    bool matched = false;
    for (double t = 1.0; t >= 0.0; t -= 0.1) {
      bool now = match_ticker(kw, profiles(), {t, 2}).has_value();
      EXPECT_TRUE(now || !matched);
      matched = matched || now;
    }
  }
}

TEST(Profiles, Validation) {
  EXPECT_EQ(profiles().size(), 9u);
  EXPECT_THROW(parse_profiles("ticker,alias\nA,Acme\nB,Acme\n"), Error);
  EXPECT_THROW(parse_profiles("A\n"), Error);
  std::vector<TickerProfile> empty{{"A", {}}};
  EXPECT_THROW(validate_profiles(empty), Error);
}

TEST(MatchArticles, ParallelMatchesSequential) {
  std::vector<std::vector<std::string>> articles{
      {"Goldman Sachs Group"}, {"weather"}, {"Intel", "Nike"}, {}, {"Walgreens Boots"}, {"UnitedHealth Grp"}};
  auto all = match_articles(articles, profiles());
  ASSERT_EQ(all.size(), articles.size());
  for (std::size_t i = 0; i < articles.size(); ++i) {
    auto one = match_ticker(articles[i], profiles());
    ASSERT_EQ(all[i].has_value(), one.has_value());
    if (one) EXPECT_EQ(all[i]->ticker, one->ticker);
  }
  EXPECT_EQ(all[0]->ticker, "GS");
  EXPECT_EQ(all[2]->ticker, "INTC");
  const auto serial = match_articles_serial(articles, profiles());
  for (std::size_t i = 0; i < articles.size(); ++i) {
    ASSERT_EQ(serial[i].has_value(), all[i].has_value());
    if (serial[i]) EXPECT_EQ(serial[i]->alias, all[i]->alias);
  }
}
