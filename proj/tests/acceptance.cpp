// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any fails.

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "pipeline_support.hpp"
#include "stocksent/correlate.hpp"
#include "stocksent/emotion.hpp"
#include "stocksent/indicators.hpp"
#include "stocksent/ingest.hpp"
#include "stocksent/lexsent.hpp"
#include "stocksent/textprep.hpp"
#include "stocksent/util.hpp"
#include "test_support.hpp"

using namespace stocksent;
using test_support::random_bars;
using test_support::temp_dir;
namespace fs = std::filesystem;

namespace {

const fs::path kData = STOCKSENT_DATA_DIR;
const fs::path kFixtures = STOCKSENT_FIXTURE_DIR;
const fs::path kOracle = STOCKSENT_ORACLE;
const std::string kPython = STOCKSENT_PYTHON;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

std::string fmt(double v, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << std::scientific << v;
  return s.str();
}

std::string run_capture(const std::string& command) {
  std::string out;
  FILE* p = ::popen(command.c_str(), "r");
  if (!p) return out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  if (::pclose(p) != 0) out.clear();
  return out;
}

// ---- 1. Spearman oracle ----

// O(n^2) ranks: 1 + #smaller + (#equal - 1) / 2, then textbook Pearson in long double.
double brute_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<long double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      long double less = 0, equal = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (v[j] < v[i]) ++less;
        if (v[j] == v[i]) ++equal;
      }
      r[i] = 1 + less + (equal - 1) / 2;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mx += rx[i], my += ry[i];
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

Outcome spearman_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(200);
  std::uniform_int_distribution<std::size_t> len(3, 500);
  std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
  while (pairs.size() < 200) {
    const std::size_t n = len(rng);
    std::vector<double> x(n), y(n);
    const bool ties = pairs.size() % 2 == 1;
    std::uniform_int_distribution<int> small(0, 9);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = ties ? small(rng) : g(rng);
      y[i] = ties ? small(rng) + 0.5 * x[i] : 0.3 * x[i] + g(rng);
    }
    if (std::set<double>(x.begin(), x.end()).size() < 2 || std::set<double>(y.begin(), y.end()).size() < 2) continue;
    pairs.emplace_back(std::move(x), std::move(y));
  }

  double worst = 0.0;
  std::vector<double> rhos;
  for (const auto& [x, y] : pairs) {
    const double rho = correlate::spearman(x, y);
    rhos.push_back(rho);
    worst = std::max(worst, std::abs(rho - brute_spearman(x, y)));

    std::vector<double> ex(x.size()), cy(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) ex[i] = std::exp(x[i] / 4.0), cy[i] = y[i] * y[i] * y[i];
    o.require(correlate::average_ranks(ex) == correlate::average_ranks(x), "exp transform changed ranks");
    o.require(correlate::average_ranks(cy) == correlate::average_ranks(y), "cube transform changed ranks");
    o.require(correlate::spearman(ex, cy) == rho, "monotone transform changed rho");
  }
  o.require(worst <= 1e-12, "max |rho - brute force| = " + fmt(worst));

  // Cross-check with the standalone exact-rational script as well.
  double worst_py = 0.0;
  const auto dir = temp_dir("acc_pairs");
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [x, y] : pairs) j.push_back({{"x", x}, {"y", y}});
  write_file_atomic(dir / "pairs.json", j.dump());
  const auto py = run_capture(kPython + " " + kOracle.string() + " pairs " + (dir / "pairs.json").string());
  if (py.empty()) {
    o.require(false, "oracle script failed to run");
  } else {
    const auto vals = nlohmann::json::parse(py).get<std::vector<double>>();
    o.require(vals.size() == rhos.size(), "oracle returned the wrong number of values");
    for (std::size_t i = 0; i < std::min(vals.size(), rhos.size()); ++i)
      worst_py = std::max(worst_py, std::abs(vals[i] - rhos[i]));
    o.require(worst_py <= 1e-12, "max |rho - oracle script| = " + fmt(worst_py));
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 5.0, "runtime " + std::to_string(elapsed) + " s");
  if (o.pass)
    o.detail = "200 pairs, max diff " + fmt(worst) + " (brute force), " + fmt(worst_py) +
               " (oracle script); transforms exact; " + std::to_string(elapsed).substr(0, 5) + " s";
  return o;
}

// ---- 2. Indicator equivalence ----

Outcome indicator_equivalence() {
  using namespace indicators;
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(50);
  const TradeLog trades{{Date(2020, 1, 10), 5.0}, {Date(2020, 1, 20), -2.0}, {Date(2020, 3, 1), -1.0}};
  double worst = 0.0;
  std::size_t checked = 0;
  for (int series = 0; series < 50; ++series) {
    const auto bars = random_bars(rng, 300);
    BreadthSeries breadth;
    std::uniform_real_distribution<double> u(100, 2000);
    for (const auto& b : bars) breadth.push_back({b.date, u(rng), u(rng)});
    const AuxInputs aux{&trades, &breadth};
    for (const auto& entry : catalog()) {
      const auto spec = make_spec(entry.name);
      const auto batch = compute(spec, bars, aux);
      IndicatorStream stream(spec, aux);
      for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto v = stream.update(bars[i]);
        if (v.has_value() != batch.values[i].has_value()) {
          o.require(false, entry.name + ": defined-ness differs at bar " + std::to_string(i));
          continue;
        }
        if (v) {
          worst = std::max(worst, std::abs(*v - *batch.values[i]));
          ++checked;
        }
      }
    }
    auto bounds = [&](const char* name, double lo, double hi) {
      for (const auto& v : compute(make_spec(name), bars).values)
        if (v) o.require(*v >= lo && *v <= hi, std::string(name) + " out of bounds: " + std::to_string(*v));
    };
    for (const char* name : {"rsi", "stoch_k", "stoch_d", "slow", "aroon_up", "aroon_down"}) bounds(name, 0, 100);
    bounds("williams_r", -100, 0);
  }
  o.require(worst <= 1e-9, "max |stream - batch| = " + fmt(worst));
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 30.0, "runtime " + std::to_string(elapsed) + " s");
  if (o.pass)
    o.detail = std::to_string(catalog().size()) + " indicators x 50 series, " + std::to_string(checked) +
               " values, max diff " + fmt(worst) + ", bounds hold; " + std::to_string(elapsed).substr(0, 5) + " s";
  return o;
}

// ---- 3. Polarity / subjectivity ----

Outcome polarity_subjectivity() {
  using namespace lexsent;
  Outcome o;
  const std::vector<std::string> pos{"good", "great", "gain"}, neg{"bad", "loss", "weak"};
  const auto lex = SentimentLexicon::build(LexiconName::custom, pos, neg);
  const textprep::Tokens t{"good", "x", "great", "x", "bad", "x", "x", "x", "x", "x"};
  const auto s = score_document(t, lex);
  o.require(s.pos_count == 2 && s.neg_count == 1 && s.word_count == 10, "counts differ");
  o.require(s.polarity == 1.0 / 3.0, "polarity " + std::to_string(s.polarity));
  o.require(s.subjectivity == 0.1, "subjectivity " + std::to_string(s.subjectivity));

  const auto swapped = lex.swapped();
  const std::vector<std::string> vocab{"good", "great", "gain", "bad", "loss", "weak", "market", "share", "ceo"};
  std::mt19937_64 rng(100);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1), len(0, 40);
  for (int trial = 0; trial < 100; ++trial) {
    textprep::Tokens tokens(len(rng));
    for (auto& w : tokens) w = vocab[pick(rng)];
    const auto a = score_document(tokens, lex), b = score_document(tokens, swapped);
    o.require(a.polarity == -b.polarity && a.subjectivity == -b.subjectivity,
              "swap antisymmetry broken on trial " + std::to_string(trial));
  }
  if (o.pass) o.detail = "polarity 1/3, subjectivity 0.1; swap antisymmetry exact on 100 lists";
  return o;
}

// ---- 4. Negation ----

Outcome negation() {
  using namespace lexsent;
  Outcome o;
  const auto prep = textprep::load_config(textprep::Mode::lm, kData);
  const auto bundled = load_lexicon(kData / "lexicon_lm_sample.csv");
  const std::vector<std::string> well{"well"};
  const auto minimal = SentimentLexicon::build(LexiconName::custom, well, {});
  for (const auto* lex : {&bundled, &minimal}) {
    const auto neg = score_document(textprep::preprocess("The stock market is not doing well", prep), *lex);
    const auto pos = score_document(textprep::preprocess("The stock market is doing well", prep), *lex);
    o.require(neg.label == Label::negative, "negated sentence is " + std::string(to_string(neg.label)));
    o.require(pos.label == Label::positive, "sentence without 'not' is " + std::string(to_string(pos.label)));
  }
  if (o.pass) o.detail = "negated sentence negative, without 'not' positive (bundled and one-word lexicon)";
  return o;
}

// ---- 5. etf-idf ----

Outcome etf_idf() {
  using namespace emotion;
  Outcome o;
  const auto lex = merge_lexicons(load_nrc(kData / "nrc_sample.tsv"), load_gold(kData / "gold_sample.csv"));
  const textprep::RuleTagger tagger(kData / "pos_lexicon.tsv");
  const auto docs = documents_from_jsonl(read_file(kFixtures / "emotion_toy_day.jsonl"));
  o.require(docs.size() == 12, "toy day has " + std::to_string(docs.size()) + " documents");
  std::vector<textprep::Tokens> tokens;
  for (const auto& d : docs) tokens.push_back(emotion_tokens(d.text, tagger));
  const auto v = daily_emotion_vector(docs.front().ticker, docs.front().date, tokens, lex);
  o.require(v.has_value(), "no vector for the toy day");

  double worst = 0.0;
  std::size_t nonzero = 0;
  for (Emotion e : kEmotions) {
    // Sum of per-document hit counts times ln(N / (1 + df)), recomputed by scanning every entry.
    double hits = 0;
    int df = 0;
    for (const auto& doc : tokens) {
      int h = 0;
      for (const auto& t : doc)
        for (const auto& [w, f] : lex.entries())
          if (w == to_lower(t) && f.test(static_cast<std::size_t>(e))) ++h;
      hits += h;
      if (h > 0) ++df;
    }
    const double expected = hits == 0 ? 0.0 : hits * std::log(static_cast<double>(tokens.size()) / (1.0 + df));
    if (v) worst = std::max(worst, std::abs((*v)[e] - expected));
    if (expected != 0.0) ++nonzero;
  }
  o.require(worst <= 1e-12, "max |value - brute force| = " + fmt(worst));
  o.require(nonzero >= 4, "toy day exercises only " + std::to_string(nonzero) + " emotions");
  const double ln2 = idf_value(10, 4);
  o.require(std::abs(ln2 - std::log(2.0)) <= 1e-12, "idf(10, 4) = " + std::to_string(ln2));
  if (o.pass)
    o.detail = "8 values on 12-document day, max diff " + fmt(worst) + "; idf(N=10, df=4) = ln 2";
  return o;
}

// ---- 6. Lexicon merge ----

Outcome lexicon_merge() {
  using namespace emotion;
  Outcome o;
  std::mt19937_64 rng(19097);
  std::uniform_int_distribution<unsigned> bits(1, 255), gold_bits(1, 31);
  const Emotion five[] = {Emotion::joy, Emotion::anger, Emotion::sadness, Emotion::fear, Emotion::disgust};
  EmotionLexicon nrc, gold;
  std::map<std::string, Flags> expected;
  for (int i = 0; i < 14182; ++i) {
    const Flags f(bits(rng));
    nrc.add("w" + std::to_string(i), f);
    expected["w" + std::to_string(i)] |= f;
  }
  // 13915 gold words: 9000 shared with the first source, 4915 new.
  for (int i = 0; i < 13915; ++i) {
    const int id = i < 9000 ? i : 14182 + (i - 9000);
    Flags f;
    const unsigned g = gold_bits(rng);
    for (int b = 0; b < 5; ++b)
      if (g >> b & 1u) f.set(static_cast<std::size_t>(five[b]));
    gold.add("w" + std::to_string(id), f);
    expected["w" + std::to_string(id)] |= f;
  }
  const auto merged = merge_lexicons(nrc, gold);
  o.require(merged.size() == 19097, "merged size " + std::to_string(merged.size()));
  std::size_t wrong = 0;
  for (const auto& [w, f] : expected)
    if (merged.flags(w) != f) ++wrong;
  o.require(wrong == 0, std::to_string(wrong) + " entries with wrong flags");
  if (o.pass) o.detail = "14182 + 13915 (4915 disjoint) -> 19097 entries, flag union correct";
  return o;
}

// ---- 7. Threshold mappings ----

Outcome thresholds() {
  using namespace lexsent;
  Outcome o;
  o.require(classify_compound(0.05) == Label::positive, "compound 0.05");
  o.require(classify_compound(-0.05) == Label::negative, "compound -0.05");
  o.require(classify_compound(0.0) == Label::neutral, "compound 0");
  o.require(discretize_regression_label(0.15) == Label::positive, "regression 0.15");
  o.require(discretize_regression_label(-0.15) == Label::negative, "regression -0.15");
  o.require(discretize_regression_label(0.0) == Label::neutral, "regression 0");
  if (o.pass) o.detail = "compound +-0.05 and regression +-0.15 closed intervals, 0 neutral";
  return o;
}

// ---- 8. Benchmark preparation ----

Outcome benchmark_prep() {
  using namespace ingest;
  Outcome o;
  const char* pb = std::getenv("STOCKSENT_PHRASEBANK");
  const char* fq = std::getenv("STOCKSENT_FIQA");
  if (pb && fq) {
    std::vector<fs::path> fiqa;
    for (const auto& p : split(fq, ':'))
      if (!p.empty()) fiqa.emplace_back(p);
    const auto dir = temp_dir("acc_bench");
    const auto s = prepare_benchmark(pb, fiqa, 1, dir);
    o.require(s.all.rows == 5328, "total rows " + std::to_string(s.all.rows));
    o.require(s.train.rows == 3835 && s.test.rows == 1066 && s.validation.rows == 427,
              "splits " + std::to_string(s.train.rows) + "/" + std::to_string(s.test.rows) + "/" +
                  std::to_string(s.validation.rows));
    o.require(s.all.by_label == std::array<std::size_t, 3>{961, 2770, 2033},
              "label totals " + std::to_string(s.all.by_label[0]) + "/" + std::to_string(s.all.by_label[1]) + "/" +
                  std::to_string(s.all.by_label[2]));
    if (o.pass) o.detail = "published sources: 5328 rows, 3835/1066/427, labels 961/2770/2033";
    return o;
  }

  // Synthetic rows with the published per-label split totals.
  std::vector<LabeledText> rows;
  const std::array<std::size_t, 3> per_label{847, 2673, 1808};
  for (std::size_t l = 0; l < 3; ++l)
    for (std::size_t k = 0; k < per_label[l]; ++k)
      rows.push_back({"s" + std::to_string(l) + "_" + std::to_string(k), static_cast<lexsent::Label>(l), "synthetic"});
  std::mt19937_64 rng(8);
  std::shuffle(rows.begin(), rows.end(), rng);
  const auto split = split_benchmark(rows, 42);
  const std::size_t n = rows.size();
  o.require(split.train.size() == 3835 && split.test.size() == 1066 && split.validation.size() == 427,
            "splits " + std::to_string(split.train.size()) + "/" + std::to_string(split.test.size()) + "/" +
                std::to_string(split.validation.size()));
  o.require(split.test.size() == static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(n))),
            "test share is not 20%");
  std::multiset<std::string> all, parts;
  for (const auto& r : rows) all.insert(r.text);
  for (const auto* part : {&split.train, &split.test, &split.validation})
    for (const auto& r : *part) parts.insert(r.text);
  o.require(all == parts, "splits are not a partition");
  const auto test = split.counts(split.test);
  for (std::size_t l = 0; l < 3; ++l) {
    const double share = static_cast<double>(split.test.size()) * static_cast<double>(per_label[l]) / n;
    o.require(std::abs(static_cast<double>(test.by_label[l]) - share) <= 1.0, "test split not stratified");
  }
  if (o.pass)
    o.detail = "published sources not supplied; synthetic 5328 rows -> 3835/1066/427, test 20%, stratified (" +
               std::to_string(test.by_label[0]) + "/" + std::to_string(test.by_label[1]) + "/" +
               std::to_string(test.by_label[2]) + ")";
  return o;
}

// ---- 9. Scheduler contract ----

class SimulatedServer final : public ingest::HttpClient {
 public:
  explicit SimulatedServer(std::uint64_t seed) : rng_(seed) {}
  ingest::HttpResponse get(const ingest::HttpRequest&) override {
    std::chrono::milliseconds latency;
    {
      std::lock_guard lock(mu_);
      latency = std::chrono::milliseconds(std::uniform_int_distribution<int>(10, 85)(rng_));
    }
    const int now = ++in_flight_;
    int p = peak_.load();
    while (now > p && !peak_.compare_exchange_weak(p, now)) {
    }
    std::this_thread::sleep_for(latency);
    --in_flight_;
    return {200, "[]"};
  }
  int peak() const { return peak_.load(); }

 private:
  std::mutex mu_;
  std::mt19937_64 rng_;
  std::atomic<int> in_flight_{0}, peak_{0};
};

Outcome scheduler_contract() {
  using namespace ingest;
  Outcome o;
  const auto t0 = Clock::now();
  SourceConfig s;
  s.id = "simulated";
  s.fixture = "unused";
  s.min_delay_s = 0.05;
  s.max_delay_s = 0.1;
  s.max_concurrency = 2;
  s.identities = {{"ua-1", ""}, {"ua-2", ""}, {"ua-3", ""}, {"ua-4", ""}, {"ua-5", ""}};
  s.rotate = true;
  SimulatedServer server(9);
  std::mutex mu;
  std::map<std::string, int> uses;
  PolitenessScheduler sched(s, 50);
  const auto r = sched.run(50, [&](std::size_t, const Identity& id) {
    {
      std::lock_guard lock(mu);
      ++uses[id.user_agent];
    }
    get_with_backoff(server, {"https://simulated/" + id.user_agent, {{"User-Agent", id.user_agent}}, {}}, s,
                     [](std::chrono::milliseconds) {});
  });
  o.require(r.records.size() == 50, std::to_string(r.records.size()) + " requests dispatched");
  double lo = 1e9, hi = 0;
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    const double gap = r.records[i].dispatched_s - r.records[i - 1].dispatched_s;
    lo = std::min(lo, gap);
    hi = std::max(hi, gap);
  }
  o.require(lo >= 0.05 - 0.01 && hi <= 0.1 + 0.01, "gaps span [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  for (const auto& id : s.identities)
    o.require(uses[id.user_agent] == 10, id.user_agent + " used " + std::to_string(uses[id.user_agent]) + " times");
  o.require(server.peak() <= 2 && r.peak_in_flight <= 2,
            "in flight peaked at " + std::to_string(server.peak()) + " (max 2)");
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 15.0, "runtime " + std::to_string(elapsed) + " s");
  if (o.pass)
    o.detail = "50 requests, gaps [" + std::to_string(lo).substr(0, 5) + ", " + std::to_string(hi).substr(0, 5) +
               "] s, 5 identities x 10, peak in flight " + std::to_string(server.peak()) + "/2; " +
               std::to_string(elapsed).substr(0, 5) + " s";
  return o;
}

// ---- 10. End-to-end determinism ----

Outcome end_to_end() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto a = temp_dir("acc_e2e_a"), b = temp_dir("acc_e2e_b");
  for (const auto& dir : {a, b}) {
    const auto r = test_support::run_pipeline(dir);
    o.require(r.code == 0, "pipeline failed: " + r.err);
  }
  if (!o.pass) return o;
  const auto sa = test_support::snapshot(a / "out"), sb = test_support::snapshot(b / "out");
  o.require(sa == sb, "outputs differ between runs");
  o.require(sa.count("report.txt") && !sa.at("report.txt").empty(), "no report written");

  const auto oracle = run_capture(kPython + " " + kOracle.string() + " report " +
                                  (test_support::mini_fixture() / "prices.csv").string() + " " +
                                  (a / "out" / "sentiment_signals.csv").string() + " " +
                                  (a / "out" / "emotion_signals.csv").string());
  o.require(!oracle.empty(), "oracle script failed to run");
  std::map<std::pair<std::string, std::string>, std::pair<std::string, std::size_t>> expected;
  for (const auto& row : parse_csv(oracle))
    if (row.size() == 4) expected[{row[0], row[1]}] = {row[2], static_cast<std::size_t>(parse_int(row[3]))};

  const auto report = correlate::report_from_csv(sa.count("correlation.csv") ? sa.at("correlation.csv") : "");
  o.require(report.rows.size() == expected.size() && !expected.empty(),
            std::to_string(report.rows.size()) + " rows vs " + std::to_string(expected.size()) + " from the oracle");
  double worst = 0.0;
  std::size_t defined = 0;
  std::set<std::string> tickers, channels;
  for (const auto& row : report.rows) {
    tickers.insert(row.ticker);
    channels.insert(row.channel);
    auto it = expected.find({row.ticker, row.channel});
    if (it == expected.end()) {
      o.require(false, row.ticker + " " + row.channel + " missing from the oracle");
      continue;
    }
    o.require(it->second.second == row.n_days, row.ticker + " " + row.channel + " n_days differs");
    o.require(it->second.first.empty() == !row.rho, row.ticker + " " + row.channel + " defined-ness differs");
    if (row.rho && !it->second.first.empty()) {
      worst = std::max(worst, std::abs(*row.rho - parse_double(it->second.first)));
      ++defined;
    }
  }
  o.require(worst <= 1e-12, "max |rho - oracle| = " + fmt(worst));
  o.require(tickers.size() == 3, std::to_string(tickers.size()) + " tickers in the report");
  for (Source s : kAllSources)
    o.require(channels.count(correlate::sentiment_channel(s)), correlate::sentiment_channel(s) + " missing");
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 60.0, "runtime " + std::to_string(elapsed) + " s");
  if (o.pass)
    o.detail = "3 tickers x 30 days x 4 channels, outputs byte-identical across runs, " + std::to_string(defined) +
               " rho values match oracle (max diff " + fmt(worst) + "); " + std::to_string(elapsed).substr(0, 5) + " s";
  return o;
}

}  // namespace

int main() {
  // The library's progress and sparse-day logging is noise here.
  log::set_sink([](std::string_view, std::string_view) {});
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"spearman-oracle", spearman_oracle},
      {"indicator-equivalence", indicator_equivalence},
      {"polarity-subjectivity", polarity_subjectivity},
      {"negation", negation},
      {"etf-idf", etf_idf},
      {"lexicon-merge", lexicon_merge},
      {"threshold-mappings", thresholds},
      {"benchmark-prep", benchmark_prep},
      {"scheduler-contract", scheduler_contract},
      {"end-to-end-determinism", end_to_end},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    if (!o.pass) ++failed;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
