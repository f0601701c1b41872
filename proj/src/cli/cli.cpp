#include "stocksent/cli.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "stocksent/emotion.hpp"
#include "stocksent/error.hpp"
#include "stocksent/indicators.hpp"
#include "stocksent/lexsent.hpp"
#include "stocksent/marketdata.hpp"
#include "stocksent/util.hpp"

#ifndef STOCKSENT_DEFAULT_DATA_DIR
#define STOCKSENT_DEFAULT_DATA_DIR "data"
#endif

namespace stocksent::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSentimentFile = "sentiment_signals.csv";
constexpr const char* kEmotionVectorsFile = "emotion_vectors.jsonl";
constexpr const char* kEmotionSignalsFile = "emotion_signals.csv";
constexpr const char* kCorrelationFile = "correlation.csv";
constexpr const char* kReportFile = "report.txt";

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

void set_data_paths(PipelineConfig& c) {
  c.lexicon = c.data_dir / "lexicon_lm_sample.csv";
  c.nrc = c.data_dir / "nrc_sample.tsv";
  c.gold = c.data_dir / "gold_sample.csv";
  c.pos_lexicon = c.data_dir / "pos_lexicon.tsv";
  c.profiles = c.data_dir / "profiles.csv";
}

correlate::SignalValue parse_signal(std::string_view s) {
  if (s == "polarity") return correlate::SignalValue::polarity;
  if (s == "label") return correlate::SignalValue::label;
  fail(ErrorKind::config, "signal must be 'polarity' or 'label', got '" + std::string(s) + "'");
}

std::string join_lines(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& i : items) s += "\n  - " + i;
  return s;
}

void require_valid(const PipelineConfig& config, std::string_view command) {
  const auto problems = validate(config, command);
  if (!problems.empty())
    fail(ErrorKind::config, "invalid configuration for '" + std::string(command) + "':" + join_lines(problems));
}

bool wants_ticker(const PipelineConfig& c, const std::string& ticker) {
  return c.tickers.empty() || std::find(c.tickers.begin(), c.tickers.end(), ticker) != c.tickers.end();
}

std::vector<TextDocument> load_corpus(const PipelineConfig& c, const std::vector<Source>& sources) {
  const auto store = ingest::CorpusStore::open_read_only(c.corpus);
  std::vector<TextDocument> docs;
  auto add = [&](const std::optional<std::string>& ticker) {
    for (Source s : sources) {
      auto part = store.load(ticker, s, c.range());
      docs.insert(docs.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
  };
  if (c.tickers.empty()) {
    add(std::nullopt);
  } else {
    for (const auto& t : c.tickers) add(t);
  }
  return docs;
}

std::vector<correlate::DailySignal> read_signals(const fs::path& path) {
  return correlate::signals_from_csv(read_file(path));
}

// ---- commands ----

int cmd_ingest(const PipelineConfig& c, std::ostream& out) {
  require_valid(c, "ingest");
  std::vector<keymatch::TickerProfile> profiles;
  const bool needs_profiles =
      std::any_of(c.sources.begin(), c.sources.end(), [](const auto& s) { return s.keyword_match; });
  if (needs_profiles) profiles = keymatch::load_profiles(c.profiles);
  ingest::KeywordFilter filter{profiles, c.match};
  std::optional<ingest::IdentityState> state;
  if (c.state_file) state.emplace(*c.state_file);

  ingest::CorpusStore store(c.corpus);
  const DateRange range = *c.range();
  for (const auto& source : c.sources) {
    auto client = ingest::make_client(source);
    std::size_t fetched = 0;
    std::size_t stored = 0;
    for (const auto& ticker : c.tickers) {
      ingest::FetchOptions options;
      options.seed = c.seed;
      options.state = state ? &*state : nullptr;
      options.filter = needs_profiles ? &filter : nullptr;
      const auto docs = ingest::fetch(source, *client, ticker, range, options);
      fetched += docs.size();
      stored += store.add(docs);
    }
    out << "ingest " << source.id << ": fetched " << fetched << ", stored " << stored << "\n";
  }
  if (state) state->save();
  out << "corpus " << c.corpus.string() << ": " << store.size() << " documents\n";
  return 0;
}

int cmd_indicators(const PipelineConfig& c, std::ostream& out) {
  require_valid(c, "indicators");
  std::vector<indicators::IndicatorSpec> specs;
  if (c.indicator_specs.empty()) {
    specs = indicators::default_specs();
  } else {
    for (const auto& s : c.indicator_specs) specs.push_back(indicators::parse_spec(s));
  }
  const auto table = marketdata::load_prices(c.prices, marketdata::format_from_path(c.prices));
  fs::create_directories(c.out);
  std::size_t written = 0;
  for (const auto& [ticker, series] : table) {
    if (!wants_ticker(c, ticker)) continue;
    const auto result = indicators::compute_all(specs, series.bars());
    for (const auto& col : result.columns)
      if (col.error) log::warn(ticker + " " + col.id + ": " + *col.error);
    const fs::path path = c.out / ("indicators_" + ticker + ".csv");
    write_file_atomic(path, indicators::table_to_csv(result));
    out << path.string() << "\n";
    ++written;
  }
  if (written == 0) fail(ErrorKind::data, "no price series for the requested tickers");
  return 0;
}

int cmd_sentiment(const PipelineConfig& c, std::ostream& out) {
  require_valid(c, "sentiment");
  const std::vector<Source> all(std::begin(kAllSources), std::end(kAllSources));
  const auto docs = load_corpus(c, all);

  std::vector<correlate::ScoredDocument> scored;
  scored.reserve(docs.size());
  auto push = [&](const TextDocument& d, const lexsent::SentimentScore& s) {
    scored.push_back({d.ticker, d.date, correlate::sentiment_channel(d.source), s, d.engagement});
  };

  if (c.scorer) {
    auto argv = c.scorer->argv;
    lexsent::ExternalScorer scorer(c.scorer->backend,
                                   [argv] { return std::make_unique<lexsent::ChildProcessTransport>(argv); });
    const auto scores = scorer.score_all(docs);
    for (std::size_t i = 0; i < docs.size(); ++i) push(docs[i], scores[i]);
  } else {
    const auto lexicon = lexsent::load_lexicon(c.lexicon);
    std::map<textprep::Mode, textprep::PrepConfig> preps;
    for (Source source : all) {
      std::vector<TextDocument> group;
      for (const auto& d : docs)
        if (d.source == source) group.push_back(d);
      if (group.empty()) continue;
      const auto mode = c.prep_mode(source);
      auto it = preps.find(mode);
      if (it == preps.end()) it = preps.emplace(mode, textprep::load_config(mode, c.data_dir)).first;
      const auto tokens = textprep::preprocess_corpus(group, it->second);
      for (std::size_t i = 0; i < group.size(); ++i) push(group[i], lexsent::score_document(tokens[i], lexicon));
    }
  }

  auto signals = correlate::aggregate_all(scored, {correlate::Weighting::mean, c.signal});
  if (c.weighted_engagement) {
    // Only twitter documents carry engagement; elsewhere the weighted mean equals the plain one.
    std::vector<correlate::ScoredDocument> engaged;
    for (const auto& s : scored)
      if (s.engagement) engaged.push_back(s);
    auto weighted = correlate::aggregate_all(engaged, {correlate::Weighting::engagement, c.signal});
    for (auto& s : weighted) s.channel += correlate::kWeightedSuffix;
    signals.insert(signals.end(), weighted.begin(), weighted.end());
    std::sort(signals.begin(), signals.end(), [](const auto& a, const auto& b) {
      return std::tie(a.ticker, a.channel, a.date) < std::tie(b.ticker, b.channel, b.date);
    });
  }
  fs::create_directories(c.out);
  write_file_atomic(c.out / kSentimentFile, correlate::signals_to_csv(signals));
  out << "sentiment: " << docs.size() << " documents, " << signals.size() << " daily signals -> "
      << (c.out / kSentimentFile).string() << "\n";
  return 0;
}

int cmd_emotion(const PipelineConfig& c, std::ostream& out) {
  require_valid(c, "emotion");
  const auto docs = load_corpus(c, c.emotion_sources);
  const auto lexicon = emotion::merge_lexicons(emotion::load_nrc(c.nrc), emotion::load_gold(c.gold));
  const textprep::RuleTagger tagger(c.pos_lexicon);
  const auto vectors = emotion::daily_vectors(docs, lexicon, tagger);
  const auto signals = correlate::emotion_signals(vectors);
  fs::create_directories(c.out);
  write_file_atomic(c.out / kEmotionVectorsFile, emotion::vectors_to_jsonl(vectors));
  write_file_atomic(c.out / kEmotionSignalsFile, correlate::signals_to_csv(signals));
  out << "emotion: " << docs.size() << " documents, " << vectors.size() << " daily vectors, " << signals.size()
      << " daily signals -> " << c.out.string() << "\n";
  return 0;
}

int cmd_correlate(const PipelineConfig& c, std::ostream& out) {
  require_valid(c, "correlate");
  std::optional<std::string> channel;
  if (c.channel) channel = correlate::canonical_channel(*c.channel);

  std::vector<correlate::DailySignal> signals;
  for (const char* name : {kSentimentFile, kEmotionSignalsFile}) {
    if (!fs::exists(c.out / name)) continue;
    for (auto& s : read_signals(c.out / name)) {
      if (!wants_ticker(c, s.ticker)) continue;
      if (channel && s.channel != *channel) continue;
      if (c.range() && !c.range()->contains(s.date)) continue;
      signals.push_back(std::move(s));
    }
  }
  if (signals.empty()) fail(ErrorKind::data, "no daily signals match the requested ticker/channel/date filters");

  const auto prices = marketdata::load_prices(c.prices, marketdata::format_from_path(c.prices));
  std::map<std::string, marketdata::ReturnSeries> returns;
  for (const auto& [ticker, series] : prices)
    if (wants_ticker(c, ticker)) returns[ticker] = marketdata::compute_returns(series.bars());

  const auto report = correlate::correlate_returns(returns, signals, {c.lag, c.permutations, c.seed});
  const std::string csv = correlate::report_to_csv(report);
  fs::create_directories(c.out);
  write_file_atomic(c.out / kCorrelationFile, csv);
  out << csv;
  return 0;
}

int cmd_report(const PipelineConfig& c, std::ostream& out) {
  require_valid(c, "report");
  const auto report = correlate::report_from_csv(read_file(c.out / kCorrelationFile));
  const std::string text = correlate::report_to_text(report);
  write_file_atomic(c.out / kReportFile, text);
  out << text;
  return 0;
}

int cmd_prepare_benchmark(const PipelineConfig& c, std::ostream& out) {
  require_valid(c, "prepare-benchmark");
  const fs::path dir = c.out / "benchmark";
  const auto summary = ingest::prepare_benchmark(c.phrasebank, c.fiqa, c.seed, dir);
  auto line = [&](const char* name, const ingest::SplitCounts& s) {
    out << name << ": " << s.rows << " rows (negative " << s.by_label[0] << ", neutral " << s.by_label[1]
        << ", positive " << s.by_label[2] << ")\n";
  };
  line("all", summary.all);
  line("train", summary.train);
  line("test", summary.test);
  line("validation", summary.validation);
  out << "-> " << dir.string() << "\n";
  return 0;
}

int dispatch(const std::string& command, const PipelineConfig& c, std::ostream& out) {
  if (command == "ingest") return cmd_ingest(c, out);
  if (command == "indicators") return cmd_indicators(c, out);
  if (command == "sentiment") return cmd_sentiment(c, out);
  if (command == "emotion") return cmd_emotion(c, out);
  if (command == "correlate") return cmd_correlate(c, out);
  if (command == "report") return cmd_report(c, out);
  if (command == "prepare-benchmark") return cmd_prepare_benchmark(c, out);
  fail(ErrorKind::config, "unknown command '" + command + "'");
}

}  // namespace

textprep::Mode PipelineConfig::prep_mode(Source source) const {
  if (auto it = prep_modes.find(source); it != prep_modes.end()) return it->second;
  return source == Source::twitter ? textprep::Mode::twitter : textprep::Mode::lm;
}

std::optional<DateRange> PipelineConfig::range() const {
  if (!from && !to) return std::nullopt;
  return DateRange{from.value_or(Date(1900, 1, 1)), to.value_or(Date(9999, 12, 31))};
}

PipelineConfig default_config() {
  PipelineConfig c;
  c.data_dir = STOCKSENT_DEFAULT_DATA_DIR;
  c.corpus = "corpus";
  set_data_paths(c);
  return c;
}

PipelineConfig config_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) fail(ErrorKind::config, "pipeline config must be a JSON object");
  static const std::set<std::string> known = {
      "data_dir", "prices",  "corpus",      "out",    "lexicon",  "nrc",           "gold",
      "pos_lexicon", "profiles", "state_file", "sources", "tickers", "from",       "to",
      "prep_modes", "emotion_sources", "match", "weighted_engagement", "signal", "channel", "lag",
      "permutations", "seed", "indicators", "scorer", "benchmark"};
  std::vector<std::string> problems;
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) problems.push_back("unknown key '" + key + "'");
  if (!problems.empty()) fail(ErrorKind::config, "pipeline config:" + join_lines(problems));

  PipelineConfig c = default_config();
  try {
    if (j.contains("data_dir")) {
      c.data_dir = resolve(base_dir, j.at("data_dir").get<std::string>());
      set_data_paths(c);
    }
    auto path = [&](const char* key, fs::path& field) {
      if (j.contains(key)) field = resolve(base_dir, j.at(key).get<std::string>());
    };
    path("prices", c.prices);
    path("corpus", c.corpus);
    path("out", c.out);
    path("lexicon", c.lexicon);
    path("nrc", c.nrc);
    path("gold", c.gold);
    path("pos_lexicon", c.pos_lexicon);
    path("profiles", c.profiles);
    if (j.contains("state_file")) c.state_file = resolve(base_dir, j.at("state_file").get<std::string>());
    if (j.contains("sources"))
      for (const auto& s : j.at("sources")) c.sources.push_back(ingest::source_from_json(s, base_dir));
    if (j.contains("tickers")) c.tickers = j.at("tickers").get<std::vector<std::string>>();
    if (j.contains("from")) c.from = Date::parse(j.at("from").get<std::string>());
    if (j.contains("to")) c.to = Date::parse(j.at("to").get<std::string>());
    if (j.contains("prep_modes"))
      for (const auto& [source, mode] : j.at("prep_modes").items())
        c.prep_modes[parse_source(source)] = textprep::parse_mode(mode.get<std::string>());
    if (j.contains("emotion_sources")) {
      c.emotion_sources.clear();
      for (const auto& s : j.at("emotion_sources")) c.emotion_sources.push_back(parse_source(s.get<std::string>()));
    }
    if (j.contains("match")) {
      const auto& m = j.at("match");
      c.match.cos_threshold = m.value("cos_threshold", c.match.cos_threshold);
      c.match.edit_threshold = m.value("edit_threshold", c.match.edit_threshold);
    }
    c.weighted_engagement = j.value("weighted_engagement", c.weighted_engagement);
    if (j.contains("signal")) c.signal = parse_signal(j.at("signal").get<std::string>());
    if (j.contains("channel")) c.channel = j.at("channel").get<std::string>();
    c.lag = j.value("lag", c.lag);
    c.permutations = j.value("permutations", c.permutations);
    c.seed = j.value("seed", c.seed);
    if (j.contains("indicators")) c.indicator_specs = j.at("indicators").get<std::vector<std::string>>();
    if (j.contains("scorer")) {
      const auto& s = j.at("scorer");
      c.scorer = ScorerCommand{s.at("backend").get<std::string>(), s.at("command").get<std::vector<std::string>>()};
    }
    if (j.contains("benchmark")) {
      const auto& b = j.at("benchmark");
      if (b.contains("phrasebank")) c.phrasebank = resolve(base_dir, b.at("phrasebank").get<std::string>());
      if (b.contains("fiqa"))
        for (const auto& f : b.at("fiqa")) c.fiqa.push_back(resolve(base_dir, f.get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::config, std::string("pipeline config: ") + e.what());
  } catch (const Error& e) {
    fail(ErrorKind::config, std::string("pipeline config: ") + e.what());
  }
  return c;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::config, path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

std::vector<std::string> validate(const PipelineConfig& c, std::string_view command) {
  std::vector<std::string> p;
  auto need_file = [&](const fs::path& path, const std::string& what) {
    if (path.empty()) {
      p.push_back(what + " path is not set");
    } else if (!fs::exists(path)) {
      p.push_back(what + " not found: " + path.string());
    }
  };
  auto need_corpus = [&] {
    if (!fs::is_directory(c.corpus / "shards")) p.push_back("corpus store not found: " + c.corpus.string());
  };
  if (c.from && c.to && *c.to < *c.from) p.push_back("--from " + c.from->iso() + " is after --to " + c.to->iso());
  if (c.lag < 0) p.push_back("lag must be >= 0");

  if (c.prep_mode(Source::twitter) != textprep::Mode::twitter)
    p.push_back("prep mode for twitter is '" + std::string(textprep::to_string(c.prep_mode(Source::twitter))) +
                "'; twitter documents require 'twitter'");

  if (command == "ingest") {
    if (c.sources.empty()) p.push_back("no sources configured");
    if (c.tickers.empty()) p.push_back("no tickers given");
    if (!c.from || !c.to) p.push_back("ingest needs both --from and --to");
    std::set<std::string> ids;
    for (const auto& s : c.sources) {
      if (!ids.insert(s.id).second) p.push_back("duplicate source id '" + s.id + "'");
      for (const auto& problem : s.validate()) p.push_back(problem);
      if (s.fixture && !fs::exists(*s.fixture))
        p.push_back("source '" + s.id + "' fixture not found: " + s.fixture->string());
      if (s.keyword_match) need_file(c.profiles, "ticker profiles");
    }
  } else if (command == "indicators") {
    need_file(c.prices, "price file");
    for (const auto& spec : c.indicator_specs) {
      try {
        indicators::parse_spec(spec);
      } catch (const Error& e) {
        p.push_back(std::string("--spec ") + spec + ": " + e.what());
      }
    }
  } else if (command == "sentiment") {
    need_corpus();
    need_file(c.data_dir, "data directory");
    if (!c.scorer) need_file(c.lexicon, "sentiment lexicon");
    if (c.scorer && c.scorer->argv.empty()) p.push_back("scorer command is empty");
  } else if (command == "emotion") {
    need_corpus();
    need_file(c.nrc, "NRC emotion lexicon");
    need_file(c.gold, "gold emotion lexicon");
    need_file(c.pos_lexicon, "POS lexicon");
    if (c.emotion_sources.empty()) p.push_back("emotion_sources is empty");
  } else if (command == "correlate") {
    need_file(c.prices, "price file");
    if (!fs::exists(c.out / kSentimentFile) && !fs::exists(c.out / kEmotionSignalsFile))
      p.push_back("no signals in " + c.out.string() + " (run 'sentiment' or 'emotion' first)");
    if (c.channel) {
      try {
        correlate::canonical_channel(*c.channel);
      } catch (const Error& e) {
        p.push_back(e.what());
      }
    }
  } else if (command == "report") {
    need_file(c.out / kCorrelationFile, "correlation table (run 'correlate' first)");
  } else if (command == "prepare-benchmark") {
    need_file(c.phrasebank, "Financial PhraseBank (directory holding Sentences_66Agree.txt)");
    if (c.fiqa.empty()) p.push_back("no FiQA files given (task1 headline/post JSON or CSV)");
    for (const auto& f : c.fiqa) need_file(f, "FiQA file");
  }
  return p;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return 3;
    case ErrorKind::data: return 4;
    case ErrorKind::io: return 5;
    case ErrorKind::retryable: return 6;
    case ErrorKind::auth: return 7;
    case ErrorKind::unsupported: return 8;
  }
  return 1;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Signals from ticker-tagged text and prices, correlated with daily returns", "stocksent"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path, from, to, channel, out_dir, prices, corpus, phrasebank;
  std::vector<std::string> tickers, specs, fiqa;
  int lag = 0;
  std::uint64_t seed = 1;
  std::size_t permutations = 0;
  bool weighted = false;
  auto* o_config = app.add_option("--config", config_path, "JSON pipeline config");
  auto* o_ticker = app.add_option("--ticker", tickers, "Restrict to ticker (repeatable)")->allow_extra_args(false);
  auto* o_from = app.add_option("--from", from, "First date, YYYY-MM-DD");
  auto* o_to = app.add_option("--to", to, "Last date, YYYY-MM-DD (inclusive)");
  auto* o_channel = app.add_option("--channel", channel, "Signal channel, e.g. news_archive or sadness");
  auto* o_spec = app.add_option("--spec", specs, "Indicator NAME:k=v[,k=v] (repeatable)")->allow_extra_args(false);
  auto* o_lag = app.add_option("--lag", lag, "Compare signal at day t with the return at trading day t+K");
  auto* o_seed = app.add_option("--seed", seed, "Seed for pacing, splits and permutations");
  auto* o_weighted = app.add_flag("--weighted-engagement", weighted, "Also emit engagement-weighted channels");
  auto* o_out = app.add_option("--out", out_dir, "Output directory");
  auto* o_prices = app.add_option("--prices", prices, "Price file (CSV or JSONL)");
  auto* o_corpus = app.add_option("--corpus", corpus, "Corpus store directory");
  auto* o_perm = app.add_option("--permutations", permutations, "Permutation-test shuffles (0 = no p-value)");
  auto* o_pb = app.add_option("--phrasebank", phrasebank, "Financial PhraseBank directory or file");
  auto* o_fiqa = app.add_option("--fiqa", fiqa, "FiQA task1 file (repeatable)")->allow_extra_args(false);

  app.add_subcommand("ingest", "Fetch documents from the configured sources into the corpus store");
  app.add_subcommand("indicators", "Technical indicators per ticker -> indicators_<ticker>.csv");
  app.add_subcommand("sentiment", "Daily sentiment per channel -> sentiment_signals.csv");
  app.add_subcommand("emotion", "Daily etf-idf emotion vectors -> emotion_vectors.jsonl, emotion_signals.csv");
  app.add_subcommand("correlate", "Spearman correlation of signals with returns -> correlation.csv");
  app.add_subcommand("report", "Correlation tables -> report.txt");
  app.add_subcommand("prepare-benchmark", "Stratified train/test/validation split of PhraseBank + FiQA");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("stocksent");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string what = e.what();
    for (const auto& a : args)
      if (!a.empty() && a[0] != '-' && std::find(std::begin(kCommands), std::end(kCommands), a) == std::end(kCommands) &&
          app.remaining().size() > 0 && a == app.remaining().front()) {
        what = "unknown command '" + a + "'";
        break;
      }
    err << "error (usage): " << what << "\n" << app.help();
    return 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    PipelineConfig c = o_config->count() ? load_pipeline_config(config_path) : default_config();
    std::vector<std::string> flag_problems;
    if (o_ticker->count()) c.tickers = tickers;
    auto date_flag = [&](CLI::Option* opt, const std::string& text, std::optional<Date>& field) {
      if (!opt->count()) return;
      try {
        field = Date::parse(text);
      } catch (const Error&) {
        flag_problems.push_back(opt->get_name() + " '" + text + "' is not a YYYY-MM-DD date");
      }
    };
    date_flag(o_from, from, c.from);
    date_flag(o_to, to, c.to);
    if (o_channel->count()) c.channel = channel;
    if (o_spec->count()) c.indicator_specs = specs;
    if (o_lag->count()) c.lag = lag;
    if (o_seed->count()) c.seed = seed;
    if (o_weighted->count()) c.weighted_engagement = weighted;
    if (o_out->count()) c.out = out_dir;
    if (o_prices->count()) c.prices = prices;
    if (o_corpus->count()) c.corpus = corpus;
    if (o_perm->count()) c.permutations = permutations;
    if (o_pb->count()) c.phrasebank = phrasebank;
    if (o_fiqa->count()) c.fiqa.assign(fiqa.begin(), fiqa.end());
    if (!flag_problems.empty()) {
      const auto rest = validate(c, command);
      flag_problems.insert(flag_problems.end(), rest.begin(), rest.end());
      fail(ErrorKind::config, "invalid configuration for '" + command + "':" + join_lines(flag_problems));
    }
    return dispatch(command, c, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace stocksent::cli
