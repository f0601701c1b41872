#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "stocksent/correlate.hpp"
#include "stocksent/document.hpp"
#include "stocksent/error.hpp"
#include "stocksent/ingest.hpp"
#include "stocksent/keymatch.hpp"
#include "stocksent/textprep.hpp"

namespace stocksent::cli {

inline constexpr std::string_view kCommands[] = {"ingest",    "indicators", "sentiment",        "emotion",
                                                 "correlate", "report",     "prepare-benchmark"};

/// Optional child-process sentiment backend; the lexicon scorer is used when unset.
struct ScorerCommand {
  std::string backend;
  std::vector<std::string> argv;
};

struct PipelineConfig {
  std::filesystem::path data_dir;  // stopwords, slang, spelling list, bundled lexicons
  std::filesystem::path prices;
  std::filesystem::path corpus;
  std::filesystem::path out = "out";
  std::filesystem::path lexicon;
  std::filesystem::path nrc;
  std::filesystem::path gold;
  std::filesystem::path pos_lexicon;
  std::filesystem::path profiles;
  std::optional<std::filesystem::path> state_file;  // identity cursor persistence for ingest

  std::vector<ingest::SourceConfig> sources;
  std::vector<std::string> tickers;
  std::optional<Date> from;
  std::optional<Date> to;
  std::map<Source, textprep::Mode> prep_modes;
  std::vector<Source> emotion_sources{Source::twitter};
  keymatch::MatchOptions match;

  bool weighted_engagement = false;
  correlate::SignalValue signal = correlate::SignalValue::polarity;
  std::optional<std::string> channel;
  int lag = 0;
  std::size_t permutations = 0;
  std::uint64_t seed = 1;

  std::vector<std::string> indicator_specs;  // empty: default set
  std::optional<ScorerCommand> scorer;

  std::filesystem::path phrasebank;
  std::vector<std::filesystem::path> fiqa;

  textprep::Mode prep_mode(Source source) const;
  std::optional<DateRange> range() const;
};

/// Defaults point at the bundled data directory.
PipelineConfig default_config();
/// Relative paths resolve against `base_dir`. Unknown keys are rejected.
PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Every violation for `command`, in a stable order. Empty when the config is usable.
std::vector<std::string> validate(const PipelineConfig& config, std::string_view command);

/// Process exit status for an error kind (0 is success, 2 is usage).
int exit_code(ErrorKind kind);

/// `args` excludes the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stocksent::cli
