#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stocksent/document.hpp"
#include "stocksent/textprep.hpp"

namespace stocksent::lexsent {

using textprep::Tokens;
using textprep::WordSet;

enum class Label { negative, neutral, positive };
std::string_view to_string(Label label);
Label parse_label(std::string_view name);  // throws Error(data)

enum class LexiconName { loughran_mcdonald, harvard_iv, custom };
std::string_view to_string(LexiconName name);

/// Lowercase, then Porter-stem to a fixpoint. Applied to lexicon entries and document tokens alike.
std::string lexicon_key(std::string_view word);

struct SentimentLexicon {
  LexiconName name = LexiconName::custom;
  WordSet positive;
  WordSet negative;
  WordSet litigious;
  WordSet uncertainty;
  WordSet strong_modal;
  WordSet weak_modal;
  WordSet constraining;

  /// Normalizes every entry through lexicon_key. Keys that land in both positive and negative are
  /// dropped from both (with a warning) so the sets stay disjoint.
  static SentimentLexicon build(LexiconName name, std::span<const std::string> positive,
                                std::span<const std::string> negative,
                                const std::map<std::string, std::vector<std::string>>& other = {});

  SentimentLexicon swapped() const;  // positive and negative exchanged
};

/// Publisher master-dictionary CSV (Word column plus one column per category; non-zero marks membership).
SentimentLexicon load_loughran_mcdonald(const std::filesystem::path& path);
/// General Inquirer spreadsheet CSV (Entry, Positiv, Negativ; "#n" sense suffixes are stripped).
SentimentLexicon load_harvard_iv(const std::filesystem::path& path);
/// Two columns `word,category` (comma or tab), category in positive/negative/litigious/uncertainty/
/// strong_modal/weak_modal/constraining.
SentimentLexicon load_two_column(const std::filesystem::path& path, LexiconName name = LexiconName::custom);
/// Picks one of the loaders above from the header row.
SentimentLexicon load_lexicon(const std::filesystem::path& path);

inline constexpr std::size_t kDefaultNegationWindow = 3;

struct SentimentScore {
  double polarity = 0.0;      // (pos - neg) / (pos + neg)
  double subjectivity = 0.0;  // (pos - neg) / count, as published
  std::size_t pos_count = 0;
  std::size_t neg_count = 0;
  std::size_t word_count = 0;
  Label label = Label::neutral;
  bool no_signal = true;
  std::string provenance;  // "lexicon:<name>" or "external:<backend>"
};

/// (pos + neg) / count; 0 for an empty document.
double conventional_subjectivity(const SentimentScore& s);

/// A positive hit preceded within `negation_window` tokens by a negator counts as negative.
SentimentScore score_document(std::span<const std::string> tokens, const SentimentLexicon& lexicon,
                              std::size_t negation_window = kDefaultNegationWindow);

/// >= 0.05 positive, <= -0.05 negative, neutral between. Throws Error(data) outside [-1, 1] or on NaN.
Label classify_compound(double compound);
/// >= 0.15 positive, <= -0.15 negative, neutral between. Throws Error(data) outside [-1, 1] or on NaN.
Label discretize_regression_label(double score);

// ---- external scorers ----

/// One request line in, one response line out.
class ScorerTransport {
 public:
  virtual ~ScorerTransport() = default;
  /// Throws Error(retryable) when the backend is unreachable or does not answer within `timeout`.
  virtual std::string exchange(const std::string& request_line, std::chrono::milliseconds timeout) = 0;
};

/// Talks to a long-lived child process over stdin/stdout. The child is (re)started on demand.
/// SIGPIPE is ignored process-wide once the first transport is created.
class ChildProcessTransport final : public ScorerTransport {
 public:
  explicit ChildProcessTransport(std::vector<std::string> argv);
  ~ChildProcessTransport() override;
  ChildProcessTransport(const ChildProcessTransport&) = delete;
  ChildProcessTransport& operator=(const ChildProcessTransport&) = delete;

  std::string exchange(const std::string& request_line, std::chrono::milliseconds timeout) override;

 private:
  void start();
  void stop();

  std::vector<std::string> argv_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

using TransportFactory = std::function<std::unique_ptr<ScorerTransport>()>;

struct ScorerOptions {
  int max_attempts = 3;
  std::chrono::milliseconds timeout{2000};
  std::chrono::milliseconds backoff{20};  // doubled after each failed attempt
  std::size_t max_concurrency = 4;
};

class ScorerRegistry {
 public:
  void add(const std::string& backend, TransportFactory factory);
  void add_command(const std::string& backend, std::vector<std::string> argv);
  bool contains(const std::string& backend) const;
  /// Throws Error(config) naming the registered backends.
  const TransportFactory& factory(const std::string& backend) const;

 private:
  std::map<std::string, TransportFactory> factories_;
};

/// Request `{"id","text"}`, response `{"id","polarity","label"}`. A null or missing label is derived
/// from the polarity with classify_compound.
class ExternalScorer {
 public:
  ExternalScorer(std::string backend, TransportFactory factory, ScorerOptions options = {});

  /// Throws Error(retryable) after `max_attempts` transport failures, Error(data) on a malformed reply.
  SentimentScore score(const TextDocument& doc);
  /// At most `max_concurrency` requests are outstanding at any time.
  std::vector<SentimentScore> score_all(std::span<const TextDocument> docs);

  std::size_t peak_in_flight() const { return peak_in_flight_; }

 private:
  SentimentScore score_with(ScorerTransport& transport, const TextDocument& doc);

  std::string backend_;
  TransportFactory factory_;
  ScorerOptions options_;
  std::unique_ptr<ScorerTransport> transport_;  // used by score()
  std::mutex mu_;
  std::size_t in_flight_ = 0;
  std::size_t peak_in_flight_ = 0;
};

/// Parses and validates one response line. Throws Error(data) and logs the raw payload on failure.
SentimentScore parse_scorer_reply(const std::string& line, const std::string& expected_id,
                                  const std::string& backend);

}  // namespace stocksent::lexsent
