#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stocksent/date.hpp"

namespace stocksent {

enum class Source { twitter, news_archive, radio_transcript, news_api };

inline constexpr Source kAllSources[] = {Source::twitter, Source::news_archive, Source::radio_transcript,
                                         Source::news_api};

std::string_view to_string(Source source);
/// Accepts the snake_case names above. Throws Error(config) otherwise.
Source parse_source(std::string_view name);

struct Engagement {
  std::int64_t likes = 0;
  std::int64_t retweets = 0;
  std::int64_t replies = 0;

  friend bool operator==(const Engagement&, const Engagement&) = default;
};

struct TextDocument {
  std::string id;
  Date date;
  std::string ticker;  // symbol or index tag
  Source source = Source::news_archive;
  std::string text;
  std::optional<Engagement> engagement;  // twitter only

  friend bool operator==(const TextDocument&, const TextDocument&) = default;
};

struct DateRange {
  Date from;
  Date to;  // inclusive
  bool contains(Date d) const { return from <= d && d <= to; }
};

/// Throws Error(data) when the document violates its invariants.
void validate_document(const TextDocument& doc, const std::optional<DateRange>& range = std::nullopt);

nlohmann::json to_json(const TextDocument& doc);
TextDocument document_from_json(const nlohmann::json& j);

std::string documents_to_jsonl(const std::vector<TextDocument>& docs);
/// Blank lines are skipped. Errors cite the 1-based line number.
std::vector<TextDocument> documents_from_jsonl(std::string_view content);

}  // namespace stocksent
