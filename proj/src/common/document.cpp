#include "stocksent/document.hpp"

#include <nlohmann/json.hpp>

#include "stocksent/error.hpp"
#include "stocksent/util.hpp"

namespace stocksent {

std::string_view to_string(Source source) {
  switch (source) {
    case Source::twitter: return "twitter";
    case Source::news_archive: return "news_archive";
    case Source::radio_transcript: return "radio_transcript";
    case Source::news_api: return "news_api";
  }
  return "unknown";
}

Source parse_source(std::string_view name) {
  for (Source s : kAllSources)
    if (to_string(s) == name) return s;
  fail(ErrorKind::config, "unknown source '" + std::string(name) +
                              "' (expected twitter, news_archive, radio_transcript or news_api)");
}

void validate_document(const TextDocument& doc, const std::optional<DateRange>& range) {
  if (doc.engagement && doc.source != Source::twitter)
    fail(ErrorKind::data, "document " + doc.id + ": engagement is only recorded for twitter");
  if (range && !range->contains(doc.date))
    fail(ErrorKind::data, "document " + doc.id + ": date " + doc.date.iso() + " outside " + range->from.iso() +
                              ".." + range->to.iso());
  if (doc.engagement) {
    const auto& e = *doc.engagement;
    if (e.likes < 0 || e.retweets < 0 || e.replies < 0)
      fail(ErrorKind::data, "document " + doc.id + ": negative engagement count");
  }
}

nlohmann::json to_json(const TextDocument& doc) {
  nlohmann::json j = {{"id", doc.id},
                      {"date", doc.date.iso()},
                      {"ticker", doc.ticker},
                      {"source", std::string(to_string(doc.source))},
                      {"text", doc.text}};
  if (doc.engagement) {
    j["likes"] = doc.engagement->likes;
    j["retweets"] = doc.engagement->retweets;
    j["replies"] = doc.engagement->replies;
  }
  return j;
}

TextDocument document_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorKind::data, "document record is not an object");
  TextDocument doc;
  try {
    doc.id = j.at("id").get<std::string>();
    doc.date = Date::parse(j.at("date").get<std::string>());
    doc.ticker = j.at("ticker").get<std::string>();
    doc.text = j.at("text").get<std::string>();
    const auto source = j.at("source").get<std::string>();
    try {
      doc.source = parse_source(source);
    } catch (const Error& e) {
      fail(ErrorKind::data, e.what());
    }
    if (j.contains("likes") || j.contains("retweets") || j.contains("replies")) {
      Engagement e;
      e.likes = j.value("likes", std::int64_t{0});
      e.retweets = j.value("retweets", std::int64_t{0});
      e.replies = j.value("replies", std::int64_t{0});
      doc.engagement = e;
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::data, std::string("bad document record: ") + e.what());
  }
  validate_document(doc);
  return doc;
}

std::string documents_to_jsonl(const std::vector<TextDocument>& docs) {
  std::string out;
  for (const auto& d : docs) {
    out += to_json(d).dump();
    out += '\n';
  }
  return out;
}

std::vector<TextDocument> documents_from_jsonl(std::string_view content) {
  std::vector<TextDocument> docs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    auto line = trim(content.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      docs.push_back(document_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorKind::data, "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      fail(ErrorKind::data, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

}  // namespace stocksent
