#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "stocksent/error.hpp"
#include "stocksent/ingest.hpp"
#include "stocksent/util.hpp"

namespace stocksent::ingest {
namespace fs = std::filesystem;
namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kJournal = "journal.json";

fs::path tmp_of(const fs::path& p) { return fs::path(p.string() + ".tmp"); }

void write_plain(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
}

std::size_t count_lines(std::string_view s) {
  std::size_t n = 0;
  for (const auto& line : split(s, '\n'))
    if (!trim(line).empty()) ++n;
  return n;
}

void check_path_part(const std::string& part, const char* what) {
  if (part.empty() || part == "." || part == ".." || part.find_first_of("/\\") != std::string::npos)
    fail(ErrorKind::data, std::string("cannot store documents with ") + what + " '" + part + "'");
}

}  // namespace

std::string normalized_text_hash(std::string_view text) {
  std::string norm;
  for (const auto& w : split_whitespace(to_lower(text))) {
    if (!norm.empty()) norm += ' ';
    norm += w;
  }
  return sha256_hex(norm);
}

CorpusStore::CorpusStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "shards", ec);
  if (ec) fail(ErrorKind::io, "cannot create corpus store at " + root_.string() + ": " + ec.message());
  recover();
}

CorpusStore CorpusStore::open_read_only(fs::path root) {
  CorpusStore store;
  store.root_ = std::move(root);
  store.read_only_ = true;
  if (!fs::is_directory(store.root_ / "shards")) fail(ErrorKind::io, "no corpus store at " + store.root_.string());
  if (fs::exists(store.root_ / kJournal))
    fail(ErrorKind::data, "corpus store " + store.root_.string() + " has an interrupted commit; run ingest to recover");
  store.load_manifest();
  return store;
}

std::string CorpusStore::shard_key(const std::string& ticker, Source source, Date date) {
  check_path_part(ticker, "ticker");
  return "shards/" + ticker + "/" + std::string(to_string(source)) + "/" + date.iso() + ".jsonl";
}

void CorpusStore::load_manifest() {
  manifest_.clear();
  const auto path = root_ / kManifest;
  if (!fs::exists(path)) return;
  try {
    const auto j = nlohmann::json::parse(read_file(path));
    for (const auto& [key, v] : j.items())
      manifest_[key] = {v.at("count").get<std::size_t>(), v.at("hash").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::data, path.string() + ": bad manifest: " + e.what());
  }
}

void CorpusStore::recover() {
  const auto journal = root_ / kJournal;
  if (fs::exists(journal)) {
    // Committed: roll every listed file forward.
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(journal));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::data, journal.string() + ": bad journal: " + e.what());
    }
    for (const auto& rel : j.at("files")) {
      const auto target = root_ / rel.get<std::string>();
      if (fs::exists(tmp_of(target))) fs::rename(tmp_of(target), target);
    }
    fs::remove(journal);
  }
  // Anything still staged was never committed.
  std::vector<fs::path> stale;
  for (const auto& e : fs::recursive_directory_iterator(root_))
    if (e.is_regular_file() && e.path().extension() == ".tmp") stale.push_back(e.path());
  for (const auto& p : stale) fs::remove(p);
  load_manifest();
}

std::size_t CorpusStore::add(std::span<const TextDocument> docs) {
  if (read_only_) fail(ErrorKind::unsupported, "corpus store " + root_.string() + " was opened read-only");
  std::map<std::string, std::vector<const TextDocument*>> buckets;
  for (const auto& d : docs) {
    validate_document(d);
    buckets[shard_key(d.ticker, d.source, d.date)].push_back(&d);
  }

  std::map<std::string, std::string> staged;  // key -> full new shard content
  std::size_t stored = 0;
  for (const auto& [key, bucket] : buckets) {
    const auto path = root_ / key;
    std::string content = fs::exists(path) ? read_file(path) : std::string{};
    std::unordered_set<std::string> hashes;
    for (const auto& d : documents_from_jsonl(content)) hashes.insert(normalized_text_hash(d.text));
    bool changed = false;
    for (const auto* d : bucket) {
      if (!hashes.insert(normalized_text_hash(d->text)).second) continue;
      content += to_json(*d).dump();
      content += '\n';
      ++stored;
      changed = true;
    }
    if (changed) staged[key] = std::move(content);
  }
  if (staged.empty()) return 0;

  auto next = manifest_;
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [key, content] : staged) {
    next[key] = {count_lines(content), sha256_hex(content)};
    write_plain(tmp_of(root_ / key), content);
    files.push_back(key);
  }
  nlohmann::json m = nlohmann::json::object();
  for (const auto& [key, info] : next) m[key] = {{"count", info.count}, {"hash", info.hash}};
  write_plain(tmp_of(root_ / kManifest), m.dump(2) + "\n");
  files.push_back(kManifest);

  write_file_atomic(root_ / kJournal, nlohmann::json{{"files", files}}.dump() + "\n");
  for (const auto& rel : files) {
    const auto target = root_ / rel.get<std::string>();
    fs::rename(tmp_of(target), target);
  }
  fs::remove(root_ / kJournal);
  manifest_ = std::move(next);
  return stored;
}

std::vector<TextDocument> CorpusStore::load(const std::optional<std::string>& ticker,
                                            const std::optional<Source>& source,
                                            const std::optional<DateRange>& range) const {
  std::vector<TextDocument> out;
  for (const auto& [key, info] : manifest_) {
    const auto parts = split(key, '/');  // shards / ticker / source / date.jsonl
    if (parts.size() != 4) fail(ErrorKind::data, "bad manifest key '" + key + "'");
    if (ticker && parts[1] != *ticker) continue;
    if (source && parts[2] != to_string(*source)) continue;
    if (range && !range->contains(Date::parse(parts[3].substr(0, 10)))) continue;
    for (auto& d : documents_from_jsonl(read_file(root_ / key))) out.push_back(std::move(d));
  }
  return out;
}

std::size_t CorpusStore::size() const {
  std::size_t n = 0;
  for (const auto& [key, info] : manifest_) n += info.count;
  return n;
}

void CorpusStore::verify() const {
  for (const auto& [key, info] : manifest_) {
    const auto path = root_ / key;
    if (!fs::exists(path)) fail(ErrorKind::data, "manifest lists missing shard " + key);
    const auto content = read_file(path);
    if (count_lines(content) != info.count)
      fail(ErrorKind::data, "shard " + key + " has " + std::to_string(count_lines(content)) + " lines, manifest says " +
                                std::to_string(info.count));
    if (sha256_hex(content) != info.hash) fail(ErrorKind::data, "shard " + key + " does not match its manifest hash");
  }
  for (const auto& e : fs::recursive_directory_iterator(root_ / "shards")) {
    if (!e.is_regular_file()) continue;
    const auto key = fs::relative(e.path(), root_).generic_string();
    if (!manifest_.count(key)) fail(ErrorKind::data, "shard " + key + " is not in the manifest");
  }
}

}  // namespace stocksent::ingest
