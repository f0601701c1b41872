#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "stocksent/error.hpp"
#include "stocksent/ingest.hpp"
#include "stocksent/util.hpp"

namespace stocksent::ingest {
namespace fs = std::filesystem;
namespace {

constexpr const char* kPhraseBankFile = "Sentences_66Agree.txt";
constexpr const char* kPhraseBankLayout =
    "Financial PhraseBank v1.0: Sentences_66Agree.txt with one 'sentence@label' per line";
constexpr const char* kFiqaLayout =
    "FiQA task 1: JSON {id: {sentence, info: [{sentiment_score}]}} or CSV with sentence,sentiment_score columns";

std::size_t label_index(lexsent::Label l) { return static_cast<std::size_t>(l); }

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k)
      if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return false;
    i += len;
  }
  return true;
}

std::string latin1_to_utf8(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if (c < 0x80) {
      out += static_cast<char>(c);
    } else {
      out += static_cast<char>(0xC0 | (c >> 6));
      out += static_cast<char>(0x80 | (c & 0x3F));
    }
  }
  return out;
}

double score_value(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_double(v.get<std::string>());
  fail(ErrorKind::data, "sentiment_score is neither a number nor a numeric string");
}

/// Splits `target` across buckets in proportion to `counts` (Hamilton / largest remainder), never
/// exceeding `capacity`. Ties in the remainder go to the lower bucket index.
std::array<std::size_t, 3> apportion(std::size_t target, const std::array<std::size_t, 3>& counts,
                                     const std::array<std::size_t, 3>& capacity) {
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  std::array<std::size_t, 3> out{};
  std::array<double, 3> rem{};
  std::size_t given = 0;
  for (std::size_t l = 0; l < 3; ++l) {
    const double quota = total > 0 ? static_cast<double>(target) * static_cast<double>(counts[l]) / total : 0.0;
    out[l] = std::min(capacity[l], static_cast<std::size_t>(std::floor(quota)));
    rem[l] = quota - std::floor(quota);
    given += out[l];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  while (given < target) {
    bool progressed = false;
    for (auto l : order) {
      if (given == target) break;
      if (out[l] < capacity[l]) {
        ++out[l];
        ++given;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  return out;
}

void write_split(const fs::path& path, std::span<const LabeledText> rows) {
  std::string out = "text,label,origin\n";
  for (const auto& r : rows)
    out += csv_escape(r.text) + "," + std::string(lexsent::to_string(r.label)) + "," + csv_escape(r.origin) + "\n";
  write_file_atomic(path, out);
}

}  // namespace

std::vector<LabeledText> load_phrasebank(const fs::path& path) {
  const fs::path file = fs::is_directory(path) ? path / kPhraseBankFile : path;
  if (!fs::is_regular_file(file))
    fail(ErrorKind::io, "PhraseBank source not found at " + file.string() + " (expected " + kPhraseBankLayout + ")");
  std::string content = read_file(file);
  if (!valid_utf8(content)) content = latin1_to_utf8(content);
  std::vector<LabeledText> rows;
  std::size_t line_no = 0;
  for (auto line : split(content, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto at = line.rfind('@');
    if (at == std::string::npos)
      fail(ErrorKind::data, file.string() + " line " + std::to_string(line_no) + ": expected 'sentence@label'");
    LabeledText r;
    r.text = trim(std::string_view(line).substr(0, at));
    r.label = lexsent::parse_label(trim(std::string_view(line).substr(at + 1)));
    r.origin = "phrasebank";
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<LabeledText> load_fiqa(const fs::path& path) {
  if (!fs::is_regular_file(path))
    fail(ErrorKind::io, "FiQA source not found at " + path.string() + " (expected " + kFiqaLayout + ")");
  const auto content = read_file(path);
  std::vector<LabeledText> rows;
  if (path.extension() == ".json") {
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorKind::data, path.string() + ": not JSON: " + e.what());
    }
    if (!j.is_object()) fail(ErrorKind::data, path.string() + ": expected " + kFiqaLayout);
    for (const auto& [id, entry] : j.items()) {
      try {
        const auto& info = entry.at("info");
        if (!info.is_array() || info.empty()) fail(ErrorKind::data, "entry " + id + " has no info records");
        double sum = 0;
        for (const auto& rec : info) sum += score_value(rec.at("sentiment_score"));
        const double mean = sum / static_cast<double>(info.size());
        rows.push_back({trim(entry.at("sentence").get<std::string>()), lexsent::discretize_regression_label(mean), "fiqa"});
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::data, path.string() + ": entry " + id + ": " + e.what());
      } catch (const Error& e) {
        fail(ErrorKind::data, path.string() + ": entry " + id + ": " + e.what());
      }
    }
    return rows;
  }
  const auto table = parse_csv(content);
  if (table.empty()) fail(ErrorKind::data, path.string() + ": empty file (expected " + kFiqaLayout + ")");
  std::ptrdiff_t text_col = -1, score_col = -1;
  for (std::size_t i = 0; i < table[0].size(); ++i) {
    const auto h = to_lower(trim(table[0][i]));
    if (h == "sentence" || h == "text") text_col = static_cast<std::ptrdiff_t>(i);
    if (h == "sentiment_score" || h == "score") score_col = static_cast<std::ptrdiff_t>(i);
  }
  if (text_col < 0 || score_col < 0) fail(ErrorKind::data, path.string() + ": expected " + kFiqaLayout);
  for (std::size_t r = 1; r < table.size(); ++r) {
    const auto& row = table[r];
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    if (row.size() != table[0].size())
      fail(ErrorKind::data, path.string() + " line " + std::to_string(r + 1) + ": wrong field count");
    try {
      rows.push_back({trim(row[static_cast<std::size_t>(text_col)]),
                      lexsent::discretize_regression_label(parse_double(row[static_cast<std::size_t>(score_col)])),
                      "fiqa"});
    } catch (const Error& e) {
      fail(ErrorKind::data, path.string() + " line " + std::to_string(r + 1) + ": " + e.what());
    }
  }
  return rows;
}

SplitCounts BenchmarkSplit::counts(std::span<const LabeledText> rows) const {
  SplitCounts c;
  c.rows = rows.size();
  for (const auto& r : rows) ++c.by_label[label_index(r.label)];
  return c;
}

BenchmarkSplit split_benchmark(std::span<const LabeledText> rows, std::uint64_t seed) {
  const std::size_t n = rows.size();
  std::array<std::vector<std::size_t>, 3> by_label;
  for (std::size_t i = 0; i < n; ++i) by_label[label_index(rows[i].label)].push_back(i);
  std::array<std::size_t, 3> counts{};
  for (std::size_t l = 0; l < 3; ++l) counts[l] = by_label[l].size();

  const auto n_test = static_cast<std::size_t>(std::llround(kTestFraction * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(std::llround(kValidationFraction * static_cast<double>(n)));
  const auto test = apportion(n_test, counts, counts);
  std::array<std::size_t, 3> left{};
  for (std::size_t l = 0; l < 3; ++l) left[l] = counts[l] - test[l];
  const auto val = apportion(n_val, counts, left);

  // 0 = train, 1 = test, 2 = validation
  std::vector<int> assign(n, 0);
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < 3; ++l) {
    auto& idx = by_label[l];
    // Fisher-Yates with explicit draws so the split does not depend on the standard library.
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng() % i]);
    for (std::size_t k = 0; k < idx.size(); ++k) assign[idx[k]] = k < test[l] ? 1 : k < test[l] + val[l] ? 2 : 0;
  }
  BenchmarkSplit out;
  for (std::size_t i = 0; i < n; ++i) {
    auto& dst = assign[i] == 1 ? out.test : assign[i] == 2 ? out.validation : out.train;
    dst.push_back(rows[i]);
  }
  return out;
}

BenchmarkSummary prepare_benchmark(const fs::path& phrasebank, std::span<const fs::path> fiqa, std::uint64_t seed,
                                   const fs::path& out_dir) {
  if (fiqa.empty()) fail(ErrorKind::io, std::string("no FiQA source given (expected ") + kFiqaLayout + ")");
  auto rows = load_phrasebank(phrasebank);
  for (const auto& f : fiqa) {
    auto more = load_fiqa(f);
    rows.insert(rows.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  }
  const auto split = split_benchmark(rows, seed);
  fs::create_directories(out_dir);
  write_split(out_dir / "train.csv", split.train);
  write_split(out_dir / "test.csv", split.test);
  write_split(out_dir / "validation.csv", split.validation);
  return {split.counts(rows), split.counts(split.train), split.counts(split.test), split.counts(split.validation)};
}

}  // namespace stocksent::ingest
