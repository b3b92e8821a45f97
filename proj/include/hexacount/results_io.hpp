#pragma once

// Results CSV: header `class_id,mask_hex,count,millis,run_tag`, one line per
// counted class, appended with a single write() per line.

#include <charconv>
#include <cstdint>
#include <iterator>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <fcntl.h>
#include <unistd.h>

#include "hexacount/core.hpp"
#include "hexacount/midcount.hpp"

namespace hexacount {

inline constexpr std::string_view kResultsHeader = "class_id,mask_hex,count,millis,run_tag";

class ResultsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool valid_run_tag(std::string_view tag) {
  for (char c : tag)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') return false;
  return true;
}

inline std::string format_result(const ClassResult& r) {
  return std::to_string(r.class_id) + "," + r.mask.to_hex() + "," + std::to_string(r.count) + "," +
         std::to_string(r.millis) + "," + r.run_tag + "\n";
}

inline ClassResult parse_result(std::string_view line, std::uint64_t lineno = 0) {
  auto fail = [&](const std::string& why) {
    return ResultsError("results line " + std::to_string(lineno) + ": " + why);
  };
  std::vector<std::string_view> f;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      f.push_back(line.substr(start));
      break;
    }
    f.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (f.size() != 5) throw fail("expected 5 fields");
  auto number = [&](std::string_view s, const char* what) -> std::uint64_t {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw fail(std::string("bad ") + what);
    return v;
  };
  ClassResult r;
  r.class_id = static_cast<std::int64_t>(number(f[0], "class_id"));
  try {
    r.mask = NumberSet::from_hex(f[1]);
  } catch (const std::invalid_argument&) {
    throw fail("bad mask_hex");
  }
  r.count = number(f[2], "count");
  r.millis = static_cast<std::int64_t>(number(f[3], "millis"));
  r.run_tag = std::string(f[4]);
  return r;
}

struct ResultsFile {
  std::vector<ClassResult> rows;
  bool torn_tail = false;  // last line had no newline and was ignored
};

inline ResultsFile read_results(const std::string& path) {
  ResultsFile out;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResultsError("cannot open results " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  std::uint64_t lineno = 0;
  bool header = false;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      out.torn_tail = true;
      break;
    }
    std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header) {
      if (line != kResultsHeader) throw ResultsError("results " + path + ": bad header");
      header = true;
      continue;
    }
    if (line.empty()) continue;
    out.rows.push_back(parse_result(line, lineno));
  }
  return out;
}

/// Append-only writer. Opening drops a torn final line left by a crash and
/// writes the header into a new or empty file.
class ResultsWriter {
 public:
  explicit ResultsWriter(const std::string& path) : path_(path) {
    namespace fs = std::filesystem;
    if (fs::exists(path) && fs::file_size(path) > 0) {
      std::ifstream in(path, std::ios::binary);
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      const auto last_nl = text.rfind('\n');
      const std::size_t keep = last_nl == std::string::npos ? 0 : last_nl + 1;
      if (keep != text.size()) fs::resize_file(path, keep);
    }
    fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd_ < 0) throw ResultsError("cannot open results " + path);
    if (std::filesystem::file_size(path) == 0) write_line(std::string(kResultsHeader) + "\n");
  }
  ResultsWriter(const ResultsWriter&) = delete;
  ResultsWriter& operator=(const ResultsWriter&) = delete;
  ~ResultsWriter() {
    if (fd_ >= 0) ::close(fd_);
  }

  void append(const ClassResult& r) {
    if (!valid_run_tag(r.run_tag)) throw ResultsError("run tag may not contain commas, quotes or newlines");
    write_line(format_result(r));
  }

  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  void write_line(const std::string& line) {
    const ssize_t n = ::write(fd_, line.data(), line.size());
    if (n != static_cast<ssize_t>(line.size())) throw ResultsError("short write to " + path_);
  }

  std::string path_;
  int fd_ = -1;
};

/// Ids already present for `run_tag` (all tags when empty).
inline std::set<std::int64_t> done_ids(const ResultsFile& f, std::string_view run_tag) {
  std::set<std::int64_t> ids;
  for (const auto& r : f.rows)
    if (run_tag.empty() || r.run_tag == run_tag) ids.insert(r.class_id);
  return ids;
}

}  // namespace hexacount
