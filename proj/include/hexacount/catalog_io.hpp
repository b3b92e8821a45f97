#pragma once

// Catalog files and checkpointed catalog generation.
//
// File layout:
//   # hexacount-catalog version=1 order=6 count=9366138
//   ff80001ff
//   ...
// One 9-digit lowercase hex mask per line, in catalog order.
//
// Generation writes to FILE.partial and, every `checkpoint_every` classes,
// flushes it and atomically replaces FILE.ckpt (JSON: lines, last mask).
// Resuming truncates FILE.partial to the checkpointed line count and
// continues after the last checkpointed class; the finished file is renamed
// into place and the sidecars are removed.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fcntl.h>
#include <unistd.h>

#include "json.hpp"

#include "hexacount/core.hpp"
#include "hexacount/enumeration.hpp"

namespace hexacount {

inline constexpr int kCatalogVersion = 1;
inline constexpr std::size_t kCatalogLineBytes = 10;  // 9 hex digits + '\n'

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Catalog key: sum of 2^(36-i) over members. Catalog ids run in strictly
/// descending key order.
constexpr std::uint64_t catalog_key(NumberSet m) {
  std::uint64_t k = 0;
  for (auto b = m.bits(); b != 0; b &= b - 1) k |= std::uint64_t{1} << (NumberSet::kCapacity - 1 - std::countr_zero(b));
  return k;
}

inline std::string catalog_header(int order, std::uint64_t count) {
  return "# hexacount-catalog version=" + std::to_string(kCatalogVersion) + " order=" + std::to_string(order) +
         " count=" + std::to_string(count);
}

namespace detail {

inline void write_all(int fd, const char* data, std::size_t size, const std::string& what) {
  while (size > 0) {
    const ssize_t n = ::write(fd, data, size);
    if (n < 0) throw CatalogError("write failed: " + what);
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

/// Writes `text` to `path` through a temporary file and rename.
inline void atomic_write(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw CatalogError("cannot create " + tmp.string());
  write_all(fd, text.data(), text.size(), tmp.string());
  ::fsync(fd);
  ::close(fd);
  std::filesystem::rename(tmp, path);
}

inline NumberSet parse_catalog_line(std::string_view line, std::uint64_t lineno) {
  if (line.size() != 9) throw CatalogError("catalog line " + std::to_string(lineno) + ": expected 9 hex digits");
  try {
    return NumberSet::from_hex(line);
  } catch (const std::invalid_argument& e) {
    throw CatalogError("catalog line " + std::to_string(lineno) + ": " + e.what());
  }
}

}  // namespace detail

inline void write_catalog(const std::string& path, const ClassCatalog& cat) {
  std::string text = catalog_header(cat.order, cat.size()) + "\n";
  text.reserve(text.size() + cat.size() * kCatalogLineBytes);
  for (auto m : cat.classes) {
    text += m.to_hex();
    text += '\n';
  }
  detail::atomic_write(path, text);
}

/// Reads and validates a catalog: header fields, line format, member count
/// and sum per class, strictly descending keys, and the header count.
inline ClassCatalog read_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open catalog " + path);
  std::string line;
  if (!std::getline(in, line)) throw CatalogError("catalog " + path + " is empty");
  int version = 0;
  int order = 0;
  unsigned long long count = 0;
  if (std::sscanf(line.c_str(), "# hexacount-catalog version=%d order=%d count=%llu", &version, &order, &count) != 3)
    throw CatalogError("catalog " + path + ": bad header");
  if (version != kCatalogVersion) throw CatalogError("catalog " + path + ": unsupported version");
  const OrderParams p = OrderParams::of(order);
  ClassCatalog cat{order, {}};
  cat.classes.reserve(count);
  std::uint64_t lineno = 1;
  std::uint64_t prev = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const NumberSet m = detail::parse_catalog_line(line, lineno);
    if (m.size() != p.cells() / 2 || m.sum() != p.half_sum)
      throw CatalogError("catalog line " + std::to_string(lineno) + ": not a half-set of order " + std::to_string(order));
    const auto key = catalog_key(m);
    if (!cat.classes.empty() && key >= prev)
      throw CatalogError("catalog line " + std::to_string(lineno) + ": out of order");
    prev = key;
    cat.classes.push_back(m);
  }
  if (cat.classes.size() != count)
    throw CatalogError("catalog " + path + ": header says " + std::to_string(count) + " classes, file has " +
                       std::to_string(cat.classes.size()));
  return cat;
}

struct GenerateOptions {
  bool resume = false;
  std::uint64_t checkpoint_every = 10000;
  const std::atomic<bool>* stop = nullptr;         // checked after every class
  std::uint64_t stop_after = 0;                    // 0 = run to the end; for tests
  std::function<void(std::uint64_t)> on_checkpoint;  // lines written so far
};

struct GenerateOutcome {
  bool complete = false;
  std::uint64_t classes = 0;  // lines in the catalog (or partial file)
  std::uint64_t resumed_from = 0;
};

template <int N>
  requires EvenOrder<N>
GenerateOutcome generate_catalog_file(const std::string& path, const GenerateOptions& opt = {}) {
  namespace fs = std::filesystem;
  const fs::path partial = path + ".partial";
  const fs::path ckpt = path + ".ckpt";
  GenerateOutcome out;

  std::optional<NumberSet> resume_after;
  std::uint64_t lines = 0;
  if (opt.resume && fs::exists(ckpt)) {
    nlohmann::json j;
    try {
      std::ifstream in(ckpt);
      j = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
      throw CatalogError("checkpoint " + ckpt.string() + " is corrupt: " + e.what());
    }
    if (!j.contains("version") || !j.contains("order") || !j.contains("lines") || !j.contains("last"))
      throw CatalogError("checkpoint " + ckpt.string() + " is missing fields");
    if (j["version"] != kCatalogVersion || j["order"] != N)
      throw CatalogError("checkpoint " + ckpt.string() + " belongs to another order or version");
    lines = j["lines"].get<std::uint64_t>();
    const auto size = fs::exists(partial) ? fs::file_size(partial) : 0;
    if (size < lines * kCatalogLineBytes)
      throw CatalogError("partial catalog " + partial.string() + " is shorter than its checkpoint");
    if (lines > 0) {
      std::ifstream in(partial, std::ios::binary);
      in.seekg(static_cast<std::streamoff>((lines - 1) * kCatalogLineBytes));
      std::string last(kCatalogLineBytes, '\0');
      in.read(last.data(), static_cast<std::streamsize>(kCatalogLineBytes));
      if (!in || last.back() != '\n' || last.substr(0, 9) != j["last"].get<std::string>())
        throw CatalogError("partial catalog " + partial.string() + " does not match its checkpoint");
      resume_after = NumberSet::from_hex(last.substr(0, 9));
    }
    fs::resize_file(partial, lines * kCatalogLineBytes);
    out.resumed_from = lines;
  } else if (opt.resume && fs::exists(path) && !fs::exists(partial)) {
    const auto cat = read_catalog(path);
    if (cat.order != N) throw CatalogError("existing catalog " + path + " has order " + std::to_string(cat.order));
    out.complete = true;
    out.classes = cat.size();
    return out;
  } else {
    fs::remove(ckpt);
    std::ofstream(partial, std::ios::trunc);
    if (!fs::exists(partial)) throw CatalogError("cannot create " + partial.string());
  }

  std::FILE* f = std::fopen(partial.c_str(), "ab");
  if (f == nullptr) throw CatalogError("cannot open " + partial.string());
  std::string last_hex = resume_after ? resume_after->to_hex() : "";
  auto checkpoint = [&] {
    if (std::fflush(f) != 0) throw CatalogError("write failed: " + partial.string());
    ::fsync(::fileno(f));
    nlohmann::json j{{"version", kCatalogVersion}, {"order", N}, {"lines", lines}, {"last", last_hex}};
    detail::atomic_write(ckpt, j.dump() + "\n");
    if (opt.on_checkpoint) opt.on_checkpoint(lines);
  };

  std::uint64_t this_session = 0;
  bool finished = false;
  try {
    ClassGenerator<N> gen;
    finished = gen.run(
        [&](NumberSet m) {
          last_hex = m.to_hex();
          const std::string line = last_hex + "\n";
          if (std::fwrite(line.data(), 1, line.size(), f) != line.size())
            throw CatalogError("write failed: " + partial.string());
          ++lines;
          ++this_session;
          if (lines % opt.checkpoint_every == 0) checkpoint();
          if (opt.stop_after != 0 && this_session >= opt.stop_after) return false;
          if (opt.stop != nullptr && opt.stop->load()) return false;
          return true;
        },
        resume_after);
  } catch (...) {
    std::fclose(f);
    throw;
  }

  if (!finished) {
    checkpoint();
    std::fclose(f);
    out.classes = lines;
    return out;
  }
  if (std::fflush(f) != 0) throw CatalogError("write failed: " + partial.string());
  std::fclose(f);

  // header + body into place
  const fs::path tmp = path + ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    o << catalog_header(N, lines) << '\n';
    std::ifstream body(partial, std::ios::binary);
    if (lines > 0) o << body.rdbuf();
    o.flush();
    if (!o) throw CatalogError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
  fs::remove(partial);
  fs::remove(ckpt);
  out.complete = true;
  out.classes = lines;
  return out;
}

}  // namespace hexacount
