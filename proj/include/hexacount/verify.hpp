#pragma once

// Swap-freeness predicates on single squares, reference values and the
// consistency checks run over a results file.

#include <array>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hexacount/core.hpp"
#include "hexacount/enumeration.hpp"
#include "hexacount/midcount.hpp"
#include "hexacount/transform.hpp"

namespace hexacount {

// ---------------------------------------------------------------------------
// swap schemes

/// Three-row, three-column swap pattern. Six cells of a 3 x 3 window carry
/// the letters of three pairs; each pair holds x and x + C. Moving C to the
/// other cell of every pair must leave all row and column sums unchanged.
struct CycleScheme {
  // cells (0,0) (0,2) (1,0) (1,1) (2,1) (2,2), pair letter 0..2 per cell
  static constexpr std::array<std::array<int, 2>, 6> kCells{{{0, 0}, {0, 2}, {1, 0}, {1, 1}, {2, 1}, {2, 2}}};
  std::array<int, 6> letter{};
  const char* name = "";
};

/// The base scheme and its five rearrangements. For pattern rows i, j, k and
/// columns a, b, c the base scheme is the condition
///   K(i,a) - K(j,a) = K(j,b) - K(i,c) = K(k,c) - K(k,b).
/// Derived conditions of the rearrangements (same window, one orientation;
/// the other orientation is the same condition with i, j, k or a, b, c
/// relabelled):
///   r1: K(i,a)-K(j,a) = K(j,b)-K(k,b) = K(k,c)-K(i,c)
///   r2: K(i,a)-K(k,b) = K(j,b)-K(j,a) = K(k,c)-K(i,c)
///   r3: K(i,a)-K(k,b) = K(j,b)-K(i,c) = K(k,c)-K(j,a)
///   r4: K(i,a)-K(i,c) = K(j,b)-K(j,a) = K(k,c)-K(k,b)
///   r5: K(i,a)-K(i,c) = K(j,b)-K(k,b) = K(k,c)-K(j,a)
inline constexpr std::array<CycleScheme, 6> kCycleSchemes{{
    {{0, 1, 0, 1, 2, 2}, "base"},
    {{0, 2, 0, 1, 1, 2}, "r1"},
    {{0, 2, 1, 1, 0, 2}, "r2"},
    {{0, 1, 2, 1, 0, 2}, "r3"},
    {{0, 0, 1, 1, 2, 2}, "r4"},
    {{0, 0, 2, 1, 1, 2}, "r5"},
}};

/// For a scheme, the cells that hold the larger value of each pair in every
/// orientation that keeps rows and columns balanced. Each entry lists, per
/// letter, (high cell, low cell) as indices into CycleScheme::kCells.
inline std::vector<std::array<std::array<int, 2>, 3>> balanced_orientations(const CycleScheme& s) {
  std::array<std::array<int, 2>, 3> pair_cells{};
  std::array<int, 3> seen{};
  for (int c = 0; c < 6; ++c) pair_cells[s.letter[c]][seen[s.letter[c]]++] = c;
  for (int l = 0; l < 3; ++l)
    if (seen[l] != 2) throw std::logic_error("scheme letter must occur twice");
  std::vector<std::array<std::array<int, 2>, 3>> out;
  for (int bits = 0; bits < 8; ++bits) {
    std::array<std::array<int, 2>, 3> o{};
    std::array<int, 6> delta{};  // change at each cell in units of C
    for (int l = 0; l < 3; ++l) {
      const int hi = (bits >> l) & 1;
      o[l] = {pair_cells[l][hi], pair_cells[l][1 - hi]};
      delta[o[l][0]] = -1;
      delta[o[l][1]] = +1;
    }
    bool ok = true;
    for (int line = 0; line < 3 && ok; ++line) {
      int row = 0;
      int col = 0;
      for (int c = 0; c < 6; ++c) {
        if (CycleScheme::kCells[c][0] == line) row += delta[c];
        if (CycleScheme::kCells[c][1] == line) col += delta[c];
      }
      ok = row == 0 && col == 0;
    }
    if (ok) out.push_back(o);
  }
  return out;
}

struct SwapReport {
  bool pair_swappable = false;
  bool triple_swappable = false;
  std::uint64_t pair_configs = 0;
  std::uint64_t triple_configs = 0;
  std::uint64_t cycle_configs = 0;
  std::array<std::uint64_t, kCycleSchemes.size()> cycle_by_scheme{};

  [[nodiscard]] bool all_clear() const { return !pair_swappable && !triple_swappable && cycle_configs == 0; }
};

namespace detail {

template <int N>
std::uint64_t count_cycles(const SquareGrid<N>& g, const CycleScheme& scheme) {
  const auto orientations = balanced_orientations(scheme);
  std::uint64_t found = 0;
  std::array<int, 3> r{};
  std::array<int, 3> c{};
  for (r[0] = 0; r[0] < N; ++r[0])
    for (r[1] = 0; r[1] < N; ++r[1])
      for (r[2] = 0; r[2] < N; ++r[2]) {
        if (r[0] == r[1] || r[0] == r[2] || r[1] == r[2]) continue;
        for (c[0] = 0; c[0] < N; ++c[0])
          for (c[1] = 0; c[1] < N; ++c[1])
            for (c[2] = 0; c[2] < N; ++c[2]) {
              if (c[0] == c[1] || c[0] == c[2] || c[1] == c[2]) continue;
              auto at = [&](int cell) {
                return g(r[CycleScheme::kCells[cell][0]], c[CycleScheme::kCells[cell][1]]);
              };
              for (const auto& o : orientations) {
                const int d0 = at(o[0][0]) - at(o[0][1]);
                if (d0 == 0) continue;
                if (at(o[1][0]) - at(o[1][1]) == d0 && at(o[2][0]) - at(o[2][1]) == d0) ++found;
              }
            }
      }
  return found;
}

}  // namespace detail

/// Pairs: two rows i, j and two columns a, b with equal column-pair sums
/// K(i,a)+K(j,a) = K(i,b)+K(j,b), or equal row-pair sums
/// K(i,a)+K(i,b) = K(j,a)+K(j,b). Triples: the same with three rows (or
/// three columns) against two columns (rows). Cycles: the six schemes above,
/// on the square and on its transpose.
template <int N>
SwapReport swap_report(const SquareGrid<N>& g) {
  detail::require_semi_magic(g, "swap_report");
  SwapReport rep;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      for (int a = 0; a < N; ++a)
        for (int b = a + 1; b < N; ++b) {
          if (g(i, a) + g(j, a) == g(i, b) + g(j, b)) ++rep.pair_configs;
          if (g(i, a) + g(i, b) == g(j, a) + g(j, b)) ++rep.pair_configs;
        }
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      for (int k = j + 1; k < N; ++k)
        for (int a = 0; a < N; ++a)
          for (int b = a + 1; b < N; ++b) {
            if (g(i, a) + g(j, a) + g(k, a) == g(i, b) + g(j, b) + g(k, b)) ++rep.triple_configs;
            if (g(a, i) + g(a, j) + g(a, k) == g(b, i) + g(b, j) + g(b, k)) ++rep.triple_configs;
          }
  const auto t = g.transposed();
  for (std::size_t s = 0; s < kCycleSchemes.size(); ++s) {
    rep.cycle_by_scheme[s] = detail::count_cycles(g, kCycleSchemes[s]) + detail::count_cycles(t, kCycleSchemes[s]);
    rep.cycle_configs += rep.cycle_by_scheme[s];
  }
  rep.pair_swappable = rep.pair_configs != 0;
  rep.triple_swappable = rep.triple_configs != 0;
  return rep;
}

/// Squares separated by blank lines; '#' lines are comments.
template <int N>
std::vector<SquareGrid<N>> read_squares(std::istream& in) {
  std::vector<SquareGrid<N>> out;
  std::string line;
  std::string block;
  auto flush = [&] {
    if (block.find_first_not_of(" \t\r\n") == std::string::npos) {
      block.clear();
      return;
    }
    out.push_back(SquareGrid<N>::parse(block));
    block.clear();
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      flush();
      continue;
    }
    block += line;
    block += '\n';
  }
  flush();
  return out;
}

template <int N>
std::vector<SquareGrid<N>> read_squares_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_squares<N>(in);
}

// ---------------------------------------------------------------------------
// reference values

using u128 = unsigned __int128;

inline std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

inline u128 parse_u128(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty number");
  u128 v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw std::invalid_argument("not a decimal number: " + std::string(s));
    const u128 next = v * 10 + static_cast<unsigned>(ch - '0');
    if (next / 10 != v) throw std::invalid_argument("number too large: " + std::string(s));
    v = next;
  }
  return v;
}

inline std::uint64_t parse_u64(std::string_view s) {
  const u128 v = parse_u128(s);
  if (v > std::numeric_limits<std::uint64_t>::max()) throw std::invalid_argument("number exceeds 64 bits");
  return static_cast<std::uint64_t>(v);
}

struct GoldenClass {
  std::uint64_t id = 0;
  NumberSet mask;
  std::uint64_t count = 0;
};

struct GoldenValues {
  int order = 6;
  std::map<int, std::uint64_t> jobs;
  std::vector<GoldenClass> classes;  // ascending id
  std::optional<std::uint64_t> total_c;
  std::optional<u128> total_q;
};

/// CSV with header kind,id,expected. Kinds: order, job, class_mask (hex),
/// class_count, total_c, total_q. Blank and '#' lines are skipped.
inline GoldenValues read_golden(std::istream& in) {
  GoldenValues g;
  std::map<std::uint64_t, GoldenClass> cls;
  std::map<std::uint64_t, int> parts;
  std::string line;
  bool header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "kind,id,expected") throw std::runtime_error("golden file: bad header");
      header = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::runtime_error("golden file line " + std::to_string(lineno) + ": expected 3 fields");
    const std::string kind = line.substr(0, c1);
    const std::uint64_t id = parse_u64(std::string_view(line).substr(c1 + 1, c2 - c1 - 1));
    const std::string_view value = std::string_view(line).substr(c2 + 1);
    if (kind == "order") {
      g.order = static_cast<int>(parse_u64(value));
    } else if (kind == "job") {
      g.jobs[static_cast<int>(id)] = parse_u64(value);
    } else if (kind == "class_mask") {
      cls[id].id = id;
      cls[id].mask = NumberSet::from_hex(value);
      parts[id] |= 1;
    } else if (kind == "class_count") {
      cls[id].id = id;
      cls[id].count = parse_u64(value);
      parts[id] |= 2;
    } else if (kind == "total_c") {
      g.total_c = parse_u64(value);
    } else if (kind == "total_q") {
      g.total_q = parse_u128(value);
    } else {
      throw std::runtime_error("golden file line " + std::to_string(lineno) + ": unknown kind " + kind);
    }
  }
  for (const auto& [id, c] : cls) {
    if (parts[id] != 3) throw std::runtime_error("golden class " + std::to_string(id) + " needs mask and count");
    g.classes.push_back(c);
  }
  return g;
}

inline GoldenValues read_golden_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_golden(in);
}

// ---------------------------------------------------------------------------
// results verification

enum class CheckStatus { pass, fail, skipped, info };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "PASS";
    case CheckStatus::fail:
      return "FAIL";
    case CheckStatus::skipped:
      return "SKIP";
    case CheckStatus::info:
      return "INFO";
  }
  return "?";
}

struct CheckItem {
  std::string name;
  CheckStatus status = CheckStatus::skipped;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckItem> items;
  std::uint64_t complete_jobs = 0;
  std::optional<std::uint64_t> total_c;

  [[nodiscard]] bool ok() const {
    for (const auto& i : items)
      if (i.status == CheckStatus::fail) return false;
    return true;
  }
  [[nodiscard]] std::size_t count(CheckStatus s) const {
    std::size_t n = 0;
    for (const auto& i : items) n += i.status == s;
    return n;
  }
  [[nodiscard]] std::string to_text() const {
    std::ostringstream out;
    for (const auto& i : items) out << to_string(i.status) << "  " << i.name << (i.detail.empty() ? "" : ": ") << i.detail << '\n';
    return out.str();
  }
};

/// Checks over a (possibly partial) set of results for a catalog of
/// `catalog_size` classes. When `catalog` is given, every row's mask must
/// match the catalog entry of its id. Pure: nothing is written.
inline VerifyReport verify_results(std::uint64_t catalog_size, const std::vector<ClassResult>& rows,
                                   const GoldenValues& golden_in, const ClassCatalog* catalog = nullptr,
                                   int order = 6) {
  VerifyReport rep;
  // reference values of another order are not comparable
  const GoldenValues golden = golden_in.order == order ? golden_in : GoldenValues{order, {}, {}, {}, {}};
  auto add = [&](std::string name, CheckStatus st, std::string detail = {}) {
    rep.items.push_back({std::move(name), st, std::move(detail)});
  };

  // one value per id; disagreement between runs is an error
  std::vector<std::uint64_t> count(catalog_size, 0);
  std::vector<std::uint8_t> seen(catalog_size, 0);
  std::vector<NumberSet> mask(catalog_size);
  std::uint64_t disagreements = 0;
  std::uint64_t bad_rows = 0;
  std::uint64_t double_checked = 0;
  std::string first_problem;
  for (const auto& r : rows) {
    if (r.class_id < 0 || static_cast<std::uint64_t>(r.class_id) >= catalog_size) {
      ++bad_rows;
      if (first_problem.empty()) first_problem = "id " + std::to_string(r.class_id) + " outside the catalog";
      continue;
    }
    const auto id = static_cast<std::size_t>(r.class_id);
    if (catalog != nullptr && catalog->classes[id] != r.mask) {
      ++bad_rows;
      if (first_problem.empty()) first_problem = "id " + std::to_string(id) + " has mask " + r.mask.to_hex();
      continue;
    }
    if (seen[id]) {
      if (seen[id] == 1) ++double_checked;
      seen[id] = 2;
      if (count[id] != r.count || mask[id] != r.mask) {
        ++disagreements;
        if (first_problem.empty())
          first_problem = "id " + std::to_string(id) + ": " + std::to_string(count[id]) + " vs " + std::to_string(r.count);
      }
      continue;
    }
    seen[id] = 1;
    count[id] = r.count;
    mask[id] = r.mask;
  }
  add("rows reference catalog entries", bad_rows == 0 ? CheckStatus::pass : CheckStatus::fail,
      bad_rows == 0 ? std::to_string(rows.size()) + " rows" : std::to_string(bad_rows) + " bad rows, " + first_problem);
  add("repeated runs agree", disagreements == 0 ? CheckStatus::pass : CheckStatus::fail,
      std::to_string(double_checked) + " classes counted more than once, " + std::to_string(disagreements) +
          " disagreements" + (disagreements && !first_problem.empty() ? ", " + first_problem : ""));

  // reference classes
  for (const auto& gc : golden.classes) {
    const std::string name = "class " + std::to_string(gc.id);
    if (gc.id >= catalog_size || !seen[gc.id]) {
      add(name, CheckStatus::skipped, "not in results");
      continue;
    }
    const bool ok = mask[gc.id] == gc.mask && count[gc.id] == gc.count;
    add(name, ok ? CheckStatus::pass : CheckStatus::fail,
        std::to_string(count[gc.id]) + (ok ? "" : " expected " + std::to_string(gc.count) + " mask " + gc.mask.to_hex()));
  }

  // per-job sums
  constexpr int kJobs = ClassCatalog::kJobs;
  std::array<std::uint64_t, kJobs> job_sum{};
  std::array<bool, kJobs> job_complete{};
  job_complete.fill(true);
  for (std::uint64_t id = 0; id < catalog_size; ++id) {
    const int j = ClassCatalog::job_of(id);
    if (!seen[id])
      job_complete[j] = false;
    else
      job_sum[j] += count[id];
  }
  bool all_complete = catalog_size > 0;
  for (int j = 0; j < kJobs; ++j) {
    const std::string name = "job " + std::to_string(j);
    if (catalog_size <= static_cast<std::uint64_t>(j)) {
      add(name, CheckStatus::info, "no classes");
      continue;
    }
    if (!job_complete[j]) {
      all_complete = false;
      add(name, CheckStatus::skipped, "incomplete");
      continue;
    }
    ++rep.complete_jobs;
    const auto it = golden.jobs.find(j);
    if (it == golden.jobs.end()) {
      add(name, CheckStatus::info, std::to_string(job_sum[j]) + " (no reference)");
    } else {
      const bool ok = it->second == job_sum[j];
      add(name, ok ? CheckStatus::pass : CheckStatus::fail,
          std::to_string(job_sum[j]) + (ok ? "" : " expected " + std::to_string(it->second)));
    }
  }

  // totals
  if (!all_complete) {
    add("total canonical squares", CheckStatus::skipped, "not every job is complete");
    add("total squares up to symmetry", CheckStatus::skipped, "not every job is complete");
    add("canonical total divisible by 4", CheckStatus::skipped, "not every job is complete");
    add("canonical total divisible by 8", CheckStatus::skipped, "not every job is complete");
    return rep;
  }
  u128 c = 0;
  for (auto s : job_sum) c += s;
  if (c > std::numeric_limits<std::uint64_t>::max()) {
    add("total canonical squares", CheckStatus::fail, "exceeds 64 bits");
    return rep;
  }
  rep.total_c = static_cast<std::uint64_t>(c);
  const u128 f = factorial(order);
  const u128 q = c * f * f / 8;
  if (golden.total_c) {
    const bool ok = *golden.total_c == *rep.total_c;
    add("total canonical squares", ok ? CheckStatus::pass : CheckStatus::fail,
        u128_to_string(c) + (ok ? "" : " expected " + std::to_string(*golden.total_c)));
  } else {
    add("total canonical squares", CheckStatus::info, u128_to_string(c));
  }
  if (golden.total_q) {
    const bool ok = *golden.total_q == q;
    add("total squares up to symmetry", ok ? CheckStatus::pass : CheckStatus::fail,
        u128_to_string(q) + (ok ? "" : " expected " + u128_to_string(*golden.total_q)));
  } else {
    add("total squares up to symmetry", CheckStatus::info, u128_to_string(q));
  }
  // a theorem at order 6 only (954 at order 4 is not a multiple of 4)
  add("canonical total divisible by 4",
      order != 6 ? CheckStatus::info : (c % 4 == 0 ? CheckStatus::pass : CheckStatus::fail),
      "remainder " + std::to_string(static_cast<unsigned>(c % 4)));
  add("canonical total divisible by 8", CheckStatus::info,
      c % 8 == 0 ? "yes" : "no, remainder " + std::to_string(static_cast<unsigned>(c % 8)));
  return rep;
}

}  // namespace hexacount
