// hexacount command line: catalog generation, class counting, jobs, the
// estimator, the brute-force oracle and result verification.
//
// Settings come from flags, then HEXACOUNT_<OPTION> environment variables,
// then the file given by --config (INI/TOML, one [section] per subcommand).

#include <algorithm>
#include <atomic>
#include <cctype>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hexacount/hexacount.hpp"

#ifndef HEXACOUNT_DATA_DIR
#define HEXACOUNT_DATA_DIR "data"
#endif

namespace {

using namespace hexacount;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvariant = 3;

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string env_name(const std::string& long_name) {
  std::string out = "HEXACOUNT_";
  for (char c : long_name) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// Environment values become `--name=value` arguments placed before the
// user's own, so explicit flags win (last value taken) and any option they
// set is no longer filled from the config file.
std::vector<std::string> with_environment(const CLI::App& app, std::vector<std::string> args) {
  auto env_args = [](const CLI::App* a) {
    std::vector<std::string> out;
    for (const CLI::Option* opt : a->get_options()) {
      const std::string name = opt->get_single_name();
      if (opt->get_lnames().empty() || name == "help" || name == "config") continue;
      if (const char* v = std::getenv(env_name(name).c_str()); v != nullptr && *v != '\0')
        out.push_back("--" + name + "=" + v);
    }
    return out;
  };
  std::vector<std::string> out;
  // --config belongs to the top-level app; hoist it ahead of the subcommand
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto at = args.begin() + static_cast<std::ptrdiff_t>(i);
    if (args[i] == "--config" && i + 1 < args.size()) {
      out.assign(at, at + 2);
      args.erase(at, at + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      out.push_back(args[i]);
      args.erase(at);
      break;
    }
  }
  std::size_t sub_pos = args.size();
  const CLI::App* sub = nullptr;
  for (std::size_t i = 0; i < args.size() && sub == nullptr; ++i)
    for (const CLI::App* s : app.get_subcommands([](const CLI::App*) { return true; }))
      if (s->get_name() == args[i]) {
        sub_pos = i;
        sub = s;
        break;
      }
  auto global = env_args(&app);
  out.insert(out.end(), global.begin(), global.end());
  out.insert(out.end(), args.begin(), args.begin() + static_cast<std::ptrdiff_t>(std::min(sub_pos + 1, args.size())));
  if (sub != nullptr) {
    auto local = env_args(sub);
    out.insert(out.end(), local.begin(), local.end());
    out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(sub_pos + 1), args.end());
  }
  return out;
}

struct CountFlags {
  std::string catalog;
  std::string out;
  std::string run_tag = "a";
  unsigned threads = 1;
  bool batching = CountOptions{}.batching;
  int hash_bits = ProfileHistogram::kDefaultHashBits;

  CountOptions options() const { return CountOptions{batching, hash_bits}; }
};

void add_count_flags(CLI::App* sub, CountFlags& f, bool need_out) {
  sub->add_option("--catalog", f.catalog, "catalog file from gen-classes")->required();
  auto* out = sub->add_option("--out", f.out, "results CSV (appended)");
  if (need_out) out->required();
  sub->add_option("--run-tag", f.run_tag, "label that tells repeated runs apart");
  sub->add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1U, 256U));
  sub->add_flag("--batching,!--no-batching", f.batching, "sort lookups by slot region before probing");
  sub->add_option("--hash-bits", f.hash_bits, "histogram size is 2^bits slots plus a tail")->check(CLI::Range(12, 30));
}

template <typename F>
auto with_order(int order, F&& f) {
  if (order == 4) return f.template operator()<4>();
  if (order == 6) return f.template operator()<6>();
  throw UsageError("order must be 4 or 6");
}

void print_result(const ClassResult& r) {
  std::cout << r.class_id << ' ' << r.mask.to_hex() << ' ' << r.count << ' ' << r.millis << "ms\n";
}

int cmd_gen_classes(int order, const std::string& out, bool resume, std::uint64_t every) {
  GenerateOptions opt;
  opt.resume = resume;
  opt.checkpoint_every = std::max<std::uint64_t>(every, 1);
  opt.stop = &g_stop;
  opt.on_checkpoint = [](std::uint64_t n) { std::cerr << "checkpoint: " << n << " classes\n"; };
  const auto r = with_order(order, [&]<int N>() { return generate_catalog_file<N>(out, opt); });
  if (!r.complete) {
    std::cerr << "interrupted after " << r.classes << " classes; rerun with --resume\n";
    return kExitFailure;
  }
  std::cout << r.classes << '\n';
  return kExitOk;
}

int cmd_count_class(const CountFlags& f, std::int64_t id, const std::string& mask_hex) {
  const ClassCatalog cat = read_catalog(f.catalog);
  NumberSet mask;
  if (!mask_hex.empty()) {
    mask = NumberSet::from_hex(mask_hex);
    const auto it = std::find(cat.classes.begin(), cat.classes.end(), mask);
    if (it == cat.classes.end()) throw UsageError("mask " + mask_hex + " is not in the catalog");
    id = it - cat.classes.begin();
  } else {
    if (id < 0 || static_cast<std::size_t>(id) >= cat.size())
      throw UsageError("id " + std::to_string(id) + " outside catalog of " + std::to_string(cat.size()));
    mask = cat.classes[static_cast<std::size_t>(id)];
  }
  if (!valid_run_tag(f.run_tag)) throw UsageError("run tag may not contain commas, quotes or newlines");
  ClassResult r = with_order(cat.order, [&]<int N>() {
    std::vector<ClassCounter<N>> workers;
    const auto series = generate_series<N>();
    for (unsigned t = 0; t < f.threads; ++t) workers.emplace_back(series, f.options());
    return count_class_parallel<N>(std::span<ClassCounter<N>>(workers), mask, id);
  });
  r.run_tag = f.run_tag;
  if (!f.out.empty()) ResultsWriter(f.out).append(r);
  print_result(r);
  return kExitOk;
}

int cmd_run_job(const CountFlags& f, int job, bool resume, std::uint64_t limit) {
  const ClassCatalog cat = read_catalog(f.catalog);
  if (!valid_run_tag(f.run_tag)) throw UsageError("run tag may not contain commas, quotes or newlines");
  std::set<std::int64_t> done;
  if (std::filesystem::exists(f.out)) done = done_ids(read_results(f.out), f.run_tag);
  std::vector<WorkItem> items;
  std::uint64_t present = 0;
  for (std::size_t id = job; id < cat.size(); id += ClassCatalog::kJobs) {
    if (done.count(static_cast<std::int64_t>(id))) {
      ++present;
      continue;
    }
    items.push_back({static_cast<std::int64_t>(id), cat.classes[id]});
    if (limit != 0 && items.size() >= limit) break;
  }
  if (present > 0 && !resume)
    throw UsageError(std::to_string(present) + " classes of job " + std::to_string(job) +
                     " are already in the results for this run tag; pass --resume to continue");
  std::cerr << "job " << job << ": " << items.size() << " classes to count, " << present << " already done\n";
  ResultsWriter writer(f.out);
  const auto counted = with_order(cat.order, [&]<int N>() {
    return count_classes<N>(items, f.threads, f.options(),
                            [&](const ClassResult& r0) {
                              ClassResult r = r0;
                              r.run_tag = f.run_tag;
                              writer.append(r);
                              print_result(r);
                            },
                            &g_stop);
  });
  if (counted < items.size()) {
    std::cerr << "stopped after " << counted << " classes; rerun with --resume\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_estimate(int order, std::uint64_t samples, std::uint64_t seed, unsigned threads, const std::string& csv) {
  const EstimateReport r = with_order(order, [&]<int N>() {
    KnuthEstimator<N> est;
    return run_estimate<N>(est, samples, seed, threads);
  });
  std::ostringstream line;
  line << std::fixed << std::setprecision(0);
  std::cout << std::fixed << "samples " << r.samples << "\nseed " << r.seed << "\nmean " << std::setprecision(6)
            << r.mean << "\nvariance " << std::scientific << std::setprecision(6) << r.variance << std::fixed
            << std::setprecision(0) << "\nestimate " << r.estimate << "\ninterval " << r.ci_low << ' ' << r.ci_high
            << '\n';
  if (!csv.empty()) {
    const bool fresh = !std::filesystem::exists(csv) || std::filesystem::file_size(csv) == 0;
    std::ofstream o(csv, std::ios::app);
    if (!o) throw std::runtime_error("cannot open " + csv);
    if (fresh) o << "n,mean,var,estimate,ci_low,ci_high,seed\n";
    o << r.samples << ',' << std::setprecision(10) << std::defaultfloat << r.mean << ',' << r.variance << ','
      << std::fixed << std::setprecision(0) << r.estimate << ',' << r.ci_low << ',' << r.ci_high << ',' << r.seed
      << '\n';
  }
  return kExitOk;
}

int cmd_oracle(int order, unsigned threads) {
  const OracleCounts c = brute_force_counts(order, threads);
  std::cout << c.semi_magic << ' ' << c.magic << ' ' << c.panmagic << '\n';
  return kExitOk;
}

int cmd_verify(const std::string& results, const std::string& catalog_path, std::uint64_t catalog_size,
               const std::string& golden_path) {
  const ResultsFile rf = read_results(results);
  std::optional<ClassCatalog> cat;
  int order = 6;
  if (!catalog_path.empty()) {
    cat = read_catalog(catalog_path);
    catalog_size = cat->size();
    order = cat->order;
  }
  if (catalog_size == 0) throw UsageError("verify needs --catalog or --catalog-size");
  const GoldenValues golden = read_golden_file(golden_path);
  const VerifyReport rep = verify_results(catalog_size, rf.rows, golden, cat ? &*cat : nullptr, order);
  if (rf.torn_tail) std::cout << "INFO  results file ends in an incomplete line (ignored)\n";
  std::cout << rep.to_text();
  std::cout << (rep.ok() ? "verify: ok" : "verify: FAILED") << " (" << rep.count(CheckStatus::pass) << " passed, "
            << rep.count(CheckStatus::fail) << " failed, " << rep.count(CheckStatus::skipped) << " skipped)\n";
  return rep.ok() ? kExitOk : kExitFailure;
}

int cmd_fixtures(const std::string& squares) {
  const auto grids = read_squares_file<6>(squares);
  bool ok = !grids.empty();
  for (std::size_t i = 0; i < grids.size(); ++i) {
    const SwapReport r = swap_report(grids[i]);
    std::cout << "square " << i << ": pairs " << r.pair_configs << ", triples " << r.triple_configs << ", cycles "
              << r.cycle_configs << (r.all_clear() ? "  all clear" : "  SWAPPABLE") << '\n';
    ok = ok && r.all_clear();
  }
  std::cout << (ok ? "fixtures: all clear\n" : "fixtures: FAILED\n");
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and Monte Carlo counting of semi-magic squares"};
  app.set_config("--config", "", "settings file; [subcommand] sections");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  int gen_order = 6;
  std::string gen_out;
  bool gen_resume = false;
  std::uint64_t gen_every = 10000;
  auto* gen = app.add_subcommand("gen-classes", "write the class catalog");
  gen->add_option("--order", gen_order, "square order (4 or 6)")->check(CLI::IsMember({4, 6}));
  gen->add_option("--out", gen_out, "catalog file")->required();
  gen->add_flag("--resume", gen_resume, "continue from the last checkpoint");
  gen->add_option("--checkpoint-every", gen_every, "classes between checkpoints");

  CountFlags cc;
  std::int64_t cc_id = -1;
  std::string cc_mask;
  auto* count = app.add_subcommand("count-class", "count the canonical squares of one class");
  add_count_flags(count, cc, false);
  auto* id_opt = count->add_option("--id", cc_id, "catalog id");
  auto* mask_opt = count->add_option("--mask", cc_mask, "class mask (9 hex digits) instead of --id");
  id_opt->excludes(mask_opt);

  CountFlags rj;
  int rj_job = 0;
  bool rj_resume = false;
  std::uint64_t rj_limit = 0;
  auto* job = app.add_subcommand("run-job", "count every class with id = job mod 100");
  add_count_flags(job, rj, true);
  job->add_option("--job", rj_job, "job number")->required()->check(CLI::Range(0, ClassCatalog::kJobs - 1));
  job->add_flag("--resume", rj_resume, "skip classes already in the results");
  job->add_option("--limit", rj_limit, "count at most this many classes (0 = all)");

  int est_order = 6;
  std::uint64_t est_samples = 1000;
  std::uint64_t est_seed = 1;
  unsigned est_threads = 1;
  std::string est_csv;
  auto* est = app.add_subcommand("estimate", "Monte Carlo estimate of the number of squares");
  est->add_option("--samples", est_samples, "number of measures")->check(CLI::Range(std::uint64_t{2}, ~std::uint64_t{0}));
  est->add_option("--seed", est_seed, "random seed");
  est->add_option("--order", est_order, "square order (4 or 6)")->check(CLI::IsMember({4, 6}));
  est->add_option("--threads", est_threads, "worker threads")->check(CLI::Range(1U, 256U));
  est->add_option("--csv", est_csv, "append the report to this CSV");

  int or_order = 3;
  unsigned or_threads = 1;
  auto* orc = app.add_subcommand("oracle", "brute-force counts: semi-magic, magic, panmagic");
  orc->add_option("--order", or_order, "square order (3 or 4)")->required()->check(CLI::IsMember({3, 4}));
  orc->add_option("--threads", or_threads, "worker threads")->check(CLI::Range(1U, 256U));

  std::string vf_results;
  std::string vf_catalog;
  std::uint64_t vf_size = 0;
  std::string vf_golden = std::string(HEXACOUNT_DATA_DIR) + "/golden.csv";
  auto* ver = app.add_subcommand("verify", "check a results file");
  ver->add_option("--results", vf_results, "results CSV")->required();
  ver->add_option("--catalog", vf_catalog, "catalog file (checks masks too)");
  ver->add_option("--catalog-size", vf_size, "number of classes when no catalog is given");
  ver->add_option("--golden", vf_golden, "reference values CSV");

  bool fx_check = false;
  std::string fx_squares = std::string(HEXACOUNT_DATA_DIR) + "/swap_free.txt";
  auto* fix = app.add_subcommand("fixtures", "swap checks on the reference squares");
  fix->add_flag("--check", fx_check, "run the checks")->required();
  fix->add_option("--squares", fx_squares, "squares file");

  std::vector<std::string> args = with_environment(app, std::vector<std::string>(argv + 1, argv + argc));
  std::reverse(args.begin(), args.end());  // CLI11 consumes from the back

  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  try {
    if (gen->parsed()) return cmd_gen_classes(gen_order, gen_out, gen_resume, gen_every);
    if (count->parsed()) {
      if (cc_id < 0 && cc_mask.empty()) throw UsageError("count-class needs --id or --mask");
      return cmd_count_class(cc, cc_id, cc_mask);
    }
    if (job->parsed()) return cmd_run_job(rj, rj_job, rj_resume, rj_limit);
    if (est->parsed()) return cmd_estimate(est_order, est_samples, est_seed, est_threads, est_csv);
    if (orc->parsed()) return cmd_oracle(or_order, or_threads);
    if (ver->parsed()) return cmd_verify(vf_results, vf_catalog, vf_size, vf_golden);
    if (fix->parsed()) return cmd_fixtures(fx_squares);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
