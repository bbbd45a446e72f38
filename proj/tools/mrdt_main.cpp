#include "mrdt/bench.hpp"
#include "mrdt/checker.hpp"
#include "mrdt/registry.hpp"
#include "mrdt/store.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 2) throw CLI::ValidationError("--range expects lo:hi");
  return {std::stoll(parts[0]), std::stoll(parts[1])};
}

/// Writes rows to --out (or stdout), emitting the header only when the file
/// does not already hold one.
int emit_csv(const std::string& out_path, const std::vector<mrdt::bench::BenchRow>& rows) {
  if (out_path.empty()) {
    mrdt::bench::write_csv(std::cout, rows, true);
    return kExitPass;
  }
  namespace fs = std::filesystem;
  bool header = !fs::exists(out_path) || fs::file_size(out_path) == 0;
  std::ofstream out(out_path, std::ios::app);
  if (!out) {
    std::cerr << "cannot open " << out_path << " for writing\n";
    return kExitUsage;
  }
  mrdt::bench::write_csv(out, rows, header);
  return kExitPass;
}

std::string known_types() {
  std::string out;
  for (std::string_view name : mrdt::type_names()) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

int run_check(const std::string& type_name, const std::string& mode, std::uint64_t seed, int ops,
              int trials, bool parallel, const std::string& mix_text) {
  mrdt::MrdtPtr type = mrdt::make_type(type_name);
  if (!type) {
    std::cerr << "unknown type '" << type_name << "'; expected one of: " << known_types() << "\n";
    return kExitUsage;
  }

  mrdt::CheckReport report;
  if (mode == "exhaustive") {
    mrdt::EnumBounds bounds;
    if (ops > 0) bounds.max_actions = ops;
    report = mrdt::run_exhaustive(*type, bounds);
  } else {
    mrdt::GenConfig cfg;
    cfg.seed = seed;
    if (ops > 0) cfg.ops_per_trial = ops;
    for (const std::string& part : split(mix_text, ',')) {
      std::size_t eq = part.find('=');
      if (eq == std::string::npos)
        throw CLI::ValidationError("--mix expects name=weight[,name=weight...]");
      cfg.op_mix[part.substr(0, eq)] = std::stod(part.substr(eq + 1));
    }
    report = mrdt::run_random(*type, cfg, trials, parallel);
  }

  std::cout << report.to_text();
  std::cout << report.summary_line(type_name, mode) << "\n";
  return report.passed() ? kExitPass : kExitFailure;
}

int run_replay(const std::string& trace_path, const std::string& type_name) {
  mrdt::MrdtPtr type = mrdt::make_type(type_name);
  if (!type) {
    std::cerr << "unknown type '" << type_name << "'; expected one of: " << known_types() << "\n";
    return kExitUsage;
  }
  std::ifstream in(trace_path);
  if (!in) {
    std::cerr << "cannot open " << trace_path << "\n";
    return kExitUsage;
  }
  try {
    mrdt::Trace trace = mrdt::read_trace(in);
    mrdt::Store store = mrdt::replay(trace, type);
    for (const std::string& branch : store.branches())
      std::cout << branch << "\t" << type->canonical(store.state(branch)) << "\n";
  } catch (const mrdt::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mergeable replicated data types: conformance checking, trace replay, benchmarks"};
  app.require_subcommand(1);

  // check ------------------------------------------------------------------
  std::string check_type;
  std::string check_mode = "random";
  std::uint64_t check_seed = 1;
  int check_ops = 0;
  int check_trials = 1000;
  bool check_parallel = false;
  std::string check_mix;
  CLI::App* check = app.add_subcommand("check", "Run the conformance battery for one type");
  check->add_option("type", check_type, "Data type name")->required();
  check->add_option("--mode", check_mode, "random or exhaustive")
      ->check(CLI::IsMember({"random", "exhaustive"}));
  check->add_option("--seed", check_seed, "Random mode seed");
  check->add_option("--ops", check_ops,
                    "Operations per random trial, or transitions per exhaustive trace");
  check->add_option("--trials", check_trials, "Random mode trials");
  check->add_flag("--parallel", check_parallel, "Run random trials on all cores");
  check->add_option("--mix", check_mix, "Operation weights, e.g. rd=70,add=20,remove=10");

  // bench-queue-merge --------------------------------------------------------
  std::string qm_sizes = "1000,2000,2500,5000,10000";
  std::uint64_t qm_seed = 42;
  std::string qm_out;
  CLI::App* qmerge = app.add_subcommand("bench-queue-merge",
                                        "Time the queue three-way merge across sizes");
  qmerge->add_option("--sizes", qm_sizes, "Comma-separated operation counts");
  qmerge->add_option("--seed", qm_seed, "Workload seed");
  qmerge->add_option("--out", qm_out, "CSV path (appends; header written once)");

  // bench-orset --------------------------------------------------------------
  std::string os_variants = "orset,orset-space,orset-spacetime";
  std::uint64_t os_ops = 100000;
  std::string os_mix = "70:20:10";
  std::uint64_t os_merge_every = 500;
  std::string os_range = "0:1000";
  std::uint64_t os_seed = 42;
  std::string os_out;
  CLI::App* orset = app.add_subcommand("bench-orset", "Run the OR-set workload across variants");
  orset->add_option("--variants", os_variants, "Comma-separated variant names");
  orset->add_option("--ops", os_ops, "Total operations");
  orset->add_option("--mix", os_mix, "lookup:add:remove (or add:remove) percentages");
  orset->add_option("--merge-every", os_merge_every,
                    "Merge cadence in operations; 0 = single final merge");
  orset->add_option("--range", os_range, "Value range lo:hi (half-open)");
  orset->add_option("--seed", os_seed, "Workload seed");
  orset->add_option("--out", os_out, "CSV path (appends; header written once)");

  // replay -------------------------------------------------------------------
  std::string replay_file;
  std::string replay_type;
  CLI::App* rep = app.add_subcommand("replay", "Replay a trace file and print branch states");
  rep->add_option("trace", replay_file, "Trace file path")->required();
  rep->add_option("type", replay_type, "Data type name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (check->parsed())
      return run_check(check_type, check_mode, check_seed, check_ops, check_trials,
                       check_parallel, check_mix);
    if (qmerge->parsed()) {
      std::vector<std::uint64_t> sizes;
      for (const std::string& s : split(qm_sizes, ',')) sizes.push_back(std::stoull(s));
      return emit_csv(qm_out, mrdt::bench::bench_queue_merge(sizes, qm_seed).rows);
    }
    if (orset->parsed()) {
      std::vector<std::string> variants = split(os_variants, ',');
      std::vector<std::string> mix_parts = split(os_mix, ':');
      std::array<int, 3> mix{};
      if (mix_parts.size() == 3)
        mix = {std::stoi(mix_parts[0]), std::stoi(mix_parts[1]), std::stoi(mix_parts[2])};
      else if (mix_parts.size() == 2)
        mix = {0, std::stoi(mix_parts[0]), std::stoi(mix_parts[1])};
      else
        throw CLI::ValidationError("--mix expects a:b or a:b:c");
      return emit_csv(os_out, mrdt::bench::bench_orset(variants, os_ops, mix, os_merge_every,
                                                       parse_range(os_range), os_seed)
                                  .rows);
    }
    if (rep->parsed()) return run_replay(replay_file, replay_type);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const mrdt::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
