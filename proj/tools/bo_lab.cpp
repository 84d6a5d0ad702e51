// bo-lab: scenario runner for the Benjamin-Ono laboratory
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "bolab/scenario.hpp"

namespace {

int env_threads() {
  const char* e = std::getenv("BO_LAB_THREADS");
  if (!e) return 1;
  try {
    return std::max(1, std::stoi(e));
  } catch (...) {
    return 1;
  }
}

void print_checks() {
  std::cout << std::left << std::setw(4) << "id" << std::setw(30) << "check" << std::setw(14)
            << "subcommand" << std::setw(30) << "config" << "tolerance\n";
  for (const auto& c : bolab::acceptance_checks())
    std::cout << std::setw(4) << c.id << std::setw(30) << (c.name + (c.extended ? " [extended]" : ""))
              << std::setw(14) << c.subcommand << std::setw(30) << c.config << c.tolerance << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bo-lab: Benjamin-Ono numerical experiments"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list-checks", list, "list acceptance checks with tolerances");
  app.set_version_flag("--version", std::string(bolab::kVersion));

  std::vector<std::string> configs;
  std::string out;
  std::uint64_t seed = 0;
  for (const auto& name : bolab::subcommands()) {
    CLI::App* s = app.add_subcommand(name, "run the " + name + " scenario");
    s->add_option("--config", configs, "scenario JSON (repeatable; run in parallel up to BO_LAB_THREADS)")
        ->required()
        ->check(CLI::ExistingFile);
    s->add_option("--out", out, "output directory (overrides output.directory)");
    s->add_option("--seed", seed, "seed (overrides the config seed)");
  }
  CLI11_PARSE(app, argc, argv);

  if (list) {
    print_checks();
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const bool has_out = sub->count("--out") > 0;
  const bool has_seed = sub->count("--seed") > 0;

  std::vector<int> codes(configs.size(), 0);
  std::mutex io;
  auto run_one = [&](std::size_t i) {
    bolab::RunOverrides ov;
    if (has_out)
      ov.out_dir = configs.size() == 1
                       ? out
                       : (std::filesystem::path(out) / std::filesystem::path(configs[i]).stem()).string();
    if (has_seed) ov.seed = seed;
    bolab::RunResult r;
    try {
      r = bolab::run_scenario(name, bolab::load_config(configs[i]), ov);
    } catch (const bolab::Error& e) {
      std::lock_guard<std::mutex> lk(io);
      std::cerr << configs[i] << ":\n" << e.what() << "\n";
      codes[i] = 2;
      return;
    }
    std::lock_guard<std::mutex> lk(io);
    for (const auto& c : r.checks)
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " = " << std::setprecision(6) << c.value
                << "\n";
    std::cout << configs[i] << ": " << r.status;
    if (!r.message.empty()) std::cout << " (" << r.message << ")";
    if (r.last_good_time) std::cout << " last_good_time=" << *r.last_good_time;
    std::cout << " -> " << r.out_dir << "\n";
    codes[i] = r.exit_code;
  };

  const std::size_t workers = std::min<std::size_t>(configs.size(), static_cast<std::size_t>(env_threads()));
  std::vector<std::thread> pool;
  std::size_t next = 0;
  std::mutex q;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lk(q);
          if (next >= configs.size()) return;
          i = next++;
        }
        run_one(i);
      }
    });
  for (auto& t : pool) t.join();
  return *std::max_element(codes.begin(), codes.end());
}
