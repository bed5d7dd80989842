// Copyright 2026 The kk-forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// kk-forge: generate, solve, grade and serve Knights & Knaves puzzles.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.
// stdout carries machine-readable output only; logs go to stderr.

#include <algorithm>
#include <csignal>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <pthread.h>
#include <signal.h>
#include <unistd.h>

#include "CLI11.hpp"
#include "kkforge/kkforge.hpp"
#include "kkforge/service.hpp"

namespace {

using kkforge::Json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// --config files are flat JSON objects whose keys are the long flag names of
// the chosen subcommand. Keys are appended to the command line unless the flag
// was given explicitly or arrives through its environment variable.
// Returns the arguments in the reversed order CLI11 expects.
std::vector<std::string> expand_config(CLI::App& app, int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  CLI::App* sub = args.empty() ? nullptr : app.get_subcommand_no_throw(args.front());
  if (sub) {
    std::optional<std::string> path;
    std::set<std::string> given;
    for (std::size_t i = 1; i < args.size(); ++i) {
      const auto& a = args[i];
      if (!a.starts_with("--")) continue;
      const auto eq = a.find('=');
      const auto name = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
      given.insert(name);
      if (name == "config") {
        if (eq != std::string::npos) path = a.substr(eq + 1);
        else if (i + 1 < args.size()) path = args[i + 1];
      }
    }
    if (path) {
      std::ifstream in(*path, std::ios::binary);
      if (!in) throw CLI::FileError::Missing(*path);
      Json j = Json::parse(in, nullptr, false);
      if (j.is_discarded() || !j.is_object()) {
        throw CLI::ConversionError("--config", "'" + *path + "' is not a JSON object");
      }
      for (const auto& [key, value] : j.items()) {
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (key == "config" || opt == nullptr) {
          throw CLI::ExtrasError(sub->get_name() + " has no option --" + key + " (from --config)",
                                 CLI::ExitCodes::ExtrasError);
        }
        if (given.contains(key)) continue;
        const auto& env = opt->get_envname();
        if (!env.empty() && std::getenv(env.c_str()) != nullptr) continue;
        auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        if (opt->get_type_size() == 0) {
          if (!value.is_boolean()) throw CLI::ConversionError("--config", "\"" + key + "\" must be a boolean");
          if (value.get<bool>()) args.push_back("--" + key);
        } else if (value.is_array()) {
          for (const auto& v : value) args.push_back("--" + key + "=" + scalar(v));
        } else {
          args.push_back("--" + key + "=" + scalar(value));
        }
      }
    }
  }
  std::reverse(args.begin(), args.end());
  return args;
}

void echo_config(const std::string& subcommand, Json config) {
  Json out{{"subcommand", subcommand}};
  for (auto& [k, v] : config.items()) out[k] = v;
  std::cerr << "kk-forge: resolved config " << out.dump() << '\n';
}

std::string read_all(std::istream& in) {
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
  std::size_t total = 5000;
  std::uint64_t seed = 1;
  std::string out;
  std::string manifest;
  double train_fraction = 0.9;
  std::size_t min_chars = kkforge::kMinGeneratedCharacters;
  std::size_t max_chars = kkforge::kMaxGeneratedCharacters;
  int max_depth = 2;
  std::size_t max_attempts = 10'000;
};

int run_gen(GenOptions opt) {
  if (opt.manifest.empty()) opt.manifest = opt.out + ".manifest.json";
  echo_config("gen", Json{{"total", opt.total},
                          {"seed", opt.seed},
                          {"out", opt.out},
                          {"manifest", opt.manifest},
                          {"train-fraction", opt.train_fraction},
                          {"min-chars", opt.min_chars},
                          {"max-chars", opt.max_chars},
                          {"max-depth", opt.max_depth},
                          {"max-attempts", opt.max_attempts},
                          {"rng", std::string(kkforge::Rng::kAlgorithm)}});
  kkforge::GenConfig config;
  config.max_depth = opt.max_depth;
  config.max_attempts = opt.max_attempts;
  const auto puzzles = kkforge::generate_dataset(config, opt.total, opt.seed, opt.min_chars, opt.max_chars);
  auto records = kkforge::make_records(puzzles, opt.seed);
  const auto manifest = kkforge::make_manifest(records, opt.seed, opt.train_fraction);
  auto split = kkforge::split_dataset(std::move(records), opt.train_fraction, opt.seed);

  std::vector<kkforge::DatasetRecord> all = std::move(split.train);
  const std::size_t n_train = all.size();
  for (auto& r : split.eval) all.push_back(std::move(r));
  kkforge::write_jsonl(all, opt.out);

  std::ofstream m(opt.manifest, std::ios::binary | std::ios::trunc);
  m << kkforge::manifest_to_json(manifest).dump(2) << '\n';
  if (!m) throw std::runtime_error("cannot write manifest '" + opt.manifest + "'");

  std::cerr << "kk-forge: wrote " << all.size() << " records (" << n_train << " train, " << all.size() - n_train
            << " eval) to " << opt.out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// solve

// Accepts a single puzzle object, a dataset record, an array of either, or
// JSON Lines of either.
std::vector<kkforge::Puzzle> load_puzzles(const std::string& text) {
  auto one = [](const Json& j) {
    return kkforge::puzzle_from_json(j.is_object() && j.contains("puzzle") ? j["puzzle"] : j);
  };
  std::vector<kkforge::Puzzle> out;
  Json whole = Json::parse(text, nullptr, false);
  if (!whole.is_discarded()) {
    if (whole.is_array()) {
      for (const auto& j : whole) out.push_back(one(j));
    } else {
      out.push_back(one(whole));
    }
    return out;
  }
  std::istringstream in(text);
  const auto values = kkforge::parse_jsonl(in);
  if (values.empty()) throw kkforge::FormatError("no puzzle found in input");
  for (const auto& j : values) out.push_back(one(j));
  return out;
}

int run_solve(const std::string& in_path, bool from_stdin) {
  echo_config("solve", Json{{"in", in_path}, {"stdin", from_stdin}});
  std::string text;
  if (from_stdin) {
    text = read_all(std::cin);
  } else {
    std::ifstream in(in_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + in_path + "'");
    text = read_all(in);
  }
  for (const auto& puzzle : load_puzzles(text)) {
    const auto report = kkforge::solve_all(puzzle);
    if (report.solutions.empty()) {
      std::cout << "NoSolution\n";
    } else if (report.solutions.size() > 1) {
      std::cout << "Ambiguous(" << report.solutions.size() << ")\n";
    } else {
      std::cout << kkforge::format_solution(report.solutions.front(), puzzle.names) << '\n';
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// grade

struct GradeOptions {
  std::string task;
  std::string gold;
  std::string completions;
  std::string out;
  bool strict_format = false;
};

int run_grade(const GradeOptions& opt) {
  echo_config("grade", Json{{"task", opt.task},
                            {"gold", opt.gold},
                            {"completions", opt.completions},
                            {"out", opt.out},
                            {"strict-format", opt.strict_format}});
  const auto task = kkforge::parse_task(opt.task);  // validated by CLI11
  std::map<std::string, kkforge::GoldRecord> gold;
  for (const auto& j : kkforge::read_jsonl_values(opt.gold)) {
    auto g = kkforge::gold_from_json(j);
    if (gold.contains(g.question_id)) throw kkforge::EvalError("duplicate gold question_id " + g.question_id);
    gold.emplace(g.question_id, std::move(g));
  }
  std::vector<kkforge::CompletionRecord> completions;
  for (const auto& j : kkforge::read_jsonl_values(opt.completions)) {
    completions.push_back(kkforge::completion_from_json(j));
  }
  const auto report = kkforge::evaluate_run(completions, gold, *task, {opt.strict_format});
  if (!opt.out.empty()) {
    std::ofstream out(opt.out, std::ios::binary | std::ios::trunc);
    out << kkforge::report_to_json(report).dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write report '" + opt.out + "'");
  }
  std::cout << kkforge::render_report(report);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// serve

int run_serve(const std::string& host, int port, std::size_t max_batch) {
  echo_config("serve", Json{{"host", host}, {"port", port}, {"max-batch", max_batch}});

  // Block the shutdown signals before any server thread exists; the main
  // thread takes them synchronously with sigwait.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  kkforge::RewardServer server(kkforge::ServiceConfig{max_batch});
  if (!server.bind(host, port)) {
    std::cerr << "kk-forge: cannot bind " << host << ":" << port << '\n';
    return kExitFailure;
  }
  std::cerr << "kk-forge: listening on " << host << ":" << server.port() << '\n';

  bool listen_failed = false;
  std::thread worker([&] {
    if (!server.serve()) {
      listen_failed = true;
      kill(getpid(), SIGTERM);
    }
  });
  int sig = 0;
  sigwait(&signals, &sig);
  server.stop();
  worker.join();
  if (listen_failed) {
    std::cerr << "kk-forge: server stopped unexpectedly\n";
    return kExitFailure;
  }
  std::cerr << "kk-forge: shutting down on signal " << sig << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knights & Knaves puzzle generation, solving, grading and reward serving", "kk-forge"};
  app.set_version_flag("--version", std::string(kkforge::kVersion));
  app.require_subcommand(1);
  std::string config_path;

  GenOptions gen_opt;
  auto* gen = app.add_subcommand("gen", "Generate a uniquely solvable puzzle dataset (JSONL + manifest)");
  gen->add_option("--config", config_path, "JSON file with flag values (flags win)")->check(CLI::ExistingFile);
  gen->add_option("--total", gen_opt.total, "Number of puzzles")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_opt.seed, "RNG seed");
  gen->add_option("--out", gen_opt.out, "Output JSONL path")->required();
  gen->add_option("--manifest", gen_opt.manifest, "Manifest path (default: <out>.manifest.json)");
  gen->add_option("--train-fraction", gen_opt.train_fraction, "Fraction of records in the train split")
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            try {
              const double f = std::stod(s);
              if (f > 0.0 && f < 1.0) return {};
            } catch (const std::exception&) {
            }
            return "must be strictly between 0 and 1";
          },
          "(0,1)"));
  gen->add_option("--min-chars", gen_opt.min_chars, "Smallest roster")->check(CLI::Range(3, 7));
  gen->add_option("--max-chars", gen_opt.max_chars, "Largest roster")->check(CLI::Range(3, 7));
  gen->add_option("--max-depth", gen_opt.max_depth, "Statement depth cap")->check(CLI::PositiveNumber);
  gen->add_option("--max-attempts", gen_opt.max_attempts, "Rejection cap per puzzle")->check(CLI::PositiveNumber);

  std::string solve_in;
  bool solve_stdin = false;
  auto* solve = app.add_subcommand("solve", "Solve puzzles; prints one answer, NoSolution or Ambiguous(k) per puzzle");
  solve->add_option("--config", config_path, "JSON file with flag values (flags win)")->check(CLI::ExistingFile);
  auto* in_opt = solve->add_option("--in", solve_in, "Puzzle JSON or JSONL file");
  auto* stdin_opt = solve->add_flag("--stdin", solve_stdin, "Read puzzles from stdin");
  in_opt->excludes(stdin_opt);
  solve->require_option(1, 2);

  GradeOptions grade_opt;
  auto* grade = app.add_subcommand("grade", "Grade a multi-round completion run against gold answers");
  grade->add_option("--config", config_path, "JSON file with flag values (flags win)")->check(CLI::ExistingFile);
  grade->add_option("--task", grade_opt.task, "kk, mcq or numeric")
      ->required()
      ->check(CLI::IsMember({"kk", "mcq", "numeric"}));
  grade->add_option("--gold", grade_opt.gold, "Gold JSONL")->required()->check(CLI::ExistingFile);
  grade->add_option("--completions", grade_opt.completions, "Completions JSONL")->required()->check(CLI::ExistingFile);
  grade->add_option("--out", grade_opt.out, "Report JSON path");
  grade->add_flag("--strict-format", grade_opt.strict_format, "Require an <answer> block");

  std::string host = "127.0.0.1";
  int port = 8000;
  std::size_t max_batch = 1024;
  auto* serve = app.add_subcommand("serve", "Serve the reward API over HTTP until interrupted");
  serve->add_option("--config", config_path, "JSON file with flag values (flags win)")->check(CLI::ExistingFile);
  serve->add_option("--port", port, "TCP port (env KK_FORGE_PORT)")->envname("KK_FORGE_PORT")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--max-batch", max_batch, "Largest accepted batch")->check(CLI::PositiveNumber);

  try {
    auto args = expand_config(app, argc, argv);
    app.parse(args);
    if (gen_opt.min_chars > gen_opt.max_chars) {
      throw CLI::ValidationError("--min-chars", "must not exceed --max-chars");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return run_gen(gen_opt);
    if (*solve) return run_solve(solve_in, solve_stdin);
    if (*grade) return run_grade(grade_opt);
    if (*serve) return run_serve(host, port, max_batch);
  } catch (const std::exception& e) {
    std::cerr << "kk-forge: error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
