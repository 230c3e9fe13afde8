// Copyright 2026 The driveadapt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// driveadapt command-line front end. Talks to the library only through the
// C API.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "driveadapt/driveadapt.h"

namespace fs = std::filesystem;

namespace {

struct Failure {
  da_status status;
  std::string message;
};

void check(da_status s) {
  if (s != DA_OK) throw Failure{s, da_last_error()};
}

// Owns a C handle or string.
template <class T, void (*Free)(T*)>
struct Owned {
  T* p = nullptr;
  Owned() = default;
  Owned(const Owned&) = delete;
  Owned& operator=(const Owned&) = delete;
  ~Owned() {
    if (p) Free(p);
  }
  T** out() { return &p; }
  T* get() const { return p; }
};

using Config = Owned<da_config, da_config_free>;
using Table = Owned<da_table, da_table_free>;
using Model = Owned<da_model, da_model_free>;
using Windowed = Owned<da_windowed, da_windowed_free>;
using Server = Owned<da_server, da_server_free>;
using Text = Owned<char, da_string_free>;

void write_file(const fs::path& path, const char* text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Failure{DA_ERR_IO, "cannot write " + path.string()};
  std::cout << "wrote " << path.string() << '\n';
}

struct Common {
  std::string config;
  std::uint64_t seed = 1;
  std::string out;
};

void load_config(const Common& c, Config& cfg) {
  check(da_config_load(c.config.empty() ? nullptr : c.config.c_str(), cfg.out()));
  check(da_config_check_unused(cfg.get()));
}

void load_table(const std::string& path, Table& t) {
  if (path.empty()) throw Failure{DA_ERR_INVALID_ARGUMENT, "--features is required"};
  check(da_table_read_csv(path.c_str(), t.out()));
}

da_train_options train_options(const Config& cfg, std::uint64_t seed, int trees) {
  da_train_options o;
  check(da_train_options_init(cfg.get(), seed, &o));
  if (trees > 0) o.trees = trees;
  return o;
}

std::vector<double> parse_windows(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "full" || item == "0") {
      out.push_back(0.0);
      continue;
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || !(v > 0.0)) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Failure{DA_ERR_INVALID_ARGUMENT, "bad window length '" + item + "'"};
    }
  }
  if (out.empty()) throw Failure{DA_ERR_INVALID_ARGUMENT, "no windows given"};
  return out;
}

CLI::Option* add_common(CLI::App* cmd, Common& c, const std::string& out_help) {
  cmd->add_option("--config", c.config, "Key/value configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  return cmd->add_option("--out", c.out, out_help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic driving-style adaptation study: simulate, extract, learn, analyze"};
  app.require_subcommand(1);
  app.set_version_flag("--version", da_version());

  Common common;
  std::string in_dir, features, model, windows, mode = "pref_LD", record;
  int trees = 0, k = 10, participant = 0;
  unsigned short port = 8765;
  double time_scale = 1.0;
  bool two_step = false;
  std::string grid = "1,3,5,10,full";

  auto* simulate = app.add_subcommand("simulate", "Simulate the synthetic cohort to stream files");
  add_common(simulate, common, "Output directory")->required();

  auto* extract = app.add_subcommand("extract", "Extract per-event features to CSV");
  add_common(extract, common, "Feature CSV path")->required();
  extract->add_option("--in", in_dir, "Directory written by simulate")->required();
  extract->add_option("--windows", windows, "Per-modality windows, e.g. gaze=1,pupil=5");

  auto* train = app.add_subcommand("train", "Train the preference classifier");
  add_common(train, common, "Model file path")->required();
  train->add_option("--features", features, "Feature CSV")->required();
  train->add_option("--trees", trees, "Trees per forest");
  train->add_flag("--two-step", two_step, "Add trust-change and trust-level predictions");

  auto* evaluate = app.add_subcommand(
      "evaluate", "Score a model on a feature CSV, or cross-validate without --model");
  add_common(evaluate, common, "Report directory")->required();
  evaluate->add_option("--features", features, "Feature CSV")->required();
  evaluate->add_option("--model", model, "Model file");
  evaluate->add_option("--trees", trees, "Trees per forest (cross-validation)");

  auto* ablate = app.add_subcommand("ablate", "Leave-one-modality-out accuracy losses");
  add_common(ablate, common, "Report directory")->required();
  ablate->add_option("--features", features, "Feature CSV")->required();
  ablate->add_option("--trees", trees, "Trees per forest");
  ablate->add_flag("--two-step", two_step, "Use the two-step pipeline");

  auto* analyze = app.add_subcommand("analyze", "Welch t-tests of preference contrasts");
  add_common(analyze, common, "CSV path (also writes a .json next to it)")->required();
  analyze->add_option("--features", features, "Feature CSV")->required();

  auto* select = app.add_subcommand("select", "Greedy forward feature selection");
  add_common(select, common, "Report directory")->required();
  select->add_option("--features", features, "Feature CSV")->required();
  select->add_option("--k", k, "Features to select")->capture_default_str();
  select->add_option("--trees", trees, "Trees per forest");

  auto* gridsearch = app.add_subcommand("gridsearch", "Per-modality window search");
  add_common(gridsearch, common, "Report directory")->required();
  gridsearch->add_option("--in", in_dir, "Directory written by simulate; omitted = simulate");
  gridsearch->add_option("--windows", grid, "Candidate lengths in seconds")->capture_default_str();
  gridsearch->add_option("--trees", trees, "Trees per forest");

  auto* serve = app.add_subcommand("serve", "Serve one interactive session over WebSocket");
  add_common(serve, common, "Directory for the session record");
  serve->add_option("--port", port, "Listen port (0 = any)")->capture_default_str();
  serve->add_option("--mode", mode, "Session mode")->capture_default_str();
  serve->add_option("--participant", participant, "Participant id")->capture_default_str();
  serve->add_option("--time-scale", time_scale, "Simulated seconds per wall second")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    Config cfg;
    load_config(common, cfg);
    const fs::path out = common.out;

    if (simulate->parsed()) {
      da_cohort_summary s{};
      check(da_simulate(cfg.get(), common.seed, common.out.c_str(), &s));
      std::cout << "simulated " << s.participants << " participants, " << s.sessions
                << " sessions, " << s.events << " events into " << common.out << '\n';
    } else if (extract->parsed()) {
      Table t;
      check(da_extract(in_dir.c_str(), windows.c_str(), t.out()));
      check(da_table_write_csv(t.get(), common.out.c_str()));
      std::cout << "extracted " << da_table_rows(t.get()) << " rows x "
                << da_table_columns(t.get()) << " features to " << common.out << '\n';
    } else if (train->parsed()) {
      Table t;
      load_table(features, t);
      auto o = train_options(cfg, common.seed, trees);
      if (two_step) o.two_step = 1;
      Model m;
      check(da_train(t.get(), &o, m.out()));
      if (out.has_parent_path()) fs::create_directories(out.parent_path());
      check(da_model_save(m.get(), common.out.c_str()));
      std::cout << "wrote " << common.out << '\n';
    } else if (evaluate->parsed()) {
      Table t;
      load_table(features, t);
      if (!model.empty()) {
        Model m;
        check(da_model_load(model.c_str(), m.out()));
        Text json, csv;
        check(da_evaluate(m.get(), t.get(), json.out(), csv.out()));
        write_file(out / "evaluation.json", json.get());
        write_file(out / "confusion.csv", csv.get());
      } else {
        auto o = train_options(cfg, common.seed, trees);
        for (int step = 0; step < 2; ++step) {
          o.two_step = step;
          Text json, csv;
          check(da_crossval(t.get(), &o, json.out(), csv.out()));
          const std::string name = step ? "crossval_two_step" : "crossval_one_step";
          write_file(out / (name + ".json"), json.get());
          write_file(out / (name + ".csv"), csv.get());
        }
      }
    } else if (ablate->parsed()) {
      Table t;
      load_table(features, t);
      auto o = train_options(cfg, common.seed, trees);
      if (two_step) o.two_step = 1;
      Text json, csv;
      check(da_ablate(t.get(), &o, json.out(), csv.out()));
      write_file(out / "ablation.json", json.get());
      write_file(out / "ablation.csv", csv.get());
    } else if (analyze->parsed()) {
      Table t;
      load_table(features, t);
      Text json, csv;
      check(da_analyze(t.get(), json.out(), csv.out()));
      write_file(out, csv.get());
      fs::path j = out;
      j.replace_extension(".json");
      write_file(j, json.get());
    } else if (select->parsed()) {
      Table t;
      load_table(features, t);
      const auto o = train_options(cfg, common.seed, trees);
      Text json, csv;
      check(da_select(t.get(), k, &o, json.out(), csv.out()));
      write_file(out / "selection.json", json.get());
      write_file(out / "selection.csv", csv.get());
    } else if (gridsearch->parsed()) {
      const auto w = parse_windows(grid);
      Windowed data;
      if (in_dir.empty())
        check(da_simulate_windowed(cfg.get(), common.seed, w.data(), w.size(), data.out()));
      else
        check(da_extract_windowed(in_dir.c_str(), w.data(), w.size(), data.out()));
      const auto o = train_options(cfg, common.seed, trees);
      Text json, csv;
      check(da_grid_search(data.get(), &o, json.out(), csv.out()));
      write_file(out / "gridsearch.json", json.get());
      write_file(out / "gridsearch.csv", csv.get());
    } else if (serve->parsed()) {
      da_server_options o{};
      o.session.config = cfg.get();
      o.session.seed = common.seed;
      o.session.participant = participant;
      o.session.mode = mode.c_str();
      o.port = port;
      o.time_scale = time_scale;
      o.record_dir = common.out.empty() ? nullptr : common.out.c_str();
      o.handle_signals = 1;
      Server s;
      check(da_server_create(&o, s.out()));
      std::cout << "serving " << mode << " on ws://127.0.0.1:" << da_server_port(s.get())
                << "/ (Ctrl-C to stop)" << std::endl;
      check(da_server_run(s.get()));
    }
  } catch (const Failure& f) {
    std::cerr << "driveadapt: " << da_status_name(f.status) << ": " << f.message << '\n';
    return f.status == DA_ERR_INVALID_ARGUMENT ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "driveadapt: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
