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

#include "driveadapt/driveadapt.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "common/config.hpp"
#include "common/error.hpp"
#include "driver/streams_io.hpp"
#include "ml/pipeline.hpp"
#include "service/cohort.hpp"
#include "service/live_session.hpp"
#include "service/server.hpp"
#include "stats/welch.hpp"

using nlohmann::json;
namespace da = driveadapt;

struct da_config {
  da::KeyValueConfig kv;
};
struct da_table {
  da::features::FeatureTable table;
};
struct da_model {
  da::ml::PreferenceModel model;
};
struct da_windowed {
  da::ml::WindowedFeatures data;
};
struct da_live {
  explicit da_live(const da::service::SessionSpec& spec) : session(spec) {}
  da::service::LiveSession session;
};
struct da_server {
  std::unique_ptr<da::service::Server> server;
};

namespace {

thread_local std::string g_last_error;

da_status fail(da_status s, const std::string& what) {
  g_last_error = what;
  return s;
}

template <class F>
da_status guarded(F&& f) {
  try {
    f();
    return DA_OK;
  } catch (const da::Error& e) {
    switch (e.code()) {
      case da::ErrorCode::kInvalidArgument: return fail(DA_ERR_INVALID_ARGUMENT, e.what());
      case da::ErrorCode::kIo: return fail(DA_ERR_IO, e.what());
      case da::ErrorCode::kState: return fail(DA_ERR_STATE, e.what());
      case da::ErrorCode::kDomain: return fail(DA_ERR_DOMAIN, e.what());
    }
    return fail(DA_ERR_INTERNAL, e.what());
  } catch (const json::exception& e) {
    return fail(DA_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DA_ERR_INTERNAL, e.what());
  }
}

template <class T>
void require(const T* p, const char* name) {
  if (p == nullptr) throw da::invalid_argument(std::string(name) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** dst, const std::string& s) {
  if (dst != nullptr) *dst = dup_string(s);
}

const da::KeyValueConfig& config_of(const da_config* cfg) {
  static const da::KeyValueConfig empty;
  return cfg != nullptr ? cfg->kv : empty;
}

da::features::WindowSpec windows_of(const char* spec) {
  return spec == nullptr || *spec == '\0' ? da::features::WindowSpec::full()
                                          : da::features::WindowSpec::parse(spec);
}

da::service::CohortOptions cohort_of(const da_config* cfg, uint64_t seed) {
  auto o = da::service::CohortOptions::from_config(config_of(cfg));
  o.seed = seed;
  return o;
}

da::ml::PipelineOptions pipeline_of(const da_train_options* o) {
  require(o, "options");
  da::ml::PipelineOptions p;
  p.folds = o->folds;
  p.inner_folds = o->inner_folds;
  p.seed = o->seed;
  p.two_step = o->two_step != 0;
  p.upsample = o->upsample != 0;
  p.forest.n_trees = o->trees;
  p.forest.max_depth = o->max_depth;
  p.forest.max_features = o->max_features;
  p.forest.min_samples_split = o->min_samples_split;
  p.forest.seed = o->seed;
  if (p.folds < 2) throw da::invalid_argument("folds must be >= 2");
  if (p.inner_folds < 2) throw da::invalid_argument("inner folds must be >= 2");
  if (p.forest.n_trees < 1) throw da::invalid_argument("trees must be >= 1");
  if (p.forest.max_depth < 0 || p.forest.max_features < 0)
    throw da::invalid_argument("max_depth and max_features must be >= 0");
  if (p.forest.min_samples_split < 2) throw da::invalid_argument("min_samples_split must be >= 2");
  return p;
}

da::ml::Dataset dataset_of(const da_table* t) {
  require(t, "table");
  if (t->table.rows.empty()) throw da::invalid_argument("feature table has no rows");
  return da::ml::Dataset::from_table(t->table);
}

std::string class_name(int c) {
  return std::string(da::adapt::to_string(static_cast<da::adapt::PreferenceResponse>(c)));
}

std::string confusion_csv(const std::vector<std::vector<int>>& m) {
  std::ostringstream out;
  out << "true";
  for (std::size_t c = 0; c < m.size(); ++c) out << ",pred_" << class_name(static_cast<int>(c));
  out << '\n';
  for (std::size_t r = 0; r < m.size(); ++r) {
    out << class_name(static_cast<int>(r));
    for (int v : m[r]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

std::string num(double v) { return std::isfinite(v) ? da::driver::format_double(v) : ""; }

da::service::SessionSpec session_spec_of(const da_session_options* o) {
  require(o, "session options");
  require(o->mode, "mode");
  const auto mode = da::adapt::parse_session_mode(o->mode);
  if (!mode)
    throw da::invalid_argument(std::string("unknown session mode '") + o->mode +
                               "'; expected fixed_LD, fixed_LA, trust_LD, trust_LA, pref_LD "
                               "or pref_LA");
  if (o->participant < 0) throw da::invalid_argument("participant must be >= 0");
  da::service::SessionSpec s;
  s.participant = o->participant;
  s.session_index = 0;
  s.mode = *mode;
  s.route_seed = da::service::route_seed(o->seed, o->participant, 0);
  s.sim = da::sim::SessionConfig::from_config(config_of(o->config));
  s.sim.validate();
  return s;
}

}  // namespace

extern "C" {

const char* da_last_error(void) { return g_last_error.c_str(); }

const char* da_status_name(da_status s) {
  switch (s) {
    case DA_OK: return "ok";
    case DA_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case DA_ERR_IO: return "io_error";
    case DA_ERR_STATE: return "state_error";
    case DA_ERR_DOMAIN: return "domain_error";
    case DA_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* da_version(void) { return "0.1.0"; }

void da_string_free(char* s) { std::free(s); }

da_status da_config_load(const char* path, da_config** out) {
  return guarded([&] {
    require(out, "out");
    auto c = std::make_unique<da_config>();
    if (path != nullptr) c->kv = da::KeyValueConfig::load(path);
    *out = c.release();
  });
}

da_status da_config_parse(const char* text, da_config** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    auto c = std::make_unique<da_config>();
    c->kv = da::KeyValueConfig::parse(text);
    *out = c.release();
  });
}

da_status da_config_check_unused(const da_config* cfg) {
  return guarded([&] {
    cohort_of(cfg, 0);
    da_train_options o;
    if (const auto s = da_train_options_init(cfg, 0, &o); s != DA_OK)
      throw da::invalid_argument(g_last_error);
    config_of(cfg).reject_unknown();
  });
}

void da_config_free(da_config* cfg) { delete cfg; }

da_status da_simulate(const da_config* cfg, uint64_t seed, const char* out_dir,
                      da_cohort_summary* summary) {
  return guarded([&] {
    require(out_dir, "out_dir");
    const auto s = da::service::simulate_cohort(cohort_of(cfg, seed), out_dir);
    if (summary != nullptr) *summary = {s.participants, s.sessions, s.events};
  });
}

da_status da_extract(const char* in_dir, const char* windows, da_table** out) {
  return guarded([&] {
    require(in_dir, "in_dir");
    require(out, "out");
    auto t = std::make_unique<da_table>();
    t->table = da::service::extract_directory(in_dir, windows_of(windows));
    *out = t.release();
  });
}

da_status da_simulate_features(const da_config* cfg, uint64_t seed, const char* windows,
                               da_table** out) {
  return guarded([&] {
    require(out, "out");
    auto t = std::make_unique<da_table>();
    t->table = da::service::simulate_features(cohort_of(cfg, seed), windows_of(windows));
    *out = t.release();
  });
}

da_status da_table_read_csv(const char* path, da_table** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto t = std::make_unique<da_table>();
    t->table = da::features::read_feature_csv(std::string(path));
    *out = t.release();
  });
}

da_status da_table_write_csv(const da_table* t, const char* path) {
  return guarded([&] {
    require(t, "table");
    require(path, "path");
    da::features::write_feature_csv(std::string(path), t->table);
  });
}

size_t da_table_rows(const da_table* t) { return t ? t->table.rows.size() : 0; }
size_t da_table_columns(const da_table* t) { return t ? t->table.names.size() : 0; }
void da_table_free(da_table* t) { delete t; }

da_status da_train_options_init(const da_config* cfg, uint64_t seed, da_train_options* out) {
  return guarded([&] {
    require(out, "out");
    const auto& kv = config_of(cfg);
    const da::ml::PipelineOptions d;
    out->trees = kv.get_int("ml.trees", d.forest.n_trees);
    out->max_depth = kv.get_int("ml.max_depth", d.forest.max_depth);
    out->max_features = kv.get_int("ml.max_features", d.forest.max_features);
    out->min_samples_split = kv.get_int("ml.min_samples_split", d.forest.min_samples_split);
    out->folds = kv.get_int("ml.folds", d.folds);
    out->inner_folds = kv.get_int("ml.inner_folds", d.inner_folds);
    out->two_step = kv.get_bool("ml.two_step", d.two_step) ? 1 : 0;
    out->upsample = kv.get_bool("ml.upsample", d.upsample) ? 1 : 0;
    out->seed = seed;
    pipeline_of(out);
  });
}

da_status da_train(const da_table* t, const da_train_options* opts, da_model** out) {
  return guarded([&] {
    require(out, "out");
    auto m = std::make_unique<da_model>();
    m->model = da::ml::train_model(dataset_of(t), pipeline_of(opts));
    *out = m.release();
  });
}

da_status da_model_save(const da_model* m, const char* path) {
  return guarded([&] {
    require(m, "model");
    require(path, "path");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw da::io_error(std::string("cannot write ") + path);
    f << m->model.to_json().dump() << '\n';
    if (!f) throw da::io_error(std::string("cannot write ") + path);
  });
}

da_status da_model_load(const char* path, da_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::ifstream f(path, std::ios::binary);
    if (!f) throw da::io_error(std::string("missing model file ") + path);
    json j;
    try {
      j = json::parse(f);
    } catch (const json::exception& e) {
      throw da::invalid_argument(std::string(path) + ": " + e.what());
    }
    auto m = std::make_unique<da_model>();
    m->model = da::ml::PreferenceModel::from_json(j);
    *out = m.release();
  });
}

void da_model_free(da_model* m) { delete m; }

da_status da_evaluate(const da_model* m, const da_table* t, char** json_out, char** csv) {
  return guarded([&] {
    require(m, "model");
    require(json_out, "json");
    const auto e = da::ml::evaluate(m->model, dataset_of(t));
    json j = da::ml::to_json(e);
    j["two_step"] = m->model.two_step();
    put(json_out, j.dump(2) + "\n");
    put(csv, confusion_csv(e.confusion));
  });
}

da_status da_crossval(const da_table* t, const da_train_options* opts, char** json_out,
                      char** csv) {
  return guarded([&] {
    require(json_out, "json");
    const auto p = pipeline_of(opts);
    const auto r = da::ml::cross_validate(dataset_of(t), p);
    json j = da::ml::to_json(r);
    j["two_step"] = p.two_step;
    j["folds"] = p.folds;
    j["trees"] = p.forest.n_trees;
    j["seed"] = p.seed;
    std::ostringstream c;
    c << "fold,accuracy\n";
    for (std::size_t i = 0; i < r.fold_accuracy.size(); ++i)
      c << i << ',' << num(r.fold_accuracy[i]) << '\n';
    put(json_out, j.dump(2) + "\n");
    put(csv, c.str());
  });
}

da_status da_ablate(const da_table* t, const da_train_options* opts, char** json_out,
                    char** csv) {
  return guarded([&] {
    require(json_out, "json");
    const auto rows = da::ml::ablation(dataset_of(t), pipeline_of(opts));
    json j = json::array();
    std::ostringstream c;
    c << "modality,full,without,loss\n";
    for (const auto& r : rows) {
      const std::string m(da::features::to_string(r.modality));
      j.push_back({{"modality", m}, {"full", r.full}, {"without", r.without}, {"loss", r.loss}});
      c << m << ',' << num(r.full) << ',' << num(r.without) << ',' << num(r.loss) << '\n';
    }
    put(json_out, json{{"ablation", j}}.dump(2) + "\n");
    put(csv, c.str());
  });
}

da_status da_select(const da_table* t, int k, const da_train_options* opts, char** json_out,
                    char** csv) {
  return guarded([&] {
    require(json_out, "json");
    const auto s = da::ml::sequential_select(dataset_of(t), k, pipeline_of(opts));
    std::ostringstream c;
    c << "step,feature,accuracy\n";
    for (std::size_t i = 0; i < s.features.size(); ++i)
      c << i + 1 << ',' << s.features[i] << ',' << num(s.trace[i]) << '\n';
    put(json_out, json{{"features", s.features}, {"trace", s.trace}}.dump(2) + "\n");
    put(csv, c.str());
  });
}

da_status da_analyze(const da_table* t, char** json_out, char** csv) {
  return guarded([&] {
    require(t, "table");
    require(json_out, "json");
    if (t->table.rows.empty()) throw da::invalid_argument("feature table has no rows");
    json rows = json::array();
    std::ostringstream c;
    c << "feature,contrast,t,dof,p\n";
    auto emit = [&](const std::string& f, const char* contrast,
                    const std::optional<da::stats::TTestResult>& r) {
      json row{{"feature", f}, {"contrast", contrast}};
      if (r) {
        row["t"] = r->t;
        row["dof"] = r->dof;
        row["p"] = r->p;
        c << f << ',' << contrast << ',' << num(r->t) << ',' << num(r->dof) << ',' << num(r->p)
          << '\n';
      } else {
        row["t"] = row["dof"] = row["p"] = nullptr;
        c << f << ',' << contrast << ",,,\n";
      }
      rows.push_back(row);
    };
    for (const auto& f : t->table.names) {
      std::optional<da::stats::Contrast> r;
      try {
        r = da::stats::preference_contrast(t->table, f);
      } catch (const da::Error& e) {
        if (e.code() != da::ErrorCode::kDomain) throw;
      }
      emit(f, "aggressive_vs_same",
           r ? std::optional(r->aggressive_vs_same) : std::nullopt);
      emit(f, "defensive_vs_same", r ? std::optional(r->defensive_vs_same) : std::nullopt);
    }
    put(json_out, json{{"contrasts", rows}}.dump(2) + "\n");
    put(csv, c.str());
  });
}

da_status da_extract_windowed(const char* in_dir, const double* windows, size_t n,
                              da_windowed** out) {
  return guarded([&] {
    require(in_dir, "in_dir");
    require(windows, "windows");
    require(out, "out");
    auto w = std::make_unique<da_windowed>();
    w->data = da::service::extract_windowed_directory(in_dir, {windows, n});
    *out = w.release();
  });
}

da_status da_simulate_windowed(const da_config* cfg, uint64_t seed, const double* windows,
                               size_t n, da_windowed** out) {
  return guarded([&] {
    require(windows, "windows");
    require(out, "out");
    auto w = std::make_unique<da_windowed>();
    w->data = da::service::simulate_windowed(cohort_of(cfg, seed), {windows, n});
    *out = w.release();
  });
}

da_status da_grid_search(const da_windowed* w, const da_train_options* opts, char** json_out,
                         char** csv) {
  return guarded([&] {
    require(w, "windowed");
    require(json_out, "json");
    const auto g = da::ml::window_grid_search(w->data, pipeline_of(opts));
    json acc = json::object();
    std::ostringstream c;
    c << "modality,window,accuracy\n";
    for (auto m : da::features::kAllModalities) {
      const std::string name(da::features::to_string(m));
      acc[name] = g.accuracy[static_cast<std::size_t>(m)];
      for (std::size_t i = 0; i < g.windows.size(); ++i)
        c << name << ',' << num(g.windows[i]) << ','
          << num(g.accuracy[static_cast<std::size_t>(m)][i]) << '\n';
    }
    put(json_out,
        json{{"windows", g.windows}, {"accuracy", acc}, {"best", g.best.to_string()}}.dump(2) +
            "\n");
    put(csv, c.str());
  });
}

void da_windowed_free(da_windowed* w) { delete w; }

da_status da_live_create(const da_session_options* opts, da_live** out) {
  return guarded([&] {
    require(out, "out");
    *out = new da_live(session_spec_of(opts));
  });
}

da_status da_live_submit(da_live* s, const char* command, char** reply) {
  return guarded([&] {
    require(s, "session");
    require(command, "command");
    require(reply, "reply");
    put(reply, s->session.submit_text(command).dump());
  });
}

da_status da_live_step(da_live* s, int* ticked) {
  return guarded([&] {
    require(s, "session");
    const bool t = s->session.step();
    if (ticked != nullptr) *ticked = t ? 1 : 0;
  });
}

int da_live_frame_due(const da_live* s) { return s != nullptr && s->session.frame_due(); }

da_status da_live_frame(da_live* s, char** frame) {
  return guarded([&] {
    require(s, "session");
    require(frame, "frame");
    put(frame, s->session.frame().dump());
  });
}

da_status da_live_hello(const da_live* s, int read_only, char** hello) {
  return guarded([&] {
    require(s, "session");
    require(hello, "hello");
    put(hello, s->session.hello(read_only != 0).dump());
  });
}

da_status da_live_record(const da_live* s, char** session_json) {
  return guarded([&] {
    require(s, "session");
    require(session_json, "session_json");
    put(session_json, s->session.engine().record().dump(2) + "\n");
  });
}

void da_live_free(da_live* s) { delete s; }

da_status da_server_create(const da_server_options* opts, da_server** out) {
  return guarded([&] {
    require(opts, "options");
    require(out, "out");
    da::service::ServerOptions o;
    o.session = session_spec_of(&opts->session);
    if (opts->address != nullptr) o.address = opts->address;
    o.port = opts->port;
    o.time_scale = opts->time_scale > 0.0 ? opts->time_scale : 1.0;
    if (opts->record_dir != nullptr && *opts->record_dir != '\0') o.record_dir = opts->record_dir;
    o.handle_signals = opts->handle_signals != 0;
    auto s = std::make_unique<da_server>();
    s->server = std::make_unique<da::service::Server>(o);
    *out = s.release();
  });
}

unsigned short da_server_port(const da_server* s) { return s ? s->server->port() : 0; }

da_status da_server_run(da_server* s) {
  return guarded([&] {
    require(s, "server");
    s->server->run();
  });
}

void da_server_stop(da_server* s) {
  if (s != nullptr) s->server->stop();
}

void da_server_free(da_server* s) { delete s; }

}  // extern "C"
