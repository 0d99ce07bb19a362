// Copyright 2026 The Authors.
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

#include "mise/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <ostream>
#include <set>
#include <thread>

#include "mise/cache.hpp"
#include "mise/csv.hpp"
#include "mise/embeddings.hpp"
#include "mise/error.hpp"
#include "mise/evalproto.hpp"
#include "mise/fusion.hpp"
#include "mise/movielens.hpp"
#include "mise/mpeg7.hpp"
#include "mise/shotseg.hpp"
#include "mise/textfeat.hpp"

namespace mise {

namespace fs = std::filesystem;

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::Segment: return "segment";
    case Stage::Extract: return "extract";
    case Stage::Aggregate: return "aggregate";
    case Stage::Fuse: return "fuse";
    case Stage::Textfeat: return "textfeat";
    case Stage::Train: return "train";
    case Stage::Evaluate: return "evaluate";
    case Stage::Recommend: return "recommend";
  }
  return "unknown";
}

std::string_view to_string(FeatureFamily family) noexcept {
  switch (family) {
    case FeatureFamily::Mpeg7: return "mpeg7";
    case FeatureFamily::Dnn: return "dnn";
    case FeatureFamily::Fused: return "fused";
    case FeatureFamily::Genre: return "genre";
    case FeatureFamily::TagLsa: return "tag-lsa";
  }
  return "unknown";
}

FeatureFamily feature_family_from_string(std::string_view name) {
  for (auto f : {FeatureFamily::Mpeg7, FeatureFamily::Dnn, FeatureFamily::Fused,
                 FeatureFamily::Genre, FeatureFamily::TagLsa}) {
    if (to_string(f) == name) return f;
  }
  fail(ErrorKind::Parameter, "unknown feature family '" + std::string(name) +
                                 "' (mpeg7, dnn, fused, genre, tag-lsa)");
}

void PipelineConfig::validate() const {
  if (!(shot_threshold >= 0.0 && shot_threshold <= 1.0)) {
    fail(ErrorKind::Parameter, "shot threshold must lie in [0, 1]");
  }
  if (cca_components < 0) fail(ErrorKind::Parameter, "CCA components must be >= 0");
  if (lsa_rank < 1) fail(ErrorKind::Parameter, "LSA rank must be >= 1");
  if (folds < 1) fail(ErrorKind::Parameter, "folds must be >= 1");
  if (cutoffs.empty()) fail(ErrorKind::Parameter, "no cutoffs given");
  for (int n : cutoffs) {
    if (n < 1) fail(ErrorKind::Parameter, "cutoffs must be >= 1");
  }
  if (top_n < 1) fail(ErrorKind::Parameter, "top-N must be >= 1");
  if (jobs < 1) fail(ErrorKind::Parameter, "jobs must be >= 1");
  train.validate();
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

std::string text_of(const fs::path& path) {
  const auto bytes = read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

std::string fmt(double v) { return csv::format_double(v); }

std::string digest_path(const fs::path& path) {
  if (!fs::is_directory(path)) return sha256_file(path);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string listing;
  for (const auto& f : files) listing += f.filename().string() + ":" + sha256_file(f) + "\n";
  return sha256_hex(listing);
}

const fs::path& require_path(const fs::path& path, const char* flag) {
  if (path.empty()) fail(ErrorKind::Parameter, std::string("missing required ") + flag);
  if (!fs::exists(path)) fail(ErrorKind::Io, "no such file: " + path.string());
  return path;
}

struct Video {
  std::int64_t id = 0;
  fs::path path;
};

/// <movie_id>.y4m files and <movie_id>/ directories of PPM frames.
std::vector<Video> list_videos(const fs::path& dir) {
  require_path(dir, "--videos");
  std::vector<Video> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const bool video = e.is_directory() || e.path().extension() == ".y4m";
    if (!video) continue;
    const std::string stem = e.path().stem().string();
    try {
      out.push_back({csv::to_int(stem, 0), e.path()});
    } catch (const Error&) {
      fail(ErrorKind::Format, "video name '" + e.path().filename().string() +
                                  "' is not a numeric movie id");
    }
  }
  std::sort(out.begin(), out.end(), [](const Video& a, const Video& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].id == out[i - 1].id) {
      fail(ErrorKind::Duplicate, "two videos for movie " + std::to_string(out[i].id));
    }
  }
  if (out.empty()) fail(ErrorKind::EmptyInput, "no videos under " + dir.string());
  return out;
}

std::string shots_file(std::int64_t movie) { return "shots_" + std::to_string(movie) + ".csv"; }

/// One execution of a stage: collects the recipe, decides whether the cache
/// is current and records outputs.
class StageRun {
 public:
  StageRun(const ArtifactCache& cache, std::string stage, std::uint64_t seed)
      : cache_(cache) {
    manifest_.stage = std::move(stage);
    manifest_.seed = seed;
  }

  void input(const std::string& name, std::string digest) {
    manifest_.inputs[name] = std::move(digest);
  }
  void upstream(const std::string& stage) {
    cache_.require(stage);
    input("stage/" + stage, sha256_file(cache_.manifest_path(stage)));
  }
  void param(const std::string& name, std::string value) {
    manifest_.params[name] = std::move(value);
  }

  /// True when the cached outputs match this recipe. A different recipe is
  /// an error unless `force`, in which case the stage directory is cleared.
  bool up_to_date(bool force) {
    const auto existing = cache_.load(manifest_.stage);
    if (existing) {
      if (existing->same_recipe(manifest_) && cache_.outputs_intact(*existing)) return true;
      if (!force) {
        fail(ErrorKind::StaleCache,
             "cached '" + manifest_.stage +
                 "' artifacts do not match the current inputs or parameters; rerun with "
                 "--force to rebuild");
      }
    }
    fs::remove_all(cache_.stage_dir(manifest_.stage));
    fs::create_directories(cache_.stage_dir(manifest_.stage));
    return false;
  }

  fs::path dir() const { return cache_.stage_dir(manifest_.stage); }

  void emit(const std::string& name, const std::string& text) {
    write_file(dir() / name, text);
    manifest_.outputs[name] = sha256_hex(text);
  }
  void emit(const std::string& name, std::span<const std::uint8_t> bytes) {
    write_file(dir() / name, bytes);
    manifest_.outputs[name] = sha256_hex(bytes);
  }
  void emit_features(const std::string& name, std::span<const FeatureRecord> records) {
    emit(name, write_feature_csv(records));
  }

  void commit() { cache_.store(manifest_); }

 private:
  const ArtifactCache& cache_;
  StageManifest manifest_;
};

StageResult up_to_date_result(std::string_view stage) {
  return {false, std::string(stage) + ": up to date"};
}

StageResult segment(const PipelineConfig& cfg, const ArtifactCache& cache) {
  const auto videos = list_videos(cfg.videos);
  StageRun run(cache, "segment", cfg.seed);
  run.param("threshold", fmt(cfg.shot_threshold));
  for (const auto& v : videos) run.input("video/" + std::to_string(v.id), digest_path(v.path));
  if (run.up_to_date(cfg.force)) return up_to_date_result("segment");

  std::vector<ShotBoundaryList> shots(videos.size());
  parallel_for(videos.size(), cfg.jobs, [&](std::size_t i) {
    shots[i] = detect_shots(load_video(videos[i].path), cfg.shot_threshold);
  });
  std::size_t total = 0;
  for (std::size_t i = 0; i < videos.size(); ++i) {
    run.emit(shots_file(videos[i].id), write_shot_csv(shots[i]));
    total += shots[i].shot_count();
  }
  run.commit();
  return {true, "segment: " + std::to_string(videos.size()) + " videos, " +
                    std::to_string(total) + " shots"};
}

StageResult extract(const PipelineConfig& cfg, const ArtifactCache& cache) {
  const auto seg = cache.require("segment");
  const auto videos = list_videos(cfg.videos);
  StageRun run(cache, "extract", cfg.seed);
  run.upstream("segment");
  for (const auto& v : videos) {
    const std::string name = "video/" + std::to_string(v.id);
    const auto digest = digest_path(v.path);
    const auto it = seg.inputs.find(name);
    if (it == seg.inputs.end() || it->second != digest) {
      fail(ErrorKind::StaleCache, "segment output does not match " + v.path.string() +
                                      "; rerun segment with --force");
    }
    run.input(name, digest);
  }
  if (!cfg.embeddings.empty()) {
    run.input("embeddings", sha256_file(require_path(cfg.embeddings, "--embeddings")));
  }
  if (run.up_to_date(cfg.force)) return up_to_date_result("extract");

  std::vector<std::vector<int>> keyframes(videos.size());
  for (std::size_t i = 0; i < videos.size(); ++i) {
    keyframes[i] = parse_shot_csv(text_of(cache.stage_dir("segment") / shots_file(videos[i].id)))
                       .keyframes;
  }
  std::vector<std::vector<FeatureRecord>> per_movie(videos.size());
  parallel_for(videos.size(), cfg.jobs, [&](std::size_t i) {
    const auto stream = load_video(videos[i].path);
    for (int k : keyframes[i]) {
      if (k < 0 || static_cast<std::size_t>(k) >= stream.frames.size()) {
        fail(ErrorKind::StaleCache, "keyframe " + std::to_string(k) + " outside movie " +
                                        std::to_string(videos[i].id));
      }
      per_movie[i].push_back({videos[i].id, k, mpeg7_all(stream.frames[k])});
    }
  });
  std::vector<FeatureRecord> records;
  KeyframeManifest manifest;
  for (std::size_t i = 0; i < videos.size(); ++i) {
    for (auto& r : per_movie[i]) {
      manifest.emplace(r.movie_id, r.keyframe);
      records.push_back(std::move(r));
    }
  }
  run.emit_features("mpeg7_keyframes.csv", records);
  run.emit("keyframes.csv", write_keyframe_manifest(manifest));

  std::string summary = "extract: " + std::to_string(records.size()) + " keyframes";
  if (!cfg.embeddings.empty()) {
    const auto table = load_embeddings(cfg.embeddings, manifest);
    std::vector<FeatureRecord> dnn;
    for (const auto& [key, vec] : table.entries()) dnn.push_back({key.first, key.second, vec});
    run.emit_features("dnn_keyframes.csv", dnn);
    summary += ", DNN embeddings cover all of them";
  }
  run.commit();
  return {true, summary};
}

std::vector<FeatureRecord> aggregate_movies(const std::vector<FeatureRecord>& keyframes,
                                            AggregationKind kind, int jobs) {
  std::map<std::int64_t, std::vector<FeatureVector>> groups;
  for (const auto& r : keyframes) groups[r.movie_id].push_back(r.vector);
  std::vector<std::pair<std::int64_t, std::vector<FeatureVector>>> ordered(groups.begin(),
                                                                          groups.end());
  std::vector<FeatureRecord> out(ordered.size());
  parallel_for(ordered.size(), jobs, [&](std::size_t i) {
    out[i] = {ordered[i].first, kMovieLevel, aggregate(ordered[i].second, kind)};
  });
  return out;
}

StageResult aggregate_stage(const PipelineConfig& cfg, const ArtifactCache& cache) {
  const auto ext = cache.require("extract");
  StageRun run(cache, "aggregate", cfg.seed);
  run.upstream("extract");
  run.param("mpeg7", std::string(to_string(cfg.mpeg7_aggregation)));
  const bool dnn = ext.outputs.contains("dnn_keyframes.csv");
  if (dnn) run.param("dnn", std::string(to_string(cfg.dnn_aggregation)));
  if (run.up_to_date(cfg.force)) return up_to_date_result("aggregate");

  const auto dir = cache.stage_dir("extract");
  const auto mpeg7 = aggregate_movies(load_features(dir / "mpeg7_keyframes.csv"),
                                      cfg.mpeg7_aggregation, cfg.jobs);
  run.emit_features("mpeg7.csv", mpeg7);
  if (dnn) {
    run.emit_features("dnn.csv", aggregate_movies(load_features(dir / "dnn_keyframes.csv"),
                                                  cfg.dnn_aggregation, cfg.jobs));
  }
  run.commit();
  return {true, "aggregate: " + std::to_string(mpeg7.size()) + " movies"};
}

Eigen::MatrixXd stack(const std::vector<FeatureRecord>& records) {
  if (records.empty()) return {};
  Eigen::MatrixXd out(static_cast<Eigen::Index>(records.size()),
                      static_cast<Eigen::Index>(records.front().vector.size()));
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& v = records[i].vector.values();
    for (std::size_t j = 0; j < v.size(); ++j) out(Eigen::Index(i), Eigen::Index(j)) = v[j];
  }
  return out;
}

StageResult fuse_stage(const PipelineConfig& cfg, const ArtifactCache& cache) {
  const auto agg = cache.require("aggregate");
  if (!agg.outputs.contains("dnn.csv")) {
    fail(ErrorKind::Dependency,
         "fuse needs DNN vectors: run extract with --embeddings, then aggregate");
  }
  StageRun run(cache, "fuse", cfg.seed);
  run.upstream("aggregate");
  run.param("components", std::to_string(cfg.cca_components));
  run.param("ridge", cfg.cca_ridge < 0 ? "default" : fmt(cfg.cca_ridge));
  if (!cfg.ratings.empty()) run.input("ratings", sha256_file(require_path(cfg.ratings, "--ratings")));
  if (run.up_to_date(cfg.force)) return up_to_date_result("fuse");

  const auto dir = cache.stage_dir("aggregate");
  const auto x = load_features(dir / "mpeg7.csv");
  const auto y = load_features(dir / "dnn.csv");
  if (x.size() != y.size() ||
      !std::equal(x.begin(), x.end(), y.begin(),
                  [](const auto& a, const auto& b) { return a.movie_id == b.movie_id; })) {
    fail(ErrorKind::Alignment, "MPEG-7 and DNN vectors cover different movies");
  }
  // Fit on movies with ratings; the rest (cold items) are only projected.
  std::vector<FeatureRecord> fit_x = x, fit_y = y;
  if (!cfg.ratings.empty()) {
    std::set<std::int64_t> rated;
    for (const auto& r : parse_ratings_csv(text_of(cfg.ratings))) rated.insert(r.movie_id);
    fit_x.clear();
    fit_y.clear();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!rated.contains(x[i].movie_id)) continue;
      fit_x.push_back(x[i]);
      fit_y.push_back(y[i]);
    }
  }
  const Eigen::MatrixXd xm = stack(fit_x), ym = stack(fit_y);
  const double ridge =
      cfg.cca_ridge < 0 ? std::max(default_ridge(xm), default_ridge(ym)) : cfg.cca_ridge;
  const CcaModel model = fit_cca(xm, ym, cfg.cca_components, ridge);
  std::vector<FeatureRecord> fused;
  for (std::size_t i = 0; i < x.size(); ++i) {
    fused.push_back({x[i].movie_id, kMovieLevel,
                     fuse(model, x[i].vector.values(), y[i].vector.values())});
  }
  run.emit_features("fused.csv", fused);
  run.emit("cca.bin", write_cca_model(model));
  run.commit();
  return {true, "fuse: " + std::to_string(model.k) + " canonical pairs fit on " +
                    std::to_string(fit_x.size()) + " movies, ridge " + fmt(ridge)};
}

StageResult textfeat_stage(const PipelineConfig& cfg, const ArtifactCache& cache,
                           std::ostream& out) {
  StageRun run(cache, "textfeat", cfg.seed);
  run.input("movies", sha256_file(require_path(cfg.movies, "--movies")));
  run.input("tags", sha256_file(require_path(cfg.tags, "--tags")));
  run.param("lsa_rank", std::to_string(cfg.lsa_rank));
  if (run.up_to_date(cfg.force)) return up_to_date_result("textfeat");

  const auto catalog = parse_movies_csv(text_of(cfg.movies));
  const auto genres = build_genre_matrix(catalog);
  run.emit_features("genre.csv", to_records(FeatureKind::Genre, genres.movie_ids, genres.values));

  const auto lsa = fit_tag_lsa(tag_assignments(parse_tags_csv(text_of(cfg.tags))), cfg.lsa_rank);
  if (lsa.factors.truncated) {
    out << "textfeat: warning: LSA rank reduced from " << cfg.lsa_rank << " to "
        << lsa.factors.k << " (numerical rank of the tag matrix)\n";
  }
  run.emit_features("tag_lsa.csv",
                    to_records(FeatureKind::TagLsa, lsa.movie_ids, lsa.factors.item_factors));
  run.commit();
  return {true, "textfeat: " + std::to_string(genres.movie_ids.size()) + " genre rows, " +
                    std::to_string(lsa.movie_ids.size()) + " tag-LSA rows (k=" +
                    std::to_string(lsa.factors.k) + ")"};
}

struct FeatureSource {
  std::string stage;
  std::string file;
};

FeatureSource feature_source(FeatureFamily family) {
  switch (family) {
    case FeatureFamily::Mpeg7: return {"aggregate", "mpeg7.csv"};
    case FeatureFamily::Dnn: return {"aggregate", "dnn.csv"};
    case FeatureFamily::Fused: return {"fuse", "fused.csv"};
    case FeatureFamily::Genre: return {"textfeat", "genre.csv"};
    case FeatureFamily::TagLsa: return {"textfeat", "tag_lsa.csv"};
  }
  return {};
}

std::string train_stage_name(FeatureFamily f) { return "train/" + std::string(to_string(f)); }
std::string eval_stage_name(FeatureFamily f) { return "evaluate/" + std::string(to_string(f)); }

/// Items are the movies with a feature vector of the family, in ascending
/// id order; ratings of other movies are dropped.
struct TrainingData {
  IdIndex items;
  IdIndex users;
  InteractionMatrix ratings;
  FeatureMatrix features;
  std::size_t dropped = 0;
};

TrainingData load_training_data(const PipelineConfig& cfg, const ArtifactCache& cache) {
  const auto src = feature_source(cfg.features);
  const auto upstream = cache.require(src.stage);
  if (!upstream.outputs.contains(src.file)) {
    fail(ErrorKind::Dependency, "stage '" + src.stage + "' did not produce " + src.file +
                                    " (dnn and fused features need --embeddings at extract)");
  }
  auto records = load_features(cache.stage_dir(src.stage) / src.file);
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.movie_id < b.movie_id; });

  TrainingData data;
  std::vector<std::int64_t> movie_ids;
  for (const auto& r : records) movie_ids.push_back(r.movie_id);
  data.items = IdIndex(movie_ids);
  if (data.items.size() != static_cast<int>(records.size())) {
    fail(ErrorKind::Duplicate, "feature file lists a movie twice");
  }
  data.features.family = records.empty() ? FeatureKind::Mpeg7All : records.front().vector.kind();
  data.features.values = stack(records);

  const auto rows = parse_ratings_csv(text_of(require_path(cfg.ratings, "--ratings")));
  std::vector<std::int64_t> user_ids;
  for (const auto& r : rows) {
    if (data.items.find(r.movie_id) >= 0) user_ids.push_back(r.user_id);
  }
  data.users = IdIndex(user_ids);
  std::vector<Rating> entries;
  for (const auto& r : rows) {
    const int item = data.items.find(r.movie_id);
    if (item < 0) {
      ++data.dropped;
      continue;
    }
    entries.push_back({data.users.find(r.user_id), item, r.rating, r.timestamp});
  }
  data.ratings = InteractionMatrix(data.users.size(), data.items.size(), std::move(entries));
  return data;
}

TrainConfig seeded(const PipelineConfig& cfg) {
  TrainConfig t = cfg.train;
  t.seed = cfg.seed;
  return t;
}

void train_params(StageRun& run, const PipelineConfig& cfg) {
  const TrainConfig t = seeded(cfg);
  run.param("features", std::string(to_string(cfg.features)));
  run.param("alpha", fmt(t.alpha));
  run.param("gamma", fmt(t.gamma));
  run.param("learning_rate", fmt(t.learning_rate));
  run.param("epochs", std::to_string(t.epochs));
  run.param("relevance_threshold", fmt(t.relevance_threshold));
  run.param("samples_per_epoch", std::to_string(t.samples_per_epoch));
  run.param("feature_steps", std::to_string(t.feature_steps));
  run.param("seed", std::to_string(t.seed));
}

StageResult train_stage(const PipelineConfig& cfg, const ArtifactCache& cache,
                        std::ostream& out) {
  const auto src = feature_source(cfg.features);
  StageRun run(cache, train_stage_name(cfg.features), cfg.seed);
  run.upstream(src.stage);
  run.input("ratings", sha256_file(require_path(cfg.ratings, "--ratings")));
  train_params(run, cfg);
  if (run.up_to_date(cfg.force)) return up_to_date_result(train_stage_name(cfg.features));

  const auto data = load_training_data(cfg, cache);
  if (data.dropped > 0) {
    out << "train: dropped " << data.dropped << " ratings of movies without "
        << to_string(cfg.features) << " features\n";
  }
  const auto model = train_collective_slim(data.ratings, data.features, seeded(cfg));
  run.emit("model.bin", write_checkpoint(model));
  std::string loss = "epoch,loss\n";
  for (std::size_t e = 0; e < model.epoch_loss.size(); ++e) {
    loss += std::to_string(e + 1) + "," + fmt(model.epoch_loss[e]) + "\n";
  }
  run.emit("loss.csv", loss);
  std::string items = "index,movie_id\n";
  for (int i = 0; i < data.items.size(); ++i) {
    items += std::to_string(i) + "," + std::to_string(data.items.id(i)) + "\n";
  }
  run.emit("items.csv", items);
  run.commit();
  return {true, "train: " + std::to_string(data.items.size()) + " items, " +
                    std::to_string(data.users.size()) + " users, final loss " +
                    fmt(model.epoch_loss.back())};
}

StageResult evaluate_stage(const PipelineConfig& cfg, const ArtifactCache& cache,
                           std::ostream& out) {
  const auto src = feature_source(cfg.features);
  StageRun run(cache, eval_stage_name(cfg.features), cfg.seed);
  run.upstream(train_stage_name(cfg.features));
  run.upstream(src.stage);
  run.input("ratings", sha256_file(require_path(cfg.ratings, "--ratings")));
  train_params(run, cfg);
  run.param("folds", std::to_string(cfg.folds));
  std::string cutoffs;
  for (int n : cfg.cutoffs) cutoffs += (cutoffs.empty() ? "" : " ") + std::to_string(n);
  run.param("cutoffs", cutoffs);

  auto publish = [&](const std::string& table) {
    out << table;
    if (!cfg.report.empty()) {
      fs::copy_file(cache.stage_dir(eval_stage_name(cfg.features)) / "report.csv", cfg.report,
                    fs::copy_options::overwrite_existing);
    }
  };
  if (run.up_to_date(cfg.force)) {
    publish(text_of(run.dir() / "report.txt"));
    return up_to_date_result(eval_stage_name(cfg.features));
  }

  const auto data = load_training_data(cfg, cache);
  const TrainConfig tc = seeded(cfg);
  EvalOptions options;
  options.folds = cfg.folds;
  options.seed = cfg.seed;
  options.cutoffs = cfg.cutoffs;
  options.relevance_threshold = tc.relevance_threshold;
  const auto report = cross_validate(
      data.ratings,
      [&](const InteractionMatrix& train) {
        return train_collective_slim(train, data.features, tc);
      },
      options);
  const std::string table = "features: " + std::string(to_string(cfg.features)) + "\n" +
                            report.to_table();
  run.emit("report.csv", report.to_csv());
  run.emit("report.txt", table);
  run.commit();
  publish(table);
  return {true, eval_stage_name(cfg.features) + ": " + std::to_string(cfg.folds) + " folds"};
}

StageResult recommend_stage(const PipelineConfig& cfg, const ArtifactCache& cache,
                            std::ostream& out) {
  const auto name = train_stage_name(cfg.features);
  const auto trained = cache.require(name);
  if (!cache.outputs_intact(trained)) {
    fail(ErrorKind::StaleCache, "model under " + cache.stage_dir(name).string() +
                                    " was modified; rerun train with --force");
  }
  const auto data = load_training_data(cfg, cache);
  const auto model = parse_checkpoint(read_file(cache.stage_dir(name) / "model.bin"));
  if (model.n_items() != data.items.size()) {
    fail(ErrorKind::StaleCache, "model was trained on a different catalog; rerun train");
  }
  const int user = data.users.find(cfg.user);
  if (user < 0) fail(ErrorKind::MissingUser, "user " + std::to_string(cfg.user) + " has no ratings");
  const auto scores = score(model, data.ratings, user);
  const auto top = recommend(model, data.ratings, user, cfg.top_n);
  out << "rank,movie_id,score\n";
  for (std::size_t r = 0; r < top.size(); ++r) {
    out << r + 1 << "," << data.items.id(top[r]) << "," << fmt(scores[top[r]]) << "\n";
  }
  return {true, "recommend: " + std::to_string(top.size()) + " items for user " +
                    std::to_string(cfg.user)};
}

}  // namespace

StageResult run_stage(Stage stage, const PipelineConfig& config, std::ostream& out) {
  config.validate();
  const ArtifactCache cache(config.cache);
  switch (stage) {
    case Stage::Segment: return segment(config, cache);
    case Stage::Extract: return extract(config, cache);
    case Stage::Aggregate: return aggregate_stage(config, cache);
    case Stage::Fuse: return fuse_stage(config, cache);
    case Stage::Textfeat: return textfeat_stage(config, cache, out);
    case Stage::Train: return train_stage(config, cache, out);
    case Stage::Evaluate: return evaluate_stage(config, cache, out);
    case Stage::Recommend: return recommend_stage(config, cache, out);
  }
  fail(ErrorKind::Parameter, "unknown stage");
}

void run_all(const PipelineConfig& config, std::ostream& out) {
  std::vector<Stage> stages = {Stage::Segment, Stage::Extract, Stage::Aggregate};
  if (!config.embeddings.empty()) stages.push_back(Stage::Fuse);
  stages.insert(stages.end(), {Stage::Textfeat, Stage::Train, Stage::Evaluate});
  for (Stage s : stages) out << run_stage(s, config, out).summary << "\n";
}

}  // namespace mise
