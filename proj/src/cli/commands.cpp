//
// Copyright 2026 The synaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cli/report.hpp"
#include "synaudit/classifier.hpp"
#include "synaudit/conditioning.hpp"
#include "synaudit/error.hpp"
#include "synaudit/random.hpp"

namespace synaudit::cli {
namespace fs = std::filesystem;
namespace {

constexpr const char* kRealSplits[] = {"train", "val", "test"};

nlohmann::json envelope(const AuditConfig& config) {
  return {{"version", SYNAUDIT_VERSION}, {"config", to_json(config)}};
}

LabeledDataset load_split(const AuditConfig& config, const std::string& split) {
  const fs::path stem = config.data.stem(split);
  LabeledDataset ds = load_dataset(fs::path(stem.string() + ".npy"),
                                   fs::path(stem.string() + ".csv"), split);
  const Origin expected = parse_origin(split);
  for (const auto& s : ds.samples()) {
    if (s.origin != expected) {
      throw Error(ErrorCode::kOriginMismatch,
                  "sample " + s.id + " in the " + split + " split has origin " +
                      std::string(to_string(s.origin)));
    }
  }
  const ValidationReport report = validate_dataset(
      ds, config.strict_shape ? std::optional<ImageShape>(kVertebralUnitShape)
                              : std::nullopt);
  if (!report.ok()) {
    const Violation& v = report.violations.front();
    const ErrorCode code =
        v.kind == ViolationKind::kWrongShape ? ErrorCode::kShapeMismatch
                                             : ErrorCode::kInvalidArgument;
    throw Error(code, fmt::format("{} split: {} violation(s), first is {} in sample {}",
                                  split, report.violations.size(), to_string(v.kind),
                                  v.sample_id));
  }
  return ds;
}

EmbeddingModel obtain_embedding(const AuditConfig& config, const RealAndSynthetic& data) {
  if (!config.embedding.model.empty()) {
    EmbeddingModel model = load_embedding(config.embedding.model);
    if (model.input_dim() != data.train.shape().flat_size()) {
      throw Error(ErrorCode::kShapeMismatch, "saved embedding expects a different shape");
    }
    return model;
  }
  return fit_configured_embedding(config, data);
}

void write_coords(const fs::path& path, const EmbeddingModel& model,
                  const LabeledDataset& ds) {
  const Eigen::MatrixXd coords = model.transform(ds);
  const Eigen::Index axes = std::min<Eigen::Index>(2, coords.cols());
  Row header{"id", "origin", "label"};
  const char* names[] = {"x", "y"};
  for (Eigen::Index a = 0; a < axes; ++a) header.emplace_back(names[a]);
  std::vector<Row> rows;
  rows.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    Row row{ds[i].id, std::string(to_string(ds[i].origin)),
            std::string(to_string(ds[i].label))};
    for (Eigen::Index a = 0; a < axes; ++a) {
      row.push_back(num(coords(static_cast<Eigen::Index>(i), a)));
    }
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

void embed_outputs(const AuditConfig& config, const RealAndSynthetic& data,
                   const EmbeddingModel& model, const fs::path& out) {
  fs::create_directories(out);
  save_embedding(model, out / "model");
  write_coords(out / "coords_train.csv", model, data.train);
  write_coords(out / "coords_val.csv", model, data.val);
  write_coords(out / "coords_test.csv", model, data.test);
  write_coords(out / "coords_synthetic.csv", model, data.synthetic);
  nlohmann::json report = envelope(config);
  report["dim"] = model.dim();
  report["input_shape"] = to_string(model.input_shape());
  const Eigen::VectorXd ratio = model.explained_variance_ratio();
  report["explained_variance_ratio"] = std::vector<double>(ratio.data(), ratio.data() + ratio.size());
  report["total_variance"] = model.total_variance();
  write_json(out / "embed.json", report);
}

void attack_outputs(const AuditConfig& config, const RealAndSynthetic& data,
                    const EmbeddingModel* model, const CandidateSet& candidates,
                    AttackKind kind, Space space, std::optional<double> percentile,
                    const fs::path& out) {
  fs::create_directories(out);
  nlohmann::json report = envelope(config);
  report["kind"] = std::string(to_string(kind));
  report["space"] = std::string(to_string(space));
  report["n_candidates"] = candidates.size();
  report["n_synthetic"] = data.synthetic.size();

  std::vector<double> scores;
  Direction direction;
  const std::vector<Origin> origins = candidates.origins();
  if (kind == AttackKind::kPairwise) {
    const PairwiseReport pw = min_distances(candidates, data.synthetic, space, model,
                                            config.workers);
    scores = pw.scores();
    direction = Direction::kSmallestFirst;
    const auto ranks = attack_ranks(scores, direction);
    std::vector<Row> rows;
    for (std::size_t i = 0; i < pw.records.size(); ++i) {
      const auto& r = pw.records[i];
      rows.push_back({r.id, std::string(to_string(r.origin)), num(r.min_distance),
                      data.synthetic[r.nearest_synthetic_index].id, num(ranks[i])});
    }
    write_csv(out / "candidates.csv",
              {"id", "origin", "min_distance", "nearest_synthetic", "rank"}, rows);

    const Origin reference = parse_origin(config.attack.anomaly_reference);
    const auto flags = anomaly_flags(pw, reference, config.attack.anomaly_percentile);
    std::vector<Row> flag_rows;
    std::map<std::string, std::pair<std::size_t, std::size_t>> rate;  // flagged, total
    for (std::size_t i = 0; i < flags.size(); ++i) {
      const std::string origin(to_string(pw.records[i].origin));
      flag_rows.push_back({pw.records[i].id, origin, num(pw.records[i].min_distance),
                           flags[i] ? "1" : "0"});
      rate[origin].first += flags[i] ? 1 : 0;
      rate[origin].second += 1;
    }
    write_csv(out / "anomaly_flags.csv", {"id", "origin", "min_distance", "flagged"},
              flag_rows);
    nlohmann::json rates = nlohmann::json::object();
    for (const auto& [origin, c] : rate) {
      rates[origin] = static_cast<double>(c.first) / static_cast<double>(c.second);
    }
    report["anomaly"] = {{"reference", config.attack.anomaly_reference},
                         {"percentile", config.attack.anomaly_percentile},
                         {"flag_rate", rates}};
  } else {
    const double p = percentile.value_or(space == Space::kPixel
                                             ? config.attack.pixel_percentile
                                             : config.attack.embedding_percentile);
    const double threshold = neighbor_threshold(candidates, data.synthetic, p, space,
                                                model, config.workers);
    const DistributionReport dr = cluster_sizes(candidates, data.synthetic, threshold,
                                                space, model, config.workers);
    scores = dr.scores();
    direction = Direction::kLargestFirst;
    std::vector<Row> rows;
    for (const auto& r : dr.records) {
      rows.push_back({r.id, std::string(to_string(r.origin)), num(r.neighbor_count),
                      num(r.cluster_rank)});
    }
    write_csv(out / "candidates.csv", {"id", "origin", "neighbor_count", "cluster_rank"},
              rows);
    report["percentile"] = p;
    report["threshold"] = threshold;
  }

  const CutoffTable table = cutoff_table(scores, origins, config.attack.cutoffs, direction);
  write_cutoff_csv(out / "cutoff_table.csv", table);
  write_cutoff_csv(out / "cutoff_curve.csv", cutoff_curve(scores, origins, direction));
  report["cutoff_table"] = to_json(table);
  report["auc"] = {
      {"train_vs_val", attack_auc(scores, origins, Origin::kTrain, Origin::kVal, direction)},
      {"train_vs_test",
       attack_auc(scores, origins, Origin::kTrain, Origin::kTest, direction)}};
  write_json(out / "attack.json", report);
}

CandidateSet make_candidates(const AuditConfig& config, const RealAndSynthetic& data) {
  return build_candidate_set(data.train, data.val, data.test, config.attack.per_origin,
                             derive_seed(config.seed, "candidates"));
}

DiversityReport diversity_outputs(const AuditConfig& config, const RealAndSynthetic& data,
                                  const EmbeddingModel& model, const fs::path& out) {
  DiversityConfig dc;
  dc.train = config.classifier;
  dc.train.seed = derive_seed(config.seed, "classifier");
  dc.n_resamples = config.bootstrap.n_resamples;
  dc.alpha = config.bootstrap.alpha;
  dc.bootstrap_seed = derive_seed(config.seed, "bootstrap");
  dc.workers = config.workers;
  const DiversityReport r = diversity_audit(data.train, data.synthetic, data.test, model, dc);

  fs::create_directories(out);
  nlohmann::json report = envelope(config);
  report["backbone"] = r.backbone;
  report["f_real"] = to_json(r.f_real);
  report["f_synth"] = to_json(r.f_synth);
  report["auc_gap"] = r.auc_gap;
  report["n_test"] = data.test.size();
  write_json(out / "report.json", report);
  const std::pair<const char*, const ClassifierEvaluation*> evals[] = {
      {"f_real", &r.f_real}, {"f_synth", &r.f_synth}};
  for (const auto& [name, eval] : evals) {
    for (std::size_t k = 0; k < eval->per_class_roc.size(); ++k) {
      write_roc_csv(out / fmt::format("roc_{}_{}.csv", name, to_string(label_from_index(k))),
                    eval->per_class_roc[k]);
    }
    write_roc_csv(out / fmt::format("roc_{}_macro.csv", name), eval->macro_roc);
  }
  return r;
}

ImageShape parse_shape(const std::string& text) {
  std::size_t dims[3] = {0, 0, 0};
  std::size_t part = 0;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  while (part < 3) {
    const auto [next, ec] = std::from_chars(p, end, dims[part]);
    if (ec != std::errc() || dims[part] == 0) break;
    ++part;
    p = next;
    if (part < 3) {
      if (p == end || *p != 'x') break;
      ++p;
    }
  }
  if (part != 3 || p != end) {
    throw Error(ErrorCode::kInvalidConfig, "shape must look like 9x16x16, got '" + text + "'");
  }
  return {dims[0], dims[1], dims[2]};
}

}  // namespace

std::string_view to_string(AttackKind kind) {
  return kind == AttackKind::kPairwise ? "pairwise" : "distribution";
}

AttackKind parse_attack_kind(std::string_view token) {
  if (token == "pairwise") return AttackKind::kPairwise;
  if (token == "distribution") return AttackKind::kDistribution;
  throw Error(ErrorCode::kInvalidConfig, "attack kind '" + std::string(token) + "'");
}

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (error_category(err->code())) {
      case ErrorCategory::kValidation:
        return kExitValidation;
      case ErrorCategory::kIo:
        return kExitIo;
      case ErrorCategory::kInternal:
        return kExitInternal;
    }
  }
  if (dynamic_cast<const fs::filesystem_error*>(&e) != nullptr) return kExitIo;
  return kExitInternal;
}

RealAndSynthetic load_inputs(const AuditConfig& config) {
  RealAndSynthetic d;
  d.train = load_split(config, "train");
  d.val = load_split(config, "val");
  d.test = load_split(config, "test");
  d.synthetic = load_split(config, "synthetic");
  const ImageShape shape = d.train.shape();
  for (const LabeledDataset* ds : {&d.val, &d.test, &d.synthetic}) {
    if (ds->shape() != shape) {
      throw Error(ErrorCode::kShapeMismatch,
                  ds->name() + " split is " + to_string(ds->shape()) + ", train is " +
                      to_string(shape));
    }
  }
  return d;
}

EmbeddingModel fit_configured_embedding(const AuditConfig& config,
                                        const RealAndSynthetic& data) {
  const std::map<std::string, const LabeledDataset*> splits{
      {"train", &data.train}, {"val", &data.val}, {"test", &data.test}};
  for (const auto& [split, count] : config.embedding.fit_subset) {
    if (split == "synthetic") {
      throw Error(ErrorCode::kSyntheticContamination,
                  "the embedding must be fit on real data only");
    }
    if (!splits.contains(split)) {
      throw Error(ErrorCode::kInvalidConfig, "unknown fit_subset split '" + split + "'");
    }
  }
  std::vector<ImageSample> samples;
  for (const char* split : kRealSplits) {
    auto it = config.embedding.fit_subset.find(split);
    if (it == config.embedding.fit_subset.end() || it->second == 0) continue;
    const LabeledDataset& ds = *splits.at(split);
    if (it->second >= ds.size()) {
      samples.insert(samples.end(), ds.samples().begin(), ds.samples().end());
      continue;
    }
    Rng rng(derive_seed(config.seed, std::string("fit-subset/") + split));
    auto picked = sample_without_replacement(ds.size(), it->second, rng);
    std::sort(picked.begin(), picked.end());
    for (std::size_t i : picked) samples.push_back(ds[i]);
  }
  if (samples.empty()) throw Error(ErrorCode::kEmptyInput, "fit_subset selects no samples");
  return fit_embedding(samples, config.embedding.dim, derive_seed(config.seed, "embedding"),
                       config.workers);
}

void cmd_fixture(const FixtureSpec& spec, const fs::path& out) {
  const Fixture f = make_fixture(spec);
  save_fixture(f, out);
  nlohmann::json report{{"version", SYNAUDIT_VERSION},
                        {"kind", std::string(to_string(spec.kind))},
                        {"train", f.train.size()},
                        {"val", f.val.size()},
                        {"test", f.test.size()},
                        {"synthetic", f.synthetic.size()},
                        {"epsilon", spec.epsilon},
                        {"shape", to_string(spec.shape)},
                        {"world_rank", spec.world_rank},
                        {"shuffle_labels", spec.shuffle_labels},
                        {"seed", spec.seed}};
  write_json(out / "fixture.json", report);
}

void cmd_embed(const AuditConfig& config, const fs::path& out) {
  config.validate();
  const RealAndSynthetic data = load_inputs(config);
  const EmbeddingModel model = fit_configured_embedding(config, data);
  embed_outputs(config, data, model, out);
}

void cmd_attack(const AuditConfig& config, AttackKind kind, Space space,
                std::optional<double> percentile, const fs::path& out) {
  config.validate();
  if (percentile && !(*percentile > 0.0 && *percentile < 100.0)) {
    throw Error(ErrorCode::kInvalidConfig, "percentile must lie in (0, 100)");
  }
  const RealAndSynthetic data = load_inputs(config);
  std::optional<EmbeddingModel> model;
  if (space == Space::kEmbedding) model = obtain_embedding(config, data);
  const CandidateSet candidates = make_candidates(config, data);
  attack_outputs(config, data, model ? &*model : nullptr, candidates, kind, space,
                 percentile, out);
}

void cmd_diversity(const AuditConfig& config, const fs::path& out) {
  config.validate();
  const RealAndSynthetic data = load_inputs(config);
  const EmbeddingModel model = obtain_embedding(config, data);
  diversity_outputs(config, data, model, out);
}

void cmd_morph(const AuditConfig& config, const MorphOptions& options,
               const fs::path& out) {
  const MorphSchedule schedule =
      morph_schedule(static_cast<std::size_t>(label_index(options.from)),
                     static_cast<std::size_t>(label_index(options.to)), options.steps);
  std::unique_ptr<Generator> generator;
  if (options.generator == "private") {
    generator = std::make_unique<ToyPrivateGenerator>(
        options.shape, derive_seed(config.seed, "world"), options.rank);
  } else if (options.generator == "leaky") {
    generator = std::make_unique<ToyLeakyGenerator>(
        load_split(config, "train"), options.epsilon,
        derive_seed(config.seed, "leaky-generator"));
  } else {
    throw Error(ErrorCode::kInvalidConfig,
                "generator must be private or leaky, got '" + options.generator + "'");
  }
  const LatentVector z = sample_latent(derive_seed(config.seed, "morph"));
  std::vector<ImageSample> images;
  std::vector<std::string> provenance;
  std::vector<Row> rows;
  for (std::size_t t = 0; t < schedule.steps.size(); ++t) {
    const ConditionVector& c = schedule.steps[t];
    images.push_back(generate(*generator, z, c, fmt::format("morph-{:03d}", t)));
    provenance.push_back(generator->provenance(z, c));
    Row row{num(t)};
    for (double w : c.weights) row.push_back(num(w));
    rows.push_back(std::move(row));
  }
  fs::create_directories(out);
  write_csv(out / "schedule.csv", {"t", "cervical", "thoracic", "lumbar"}, rows);
  const LabeledDataset ds("morph", generator->shape(), std::move(images));
  save_dataset(ds, out / "images.npy", out / "images.csv", provenance);
  nlohmann::json report = envelope(config);
  report["morph"] = {{"from", std::string(to_string(options.from))},
                     {"to", std::string(to_string(options.to))},
                     {"steps", options.steps},
                     {"generator", options.generator},
                     {"shape", to_string(generator->shape())}};
  if (options.generator == "private") report["morph"]["rank"] = options.rank;
  if (options.generator == "leaky") report["morph"]["epsilon"] = options.epsilon;
  write_json(out / "morph.json", report);
}

void cmd_audit(const AuditConfig& config, const fs::path& out) {
  config.validate();
  const RealAndSynthetic data = load_inputs(config);
  const EmbeddingModel model = obtain_embedding(config, data);
  embed_outputs(config, data, model, out / "embedding");
  const CandidateSet candidates = make_candidates(config, data);
  nlohmann::json summary = envelope(config);
  for (AttackKind kind : {AttackKind::kPairwise, AttackKind::kDistribution}) {
    for (Space space : {Space::kPixel, Space::kEmbedding}) {
      const std::string name = fmt::format("{}_{}", to_string(kind), to_string(space));
      attack_outputs(config, data, &model, candidates, kind, space, std::nullopt,
                     out / "attack" / name);
    }
  }
  const DiversityReport r = diversity_outputs(config, data, model, out / "diversity");
  summary["auc_gap"] = r.auc_gap;
  summary["stages"] = {"embedding", "attack", "diversity"};
  write_json(out / "audit.json", summary);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Privacy and diversity audit for synthetic image datasets", "synaudit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SYNAUDIT_VERSION);

  struct Common {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string data_dir;
    std::size_t dim = 0;
    std::size_t resamples = 0;
    double alpha = 0.0;
    std::string cutoffs;
    unsigned workers = 1;
    bool strict_shape = false;
    std::string out = "synaudit_out";
  };
  Common common;
  std::map<CLI::App*, std::map<std::string, CLI::Option*>> opts;
  auto add_common = [&](CLI::App* sub) {
    auto& o = opts[sub];
    o["config"] = sub->add_option("--config", common.config_path, "TOML configuration file");
    o["seed"] = sub->add_option("--seed", common.seed, "Root seed");
    o["data"] = sub->add_option("--data", common.data_dir, "Directory holding the splits");
    o["dim"] = sub->add_option("--dim", common.dim, "Embedding dimension");
    o["resamples"] = sub->add_option("--resamples", common.resamples, "Bootstrap resamples");
    o["alpha"] = sub->add_option("--alpha", common.alpha, "Bootstrap alpha");
    o["cutoffs"] = sub->add_option("--cutoffs", common.cutoffs, "Cut-offs, e.g. 50,333");
    o["workers"] = sub->add_option("--workers", common.workers, "Worker threads");
    o["strict"] = sub->add_flag("--strict-shape", common.strict_shape,
                                "Require 9x64x64 samples");
    sub->add_option("--out", common.out, "Output directory");
  };

  auto* fixture = app.add_subcommand("fixture", "Write a toy dataset with known ground truth");
  FixtureSpec spec;
  std::string fixture_kind = "private";
  std::string fixture_shape = "9x16x16";
  std::size_t synthetic = 0;
  fixture->add_option("--kind", fixture_kind, "private or leaky")
      ->check(CLI::IsMember({"private", "leaky"}));
  fixture->add_option("--seed", spec.seed, "Root seed");
  fixture->add_option("--train", spec.train, "Training samples");
  fixture->add_option("--val", spec.val, "Validation samples");
  fixture->add_option("--test", spec.test, "Test samples");
  auto* synthetic_opt =
      fixture->add_option("--synthetic", synthetic, "Synthetic samples (default 1.2x train)");
  fixture->add_option("--epsilon", spec.epsilon, "Leaky copy noise amplitude");
  fixture->add_option("--shape", fixture_shape, "Sample shape CxHxW");
  fixture->add_option("--rank", spec.world_rank, "Intrinsic dimension of the toy world");
  fixture->add_flag("--shuffle-labels", spec.shuffle_labels, "Permute synthetic labels");
  fixture->add_option("--out", common.out, "Output directory");

  auto* embed = app.add_subcommand("embed", "Fit the embedding and export coordinates");
  add_common(embed);

  auto* attack = app.add_subcommand("attack", "Run a membership-inference attack");
  add_common(attack);
  std::string kind = "pairwise";
  std::string space = "pixel";
  double percentile = 0.0;
  attack->add_option("--kind", kind, "pairwise or distribution")
      ->check(CLI::IsMember({"pairwise", "distribution"}));
  attack->add_option("--space", space, "pixel or embedding")
      ->check(CLI::IsMember({"pixel", "embedding"}));
  auto* percentile_opt =
      attack->add_option("--percentile", percentile, "Neighbour threshold percentile");

  auto* diversity = app.add_subcommand("diversity", "Train F_real and F_synth and compare");
  add_common(diversity);

  auto* morph = app.add_subcommand("morph", "Interpolate the class condition");
  add_common(morph);
  MorphOptions morph_options;
  std::string from = "cervical";
  std::string to = "lumbar";
  std::string morph_shape = "9x16x16";
  const CLI::IsMember kClassNames({"cervical", "thoracic", "lumbar"});
  morph->add_option("--from", from, "Source class")->check(kClassNames);
  morph->add_option("--to", to, "Target class")->check(kClassNames);
  morph->add_option("--steps", morph_options.steps, "Step count n");
  morph->add_option("--generator", morph_options.generator, "private or leaky")
      ->check(CLI::IsMember({"private", "leaky"}));
  morph->add_option("--shape", morph_shape, "Private generator shape CxHxW");
  morph->add_option("--rank", morph_options.rank, "Private generator rank");
  morph->add_option("--epsilon", morph_options.epsilon, "Leaky generator noise");

  auto* audit = app.add_subcommand("audit", "embed, attacks and diversity in one run");
  add_common(audit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub == fixture) {
      spec.kind = parse_fixture_kind(fixture_kind);
      spec.shape = parse_shape(fixture_shape);
      if (synthetic_opt->count() > 0) spec.synthetic = synthetic;
      cmd_fixture(spec, common.out);
      out << "fixture written to " << common.out << '\n';
      return kExitOk;
    }

    AuditConfig config;
    auto& o = opts[sub];
    if (o["config"]->count() > 0) config = load_config(common.config_path);
    if (o["seed"]->count() > 0) config.seed = common.seed;
    if (o["data"]->count() > 0) {
      config.data.dir = common.data_dir;
      config.data.stems.clear();
    }
    if (o["dim"]->count() > 0) config.embedding.dim = common.dim;
    if (o["resamples"]->count() > 0) config.bootstrap.n_resamples = common.resamples;
    if (o["alpha"]->count() > 0) config.bootstrap.alpha = common.alpha;
    if (o["cutoffs"]->count() > 0) config.attack.cutoffs = parse_cutoffs(common.cutoffs);
    if (o["workers"]->count() > 0) config.workers = common.workers;
    if (o["strict"]->count() > 0) config.strict_shape = true;

    if (sub == embed) {
      cmd_embed(config, common.out);
    } else if (sub == attack) {
      std::optional<double> p;
      if (percentile_opt->count() > 0) p = percentile;
      cmd_attack(config, parse_attack_kind(kind), parse_space(space), p, common.out);
    } else if (sub == diversity) {
      cmd_diversity(config, common.out);
    } else if (sub == morph) {
      morph_options.from = parse_label(from);
      morph_options.to = parse_label(to);
      morph_options.shape = parse_shape(morph_shape);
      cmd_morph(config, morph_options, common.out);
    } else {
      cmd_audit(config, common.out);
    }
    out << sub->get_name() << " written to " << common.out << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace synaudit::cli
