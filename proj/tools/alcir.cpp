#include <alcir/baselines.hpp>
#include <alcir/checkpoint.hpp>
#include <alcir/config.hpp>
#include <alcir/data.hpp>
#include <alcir/errors.hpp>
#include <alcir/evaluation.hpp>
#include <alcir/retrieval.hpp>
#include <alcir/synthetic.hpp>
#include <alcir/training.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace alcir;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

struct PreparedDataset {
  Catalog catalog;
  DatasetSplit split;
  ComplementaryCategoryMap cc_map;
};

PreparedDataset load_prepared(const RunConfig& cfg) {
  fs::path dir(cfg.data_dir);
  PreparedDataset ds;
  ds.catalog = load_prepared_catalog((dir / "catalog.csv").string(),
                                     (dir / "features_prepared.bin").string());
  ds.split.train = read_pairs_csv((dir / "pairs_train.csv").string(), ds.catalog);
  ds.split.validation = read_pairs_csv((dir / "pairs_validation.csv").string(), ds.catalog);
  ds.split.test = read_pairs_csv((dir / "pairs_test.csv").string(), ds.catalog);
  ds.cc_map = read_cc_map_csv((dir / "cc_map.csv").string(), ds.catalog);
  return ds;
}

int cmd_synth(const RunConfig& cfg) {
  SyntheticData data = generate_synthetic(cfg.synthetic_spec());

  for (const std::string& target : {cfg.items_csv, cfg.features_bin, cfg.recs_csv}) {
    fs::path parent = fs::path(target).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
  }
  write_items_csv(cfg.items_csv, data.catalog, false);
  write_features_bin(cfg.features_bin, data.catalog);

  {
    std::ofstream out = open_out(cfg.recs_csv);
    out << "item_id,recommended_id\n";
    for (const LabeledPair& pair : data.labeled_pairs) {
      out << data.catalog.items[pair.seed_item].item_id << ","
          << data.catalog.items[pair.target_item].item_id << "\n";
    }
  }
  {
    fs::path gt_path = fs::path(cfg.items_csv).parent_path() / "ground_truth.csv";
    std::ofstream out = open_out(gt_path);
    out << "item_id,complement_id\n";
    for (std::size_t i = 0; i < data.ground_truth.size(); ++i) {
      for (std::size_t target : data.ground_truth[i]) {
        out << data.catalog.items[i].item_id << "," << data.catalog.items[target].item_id << "\n";
      }
    }
  }

  std::cout << "synthetic dataset: " << data.catalog.items.size() << " items, "
            << data.catalog.categories.size() << " categories, " << data.labeled_pairs.size()
            << " labeled pairs\n";
  std::cout << "wrote " << cfg.items_csv << ", " << cfg.features_bin << ", " << cfg.recs_csv
            << "\n";
  return 0;
}

int cmd_prepare(const RunConfig& cfg) {
  Catalog catalog = load_catalog(cfg.items_csv, cfg.features_bin);
  catalog = filter_rare_categories(std::move(catalog), cfg.min_items_per_category);
  catalog = discretize_prices(std::move(catalog), cfg.price_bins);

  PairBuildResult pairs = build_labeled_pairs(catalog, read_recs_csv(cfg.recs_csv));
  if (pairs.dropped_unresolved > 0 || pairs.dropped_same_category > 0) {
    std::cout << "dropped " << pairs.dropped_unresolved << " unresolved and "
              << pairs.dropped_same_category << " same-category raw rows\n";
  }

  DatasetSplit split = split_cold(pairs.pairs, cfg.train_fraction, cfg.seed);
  ComplementaryCategoryMap cc_map = derive_complementary_categories(split.train, catalog);

  fs::path dir(cfg.data_dir);
  fs::create_directories(dir);
  write_items_csv((dir / "catalog.csv").string(), catalog, true);
  write_features_bin((dir / "features_prepared.bin").string(), catalog);
  write_pairs_csv((dir / "pairs_train.csv").string(), split.train, catalog);
  write_pairs_csv((dir / "pairs_validation.csv").string(), split.validation, catalog);
  write_pairs_csv((dir / "pairs_test.csv").string(), split.test, catalog);
  write_cc_map_csv((dir / "cc_map.csv").string(), cc_map, catalog);

  {
    // One row per distinct seed item, sorted by id.
    std::map<std::string, const char*> assignment;
    auto note = [&](const std::vector<LabeledPair>& pairs_of, const char* name) {
      for (const LabeledPair& pair : pairs_of) {
        assignment[catalog.items[pair.seed_item].item_id] = name;
      }
    };
    note(split.train, "train");
    note(split.validation, "validation");
    note(split.test, "test");
    std::ofstream out = open_out(dir / "split_manifest.csv");
    out << "item_id,split\n";
    for (const auto& [id, name] : assignment) out << id << "," << name << "\n";
  }

  print_stats(std::cout, dataset_stats(catalog, pairs.pairs));
  std::cout << "split: " << split.train.size() << " train, " << split.validation.size()
            << " validation, " << split.test.size() << " test pairs\n";
  return 0;
}

int cmd_train(const RunConfig& cfg) {
  PreparedDataset ds = load_prepared(cfg);
  ModelConfig model_cfg =
      cfg.model_config(ds.catalog.feature_dim, ds.catalog.categories.size());
  TrainConfig train_cfg = cfg.train_config();

  FitResult result = fit(ds.catalog, ds.split, ds.cc_map, model_cfg, train_cfg);

  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  save_checkpoint((dir / "model").string(), model_cfg, result.params);
  {
    std::ofstream out = open_out(dir / "training_log.csv");
    result.log.write_csv(out);
  }

  for (const EpochRow& row : result.log.rows) {
    std::cout << "epoch " << row.epoch << " triplet " << row.losses.triplet << " cycle "
              << row.losses.cycle << " cls_genuine " << row.losses.classifier_genuine
              << " cls_translated " << row.losses.classifier_translated << " val_hr10 "
              << row.val_hr10 << " val_ndcg " << row.val_ndcg << "\n";
  }
  std::cout << "wrote " << (dir / "model").string() << ".manifest/.blob and "
            << (dir / "training_log.csv").string() << "\n";
  return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
  PreparedDataset ds = load_prepared(cfg);
  Protocol protocol = protocol_from_string(cfg.protocol);

  std::unique_ptr<Checkpoint> checkpoint;
  std::unique_ptr<Recommender> recommender;
  if (cfg.eval_model == "alcir") {
    checkpoint = std::make_unique<Checkpoint>(
        load_checkpoint((fs::path(cfg.out_dir) / "model").string()));
    recommender = std::make_unique<AlcirRecommender>(ds.catalog, checkpoint->params,
                                                     checkpoint->config);
  } else {
    recommender = std::make_unique<PopularityRecommender>(
        ds.catalog, build_popularity(ds.split.train, ds.catalog.items.size()));
  }

  MetricsReport report =
      evaluate(ds.catalog, ds.split.test, *recommender, ds.cc_map, protocol, cfg.k_list);

  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  std::string stem = "metrics_" + cfg.eval_model + "_" + cfg.protocol + ".csv";
  {
    std::ofstream out = open_out(dir / stem);
    write_metrics_csv(out, {{cfg.eval_model, cfg.protocol, report}});
  }
  print_metrics_table(std::cout, {{cfg.eval_model + " (" + cfg.protocol + ")", report}});
  std::cout << "wrote " << (dir / stem).string() << "\n";

  if (cfg.label_bins > 0) {
    BinReport bins =
        evaluate_by_label_bins(ds.catalog, ds.split, *recommender, ds.cc_map, cfg.label_bins);
    std::string bin_stem = "bins_" + cfg.eval_model + "_" + cfg.protocol + ".csv";
    std::ofstream out = open_out(dir / bin_stem);
    write_bin_report_csv(out, bins);
    std::cout << "wrote " << (dir / bin_stem).string() << "\n";
  }
  return 0;
}

int cmd_recommend(const RunConfig& cfg, const std::string& seed_id, const std::string& category,
                  std::size_t k) {
  PreparedDataset ds = load_prepared(cfg);
  Checkpoint checkpoint = load_checkpoint((fs::path(cfg.out_dir) / "model").string());
  CategoryIndex index = build_category_index(ds.catalog, checkpoint.params, checkpoint.config);

  const ItemRecord& seed = ds.catalog.items[ds.catalog.item_index(seed_id)];
  RecommendationList list;
  if (!category.empty()) {
    list = recommend(seed, ds.catalog.category_index(category), k, index, checkpoint.params,
                     checkpoint.config, ds.catalog);
  } else {
    list = recommend_multi(seed, ds.cc_map, k, index, checkpoint.params, checkpoint.config,
                           ds.catalog);
  }
  write_recommendations_csv(std::cout, list, ds.catalog);
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"ALCIR: adversarial-learning complementary item recommender"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::uint64_t seed = 0;
  bool want_print_config = false;
  std::vector<std::string> overrides;
  auto* config_opt = app.add_option("--config", config_path, "Config file (key=value lines)");
  auto* seed_opt = app.add_option("--seed", seed, "Override the global RNG seed");
  app.add_flag("--print-config", want_print_config, "Print the merged config and exit");
  app.add_option("--set", overrides, "Override one config key, key=value (repeatable)");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with planted structure");
  auto* prepare =
      app.add_subcommand("prepare", "Filter, bin, pair, split and derive category complements");

  auto* train = app.add_subcommand("train", "Train a model on the prepared dataset");
  std::string preset;
  std::uint64_t epochs = 0;
  auto* preset_opt = train->add_option("--preset", preset,
                                       "Loss preset: full, sup, triplet_cycle, "
                                       "triplet_classifier, classifier_cycle");
  auto* epochs_opt = train->add_option("--epochs", epochs, "Number of training epochs");

  auto* evaluate = app.add_subcommand("evaluate", "Score a model on the test split");
  std::string model, protocol;
  std::uint64_t bins = 0;
  auto* model_opt = evaluate->add_option("--model", model, "Model to score: alcir or popularity");
  auto* protocol_opt = evaluate->add_option("--protocol", protocol,
                                            "category_aware or category_unaware");
  auto* bins_opt = evaluate->add_option("--bins", bins,
                                        "Also report metrics per label-count bin");

  auto* recommend_cmd =
      app.add_subcommand("recommend", "Print recommendations for one seed item");
  std::string seed_id, category;
  std::uint64_t k = 10;
  recommend_cmd->add_option("--seed-id", seed_id, "Seed item id")->required();
  recommend_cmd->add_option("--category", category,
                            "Target category (omit for round-robin over complements)");
  recommend_cmd->add_option("--k", k, "Recommendations to return");

  for (CLI::App* sub : {synth, prepare, train, evaluate, recommend_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  RunConfig cfg;
  if (config_opt->count() > 0) cfg = load_config(config_path);
  if (seed_opt->count() > 0) cfg.seed = seed;
  for (const std::string& kv : overrides) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_kv(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (preset_opt->count() > 0) cfg.preset = preset;
  if (epochs_opt->count() > 0) cfg.epochs = epochs;
  if (model_opt->count() > 0) cfg.eval_model = model;
  if (protocol_opt->count() > 0) cfg.protocol = protocol;
  if (bins_opt->count() > 0) cfg.label_bins = bins;
  cfg.validate();

  if (want_print_config) {
    print_config(std::cout, cfg);
    return 0;
  }

  if (synth->parsed()) return cmd_synth(cfg);
  if (prepare->parsed()) return cmd_prepare(cfg);
  if (train->parsed()) return cmd_train(cfg);
  if (evaluate->parsed()) return cmd_evaluate(cfg);
  if (recommend_cmd->parsed()) return cmd_recommend(cfg, seed_id, category, k);

  throw ConfigError("no command given; expected synth, prepare, train, evaluate or recommend");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
