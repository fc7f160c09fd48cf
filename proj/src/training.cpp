#include <alcir/evaluation.hpp>
#include <alcir/training.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace alcir {

void TrainConfig::validate() const {
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  weights.validate();
  triplet.validate();
  if (!(unlabeled_ratio >= 0.0)) throw ConfigError("unlabeled_ratio must be nonnegative");
}

std::size_t sample_negative(const LabeledPair& pair, const Catalog& catalog, Rng& rng) {
  const std::vector<std::size_t>& members = catalog.items_by_category[pair.target_category];
  if (members.size() < 2) {
    throw SamplingError("cannot sample a negative: category " +
                        catalog.categories[pair.target_category] + " holds fewer than 2 items");
  }
  while (true) {
    const std::size_t pick = members[rng.index(members.size())];
    if (pick != pair.target_item) return pick;
  }
}

std::vector<TrainBatch> build_batches(const std::vector<LabeledPair>& train_pairs,
                                      const Catalog& catalog,
                                      const ComplementaryCategoryMap& cc_map,
                                      const TrainConfig& cfg, Rng& rng) {
  // Unlabeled draws come from a forked stream so the labeled trajectory
  // (shuffle order, negatives) is identical across presets that differ only
  // in their use of unlabeled samples.
  Rng unlabeled_rng(splitmix64(rng.next()));

  std::vector<std::size_t> order(train_pairs.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  const std::size_t per_labeled =
      static_cast<std::size_t>(std::ceil(cfg.unlabeled_ratio));

  std::vector<TrainBatch> batches;
  TrainBatch current;
  static int skip_warned = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const LabeledPair& pair = train_pairs[order[i]];
    LabeledExample example;
    example.seed_item = pair.seed_item;
    example.positive_item = pair.target_item;
    example.target_category = pair.target_category;
    try {
      example.negative_item = sample_negative(pair, catalog, rng);
    } catch (const SamplingError& e) {
      if (skip_warned < 3) {
        std::fprintf(stderr, "[alcir] warning: skipping pair (%s)\n", e.what());
        ++skip_warned;
      }
      continue;
    }
    current.labeled.push_back(example);

    for (std::size_t u = 0; u < per_labeled; ++u) {
      UnlabeledExample ux;
      ux.item = unlabeled_rng.index(catalog.items.size());
      const std::size_t own = catalog.items[ux.item].category_id;
      const std::vector<CategoryCount>& comps = cc_map.complements_of(own);
      if (!comps.empty()) {
        ux.target_category = comps[unlabeled_rng.index(comps.size())].category;
      } else {
        // No observed complements: aim at a uniform other category.
        std::size_t cat = unlabeled_rng.index(catalog.categories.size() - 1);
        if (cat >= own) ++cat;
        ux.target_category = cat;
      }
      current.unlabeled.push_back(ux);
    }

    if (current.labeled.size() == cfg.batch_size) {
      batches.push_back(std::move(current));
      current = TrainBatch{};
    }
  }
  if (!current.labeled.empty()) batches.push_back(std::move(current));
  return batches;
}

LossBreakdown train_step(ParamStore& params, Optimizer& optimizer, const TrainBatch& batch,
                         const Catalog& catalog, const ModelConfig& model_cfg,
                         const TrainConfig& cfg) {
  cfg.validate();
  if (batch.labeled.empty() && batch.unlabeled.empty()) {
    throw DataError("train_step over an empty batch");
  }
  const bool use_triplet = cfg.weights.triplet > 0.0;
  const bool use_cycle = cfg.weights.cycle > 0.0;
  const bool use_classifier = cfg.weights.classifier > 0.0;

  Tape tape;
  std::vector<Tape::Id> triplet_terms;
  std::vector<Tape::Id> cycle_terms;
  std::vector<Tape::Id> genuine_terms;
  std::vector<Tape::Id> translated_terms;

  for (const LabeledExample& ex : batch.labeled) {
    const ItemRecord& seed = catalog.items[ex.seed_item];
    const Tape::Id v_seed = encode_item(tape, params, model_cfg, seed);
    const Tape::Id v_pos = encode_item(tape, params, model_cfg, catalog.items[ex.positive_item]);
    const Tape::Id v_trans = translate(tape, params, model_cfg, v_seed, ex.target_category);

    if (use_triplet) {
      const Tape::Id v_neg =
          encode_item(tape, params, model_cfg, catalog.items[ex.negative_item]);
      triplet_terms.push_back(triplet_loss_node(tape, v_trans, v_pos, v_neg, cfg.triplet));
    }
    if (use_cycle) {
      const Tape::Id rebuilt = reconstruct(tape, params, model_cfg, v_trans, seed.category_id);
      cycle_terms.push_back(cycle_loss_node(tape, v_seed, rebuilt));
    }
    if (use_classifier) {
      // Genuine embeddings train the classifier alone; the encoder is a fixed
      // feature source here.
      const Tape::Id p_seed = classify(tape, params, model_cfg, tape.stop_gradient(v_seed),
                                       seed.category_id);
      genuine_terms.push_back(classifier_loss_node(tape, p_seed));
      const Tape::Id p_pos =
          classify(tape, params, model_cfg, tape.stop_gradient(v_pos),
                   catalog.items[ex.positive_item].category_id);
      genuine_terms.push_back(classifier_loss_node(tape, p_pos));
      // Translated embeddings pass the reversal layer: the classifier learns
      // to reject them while the translator learns to pass them off. The
      // translator runs on a detached copy of the seed embedding so that no
      // classifier gradient, reversed or not, ever reaches the encoder.
      const Tape::Id v_trans_cls = translate(tape, params, model_cfg,
                                             tape.stop_gradient(v_seed), ex.target_category);
      const Tape::Id p_trans = classify(tape, params, model_cfg, tape.grad_reverse(v_trans_cls),
                                        ex.target_category);
      translated_terms.push_back(classifier_loss_node(tape, p_trans));
    }
  }

  for (const UnlabeledExample& ux : batch.unlabeled) {
    if (!use_cycle && !use_classifier) break;
    const ItemRecord& item = catalog.items[ux.item];
    const Tape::Id v = encode_item(tape, params, model_cfg, item);
    if (use_cycle) {
      const Tape::Id v_trans = translate(tape, params, model_cfg, v, ux.target_category);
      const Tape::Id rebuilt = reconstruct(tape, params, model_cfg, v_trans, item.category_id);
      cycle_terms.push_back(cycle_loss_node(tape, v, rebuilt));
    }
    if (use_classifier) {
      const Tape::Id v_trans_cls =
          translate(tape, params, model_cfg, tape.stop_gradient(v), ux.target_category);
      const Tape::Id p_trans = classify(tape, params, model_cfg, tape.grad_reverse(v_trans_cls),
                                        ux.target_category);
      translated_terms.push_back(classifier_loss_node(tape, p_trans));
    }
  }

  const auto mean_node = [&tape](const std::vector<Tape::Id>& terms) {
    const double w = 1.0 / static_cast<double>(terms.size());
    return tape.weighted_sum(terms, std::vector<double>(terms.size(), w));
  };

  LossBreakdown breakdown;
  std::vector<Tape::Id> components;
  std::vector<double> component_weights;
  if (!triplet_terms.empty()) {
    const Tape::Id m = mean_node(triplet_terms);
    breakdown.triplet = tape.scalar_value(m);
    components.push_back(m);
    component_weights.push_back(cfg.weights.triplet);
  }
  if (!cycle_terms.empty()) {
    const Tape::Id m = mean_node(cycle_terms);
    breakdown.cycle = tape.scalar_value(m);
    components.push_back(m);
    component_weights.push_back(cfg.weights.cycle);
  }
  if (!genuine_terms.empty()) {
    const Tape::Id m = mean_node(genuine_terms);
    breakdown.classifier_genuine = tape.scalar_value(m);
    components.push_back(m);
    component_weights.push_back(cfg.weights.classifier);
  }
  if (!translated_terms.empty()) {
    const Tape::Id m = mean_node(translated_terms);
    breakdown.classifier_translated = tape.scalar_value(m);
    // The adversarial term is subtracted: descending it pushes the classifier
    // to reject translated inputs, while the reversal layer hands the
    // translator the opposite signal.
    components.push_back(m);
    component_weights.push_back(-cfg.weights.classifier);
  }
  if (components.empty()) throw DataError("train_step built no loss terms");

  if (!std::isfinite(breakdown.triplet) || !std::isfinite(breakdown.cycle) ||
      !std::isfinite(breakdown.classifier_genuine) ||
      !std::isfinite(breakdown.classifier_translated)) {
    throw NumericError("non-finite loss in training step");
  }

  const Tape::Id total = tape.weighted_sum(components, component_weights);
  tape.backward(total);
  optimizer.step(params, tape.param_gradients(), cfg.learning_rate);
  return breakdown;
}

void TrainingLog::write_csv(std::ostream& os) const {
  os << "epoch,triplet,cycle,cls_genuine,cls_translated,val_hr10,val_ndcg\n";
  char buf[200];
  for (const EpochRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", row.epoch,
                  row.losses.triplet, row.losses.cycle, row.losses.classifier_genuine,
                  row.losses.classifier_translated, row.val_hr10, row.val_ndcg);
    os << buf << "\n";
  }
}

FitResult fit(const Catalog& catalog, const DatasetSplit& split,
              const ComplementaryCategoryMap& cc_map, const ModelConfig& model_cfg,
              const TrainConfig& cfg) {
  cfg.validate();
  model_cfg.validate();
  if (catalog.items.empty()) throw DataError("fit over an empty catalog");
  if (split.train.empty()) throw DataError("fit needs a non-empty training split");

  ParamStore params(cfg.rng_seed);
  register_model(params, model_cfg);
  Optimizer optimizer(cfg.optimizer);
  Rng rng(splitmix64(cfg.rng_seed ^ 0x7261696e65724cull));

  FitResult result{params, {}};
  double best_hr10 = -1.0;
  double best_ndcg = -1.0;
  std::size_t epochs_since_best = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const std::vector<TrainBatch> batches =
        build_batches(split.train, catalog, cc_map, cfg, rng);
    double triplet_sum = 0.0, cycle_sum = 0.0, genuine_sum = 0.0, translated_sum = 0.0;
    std::size_t triplet_n = 0, cycle_n = 0, genuine_n = 0, translated_n = 0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      LossBreakdown bd;
      try {
        bd = train_step(params, optimizer, batches[b], catalog, model_cfg, cfg);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " (epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(b) + ")");
      }
      const std::size_t nl = batches[b].labeled.size();
      const std::size_t nu = batches[b].unlabeled.size();
      triplet_sum += bd.triplet * static_cast<double>(nl);
      triplet_n += nl;
      cycle_sum += bd.cycle * static_cast<double>(nl + nu);
      cycle_n += nl + nu;
      genuine_sum += bd.classifier_genuine * static_cast<double>(2 * nl);
      genuine_n += 2 * nl;
      translated_sum += bd.classifier_translated * static_cast<double>(nl + nu);
      translated_n += nl + nu;
    }

    EpochRow row;
    row.epoch = epoch;
    if (cfg.weights.triplet > 0.0 && triplet_n > 0) {
      row.losses.triplet = triplet_sum / static_cast<double>(triplet_n);
    }
    if (cfg.weights.cycle > 0.0 && cycle_n > 0) {
      row.losses.cycle = cycle_sum / static_cast<double>(cycle_n);
    }
    if (cfg.weights.classifier > 0.0 && genuine_n > 0) {
      row.losses.classifier_genuine = genuine_sum / static_cast<double>(genuine_n);
      row.losses.classifier_translated = translated_sum / static_cast<double>(translated_n);
    }

    if (!split.validation.empty()) {
      AlcirRecommender recommender(catalog, params, model_cfg);
      const MetricsReport report = evaluate(catalog, split.validation, recommender, cc_map,
                                            Protocol::category_aware, {10});
      row.val_hr10 = report.hr.at(10);
      row.val_ndcg = report.ndcg;
      // Best validation HR@10 wins; among HR@10 ties, the higher NDCG epoch.
      if (row.val_hr10 > best_hr10 ||
          (row.val_hr10 == best_hr10 && row.val_ndcg > best_ndcg)) {
        best_hr10 = row.val_hr10;
        best_ndcg = row.val_ndcg;
        result.params = params;
        epochs_since_best = 0;
      } else {
        ++epochs_since_best;
      }
    } else {
      result.params = params;
    }
    result.log.rows.push_back(row);

    if (!split.validation.empty() && cfg.early_stop_patience > 0 &&
        epochs_since_best >= cfg.early_stop_patience) {
      break;
    }
  }
  return result;
}

}  // namespace alcir
