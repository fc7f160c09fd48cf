#include <alcir/evaluation.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <unordered_set>

namespace alcir {

Protocol protocol_from_string(const std::string& name) {
  if (name == "category_aware") return Protocol::category_aware;
  if (name == "category_unaware") return Protocol::category_unaware;
  throw ConfigError("unknown protocol: " + name);
}

const char* protocol_name(Protocol protocol) {
  return protocol == Protocol::category_aware ? "category_aware" : "category_unaware";
}

AlcirRecommender::AlcirRecommender(const Catalog& catalog, const ParamStore& params,
                                   const ModelConfig& cfg)
    : catalog_(catalog), params_(params), cfg_(cfg),
      index_(build_category_index(catalog, params, cfg)) {}

RecommendationList AlcirRecommender::rank(const ItemRecord& seed, std::size_t target_category,
                                          std::size_t k) const {
  return recommend(seed, target_category, k, index_, params_, cfg_, catalog_);
}

PopularityRecommender::PopularityRecommender(const Catalog& catalog, PopularityTable table)
    : catalog_(catalog), table_(std::move(table)) {}

RecommendationList PopularityRecommender::rank(const ItemRecord& seed,
                                               std::size_t target_category, std::size_t k) const {
  return popularity_recommend(seed, target_category, k, table_, catalog_);
}

RecommendationList rank_unaware(const Recommender& recommender, const ItemRecord& seed,
                                const ComplementaryCategoryMap& cc_map, const Catalog& catalog,
                                std::size_t k) {
  const std::vector<CategoryCount>& complements = cc_map.complements_of(seed.category_id);
  std::vector<RecommendationList> per_category;
  for (const CategoryCount& cc : complements) {
    const std::size_t available = catalog.items_by_category[cc.category].size();
    if (available == 0) continue;
    per_category.push_back(recommender.rank(seed, cc.category, available));
  }
  RecommendationList merged = round_robin_merge(per_category, k);
  merged.seed_id = seed.item_id;
  return merged;
}

int hit_rate_at_k(const RecommendationList& list, std::size_t relevant_item, std::size_t k) {
  if (k == 0) throw ConfigError("hit rate needs a positive k");
  const std::size_t limit = std::min(k, list.entries.size());
  for (std::size_t i = 0; i < limit; ++i) {
    if (list.entries[i].item == relevant_item) return 1;
  }
  return 0;
}

double ndcg_single(const RecommendationList& list, std::size_t relevant_item) {
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    if (list.entries[i].item == relevant_item) {
      return 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
  }
  return 0.0;
}

double catalog_coverage(const std::vector<RecommendationList>& lists, const Catalog& catalog,
                        std::size_t k) {
  if (catalog.items.empty()) throw DataError("coverage over an empty catalog");
  std::unordered_set<std::size_t> seen;
  for (const RecommendationList& list : lists) {
    const std::size_t limit = std::min(k, list.entries.size());
    for (std::size_t i = 0; i < limit; ++i) seen.insert(list.entries[i].item);
  }
  return static_cast<double>(seen.size()) / static_cast<double>(catalog.items.size());
}

double pairwise_sum(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  std::vector<double> level(values);
  while (level.size() > 1) {
    std::vector<double> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(level[i] + level[i + 1]);
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level[0];
}

MetricsReport evaluate(const Catalog& catalog, const std::vector<LabeledPair>& test_pairs,
                       const Recommender& recommender, const ComplementaryCategoryMap& cc_map,
                       Protocol protocol, const std::vector<std::size_t>& k_list) {
  if (test_pairs.empty()) throw DataError("evaluation over an empty test set");
  if (k_list.empty()) throw ConfigError("evaluation needs at least one cutoff");

  std::vector<RecommendationList> lists;
  lists.reserve(test_pairs.size());
  std::vector<double> ndcg_values;
  std::map<std::size_t, std::vector<double>> hr_values;
  for (std::size_t k : k_list) hr_values[k] = {};

  for (const LabeledPair& pair : test_pairs) {
    const ItemRecord& seed = catalog.items[pair.seed_item];
    RecommendationList list;
    if (protocol == Protocol::category_aware) {
      const std::size_t pool = catalog.items_by_category[pair.target_category].size();
      list = recommender.rank(seed, pair.target_category, pool);
    } else {
      std::size_t pool = 0;
      for (const CategoryCount& cc : cc_map.complements_of(seed.category_id)) {
        pool += catalog.items_by_category[cc.category].size();
      }
      list = pool == 0 ? RecommendationList{seed.item_id, {}}
                       : rank_unaware(recommender, seed, cc_map, catalog, pool);
    }
    ndcg_values.push_back(ndcg_single(list, pair.target_item));
    for (std::size_t k : k_list) {
      hr_values[k].push_back(static_cast<double>(hit_rate_at_k(list, pair.target_item, k)));
    }
    lists.push_back(std::move(list));
  }

  MetricsReport report;
  report.n_test_cases = test_pairs.size();
  const double n = static_cast<double>(test_pairs.size());
  report.ndcg = pairwise_sum(ndcg_values) / n;
  for (std::size_t k : k_list) report.hr[k] = pairwise_sum(hr_values[k]) / n;
  report.coverage = catalog_coverage(lists, catalog);
  return report;
}

int LabelBins::bin_for(std::size_t seed_category, std::size_t target_category) const {
  for (std::size_t i = 0; i < category_pairs.size(); ++i) {
    if (category_pairs[i].first == seed_category &&
        category_pairs[i].second == target_category) {
      return static_cast<int>(bin_of[i]);
    }
  }
  return -1;
}

LabelBins compute_label_bins(const Catalog& catalog, const std::vector<LabeledPair>& train_pairs,
                             const std::vector<LabeledPair>& test_pairs, std::size_t bins) {
  if (bins == 0) throw ConfigError("label binning needs at least one bin");
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> tally;
  for (const LabeledPair& pair : train_pairs) {
    ++tally[{catalog.items[pair.seed_item].category_id, pair.target_category}];
  }
  for (const LabeledPair& pair : test_pairs) {
    tally.emplace(std::make_pair(catalog.items[pair.seed_item].category_id,
                                 pair.target_category),
                  0);
  }
  if (tally.empty()) throw DataError("label binning saw no category pairs");

  LabelBins out;
  out.requested_bins = bins;
  for (const auto& [key, count] : tally) {
    out.category_pairs.push_back(key);
    out.counts.push_back(count);
  }
  std::vector<std::size_t> order(out.category_pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (out.counts[a] != out.counts[b]) return out.counts[a] < out.counts[b];
    return out.category_pairs[a] < out.category_pairs[b];
  });
  std::vector<std::pair<std::size_t, std::size_t>> sorted_pairs;
  std::vector<std::size_t> sorted_counts;
  for (std::size_t i : order) {
    sorted_pairs.push_back(out.category_pairs[i]);
    sorted_counts.push_back(out.counts[i]);
  }
  out.category_pairs = std::move(sorted_pairs);
  out.counts = std::move(sorted_counts);

  out.effective_bins = std::min(bins, out.category_pairs.size());
  if (out.effective_bins < bins) {
    std::fprintf(stderr,
                 "[alcir] note: only %zu category pairs, reducing label bins from %zu to %zu\n",
                 out.category_pairs.size(), bins, out.effective_bins);
  }
  out.bin_of.resize(out.category_pairs.size());
  for (std::size_t i = 0; i < out.category_pairs.size(); ++i) {
    out.bin_of[i] = i * out.effective_bins / out.category_pairs.size();
  }
  return out;
}

BinReport evaluate_by_label_bins(const Catalog& catalog, const DatasetSplit& split,
                                 const Recommender& recommender,
                                 const ComplementaryCategoryMap& cc_map, std::size_t bins) {
  BinReport report;
  report.bins = compute_label_bins(catalog, split.train, split.test, bins);

  std::vector<std::vector<LabeledPair>> per_bin(report.bins.effective_bins);
  for (const LabeledPair& pair : split.test) {
    const int bin =
        report.bins.bin_for(catalog.items[pair.seed_item].category_id, pair.target_category);
    if (bin >= 0) per_bin[static_cast<std::size_t>(bin)].push_back(pair);
  }

  for (std::size_t b = 0; b < report.bins.effective_bins; ++b) {
    std::size_t lo = SIZE_MAX, hi = 0;
    for (std::size_t i = 0; i < report.bins.bin_of.size(); ++i) {
      if (report.bins.bin_of[i] == b) {
        lo = std::min(lo, report.bins.counts[i]);
        hi = std::max(hi, report.bins.counts[i]);
      }
    }
    report.count_ranges.emplace_back(lo == SIZE_MAX ? 0 : lo, hi);
    if (per_bin[b].empty()) {
      report.reports.emplace_back();  // zero metrics, zero cases
    } else {
      report.reports.push_back(
          evaluate(catalog, per_bin[b], recommender, cc_map, Protocol::category_aware));
    }
  }
  return report;
}

void write_metrics_csv(
    std::ostream& os,
    const std::vector<std::tuple<std::string, std::string, MetricsReport>>& rows) {
  os << "model,protocol,ndcg,hr@1,hr@5,hr@10,coverage_pct,n_test_cases\n";
  char buf[160];
  for (const auto& [model, protocol, report] : rows) {
    const double hr1 = report.hr.count(1) ? report.hr.at(1) : 0.0;
    const double hr5 = report.hr.count(5) ? report.hr.at(5) : 0.0;
    const double hr10 = report.hr.count(10) ? report.hr.at(10) : 0.0;
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f,%.2f,%zu", report.ndcg, hr1, hr5, hr10,
                  report.coverage * 100.0, report.n_test_cases);
    os << model << "," << protocol << "," << buf << "\n";
  }
}

void print_metrics_table(std::ostream& os,
                         const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  os << std::left << std::setw(22) << "Method" << std::right << std::setw(8) << "NDCG"
     << std::setw(8) << "HR@1" << std::setw(8) << "HR@5" << std::setw(8) << "HR@10"
     << std::setw(10) << "Cov.(%)" << "\n";
  char buf[160];
  for (const auto& [name, report] : rows) {
    const double hr1 = report.hr.count(1) ? report.hr.at(1) : 0.0;
    const double hr5 = report.hr.count(5) ? report.hr.at(5) : 0.0;
    const double hr10 = report.hr.count(10) ? report.hr.at(10) : 0.0;
    std::snprintf(buf, sizeof(buf), "%8.3f%8.3f%8.3f%8.3f%10.2f", report.ndcg, hr1, hr5, hr10,
                  report.coverage * 100.0);
    os << std::left << std::setw(22) << name << buf << "\n";
  }
}

void write_bin_report_csv(std::ostream& os, const BinReport& report) {
  os << "bin,count_min,count_max,n_category_pairs,n_test_cases,ndcg,hr@1,hr@5,hr@10\n";
  char buf[160];
  for (std::size_t b = 0; b < report.reports.size(); ++b) {
    std::size_t n_pairs = 0;
    for (std::size_t bin : report.bins.bin_of) {
      if (bin == b) ++n_pairs;
    }
    const MetricsReport& m = report.reports[b];
    const double hr1 = m.hr.count(1) ? m.hr.at(1) : 0.0;
    const double hr5 = m.hr.count(5) ? m.hr.at(5) : 0.0;
    const double hr10 = m.hr.count(10) ? m.hr.at(10) : 0.0;
    std::snprintf(buf, sizeof(buf), "%zu,%zu,%zu,%zu,%zu,%.6f,%.6f,%.6f,%.6f", b,
                  report.count_ranges[b].first, report.count_ranges[b].second, n_pairs,
                  m.n_test_cases, m.ndcg, hr1, hr5, hr10);
    os << buf << "\n";
  }
}

}  // namespace alcir
