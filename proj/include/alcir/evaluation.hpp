#pragma once

#include <alcir/baselines.hpp>
#include <alcir/data.hpp>
#include <alcir/model.hpp>
#include <alcir/retrieval.hpp>

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace alcir {

enum class Protocol { category_aware, category_unaware };

Protocol protocol_from_string(const std::string& name);
const char* protocol_name(Protocol protocol);

// Shared ranking surface for the model and the popularity baseline. rank()
// returns the target category's candidates best-first.
class Recommender {
 public:
  virtual ~Recommender() = default;
  virtual RecommendationList rank(const ItemRecord& seed, std::size_t target_category,
                                  std::size_t k) const = 0;
};

class AlcirRecommender : public Recommender {
 public:
  AlcirRecommender(const Catalog& catalog, const ParamStore& params, const ModelConfig& cfg);
  RecommendationList rank(const ItemRecord& seed, std::size_t target_category,
                          std::size_t k) const override;

 private:
  const Catalog& catalog_;
  const ParamStore& params_;
  const ModelConfig& cfg_;
  CategoryIndex index_;
};

class PopularityRecommender : public Recommender {
 public:
  PopularityRecommender(const Catalog& catalog, PopularityTable table);
  RecommendationList rank(const ItemRecord& seed, std::size_t target_category,
                          std::size_t k) const override;

 private:
  const Catalog& catalog_;
  PopularityTable table_;
};

// Full-drain interleaving of the seed's complementary categories in map order.
RecommendationList rank_unaware(const Recommender& recommender, const ItemRecord& seed,
                                const ComplementaryCategoryMap& cc_map, const Catalog& catalog,
                                std::size_t k);

int hit_rate_at_k(const RecommendationList& list, std::size_t relevant_item, std::size_t k);

// Single relevant item over the full candidate list: 1/log2(1+rank), 0 when
// the item never appears.
double ndcg_single(const RecommendationList& list, std::size_t relevant_item);

double catalog_coverage(const std::vector<RecommendationList>& lists, const Catalog& catalog,
                        std::size_t k = 10);

// Deterministic pairwise summation in index order.
double pairwise_sum(const std::vector<double>& values);

struct MetricsReport {
  double ndcg = 0.0;
  std::map<std::size_t, double> hr;  // k -> mean hit rate
  double coverage = 0.0;
  std::size_t n_test_cases = 0;
};

MetricsReport evaluate(const Catalog& catalog, const std::vector<LabeledPair>& test_pairs,
                       const Recommender& recommender, const ComplementaryCategoryMap& cc_map,
                       Protocol protocol, const std::vector<std::size_t>& k_list = {1, 5, 10});

// Category pairs sorted by ascending train-pair count, chunked equal-depth.
// The universe is every category pair present in train or test; unseen-in-
// train pairs count zero.
struct LabelBins {
  std::size_t requested_bins = 0;
  std::size_t effective_bins = 0;
  std::vector<std::pair<std::size_t, std::size_t>> category_pairs;  // ascending by count
  std::vector<std::size_t> counts;                                  // aligned with category_pairs
  std::vector<std::size_t> bin_of;                                  // aligned with category_pairs

  int bin_for(std::size_t seed_category, std::size_t target_category) const;  // -1 when absent
};

LabelBins compute_label_bins(const Catalog& catalog, const std::vector<LabeledPair>& train_pairs,
                             const std::vector<LabeledPair>& test_pairs, std::size_t bins);

struct BinReport {
  LabelBins bins;
  std::vector<MetricsReport> reports;                               // one per effective bin
  std::vector<std::pair<std::size_t, std::size_t>> count_ranges;    // min/max train count
};

BinReport evaluate_by_label_bins(const Catalog& catalog, const DatasetSplit& split,
                                 const Recommender& recommender,
                                 const ComplementaryCategoryMap& cc_map, std::size_t bins = 10);

void write_metrics_csv(std::ostream& os,
                       const std::vector<std::tuple<std::string, std::string, MetricsReport>>& rows);
void print_metrics_table(std::ostream& os,
                         const std::vector<std::pair<std::string, MetricsReport>>& rows);
void write_bin_report_csv(std::ostream& os, const BinReport& report);

}  // namespace alcir
