#pragma once

#include <alcir/array.hpp>
#include <alcir/tape.hpp>

#include <string>

namespace alcir {

struct TripletConfig {
  enum class Distance { neg_cosine, euclidean };

  double margin = 0.2;
  Distance distance = Distance::neg_cosine;

  void validate() const;
};

// Convex mixture of the three objectives.
struct LossWeights {
  double triplet = 0.6;
  double cycle = 0.2;
  double classifier = 0.2;

  void validate() const;
};

Tape::Id distance_node(Tape& tape, Tape::Id a, Tape::Id b, TripletConfig::Distance distance);

// max(d(anchor, positive) - d(anchor, negative) + margin, 0)
Tape::Id triplet_loss_node(Tape& tape, Tape::Id anchor, Tape::Id positive, Tape::Id negative,
                           const TripletConfig& cfg);

// || stop(original) - reconstructed ||^2; the original acts as a fixed label
// and receives no gradient, while the reconstruction path stays live.
Tape::Id cycle_loss_node(Tape& tape, Tape::Id original, Tape::Id reconstructed);

// -log p with p clamped at 1e-12.
Tape::Id classifier_loss_node(Tape& tape, Tape::Id probability);

// Value-only forms of the same math.
double triplet_loss(const Array& anchor, const Array& positive, const Array& negative,
                    const TripletConfig& cfg = {});
double cycle_loss(const Array& original, const Array& reconstructed);
double classifier_loss(double probability);
double combined_loss(double triplet, double cycle, double classifier, const LossWeights& weights);

struct LossPreset {
  LossWeights weights;
  bool use_unlabeled = true;
};

// full, sup, triplet_cycle, triplet_classifier, classifier_cycle. Ablations
// zero one weight and renormalize the rest; sup also drops unlabeled items.
LossPreset loss_preset(const std::string& name);

}  // namespace alcir
