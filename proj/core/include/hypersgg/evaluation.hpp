#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hypersgg/anticipation.hpp"
#include "hypersgg/model.hpp"

namespace hypersgg {

// At most one predicate per (subject, object) pair survives before the top-K
// cut (kWith), or every candidate competes (kNo).
enum class ConstraintMode { kWith, kNo };

// Frame-averaged recall (mean of per-frame hit rates) or one pool over all
// scored triplets.
enum class AggregateMode { kFrameAverage, kPooled };

const char* to_string(ConstraintMode mode);

inline const std::vector<int> kDefaultSggK{20, 50, 100};
inline const std::vector<int> kDefaultSgaK{10, 20, 50};

inline constexpr double kProbabilityFloor = 1e-12;

struct RecallConfig {
  std::vector<int> k_values;  // strictly increasing
  ConstraintMode constraint = ConstraintMode::kWith;
  // nullopt matches entities by ground-truth id; a threshold matches through
  // detection boxes supplied on the predictions instead.
  std::optional<double> iou_threshold;
  AggregateMode aggregate = AggregateMode::kFrameAverage;
};

struct RecallCount {
  std::int64_t hits = 0;
  std::int64_t total = 0;
  friend bool operator==(const RecallCount&, const RecallCount&) = default;
};

struct PredicateStats {
  std::int64_t hits = 0;
  std::int64_t total = 0;
  double recall() const { return total > 0 ? static_cast<double>(hits) / static_cast<double>(total) : 0.0; }
};

struct KMetrics {
  double recall = 0.0;       // aggregate over frames per AggregateMode
  double mean_recall = 0.0;  // unweighted mean over categories with total > 0
  std::map<PredicateId, PredicateStats> per_predicate;
};

struct NllResult {
  double mean_nll = 0.0;
  std::int64_t triplets = 0;
  std::int64_t missing_pairs = 0;  // ground-truth pairs without a distribution
  std::int64_t renormalized = 0;   // substochastic inputs that were rescaled
};

struct MetricReport {
  std::string task;  // report label, e.g. "sga"
  ConstraintMode constraint = ConstraintMode::kWith;
  std::map<int, KMetrics> per_k;
  // Per-category tallies at the largest K.
  std::map<PredicateId, PredicateStats> per_predicate;
  NllResult nll;
  std::int64_t frames_scored = 0;
  std::int64_t frames_skipped = 0;  // frames without ground-truth triplets
};

// Hits among the top-k candidates against the frame's ground truth; total is
// the number of ground-truth triplets (0 marks the frame skipped). A triplet
// matches a candidate when subject, object, and predicate all agree, or, in
// IoU mode, when the predicate agrees and both endpoints' boxes overlap at or
// above the threshold.
RecallCount recall_at_k(const FrameSceneGraph& gt, const PredictedGraph& pred, int k,
                        ConstraintMode mode,
                        std::optional<double> iou_threshold = std::nullopt);

// Pools per-predicate hit counts over frames and averages the per-category
// recalls (categories never seen in ground truth are excluded).
KMetrics mean_recall_at_k(std::span<const std::pair<FrameSceneGraph, PredictedGraph>> frames,
                          int k, ConstraintMode mode,
                          AggregateMode aggregate = AggregateMode::kFrameAverage,
                          std::optional<double> iou_threshold = std::nullopt);

// Mean negative log-likelihood of the ground-truth predicates under per-pair
// distributions over the vocabulary. Substochastic distributions are
// renormalized (and counted); pairs without a distribution score the floor
// probability and are counted as missing.
NllResult nll_objective(const FrameSceneGraph& gt,
                        const std::map<std::pair<std::string, std::string>,
                                       std::vector<double>>& pair_distributions);

// Full scoring pass: pairs every ground-truth frame with the prediction for
// (video_id, frame_index) — missing predictions count as empty — and fills a
// report with R@K, mR@K, per-predicate tallies, and the NLL objective derived
// from candidate scores.
MetricReport evaluate_predictions(const AnnotationSet& ground_truth,
                                  std::span<const VideoPredictions> predictions,
                                  const RecallConfig& config, const std::string& task_label);

std::string to_json(const MetricReport& report);
std::string to_csv(const MetricReport& report);
// Aligned console table, one row per K.
std::string to_table(const MetricReport& report);

}  // namespace hypersgg
