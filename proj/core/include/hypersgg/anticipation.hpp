#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hypersgg/model.hpp"
#include "hypersgg/procedural_graph.hpp"

namespace hypersgg {

struct AnticipationConfig {
  double fraction = 0.9;  // observed prefix share F
  // Frames ahead of the last observed frame to predict; nullopt runs to the
  // end of the video.
  std::optional<int> horizon;
  // Redirect the mass lost to absorbing states back onto the pair's current
  // predicate instead of renormalizing it away.
  bool persistence_enabled = false;
  // Best candidates kept per pair; nullopt keeps the whole vocabulary.
  std::optional<int> top_k_candidates;
};

struct PredictedCandidate {
  std::string subject_id;
  std::string object_id;
  PredicateId predicate = 0;
  double score = 0.0;
  // Provenance: the observed predicate of this pair that contributed most.
  PredicateId last_predicate = 0;
  friend bool operator==(const PredictedCandidate&, const PredictedCandidate&) = default;
};

// Scored candidate triplets for one anticipated frame, sorted by descending
// score with (subject, object, predicate) as the tie order.
struct PredictedGraph {
  int frame_index = 0;
  std::vector<PredictedCandidate> candidates;
  // The last observed frame held no pairs, so nothing could be predicted.
  bool observation_empty = false;
  // Externally supplied detection boxes keyed by entity id, for IoU-mode
  // evaluation. Never serialized.
  std::map<std::string, BBox> detections;
};

struct VideoPredictions {
  std::string video_id;
  std::vector<PredictedGraph> frames;
};

// Total candidate order: score descending, then subject, object, predicate
// ascending. Shared by prediction and evaluation.
bool candidate_before(const PredictedCandidate& a, const PredictedCandidate& b);

// Splits into (observed, future): the observed half keeps the first
// ceil(fraction * |frames|) annotated frames, clamped so both halves stay
// non-empty. frame_count, vocabulary, and frame indices are preserved.
// Requires 0 < fraction < 1 and at least 2 annotated frames.
std::pair<VideoAnnotation, VideoAnnotation> split_by_fraction(const VideoAnnotation& ann,
                                                              double fraction);

// Per-pair compatibility scores over the vocabulary, the pluggable stand-in
// for the paper's object-feature term.
using CompatibilityFn =
    std::function<std::vector<double>(const std::string& subject_id, const std::string& object_id)>;

enum class CompatibilityMode { kUniform, kFrequency };

// Uniform mode scores every category 1.0. Frequency mode counts the pair's
// predicates over the observed segment, scaled so the most frequent scores
// 1.0; a pair with no history scores all zero and callers fall back to
// uniform.
std::vector<double> default_compatibility(const VideoAnnotation& observed,
                                          const std::string& subject_id,
                                          const std::string& object_id, CompatibilityMode mode);
CompatibilityFn make_compatibility(const VideoAnnotation& observed, CompatibilityMode mode);

// Anticipates one graph per future frame index (last observed + 1 ... bounded
// by the horizon and frame_count). Each ordered pair active in the last
// observed frame contributes the mean of its current predicates' marginal
// transition distributions, multiplied by the pair's compatibility scores;
// zero-score candidates are dropped. Pairs absent from the last observed
// frame are never predicted. The future segment is not an input, so the
// predictor cannot peek.
std::vector<PredictedGraph> predict_future(const VideoAnnotation& observed,
                                           const ProceduralGraph& pg,
                                           const AnticipationConfig& cfg,
                                           const CompatibilityFn& compat = nullptr);

// JSON Lines, one record per (video, frame):
// {"video_id": ..., "frame_index": ..., "candidates": [[subj, obj, pred, score], ...]}
std::string to_jsonl(std::span<const VideoPredictions> predictions);
std::vector<VideoPredictions> predictions_from_jsonl(const std::string& text);
void save_predictions(std::span<const VideoPredictions> predictions,
                      const std::filesystem::path& path);
std::vector<VideoPredictions> load_predictions(const std::filesystem::path& path);

}  // namespace hypersgg
