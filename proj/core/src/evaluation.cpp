#include "hypersgg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hypersgg/json_writer.hpp"

namespace hypersgg {

const char* to_string(ConstraintMode mode) {
  return mode == ConstraintMode::kWith ? "with" : "no";
}

namespace {

double iou(const BBox& a, const BBox& b) {
  const double x1 = std::max(a.x, b.x);
  const double y1 = std::max(a.y, b.y);
  const double x2 = std::min(a.x + a.w, b.x + b.w);
  const double y2 = std::min(a.y + a.h, b.y + b.h);
  const double inter = std::max(0.0, x2 - x1) * std::max(0.0, y2 - y1);
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

// Constraint filter + top-k cut. Candidates are already sorted descending, so
// keeping the first per pair keeps its best-scoring predicate.
std::vector<PredictedCandidate> filtered_top_k(const PredictedGraph& pred, int k,
                                               ConstraintMode mode) {
  std::vector<PredictedCandidate> kept;
  if (mode == ConstraintMode::kWith) {
    std::set<std::pair<std::string, std::string>> seen;
    for (const PredictedCandidate& c : pred.candidates) {
      if (seen.emplace(c.subject_id, c.object_id).second) kept.push_back(c);
    }
  } else {
    kept = pred.candidates;
  }
  if (kept.size() > static_cast<std::size_t>(k)) kept.resize(static_cast<std::size_t>(k));
  return kept;
}

bool matches(const RelationshipTriplet& gt_triplet, const PredictedCandidate& candidate,
             const FrameSceneGraph& gt, const PredictedGraph& pred,
             std::optional<double> iou_threshold) {
  if (gt_triplet.predicate != candidate.predicate) return false;
  if (!iou_threshold) {
    return gt_triplet.subject_id == candidate.subject_id &&
           gt_triplet.object_id == candidate.object_id;
  }
  // IoU mode: endpoints correspond through box overlap rather than ids.
  auto gt_box = [&gt](const std::string& id) -> const BBox* {
    for (const EntityInstance& e : gt.entities) {
      if (e.entity_id == id && e.bbox) return &*e.bbox;
    }
    return nullptr;
  };
  auto det_box = [&pred](const std::string& id) -> const BBox* {
    auto it = pred.detections.find(id);
    return it != pred.detections.end() ? &it->second : nullptr;
  };
  const BBox* gs = gt_box(gt_triplet.subject_id);
  const BBox* go = gt_box(gt_triplet.object_id);
  const BBox* ds = det_box(candidate.subject_id);
  const BBox* dobj = det_box(candidate.object_id);
  if (!gs || !go || !ds || !dobj) return false;
  return iou(*gs, *ds) >= *iou_threshold && iou(*go, *dobj) >= *iou_threshold;
}

}  // namespace

RecallCount recall_at_k(const FrameSceneGraph& gt, const PredictedGraph& pred, int k,
                        ConstraintMode mode, std::optional<double> iou_threshold) {
  if (k < 1) throw std::invalid_argument("recall_at_k: k must be >= 1");
  RecallCount count;
  count.total = static_cast<std::int64_t>(gt.triplets.size());
  if (count.total == 0) return count;

  const std::vector<PredictedCandidate> top = filtered_top_k(pred, k, mode);
  for (const RelationshipTriplet& gt_triplet : gt.triplets) {
    for (const PredictedCandidate& candidate : top) {
      if (matches(gt_triplet, candidate, gt, pred, iou_threshold)) {
        ++count.hits;
        break;
      }
    }
  }
  return count;
}

KMetrics mean_recall_at_k(std::span<const std::pair<FrameSceneGraph, PredictedGraph>> frames,
                          int k, ConstraintMode mode, AggregateMode aggregate,
                          std::optional<double> iou_threshold) {
  KMetrics metrics;
  double frame_recall_sum = 0.0;
  std::int64_t frames_scored = 0;
  std::int64_t pooled_hits = 0;
  std::int64_t pooled_total = 0;

  for (const auto& [gt, pred] : frames) {
    if (gt.triplets.empty()) continue;
    ++frames_scored;

    const std::vector<PredictedCandidate> top = filtered_top_k(pred, k, mode);
    std::int64_t frame_hits = 0;
    for (const RelationshipTriplet& gt_triplet : gt.triplets) {
      PredicateStats& stats = metrics.per_predicate[gt_triplet.predicate];
      ++stats.total;
      ++pooled_total;
      for (const PredictedCandidate& candidate : top) {
        if (matches(gt_triplet, candidate, gt, pred, iou_threshold)) {
          ++stats.hits;
          ++frame_hits;
          ++pooled_hits;
          break;
        }
      }
    }
    frame_recall_sum +=
        static_cast<double>(frame_hits) / static_cast<double>(gt.triplets.size());
  }

  if (aggregate == AggregateMode::kFrameAverage) {
    metrics.recall = frames_scored > 0 ? frame_recall_sum / static_cast<double>(frames_scored) : 0.0;
  } else {
    metrics.recall =
        pooled_total > 0 ? static_cast<double>(pooled_hits) / static_cast<double>(pooled_total) : 0.0;
  }

  double class_sum = 0.0;
  int classes = 0;
  for (const auto& [predicate, stats] : metrics.per_predicate) {
    if (stats.total > 0) {
      class_sum += stats.recall();
      ++classes;
    }
  }
  metrics.mean_recall = classes > 0 ? class_sum / classes : 0.0;
  return metrics;
}

NllResult nll_objective(const FrameSceneGraph& gt,
                        const std::map<std::pair<std::string, std::string>,
                                       std::vector<double>>& pair_distributions) {
  NllResult result;
  std::map<std::pair<std::string, std::string>, std::vector<double>> normalized;
  std::set<std::pair<std::string, std::string>> adjusted;
  double total_nll = 0.0;

  for (const RelationshipTriplet& t : gt.triplets) {
    const std::pair<std::string, std::string> pair{t.subject_id, t.object_id};
    double probability = kProbabilityFloor;

    auto it = pair_distributions.find(pair);
    if (it == pair_distributions.end()) {
      ++result.missing_pairs;
    } else {
      auto cached = normalized.find(pair);
      if (cached == normalized.end()) {
        std::vector<double> dist = it->second;
        double sum = 0.0;
        for (double v : dist) {
          if (v < 0.0) throw std::invalid_argument("nll_objective: negative probability");
          sum += v;
        }
        if (sum > 0.0 && std::abs(sum - 1.0) > 1e-9) {
          for (double& v : dist) v /= sum;
          if (adjusted.insert(pair).second) ++result.renormalized;
        }
        cached = normalized.emplace(pair, std::move(dist)).first;
      }
      const std::vector<double>& dist = cached->second;
      if (t.predicate >= 0 && static_cast<std::size_t>(t.predicate) < dist.size()) {
        probability = std::max(dist[static_cast<std::size_t>(t.predicate)], kProbabilityFloor);
      }
    }

    total_nll += -std::log(probability);
    ++result.triplets;
  }

  result.mean_nll = result.triplets > 0 ? total_nll / static_cast<double>(result.triplets) : 0.0;
  return result;
}

MetricReport evaluate_predictions(const AnnotationSet& ground_truth,
                                  std::span<const VideoPredictions> predictions,
                                  const RecallConfig& config, const std::string& task_label) {
  if (config.k_values.empty()) {
    throw std::invalid_argument("evaluate_predictions: k_values must not be empty");
  }
  for (std::size_t i = 1; i < config.k_values.size(); ++i) {
    if (config.k_values[i] <= config.k_values[i - 1]) {
      throw std::invalid_argument("evaluate_predictions: k_values must be strictly increasing");
    }
  }

  std::map<std::pair<std::string, int>, const PredictedGraph*> by_frame;
  for (const VideoPredictions& video : predictions) {
    for (const PredictedGraph& frame : video.frames) {
      by_frame[{video.video_id, frame.frame_index}] = &frame;
    }
  }

  static const PredictedGraph kEmptyPrediction{};
  std::vector<std::pair<FrameSceneGraph, PredictedGraph>> frames;
  MetricReport report;
  report.task = task_label;
  report.constraint = config.constraint;

  const auto vocab_size = static_cast<std::size_t>(ground_truth.vocab.size());
  double nll_sum = 0.0;

  for (const VideoAnnotation& video : ground_truth.videos) {
    for (const FrameSceneGraph& gt : video.frames) {
      auto it = by_frame.find({video.video_id, gt.frame_index});
      const PredictedGraph& pred = it != by_frame.end() ? *it->second : kEmptyPrediction;
      if (gt.triplets.empty()) {
        ++report.frames_skipped;
        continue;
      }
      ++report.frames_scored;
      frames.emplace_back(gt, pred);

      // Candidate scores per pair become the NLL distributions.
      std::map<std::pair<std::string, std::string>, std::vector<double>> distributions;
      for (const PredictedCandidate& c : pred.candidates) {
        auto& dist = distributions[{c.subject_id, c.object_id}];
        if (dist.empty()) dist.assign(vocab_size, 0.0);
        if (c.predicate >= 0 && static_cast<std::size_t>(c.predicate) < vocab_size) {
          dist[static_cast<std::size_t>(c.predicate)] += c.score;
        }
      }
      const NllResult frame_nll = nll_objective(gt, distributions);
      nll_sum += frame_nll.mean_nll * static_cast<double>(frame_nll.triplets);
      report.nll.triplets += frame_nll.triplets;
      report.nll.missing_pairs += frame_nll.missing_pairs;
      report.nll.renormalized += frame_nll.renormalized;
    }
  }
  report.nll.mean_nll =
      report.nll.triplets > 0 ? nll_sum / static_cast<double>(report.nll.triplets) : 0.0;

  for (int k : config.k_values) {
    report.per_k[k] = mean_recall_at_k(frames, k, config.constraint, config.aggregate,
                                       config.iou_threshold);
  }
  if (!report.per_k.empty()) report.per_predicate = report.per_k.rbegin()->second.per_predicate;
  return report;
}

std::string to_json(const MetricReport& report) {
  JsonWriter out;
  out.begin_object();
  out.key("task").value(report.task);
  out.key("constraint").value(to_string(report.constraint));
  out.key("per_k").begin_object();
  for (const auto& [k, metrics] : report.per_k) {
    out.key(std::to_string(k)).begin_object();
    out.key("recall").value(metrics.recall);
    out.key("mean_recall").value(metrics.mean_recall);
    out.end_object();
  }
  out.end_object();
  out.key("per_predicate").begin_array();
  for (const auto& [predicate, stats] : report.per_predicate) {
    out.begin_object();
    out.key("predicate").value(predicate);
    out.key("hits").value(stats.hits);
    out.key("total").value(stats.total);
    out.key("recall").value(stats.recall());
    out.end_object();
  }
  out.end_array();
  out.key("nll").begin_object();
  out.key("mean_nll").value(report.nll.mean_nll);
  out.key("triplets").value(report.nll.triplets);
  out.key("missing_pairs").value(report.nll.missing_pairs);
  out.key("renormalized").value(report.nll.renormalized);
  out.end_object();
  out.key("frames_scored").value(report.frames_scored);
  out.key("frames_skipped").value(report.frames_skipped);
  out.end_object();
  return out.take();
}

std::string to_csv(const MetricReport& report) {
  std::ostringstream out;
  out << "task,k,constraint,recall,mean_recall,nll,frames_scored,frames_skipped\n";
  for (const auto& [k, metrics] : report.per_k) {
    out << report.task << ',' << k << ',' << to_string(report.constraint) << ','
        << format_double(metrics.recall) << ',' << format_double(metrics.mean_recall) << ','
        << format_double(report.nll.mean_nll) << ',' << report.frames_scored << ','
        << report.frames_skipped << '\n';
  }
  return out.str();
}

std::string to_table(const MetricReport& report) {
  std::ostringstream out;
  out << "task: " << report.task << "  constraint: " << to_string(report.constraint) << "\n";
  out << std::setw(6) << "K" << std::setw(12) << "R@K" << std::setw(12) << "mR@K" << "\n";
  out << std::string(30, '-') << "\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& [k, metrics] : report.per_k) {
    out << std::setw(6) << k << std::setw(12) << metrics.recall << std::setw(12)
        << metrics.mean_recall << "\n";
  }
  out << std::string(30, '-') << "\n";
  out << "nll: " << std::setprecision(6) << report.nll.mean_nll
      << "  frames scored: " << report.frames_scored
      << "  skipped: " << report.frames_skipped << "\n";
  return out.str();
}

}  // namespace hypersgg
