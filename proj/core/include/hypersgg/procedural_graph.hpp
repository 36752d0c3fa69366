#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "hypersgg/model.hpp"

namespace hypersgg {

// Counts of relationship-transition events between consecutive frames:
// counts(m, n) is the number of (video, frame t, ordered entity pair) events
// where the pair holds predicate m at t and predicate n at t + 1. When a pair
// holds several predicates in one frame, every cross combination counts once.
class TransitionCounts {
 public:
  explicit TransitionCounts(PredicateVocab vocab);

  const PredicateVocab& vocab() const { return vocab_; }
  int size() const { return vocab_.size(); }
  std::int64_t at(PredicateId from, PredicateId to) const;
  void add(PredicateId from, PredicateId to, std::int64_t events = 1);
  // Row sum including the diagonal.
  std::int64_t from_total(PredicateId from) const;
  // Elementwise addition; merge order never matters.
  void merge(const TransitionCounts& other);

 private:
  PredicateVocab vocab_;
  std::vector<std::int64_t> counts_;  // row-major size^2
};

// Predicate-transition model: relative transition frequencies with self-loops
// removed and every remaining row rescaled to sum to 1. Rows whose only mass
// was the diagonal (or that were never observed) are absorbing and stay all
// zero.
class ProceduralGraph {
 public:
  ProceduralGraph() = default;
  // weights must be |vocab|^2 row-major with a zero diagonal; each row either
  // sums to ~1 or is all zero. Throws std::invalid_argument otherwise.
  ProceduralGraph(PredicateVocab vocab, std::vector<double> weights);

  const PredicateVocab& vocab() const { return vocab_; }
  int size() const { return vocab_.size(); }
  double weight(PredicateId from, PredicateId to) const;
  std::span<const double> row(PredicateId from) const;
  const std::vector<double>& weights() const { return weights_; }
  bool is_absorbing(PredicateId id) const;
  std::vector<PredicateId> absorbing_ids() const;  // ascending

 private:
  PredicateVocab vocab_;
  std::vector<double> weights_;
  std::vector<bool> absorbing_;
};

// Tallies transition events over every video. All videos must carry `vocab`;
// a mismatch raises ConfigError. Videos may be processed independently and
// merged, so callers can parallelize across videos.
TransitionCounts count_transitions(std::span<const VideoAnnotation> videos,
                                   const PredicateVocab& vocab);
TransitionCounts count_transitions(const AnnotationSet& set);

// Relative frequencies, diagonal removed, rows renormalized. smoothing_alpha
// adds alpha to every off-diagonal cell before normalizing (0 keeps the
// estimate raw and leaves unobserved rows absorbing).
ProceduralGraph build_procedural_graph(const TransitionCounts& counts,
                                       double smoothing_alpha = 0.0);

struct NextPrediction {
  PredicateId predicate = 0;
  double score = 0.0;
  friend bool operator==(const NextPrediction&, const NextPrediction&) = default;
};

// Most probable next relationship: argmax over n of w(current, n) * compat[n],
// ties resolved toward the lowest predicate id. compat supplies one
// unit-interval score per category; the one-argument overload uses a uniform
// 1.0. Returns nullopt when `current` is absorbing.
std::optional<NextPrediction> anticipate_next(const ProceduralGraph& pg, PredicateId current,
                                              std::span<const double> compat);
std::optional<NextPrediction> anticipate_next(const ProceduralGraph& pg, PredicateId current);

// Follows anticipate_next with uniform compatibility for up to `horizon`
// steps, stopping early at absorbing states; the result may be shorter than
// the horizon.
std::vector<PredicateId> anticipate_greedy(const ProceduralGraph& pg, PredicateId current,
                                           int horizon);

// Row `current` of the horizon-th power of the weight matrix, renormalized
// when absorbing rows swallowed part of the mass. All-zero when every path
// has been absorbed.
std::vector<double> anticipate_marginal(const ProceduralGraph& pg, PredicateId current,
                                        int horizon);

// JSON document {"vocab": [...], "weights": row-major, "absorbing": [...]}.
// Weights are printed with 17 significant digits and parse back bit-exact.
std::string to_json(const ProceduralGraph& pg);
ProceduralGraph procedural_graph_from_json(const std::string& text);
void save_procedural_graph(const ProceduralGraph& pg, const std::filesystem::path& path);
ProceduralGraph load_procedural_graph(const std::filesystem::path& path);

}  // namespace hypersgg
