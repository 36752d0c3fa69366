#include "hypersgg/procedural_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "hypersgg/errors.hpp"
#include "hypersgg/file_util.hpp"
#include "hypersgg/json_writer.hpp"

namespace hypersgg {

namespace {
constexpr double kRowSumTolerance = 1e-9;
}

TransitionCounts::TransitionCounts(PredicateVocab vocab)
    : vocab_(std::move(vocab)),
      counts_(static_cast<std::size_t>(vocab_.size()) * static_cast<std::size_t>(vocab_.size()), 0) {}

std::int64_t TransitionCounts::at(PredicateId from, PredicateId to) const {
  if (!vocab_.contains(from) || !vocab_.contains(to)) {
    throw std::invalid_argument("TransitionCounts::at: predicate id out of range");
  }
  return counts_[static_cast<std::size_t>(from) * static_cast<std::size_t>(size()) +
                 static_cast<std::size_t>(to)];
}

void TransitionCounts::add(PredicateId from, PredicateId to, std::int64_t events) {
  if (!vocab_.contains(from) || !vocab_.contains(to)) {
    throw std::invalid_argument("TransitionCounts::add: predicate id out of range");
  }
  if (events < 0) throw std::invalid_argument("TransitionCounts::add: negative event count");
  counts_[static_cast<std::size_t>(from) * static_cast<std::size_t>(size()) +
          static_cast<std::size_t>(to)] += events;
}

std::int64_t TransitionCounts::from_total(PredicateId from) const {
  if (!vocab_.contains(from)) {
    throw std::invalid_argument("TransitionCounts::from_total: predicate id out of range");
  }
  std::int64_t total = 0;
  for (int n = 0; n < size(); ++n) total += at(from, n);
  return total;
}

void TransitionCounts::merge(const TransitionCounts& other) {
  if (!(vocab_ == other.vocab_)) throw ConfigError("TransitionCounts::merge: vocabulary mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

ProceduralGraph::ProceduralGraph(PredicateVocab vocab, std::vector<double> weights)
    : vocab_(std::move(vocab)), weights_(std::move(weights)) {
  const auto n = static_cast<std::size_t>(vocab_.size());
  if (weights_.size() != n * n) {
    throw std::invalid_argument("ProceduralGraph: weight matrix does not match vocab size");
  }
  absorbing_.assign(n, false);
  for (std::size_t m = 0; m < n; ++m) {
    if (weights_[m * n + m] != 0.0) {
      throw std::invalid_argument("ProceduralGraph: diagonal must be zero");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = weights_[m * n + j];
      if (!(w >= 0.0 && w <= 1.0)) {
        throw std::invalid_argument("ProceduralGraph: weight outside [0, 1]");
      }
      sum += w;
    }
    if (sum == 0.0) {
      absorbing_[m] = true;
    } else if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw std::invalid_argument("ProceduralGraph: row " + std::to_string(m) +
                                  " sums to " + std::to_string(sum));
    }
  }
}

double ProceduralGraph::weight(PredicateId from, PredicateId to) const {
  if (!vocab_.contains(from) || !vocab_.contains(to)) {
    throw std::invalid_argument("ProceduralGraph::weight: predicate id out of range");
  }
  return weights_[static_cast<std::size_t>(from) * static_cast<std::size_t>(size()) +
                  static_cast<std::size_t>(to)];
}

std::span<const double> ProceduralGraph::row(PredicateId from) const {
  if (!vocab_.contains(from)) {
    throw std::invalid_argument("ProceduralGraph::row: predicate id out of range");
  }
  return {weights_.data() + static_cast<std::size_t>(from) * static_cast<std::size_t>(size()),
          static_cast<std::size_t>(size())};
}

bool ProceduralGraph::is_absorbing(PredicateId id) const {
  if (!vocab_.contains(id)) {
    throw std::invalid_argument("ProceduralGraph::is_absorbing: predicate id out of range");
  }
  return absorbing_[static_cast<std::size_t>(id)];
}

std::vector<PredicateId> ProceduralGraph::absorbing_ids() const {
  std::vector<PredicateId> ids;
  for (int i = 0; i < size(); ++i) {
    if (absorbing_[static_cast<std::size_t>(i)]) ids.push_back(i);
  }
  return ids;
}

namespace {

using PairKey = std::pair<std::string, std::string>;

// Predicates held by each ordered (subject, object) pair in one frame, in
// triplet order.
std::map<PairKey, std::vector<PredicateId>> pair_predicates(const FrameSceneGraph& frame) {
  std::map<PairKey, std::vector<PredicateId>> result;
  for (const RelationshipTriplet& t : frame.triplets) {
    result[{t.subject_id, t.object_id}].push_back(t.predicate);
  }
  return result;
}

}  // namespace

TransitionCounts count_transitions(std::span<const VideoAnnotation> videos,
                                   const PredicateVocab& vocab) {
  for (const VideoAnnotation& video : videos) {
    if (!(video.vocab == vocab)) {
      throw ConfigError("count_transitions: video '" + video.video_id +
                        "' uses a different vocabulary");
    }
  }

  TransitionCounts counts(vocab);
  for (const VideoAnnotation& video : videos) {
    // Consecutive means frame indices t and t+1; gaps in the annotation
    // contribute nothing.
    std::map<int, std::map<PairKey, std::vector<PredicateId>>> by_index;
    for (const FrameSceneGraph& frame : video.frames) {
      by_index.emplace(frame.frame_index, pair_predicates(frame));
    }
    for (auto it = by_index.begin(); it != by_index.end(); ++it) {
      auto next = by_index.find(it->first + 1);
      if (next == by_index.end()) continue;
      for (const auto& [pair, current_preds] : it->second) {
        auto future = next->second.find(pair);
        if (future == next->second.end()) continue;
        for (PredicateId m : current_preds) {
          for (PredicateId n : future->second) counts.add(m, n);
        }
      }
    }
  }
  return counts;
}

TransitionCounts count_transitions(const AnnotationSet& set) {
  return count_transitions(std::span<const VideoAnnotation>(set.videos), set.vocab);
}

ProceduralGraph build_procedural_graph(const TransitionCounts& counts, double smoothing_alpha) {
  if (smoothing_alpha < 0.0) {
    throw std::invalid_argument("build_procedural_graph: smoothing_alpha must be >= 0");
  }
  const auto n = static_cast<std::size_t>(counts.size());
  std::vector<double> weights(n * n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    // Relative frequency, then zero diagonal, then rescale the residual mass.
    // Equivalent to normalizing the off-diagonal counts directly.
    double off_diagonal = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == m) continue;
      off_diagonal += static_cast<double>(counts.at(static_cast<PredicateId>(m),
                                                    static_cast<PredicateId>(j))) +
                      smoothing_alpha;
    }
    if (off_diagonal <= 0.0) continue;  // absorbing row
    for (std::size_t j = 0; j < n; ++j) {
      if (j == m) continue;
      const double mass = static_cast<double>(counts.at(static_cast<PredicateId>(m),
                                                        static_cast<PredicateId>(j))) +
                          smoothing_alpha;
      weights[m * n + j] = mass / off_diagonal;
    }
  }
  return ProceduralGraph(counts.vocab(), std::move(weights));
}

std::optional<NextPrediction> anticipate_next(const ProceduralGraph& pg, PredicateId current,
                                              std::span<const double> compat) {
  if (!pg.vocab().contains(current)) {
    throw std::invalid_argument("anticipate_next: current predicate out of range");
  }
  if (compat.size() != static_cast<std::size_t>(pg.size())) {
    throw std::invalid_argument("anticipate_next: compat must have one score per category");
  }
  if (pg.is_absorbing(current)) return std::nullopt;

  const auto row = pg.row(current);
  NextPrediction best{0, row[0] * compat[0]};
  for (int n = 1; n < pg.size(); ++n) {
    const double score = row[static_cast<std::size_t>(n)] * compat[static_cast<std::size_t>(n)];
    if (score > best.score) best = {n, score};
  }
  return best;
}

std::optional<NextPrediction> anticipate_next(const ProceduralGraph& pg, PredicateId current) {
  const std::vector<double> uniform(static_cast<std::size_t>(pg.size()), 1.0);
  return anticipate_next(pg, current, uniform);
}

std::vector<PredicateId> anticipate_greedy(const ProceduralGraph& pg, PredicateId current,
                                           int horizon) {
  if (horizon < 1) throw std::invalid_argument("anticipate_greedy: horizon must be >= 1");
  std::vector<PredicateId> chain;
  PredicateId state = current;
  for (int step = 0; step < horizon; ++step) {
    auto next = anticipate_next(pg, state);
    if (!next) break;
    chain.push_back(next->predicate);
    state = next->predicate;
  }
  return chain;
}

std::vector<double> anticipate_marginal(const ProceduralGraph& pg, PredicateId current,
                                        int horizon) {
  if (horizon < 1) throw std::invalid_argument("anticipate_marginal: horizon must be >= 1");
  if (!pg.vocab().contains(current)) {
    throw std::invalid_argument("anticipate_marginal: current predicate out of range");
  }
  const auto n = static_cast<std::size_t>(pg.size());
  std::vector<double> dist(pg.row(current).begin(), pg.row(current).end());
  std::vector<double> next(n, 0.0);
  for (int step = 1; step < horizon; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t m = 0; m < n; ++m) {
      if (dist[m] == 0.0) continue;
      const auto row = pg.row(static_cast<PredicateId>(m));
      for (std::size_t j = 0; j < n; ++j) next[j] += dist[m] * row[j];
    }
    dist.swap(next);
  }
  double sum = 0.0;
  for (double v : dist) sum += v;
  if (sum > 0.0) {
    for (double& v : dist) v /= sum;
  }
  return dist;
}

std::string to_json(const ProceduralGraph& pg) {
  JsonWriter out;
  out.begin_object();
  out.key("vocab").begin_array();
  for (const std::string& name : pg.vocab().categories()) out.value(name);
  out.end_array();
  out.key("weights").begin_array();
  for (double w : pg.weights()) out.value(w);
  out.end_array();
  out.key("absorbing").begin_array();
  for (PredicateId id : pg.absorbing_ids()) out.value(id);
  out.end_array();
  out.end_object();
  return out.take();
}

ProceduralGraph procedural_graph_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("procedural graph: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vocab") || !doc.contains("weights")) {
    throw DataError("procedural graph: expected {vocab, weights, absorbing}");
  }
  if (!doc["vocab"].is_array() || !doc["weights"].is_array()) {
    throw DataError("procedural graph: vocab and weights must be arrays");
  }
  std::vector<std::string> names;
  for (const auto& v : doc["vocab"]) {
    if (!v.is_string()) throw DataError("procedural graph: vocab entries must be strings");
    names.push_back(v.get<std::string>());
  }
  std::vector<double> weights;
  for (const auto& v : doc["weights"]) {
    if (!v.is_number()) throw DataError("procedural graph: weights entries must be numbers");
    weights.push_back(v.get<double>());
  }
  if (weights.size() != names.size() * names.size()) {
    throw DataError("procedural graph: weights length must be |vocab|^2");
  }
  ProceduralGraph pg;
  try {
    pg = ProceduralGraph(PredicateVocab(std::move(names)), std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("procedural graph: ") + e.what());
  }
  if (doc.contains("absorbing")) {
    std::vector<PredicateId> stated;
    for (const auto& v : doc["absorbing"]) {
      if (!v.is_number_integer()) throw DataError("procedural graph: absorbing ids must be integers");
      stated.push_back(v.get<PredicateId>());
    }
    if (stated != pg.absorbing_ids()) {
      throw DataError("procedural graph: absorbing list disagrees with the weight rows");
    }
  }
  return pg;
}

void save_procedural_graph(const ProceduralGraph& pg, const std::filesystem::path& path) {
  write_file_atomic(path, to_json(pg) + "\n");
}

ProceduralGraph load_procedural_graph(const std::filesystem::path& path) {
  return procedural_graph_from_json(read_file(path));
}

}  // namespace hypersgg
