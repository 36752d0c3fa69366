#include "hypersgg/anticipation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hypersgg/errors.hpp"
#include "hypersgg/file_util.hpp"
#include "hypersgg/json_writer.hpp"

namespace hypersgg {

bool candidate_before(const PredictedCandidate& a, const PredictedCandidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.subject_id != b.subject_id) return a.subject_id < b.subject_id;
  if (a.object_id != b.object_id) return a.object_id < b.object_id;
  return a.predicate < b.predicate;
}

std::pair<VideoAnnotation, VideoAnnotation> split_by_fraction(const VideoAnnotation& ann,
                                                              double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("split_by_fraction: fraction must lie in (0, 1)");
  }
  const auto total = static_cast<int>(ann.frames.size());
  if (total < 2) {
    throw std::invalid_argument("split_by_fraction: need at least 2 annotated frames");
  }
  // ceil with a small guard so exact products like 0.3 * 10 stay put.
  auto observed_count =
      static_cast<int>(std::ceil(fraction * static_cast<double>(total) - 1e-9));
  observed_count = std::clamp(observed_count, 1, total - 1);

  VideoAnnotation observed{ann.video_id, ann.frame_count, {}, ann.vocab};
  VideoAnnotation future{ann.video_id, ann.frame_count, {}, ann.vocab};
  observed.frames.assign(ann.frames.begin(), ann.frames.begin() + observed_count);
  future.frames.assign(ann.frames.begin() + observed_count, ann.frames.end());
  return {std::move(observed), std::move(future)};
}

std::vector<double> default_compatibility(const VideoAnnotation& observed,
                                          const std::string& subject_id,
                                          const std::string& object_id, CompatibilityMode mode) {
  const auto vocab_size = static_cast<std::size_t>(observed.vocab.size());
  if (mode == CompatibilityMode::kUniform) return std::vector<double>(vocab_size, 1.0);

  std::vector<double> counts(vocab_size, 0.0);
  double max_count = 0.0;
  for (const FrameSceneGraph& frame : observed.frames) {
    for (const RelationshipTriplet& t : frame.triplets) {
      if (t.subject_id != subject_id || t.object_id != object_id) continue;
      if (t.predicate < 0 || static_cast<std::size_t>(t.predicate) >= vocab_size) continue;
      max_count = std::max(max_count, counts[static_cast<std::size_t>(t.predicate)] += 1.0);
    }
  }
  if (max_count > 0.0) {
    for (double& c : counts) c /= max_count;
  }
  return counts;
}

CompatibilityFn make_compatibility(const VideoAnnotation& observed, CompatibilityMode mode) {
  return [&observed, mode](const std::string& subject_id, const std::string& object_id) {
    return default_compatibility(observed, subject_id, object_id, mode);
  };
}

namespace {

using PairKey = std::pair<std::string, std::string>;

}  // namespace

std::vector<PredictedGraph> predict_future(const VideoAnnotation& observed,
                                           const ProceduralGraph& pg,
                                           const AnticipationConfig& cfg,
                                           const CompatibilityFn& compat) {
  if (observed.frames.empty()) {
    throw std::invalid_argument("predict_future: observed segment has no frames");
  }
  if (!(observed.vocab == pg.vocab())) {
    throw ConfigError("predict_future: annotation vocabulary differs from the procedural graph");
  }
  if (cfg.horizon && *cfg.horizon < 1) {
    throw std::invalid_argument("predict_future: horizon must be >= 1");
  }
  if (cfg.top_k_candidates && *cfg.top_k_candidates < 1) {
    throw std::invalid_argument("predict_future: top_k_candidates must be >= 1");
  }

  const auto vocab_size = static_cast<std::size_t>(pg.size());
  const FrameSceneGraph& last = observed.frames.back();

  int last_target = observed.frame_count - 1;
  if (cfg.horizon) last_target = std::min(last_target, last.frame_index + *cfg.horizon);

  std::vector<PredictedGraph> result;
  if (last_target <= last.frame_index) return result;

  // Ordered pairs active in the last observed frame and their predicates,
  // sorted so the mixture below is canonical for any triplet listing order.
  std::map<PairKey, std::vector<PredicateId>> active;
  for (const RelationshipTriplet& t : last.triplets) {
    active[{t.subject_id, t.object_id}].push_back(t.predicate);
  }
  for (auto& [pair, predicates] : active) std::sort(predicates.begin(), predicates.end());

  if (active.empty()) {
    for (int frame = last.frame_index + 1; frame <= last_target; ++frame) {
      PredictedGraph empty;
      empty.frame_index = frame;
      empty.observation_empty = true;
      result.push_back(std::move(empty));
    }
    return result;
  }

  struct PairState {
    PairKey pair;
    std::vector<PredicateId> sources;         // current predicates at the cut
    std::vector<std::vector<double>> powers;  // running e_r W^k per source
    std::vector<double> compat;
  };

  std::vector<PairState> states;
  for (const auto& [pair, predicates] : active) {
    PairState state;
    state.pair = pair;
    state.sources = predicates;
    for (PredicateId r : predicates) {
      std::vector<double> unit(vocab_size, 0.0);
      unit[static_cast<std::size_t>(r)] = 1.0;
      state.powers.push_back(std::move(unit));
    }
    if (compat) {
      state.compat = compat(pair.first, pair.second);
      if (state.compat.size() != vocab_size) {
        throw std::invalid_argument("predict_future: compatibility scorer returned wrong size");
      }
      // A scorer with no evidence returns all zeros; fall back to uniform.
      if (std::all_of(state.compat.begin(), state.compat.end(),
                      [](double v) { return v == 0.0; })) {
        state.compat.assign(vocab_size, 1.0);
      }
    } else {
      state.compat.assign(vocab_size, 1.0);
    }
    states.push_back(std::move(state));
  }

  auto advance = [&pg, vocab_size](std::vector<double>& dist) {
    std::vector<double> next(vocab_size, 0.0);
    for (std::size_t m = 0; m < vocab_size; ++m) {
      if (dist[m] == 0.0) continue;
      const auto row = pg.row(static_cast<PredicateId>(m));
      for (std::size_t j = 0; j < vocab_size; ++j) next[j] += dist[m] * row[j];
    }
    dist.swap(next);
  };

  for (int frame = last.frame_index + 1; frame <= last_target; ++frame) {
    PredictedGraph predicted;
    predicted.frame_index = frame;

    for (PairState& state : states) {
      for (auto& power : state.powers) advance(power);

      // Mixture over the pair's current predicates. Per source: either the
      // renormalized marginal, or, with persistence, the raw marginal plus
      // the un-transitioned residual returned to the source predicate.
      const auto source_count = static_cast<double>(state.sources.size());
      std::vector<double> mixture(vocab_size, 0.0);
      std::vector<double> top_share(vocab_size, 0.0);
      std::vector<PredicateId> top_source(vocab_size, 0);
      for (std::size_t s = 0; s < state.sources.size(); ++s) {
        const std::vector<double>& marginal = state.powers[s];
        double sum = 0.0;
        for (double v : marginal) sum += v;

        std::vector<double> contribution(vocab_size, 0.0);
        if (cfg.persistence_enabled) {
          contribution = marginal;
          contribution[static_cast<std::size_t>(state.sources[s])] += 1.0 - sum;
        } else if (sum > 0.0) {
          for (std::size_t j = 0; j < vocab_size; ++j) contribution[j] = marginal[j] / sum;
        }
        for (std::size_t j = 0; j < vocab_size; ++j) {
          const double share = contribution[j] / source_count;
          mixture[j] += share;
          if (share > top_share[j]) {
            top_share[j] = share;
            top_source[j] = state.sources[s];
          }
        }
      }

      std::vector<PredictedCandidate> pair_candidates;
      for (std::size_t j = 0; j < vocab_size; ++j) {
        const double score = mixture[j] * state.compat[j];
        if (score <= 0.0) continue;
        pair_candidates.push_back({state.pair.first, state.pair.second,
                                   static_cast<PredicateId>(j), score, top_source[j]});
      }
      std::sort(pair_candidates.begin(), pair_candidates.end(), candidate_before);
      if (cfg.top_k_candidates &&
          pair_candidates.size() > static_cast<std::size_t>(*cfg.top_k_candidates)) {
        pair_candidates.resize(static_cast<std::size_t>(*cfg.top_k_candidates));
      }
      predicted.candidates.insert(predicted.candidates.end(), pair_candidates.begin(),
                                  pair_candidates.end());
    }

    std::sort(predicted.candidates.begin(), predicted.candidates.end(), candidate_before);
    result.push_back(std::move(predicted));
  }

  return result;
}

std::string to_jsonl(std::span<const VideoPredictions> predictions) {
  std::string out;
  for (const VideoPredictions& video : predictions) {
    for (const PredictedGraph& frame : video.frames) {
      JsonWriter line;
      line.begin_object();
      line.key("video_id").value(video.video_id);
      line.key("frame_index").value(frame.frame_index);
      line.key("candidates").begin_array();
      for (const PredictedCandidate& c : frame.candidates) {
        line.begin_array();
        line.value(c.subject_id);
        line.value(c.object_id);
        line.value(c.predicate);
        line.value(c.score);
        line.end_array();
      }
      line.end_array();
      line.end_object();
      out += line.take();
      out += '\n';
    }
  }
  return out;
}

std::vector<VideoPredictions> predictions_from_jsonl(const std::string& text) {
  std::vector<VideoPredictions> result;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    if (line.empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError("predictions line " + std::to_string(line_number) + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("video_id") || !doc.contains("frame_index") ||
        !doc.contains("candidates")) {
      throw DataError("predictions line " + std::to_string(line_number) +
                      ": expected {video_id, frame_index, candidates}");
    }
    PredictedGraph frame;
    frame.frame_index = doc["frame_index"].get<int>();
    for (const auto& c : doc["candidates"]) {
      if (!c.is_array() || c.size() != 4) {
        throw DataError("predictions line " + std::to_string(line_number) +
                        ": candidates must be [subject, object, predicate, score]");
      }
      PredictedCandidate candidate;
      candidate.subject_id = c[0].get<std::string>();
      candidate.object_id = c[1].get<std::string>();
      candidate.predicate = c[2].get<PredicateId>();
      candidate.score = c[3].get<double>();
      candidate.last_predicate = candidate.predicate;  // provenance is not on the wire
      frame.candidates.push_back(std::move(candidate));
    }
    std::sort(frame.candidates.begin(), frame.candidates.end(), candidate_before);

    const std::string video_id = doc["video_id"].get<std::string>();
    if (result.empty() || result.back().video_id != video_id) {
      auto it = std::find_if(result.begin(), result.end(), [&video_id](const VideoPredictions& v) {
        return v.video_id == video_id;
      });
      if (it != result.end()) {
        it->frames.push_back(std::move(frame));
        continue;
      }
      result.push_back({video_id, {}});
    }
    result.back().frames.push_back(std::move(frame));
  }
  return result;
}

void save_predictions(std::span<const VideoPredictions> predictions,
                      const std::filesystem::path& path) {
  write_file_atomic(path, to_jsonl(predictions));
}

std::vector<VideoPredictions> load_predictions(const std::filesystem::path& path) {
  return predictions_from_jsonl(read_file(path));
}

}  // namespace hypersgg
