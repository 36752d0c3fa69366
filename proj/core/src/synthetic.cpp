#include "hypersgg/synthetic.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "hypersgg/errors.hpp"
#include "hypersgg/rng.hpp"

namespace hypersgg {

std::vector<double> uniform_kernel(int vocab_size) {
  if (vocab_size < 1) throw ConfigError("uniform_kernel: vocab_size must be >= 1");
  const auto n = static_cast<std::size_t>(vocab_size);
  return std::vector<double>(n * n, 1.0 / static_cast<double>(vocab_size));
}

std::vector<double> dominant_kernel(int vocab_size, double dominant_weight) {
  if (vocab_size < 2) throw ConfigError("dominant_kernel: vocab_size must be >= 2");
  if (!(dominant_weight > 0.0 && dominant_weight <= 1.0)) {
    throw ConfigError("dominant_kernel: dominant_weight must lie in (0, 1]");
  }
  const auto n = static_cast<std::size_t>(vocab_size);
  std::vector<double> kernel(n * n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    if (vocab_size == 2) {
      kernel[m * n + (m + 1) % n] = 1.0;
      continue;
    }
    const double rest = (1.0 - dominant_weight) / static_cast<double>(vocab_size - 2);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == m) continue;
      kernel[m * n + j] = (j == (m + 1) % n) ? dominant_weight : rest;
    }
  }
  return kernel;
}

std::vector<double> cycle_kernel(int vocab_size) {
  if (vocab_size < 2) throw ConfigError("cycle_kernel: vocab_size must be >= 2");
  const auto n = static_cast<std::size_t>(vocab_size);
  std::vector<double> kernel(n * n, 0.0);
  for (std::size_t m = 0; m < n; ++m) kernel[m * n + (m + 1) % n] = 1.0;
  return kernel;
}

namespace {

void check_config(const SynthConfig& config) {
  if (config.num_videos < 1) throw ConfigError("generate_synthetic: num_videos must be >= 1");
  if (config.frames_per_video < 1) {
    throw ConfigError("generate_synthetic: frames_per_video must be >= 1");
  }
  if (config.vocab_size < 1) throw ConfigError("generate_synthetic: vocab_size must be >= 1");
  if (config.num_pairs < 0) throw ConfigError("generate_synthetic: num_pairs must be >= 0");
  if (config.num_pairs > 0 && config.num_entities < 2) {
    throw ConfigError("generate_synthetic: pairs need at least 2 entities");
  }
  const std::int64_t max_pairs = static_cast<std::int64_t>(config.num_entities) *
                                 (static_cast<std::int64_t>(config.num_entities) - 1);
  if (config.num_pairs > max_pairs) {
    throw ConfigError("generate_synthetic: num_pairs exceeds ordered pairs of distinct entities");
  }
  if (!(config.p_stay >= 0.0 && config.p_stay <= 1.0)) {
    throw ConfigError("generate_synthetic: p_stay must lie in [0, 1]");
  }
  const auto n = static_cast<std::size_t>(config.vocab_size);
  if (config.kernel.size() != n * n) {
    throw ConfigError("generate_synthetic: kernel must be vocab_size^2 row-major");
  }
  for (std::size_t m = 0; m < n; ++m) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = config.kernel[m * n + j];
      if (w < 0.0) throw ConfigError("generate_synthetic: kernel entries must be >= 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ConfigError("generate_synthetic: kernel row " + std::to_string(m) +
                        " sums to " + std::to_string(sum));
    }
  }
}

}  // namespace

AnnotationSet generate_synthetic(const SynthConfig& config) {
  check_config(config);

  const auto vocab_size = static_cast<std::size_t>(config.vocab_size);
  std::vector<std::string> names;
  names.reserve(vocab_size);
  for (int i = 0; i < config.vocab_size; ++i) names.push_back("rel_" + std::to_string(i));

  AnnotationSet set;
  set.vocab = PredicateVocab(std::move(names));

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < config.num_entities && static_cast<int>(pairs.size()) < config.num_pairs; ++i) {
    for (int j = 0; j < config.num_entities && static_cast<int>(pairs.size()) < config.num_pairs; ++j) {
      if (i != j) pairs.emplace_back(i, j);
    }
  }

  for (int v = 0; v < config.num_videos; ++v) {
    Rng rng = Rng::stream(config.seed, static_cast<std::uint64_t>(v));

    VideoAnnotation video;
    video.video_id = "video_" + std::to_string(v);
    video.frame_count = config.frames_per_video;
    video.vocab = set.vocab;

    std::vector<PredicateId> current(pairs.size(), 0);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      current[p] = static_cast<PredicateId>(rng.index(vocab_size));
    }

    std::vector<double> row(vocab_size, 0.0);
    for (int t = 0; t < config.frames_per_video; ++t) {
      if (t > 0) {
        for (std::size_t p = 0; p < pairs.size(); ++p) {
          const double stay_draw = rng.unit();
          if (stay_draw < config.p_stay) continue;
          const auto m = static_cast<std::size_t>(current[p]);
          double off_diagonal = 0.0;
          for (std::size_t j = 0; j < vocab_size; ++j) {
            row[j] = (j == m) ? 0.0 : config.kernel[m * vocab_size + j];
            off_diagonal += row[j];
          }
          // A pure self-loop row cannot leave; the pair keeps its predicate.
          if (off_diagonal <= 0.0) continue;
          current[p] = static_cast<PredicateId>(rng.weighted_index(row));
        }
      }

      FrameSceneGraph frame;
      frame.frame_index = t;
      for (int e = 0; e < config.num_entities; ++e) {
        EntityInstance entity;
        entity.entity_id = "e" + std::to_string(e);
        entity.category = "class_" + std::to_string(e % 3);
        entity.frame_index = t;
        frame.entities.push_back(std::move(entity));
      }
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        RelationshipTriplet triplet;
        triplet.subject_id = "e" + std::to_string(pairs[p].first);
        triplet.object_id = "e" + std::to_string(pairs[p].second);
        triplet.predicate = current[p];
        frame.triplets.push_back(std::move(triplet));
      }
      video.frames.push_back(std::move(frame));
    }
    set.videos.push_back(std::move(video));
  }

  return set;
}

}  // namespace hypersgg
