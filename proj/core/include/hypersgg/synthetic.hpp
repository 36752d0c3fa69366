#pragma once

#include <cstdint>
#include <vector>

#include "hypersgg/model.hpp"

namespace hypersgg {

// Synthetic Markov scene-graph generator. Every tracked pair carries one
// predicate that evolves per frame: with probability p_stay it is kept,
// otherwise the next predicate is sampled from the pair's kernel row with the
// current predicate excluded (renormalized). Ground-truth dynamics are known
// exactly, which makes the generator the oracle for transition-recovery
// tests.
struct SynthConfig {
  int num_videos = 1;
  int frames_per_video = 2;
  int num_entities = 2;
  int num_pairs = 1;
  int vocab_size = 2;
  std::vector<double> kernel;  // row-major vocab_size^2, rows sum to 1
  double p_stay = 0.0;
  std::uint64_t seed = 0;
};

// Row-stochastic kernels for common test setups.
// All mass spread evenly (self included; sampling skips self anyway).
std::vector<double> uniform_kernel(int vocab_size);
// Zero diagonal; entry (m, m+1 mod V) carries `dominant_weight`, the rest of
// the row shares what remains. Requires vocab_size >= 2; with vocab_size == 2
// the single off-diagonal entry takes all mass.
std::vector<double> dominant_kernel(int vocab_size, double dominant_weight);
// Deterministic cycle m -> m+1 mod V.
std::vector<double> cycle_kernel(int vocab_size);

// Deterministic for a fixed config: video v draws from RNG stream (seed, v);
// per video the draws are the initial predicate per pair (in pair order),
// then per frame and pair one stay/leave draw followed, when leaving, by one
// kernel draw. Throws ConfigError on inconsistent configs.
AnnotationSet generate_synthetic(const SynthConfig& config);

}  // namespace hypersgg
