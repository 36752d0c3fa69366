#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "hypersgg/model.hpp"

namespace hypersgg {

// Canonical annotation document:
// {
//   "vocab": ["holding", ...],
//   "videos": [{
//     "video_id": "...", "frame_count": T,
//     "frames": [{
//       "frame_index": t,
//       "entities": [{"entity_id": "...", "category": "...", "bbox": [x,y,w,h]?}],
//       "triplets": [[subject_id, object_id, predicate_index], ...]
//     }]
//   }]
// }
// Predicates are referenced by index into the top-level vocab.
std::string annotation_schema();

// Parses and validates; any parse failure or invariant violation raises
// DataError with every violation listed.
AnnotationSet annotations_from_json(const std::string& text);
AnnotationSet load_annotations(const std::filesystem::path& path);

// Canonical writer for the schema above. Round-tripping through
// annotations_from_json reproduces the set exactly.
std::string to_json(const AnnotationSet& set);
void save_annotations(const AnnotationSet& set, const std::filesystem::path& path);

}  // namespace hypersgg
