#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hypersgg {

using PredicateId = int;

// Ordered list of relationship-category names. Ids are the 0-based positions
// in the list. Well-formedness (unique, non-empty names) is checked by
// validate_annotation rather than enforced at construction, so malformed
// vocabularies can be represented and reported as data violations.
class PredicateVocab {
 public:
  PredicateVocab() = default;
  explicit PredicateVocab(std::vector<std::string> categories);

  int size() const { return static_cast<int>(categories_.size()); }
  bool contains(PredicateId id) const { return id >= 0 && id < size(); }
  const std::string& name(PredicateId id) const { return categories_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& categories() const { return categories_; }

  // First occurrence wins when a name is duplicated.
  std::optional<PredicateId> find(std::string_view name) const;

  friend bool operator==(const PredicateVocab& a, const PredicateVocab& b) {
    return a.categories_ == b.categories_;
  }

 private:
  std::vector<std::string> categories_;
  std::unordered_map<std::string, PredicateId> index_;
};

struct BBox {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;
  friend bool operator==(const BBox&, const BBox&) = default;
};

struct EntityInstance {
  std::string entity_id;  // stable within a video across frames
  std::string category;
  std::optional<BBox> bbox;
  int frame_index = 0;
  friend bool operator==(const EntityInstance&, const EntityInstance&) = default;
};

struct RelationshipTriplet {
  std::string subject_id;
  std::string object_id;
  PredicateId predicate = 0;
  std::optional<double> score;  // absent or 1.0 for ground truth
  friend bool operator==(const RelationshipTriplet&, const RelationshipTriplet&) = default;
};

struct FrameSceneGraph {
  int frame_index = 0;
  std::vector<EntityInstance> entities;
  std::vector<RelationshipTriplet> triplets;
  friend bool operator==(const FrameSceneGraph&, const FrameSceneGraph&) = default;
};

struct VideoAnnotation {
  std::string video_id;
  int frame_count = 1;
  std::vector<FrameSceneGraph> frames;  // sorted by frame_index
  PredicateVocab vocab;
  friend bool operator==(const VideoAnnotation&, const VideoAnnotation&) = default;
};

// A loaded annotation file: one vocabulary shared by every video.
struct AnnotationSet {
  PredicateVocab vocab;
  std::vector<VideoAnnotation> videos;
  friend bool operator==(const AnnotationSet&, const AnnotationSet&) = default;
};

// Checks every structural invariant of the annotation and returns one
// human-readable description per breach; an empty result means the
// annotation is well formed. Pure and idempotent.
std::vector<std::string> validate_annotation(const VideoAnnotation& ann);

}  // namespace hypersgg
