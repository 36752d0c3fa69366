#include "hypersgg/model.hpp"

#include <set>
#include <sstream>
#include <unordered_set>

namespace hypersgg {

PredicateVocab::PredicateVocab(std::vector<std::string> categories)
    : categories_(std::move(categories)) {
  for (int i = 0; i < size(); ++i) {
    index_.emplace(categories_[static_cast<std::size_t>(i)], i);
  }
}

std::optional<PredicateId> PredicateVocab::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string frame_tag(const VideoAnnotation& ann, int frame_index) {
  std::ostringstream out;
  out << "video '" << ann.video_id << "' frame " << frame_index;
  return out.str();
}

}  // namespace

std::vector<std::string> validate_annotation(const VideoAnnotation& ann) {
  std::vector<std::string> violations;
  auto report = [&violations](const std::string& message) { violations.push_back(message); };

  // Vocabulary: unique, non-empty names.
  {
    std::unordered_set<std::string> seen;
    for (int i = 0; i < ann.vocab.size(); ++i) {
      const std::string& name = ann.vocab.name(i);
      if (name.empty()) {
        report("vocab entry " + std::to_string(i) + " is empty");
      } else if (!seen.insert(name).second) {
        report("vocab entry " + std::to_string(i) + " duplicates name '" + name + "'");
      }
    }
  }

  if (ann.frame_count < 1) {
    report("video '" + ann.video_id + "' has frame_count " + std::to_string(ann.frame_count) + " < 1");
  }

  int previous_index = -1;
  // category seen per entity_id, for id-stability checking across frames
  std::unordered_map<std::string, std::string> category_of;

  for (const FrameSceneGraph& frame : ann.frames) {
    const std::string tag = frame_tag(ann, frame.frame_index);

    if (frame.frame_index <= previous_index) {
      report(tag + ": frame indices not strictly increasing (previous " +
             std::to_string(previous_index) + ")");
    }
    previous_index = frame.frame_index;
    if (frame.frame_index < 0 || frame.frame_index >= ann.frame_count) {
      report(tag + ": frame_index outside [0, frame_count)");
    }

    std::unordered_set<std::string> ids_in_frame;
    for (const EntityInstance& entity : frame.entities) {
      if (!ids_in_frame.insert(entity.entity_id).second) {
        report(tag + ": duplicate entity_id '" + entity.entity_id + "'");
      }
      if (entity.frame_index != frame.frame_index) {
        report(tag + ": entity '" + entity.entity_id + "' carries frame_index " +
               std::to_string(entity.frame_index));
      }
      if (entity.bbox && !(entity.bbox->w > 0 && entity.bbox->h > 0)) {
        report(tag + ": entity '" + entity.entity_id + "' bbox has non-positive size");
      }
      auto [it, inserted] = category_of.emplace(entity.entity_id, entity.category);
      if (!inserted && it->second != entity.category) {
        report(tag + ": entity '" + entity.entity_id + "' changes category from '" +
               it->second + "' to '" + entity.category + "'");
      }
    }

    std::set<std::tuple<std::string, std::string, PredicateId>> triples_seen;
    for (const RelationshipTriplet& triplet : frame.triplets) {
      const std::string pair_tag =
          "(" + triplet.subject_id + ", " + triplet.object_id + ")";
      if (triplet.subject_id == triplet.object_id) {
        report(tag + ": triplet " + pair_tag + " has subject == object");
      }
      if (!ann.vocab.contains(triplet.predicate)) {
        report(tag + ": triplet " + pair_tag + " uses unknown predicate id " +
               std::to_string(triplet.predicate));
      }
      if (!ids_in_frame.count(triplet.subject_id)) {
        report(tag + ": triplet subject '" + triplet.subject_id + "' is not an entity of this frame");
      }
      if (!ids_in_frame.count(triplet.object_id)) {
        report(tag + ": triplet object '" + triplet.object_id + "' is not an entity of this frame");
      }
      if (triplet.score && !(*triplet.score >= 0.0 && *triplet.score <= 1.0)) {
        report(tag + ": triplet " + pair_tag + " score outside [0, 1]");
      }
      if (!triples_seen.insert({triplet.subject_id, triplet.object_id, triplet.predicate}).second) {
        report(tag + ": duplicate triple " + pair_tag + " predicate " +
               std::to_string(triplet.predicate));
      }
    }
  }

  return violations;
}

}  // namespace hypersgg
