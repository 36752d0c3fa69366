#include "hypersgg/annotation_io.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "hypersgg/errors.hpp"
#include "hypersgg/file_util.hpp"
#include "hypersgg/json_writer.hpp"

namespace hypersgg {

std::string annotation_schema() {
  return R"({
  "vocab": ["<predicate name>", "..."],
  "videos": [
    {
      "video_id": "<string>",
      "frame_count": "<int >= 1>",
      "frames": [
        {
          "frame_index": "<0-based int, strictly increasing, < frame_count>",
          "entities": [
            {
              "entity_id": "<string, stable across frames>",
              "category": "<string>",
              "bbox": "[x, y, w, h] in pixels, optional, w > 0 and h > 0"
            }
          ],
          "triplets": [
            "[subject_entity_id, object_entity_id, predicate_index]"
          ]
        }
      ]
    }
  ]
}
)";
}

namespace {

const nlohmann::json& require(const nlohmann::json& obj, const char* field,
                              const std::string& where) {
  auto it = obj.find(field);
  if (it == obj.end()) throw DataError(where + ": missing field '" + field + "'");
  return *it;
}

}  // namespace

AnnotationSet annotations_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("annotations: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("annotations: top level must be an object");

  AnnotationSet set;
  const auto& vocab_json = require(doc, "vocab", "annotations");
  if (!vocab_json.is_array()) throw DataError("annotations: 'vocab' must be an array");
  std::vector<std::string> names;
  for (const auto& v : vocab_json) {
    if (!v.is_string()) throw DataError("annotations: vocab entries must be strings");
    names.push_back(v.get<std::string>());
  }
  set.vocab = PredicateVocab(std::move(names));

  const auto& videos_json = require(doc, "videos", "annotations");
  if (!videos_json.is_array()) throw DataError("annotations: 'videos' must be an array");

  for (std::size_t vi = 0; vi < videos_json.size(); ++vi) {
    const auto& video_json = videos_json[vi];
    const std::string video_where = "videos[" + std::to_string(vi) + "]";
    if (!video_json.is_object()) throw DataError(video_where + ": must be an object");

    VideoAnnotation video;
    video.vocab = set.vocab;
    const auto& id_json = require(video_json, "video_id", video_where);
    if (!id_json.is_string()) throw DataError(video_where + ".video_id: must be a string");
    video.video_id = id_json.get<std::string>();
    const auto& count_json = require(video_json, "frame_count", video_where);
    if (!count_json.is_number_integer()) {
      throw DataError(video_where + ".frame_count: must be an integer");
    }
    video.frame_count = count_json.get<int>();

    const auto& frames_json = require(video_json, "frames", video_where);
    if (!frames_json.is_array()) throw DataError(video_where + ".frames: must be an array");
    for (std::size_t fi = 0; fi < frames_json.size(); ++fi) {
      const auto& frame_json = frames_json[fi];
      const std::string frame_where = video_where + ".frames[" + std::to_string(fi) + "]";
      if (!frame_json.is_object()) throw DataError(frame_where + ": must be an object");

      FrameSceneGraph frame;
      const auto& index_json = require(frame_json, "frame_index", frame_where);
      if (!index_json.is_number_integer()) {
        throw DataError(frame_where + ".frame_index: must be an integer");
      }
      frame.frame_index = index_json.get<int>();

      const auto& entities_json = require(frame_json, "entities", frame_where);
      if (!entities_json.is_array()) throw DataError(frame_where + ".entities: must be an array");
      for (std::size_t ei = 0; ei < entities_json.size(); ++ei) {
        const auto& entity_json = entities_json[ei];
        const std::string entity_where = frame_where + ".entities[" + std::to_string(ei) + "]";
        if (!entity_json.is_object()) throw DataError(entity_where + ": must be an object");
        EntityInstance entity;
        const auto& eid = require(entity_json, "entity_id", entity_where);
        const auto& cat = require(entity_json, "category", entity_where);
        if (!eid.is_string() || !cat.is_string()) {
          throw DataError(entity_where + ": entity_id and category must be strings");
        }
        entity.entity_id = eid.get<std::string>();
        entity.category = cat.get<std::string>();
        entity.frame_index = frame.frame_index;
        if (entity_json.contains("bbox") && !entity_json["bbox"].is_null()) {
          const auto& bbox_json = entity_json["bbox"];
          if (!bbox_json.is_array() || bbox_json.size() != 4) {
            throw DataError(entity_where + ".bbox: must be [x, y, w, h]");
          }
          for (const auto& v : bbox_json) {
            if (!v.is_number()) throw DataError(entity_where + ".bbox: entries must be numbers");
          }
          entity.bbox = BBox{bbox_json[0].get<double>(), bbox_json[1].get<double>(),
                             bbox_json[2].get<double>(), bbox_json[3].get<double>()};
        }
        frame.entities.push_back(std::move(entity));
      }

      const auto& triplets_json = require(frame_json, "triplets", frame_where);
      if (!triplets_json.is_array()) throw DataError(frame_where + ".triplets: must be an array");
      for (std::size_t ti = 0; ti < triplets_json.size(); ++ti) {
        const auto& triplet_json = triplets_json[ti];
        const std::string triplet_where = frame_where + ".triplets[" + std::to_string(ti) + "]";
        if (!triplet_json.is_array() || triplet_json.size() != 3 ||
            !triplet_json[0].is_string() || !triplet_json[1].is_string() ||
            !triplet_json[2].is_number_integer()) {
          throw DataError(triplet_where + ": must be [subject_id, object_id, predicate_index]");
        }
        RelationshipTriplet triplet;
        triplet.subject_id = triplet_json[0].get<std::string>();
        triplet.object_id = triplet_json[1].get<std::string>();
        triplet.predicate = triplet_json[2].get<PredicateId>();
        frame.triplets.push_back(std::move(triplet));
      }

      video.frames.push_back(std::move(frame));
    }
    set.videos.push_back(std::move(video));
  }

  std::vector<std::string> violations;
  for (const VideoAnnotation& video : set.videos) {
    for (std::string& v : validate_annotation(video)) violations.push_back(std::move(v));
  }
  if (!violations.empty()) {
    std::ostringstream message;
    message << "annotations: " << violations.size() << " violation(s):";
    for (const std::string& v : violations) message << "\n  - " << v;
    throw DataError(message.str());
  }
  return set;
}

AnnotationSet load_annotations(const std::filesystem::path& path) {
  return annotations_from_json(read_file(path));
}

std::string to_json(const AnnotationSet& set) {
  for (const VideoAnnotation& video : set.videos) {
    if (!(video.vocab == set.vocab)) {
      throw ConfigError("to_json: video '" + video.video_id +
                        "' does not share the set's vocabulary");
    }
  }
  JsonWriter out;
  out.begin_object();
  out.key("vocab").begin_array();
  for (const std::string& name : set.vocab.categories()) out.value(name);
  out.end_array();
  out.key("videos").begin_array();
  for (const VideoAnnotation& video : set.videos) {
    out.begin_object();
    out.key("video_id").value(video.video_id);
    out.key("frame_count").value(video.frame_count);
    out.key("frames").begin_array();
    for (const FrameSceneGraph& frame : video.frames) {
      out.begin_object();
      out.key("frame_index").value(frame.frame_index);
      out.key("entities").begin_array();
      for (const EntityInstance& entity : frame.entities) {
        out.begin_object();
        out.key("entity_id").value(entity.entity_id);
        out.key("category").value(entity.category);
        if (entity.bbox) {
          out.key("bbox").begin_array();
          out.value(entity.bbox->x).value(entity.bbox->y);
          out.value(entity.bbox->w).value(entity.bbox->h);
          out.end_array();
        }
        out.end_object();
      }
      out.end_array();
      out.key("triplets").begin_array();
      for (const RelationshipTriplet& triplet : frame.triplets) {
        out.begin_array();
        out.value(triplet.subject_id);
        out.value(triplet.object_id);
        out.value(triplet.predicate);
        out.end_array();
      }
      out.end_array();
      out.end_object();
    }
    out.end_array();
    out.end_object();
  }
  out.end_array();
  out.end_object();
  return out.take();
}

void save_annotations(const AnnotationSet& set, const std::filesystem::path& path) {
  write_file_atomic(path, to_json(set) + "\n");
}

}  // namespace hypersgg
