#include "harness/trajectory_run.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

#include "core/error.hpp"
#include "harness/corpus.hpp"

namespace captem::harness {

TrajectoryResult run_trajectory(const std::vector<face::Detection>& detections,
                                const TrajectoryOptions& options) {
  if (options.frames == 0) throw Error(ErrorCode::kInvalidArgument, "--frames must be >= 1");
  TrajectoryResult result;

  std::size_t frame_count = options.frame_count.value_or(0);
  if (!options.frame_count) {
    for (const auto& d : detections) frame_count = std::max(frame_count, d.frame_idx + 1);
    if (detections.empty()) frame_count = options.frames;
  }
  if (frame_count == 0) throw Error(ErrorCode::kInvalidArgument, "frame count must be >= 1");

  const auto plan = face::downsample_plan(options.src_fps, frame_count);
  std::map<std::size_t, std::size_t> step_of;
  for (std::size_t s = 0; s < plan.size(); ++s) step_of[plan[s]] = s;

  std::vector<std::vector<face::Detection>> frames(plan.size());
  std::size_t dropped = 0;
  for (const auto& d : detections) {
    const auto it = step_of.find(d.frame_idx);
    if (it == step_of.end()) {
      ++dropped;
      continue;
    }
    frames[it->second].push_back(d);
  }
  if (detections.empty()) result.warnings.emplace_back("no detections; using uniform frames");
  if (dropped) {
    result.warnings.push_back(
        fmt::format("{} detection(s) on frames outside the downsampled plan ignored", dropped));
  }

  const auto tracks = face::associate_tracks(frames, options.association);
  std::vector<std::pair<int, face::TrackFeatures>> features;
  features.reserve(tracks.size());
  for (const auto& t : tracks) features.emplace_back(t.track_id, face::track_features(t, plan.size()));

  std::set<int> main_ids;
  if (!features.empty()) main_ids = face::select_main_tracks(features).main_track_ids;

  std::set<std::size_t> main_steps;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    TrackSummary s;
    s.track_id = tracks[i].track_id;
    s.features = features[i].second;
    s.is_main = main_ids.count(s.track_id) > 0;
    for (const auto& d : tracks[i].detections) {
      s.frames.push_back(d.frame_idx);
      if (s.is_main) main_steps.insert(step_of.at(d.frame_idx));
    }
    result.tracks.push_back(std::move(s));
  }

  for (auto step : face::select_frames(plan.size(), options.frames, main_steps)) {
    result.selected_frames.push_back(plan[step]);
  }
  return result;
}

TrajectoryResult run_trajectory_file(const std::filesystem::path& detections,
                                     const TrajectoryOptions& options) {
  return run_trajectory(read_detections_jsonl(detections), options);
}

std::string trajectory_to_json(const TrajectoryResult& result) {
  nlohmann::json tracks = nlohmann::json::array();
  for (const auto& t : result.tracks) {
    tracks.push_back({{"track_id", t.track_id},
                      {"frames", t.frames},
                      {"total_area", t.features.total_area},
                      {"avg_cos", t.features.avg_cos},
                      {"is_main", t.is_main}});
  }
  const nlohmann::json root = {{"tracks", tracks}, {"selected_frames", result.selected_frames}};
  return root.dump(2) + "\n";
}

}  // namespace captem::harness
