#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "lftensor/image.hpp"
#include "lftensor/light_field.hpp"

namespace lftensor::video {

/// Translation p = (px, py, pz) and rotation r = (theta_x, theta_y, theta_z).
/// px, py are in view-grid steps, pz scales the spatial coordinates, r in radians.
struct Pose {
    std::array<double, 3> p{0.0, 0.0, 0.0};
    std::array<double, 3> r{0.0, 0.0, 0.0};
};

/// Camera constants shared by all frames, in view-grid units.
struct CameraModel {
    double focal_length = 1.0;
    double v_m = 0.0;       ///< angular row of the stereo pair
    double u_extent = 1.0;  ///< U: right stereo view column, also the rotation pivot
};

struct CameraPath {
    CameraModel model;
    std::vector<Pose> frames;

    void validate() const;
};

/// Continuous angular position (u column, v row) in grid indices.
struct ViewCoord {
    double u = 0.0;
    double v = 0.0;
};

/// out(x, y) = L(xj, yj, view_u + px' - xj pz, view_v + py' - yj pz) with
///   xj = (x - U/2) cos(tz) - y sin(tz) + U/2,  yj = (x - U/2) sin(tz) + y cos(tz),
///   px' = px + f tx,  py' = py + f ty,
/// sampled quadrilinearly with edge clamp in all four dimensions.
Image render_view_at_pose(const LightField& lf, const Pose& pose, const CameraModel& model, ViewCoord view);

/// The two stereo views (0, v_m) and (U, v_m).
std::vector<ViewCoord> stereo_views(const CameraModel& model);
/// Every integer grid position, row-major.
std::vector<ViewCoord> grid_views(const LightField& lf);

/// frames[t][i] renders views[i] at path.frames[t].
using VideoFrames = std::vector<std::vector<Image>>;
VideoFrames simulate_lf_video(const LightField& lf, const CameraPath& path, const std::vector<ViewCoord>& views);

CameraPath load_camera_path(const std::filesystem::path& file);
std::string camera_path_json(const CameraPath& path);

/// `frame_{t}/view_{v}_{u}.png` plus `video.json`. When the views form the
/// full integer grid each frame also gets a meta.json so it loads as a light field.
void save_lf_video(const VideoFrames& frames, const std::vector<ViewCoord>& views, const CameraPath& path,
                   const std::filesystem::path& dir, int grid_rows = 0, int grid_cols = 0);

}  // namespace lftensor::video
