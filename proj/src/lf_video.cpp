#include "lftensor/lf_video.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lftensor/io.hpp"
#include "lftensor/parallel.hpp"

namespace lftensor::video {
namespace {

using nlohmann::json;

struct Axis {
    int i0, i1;
    double w;
};

Axis axis(double coord, int n) {
    const double c = std::clamp(coord, 0.0, static_cast<double>(n - 1));
    Axis a{};
    a.i0 = static_cast<int>(std::floor(c));
    a.i1 = std::min(a.i0 + 1, n - 1);
    a.w = c - a.i0;
    return a;
}

double sample_view(const LightField& lf, int v, int u, const Axis& ax, const Axis& ay, int c) {
    const double top = lf.at(v, u, ay.i0, ax.i0, c) * (1.0 - ax.w) + lf.at(v, u, ay.i0, ax.i1, c) * ax.w;
    const double bottom = lf.at(v, u, ay.i1, ax.i0, c) * (1.0 - ax.w) + lf.at(v, u, ay.i1, ax.i1, c) * ax.w;
    return top * (1.0 - ay.w) + bottom * ay.w;
}

std::string coord_label(double c) {
    if (c == std::round(c) && std::abs(c) < 1e9) return std::to_string(static_cast<long long>(c));
    std::ostringstream os;
    os << c;
    return os.str();
}

}  // namespace

void CameraPath::validate() const {
    if (frames.empty()) throw Error(ErrorCode::InvalidArgument, "camera path has no frames");
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(model.focal_length) || !finite(model.v_m) || !finite(model.u_extent))
        throw Error(ErrorCode::InvalidArgument, "camera constants must be finite");
    for (const Pose& pose : frames)
        if (!std::all_of(pose.p.begin(), pose.p.end(), finite) || !std::all_of(pose.r.begin(), pose.r.end(), finite))
            throw Error(ErrorCode::InvalidArgument, "camera pose must be finite");
}

Image render_view_at_pose(const LightField& lf, const Pose& pose, const CameraModel& model, ViewCoord view) {
    if (lf.angular_rows() < 2 || lf.angular_cols() < 2)
        throw Error(ErrorCode::DegenerateAngularGrid, "angular interpolation needs at least 2x2 views");
    const double half_u = model.u_extent / 2.0;
    const double cz = std::cos(pose.r[2]), sz = std::sin(pose.r[2]);
    const double px = pose.p[0] + model.focal_length * pose.r[0];
    const double py = pose.p[1] + model.focal_length * pose.r[1];
    const double pz = pose.p[2];

    Image out(lf.height(), lf.width(), LightField::kChannels);
    parallel_for(static_cast<std::size_t>(lf.height()), [&](std::size_t row) {
        const int y = static_cast<int>(row);
        for (int x = 0; x < lf.width(); ++x) {
            const double xj = (x - half_u) * cz - y * sz + half_u;
            const double yj = (x - half_u) * sz + y * cz;
            const Axis au = axis(view.u + px - xj * pz, lf.angular_cols());
            const Axis av = axis(view.v + py - yj * pz, lf.angular_rows());
            const Axis ax = axis(xj, lf.width());
            const Axis ay = axis(yj, lf.height());
            for (int c = 0; c < LightField::kChannels; ++c) {
                const double near_row = sample_view(lf, av.i0, au.i0, ax, ay, c) * (1.0 - au.w) +
                                        sample_view(lf, av.i0, au.i1, ax, ay, c) * au.w;
                const double far_row = sample_view(lf, av.i1, au.i0, ax, ay, c) * (1.0 - au.w) +
                                       sample_view(lf, av.i1, au.i1, ax, ay, c) * au.w;
                out.at(y, x, c) = near_row * (1.0 - av.w) + far_row * av.w;
            }
        }
    });
    return out;
}

std::vector<ViewCoord> stereo_views(const CameraModel& model) {
    return {{0.0, model.v_m}, {model.u_extent, model.v_m}};
}

std::vector<ViewCoord> grid_views(const LightField& lf) {
    std::vector<ViewCoord> out;
    for (int v = 0; v < lf.angular_rows(); ++v)
        for (int u = 0; u < lf.angular_cols(); ++u) out.push_back({static_cast<double>(u), static_cast<double>(v)});
    return out;
}

VideoFrames simulate_lf_video(const LightField& lf, const CameraPath& path, const std::vector<ViewCoord>& views) {
    path.validate();
    if (views.empty()) throw Error(ErrorCode::InvalidArgument, "no output views requested");
    VideoFrames frames;
    frames.reserve(path.frames.size());
    for (const Pose& pose : path.frames) {
        std::vector<Image> frame;
        frame.reserve(views.size());
        for (const ViewCoord& view : views) frame.push_back(render_view_at_pose(lf, pose, path.model, view));
        frames.push_back(std::move(frame));
    }
    return frames;
}

CameraPath load_camera_path(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + file.string());
    CameraPath path;
    try {
        const json j = json::parse(in);
        path.model.focal_length = j.value("focal_length", 1.0);
        path.model.v_m = j.value("v_m", 0.0);
        path.model.u_extent = j.value("u_extent", 1.0);
        for (const json& f : j.at("frames")) {
            Pose pose;
            pose.p = f.value("p", std::array<double, 3>{0.0, 0.0, 0.0});
            pose.r = f.value("r", std::array<double, 3>{0.0, 0.0, 0.0});
            path.frames.push_back(pose);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::CorruptDescriptor, file.string() + ": " + e.what());
    }
    path.validate();
    return path;
}

std::string camera_path_json(const CameraPath& path) {
    json frames = json::array();
    for (const Pose& pose : path.frames) frames.push_back({{"p", pose.p}, {"r", pose.r}});
    const json j = {{"focal_length", path.model.focal_length},
                    {"v_m", path.model.v_m},
                    {"u_extent", path.model.u_extent},
                    {"frames", frames}};
    return j.dump(2);
}

void save_lf_video(const VideoFrames& frames, const std::vector<ViewCoord>& views, const CameraPath& path,
                   const std::filesystem::path& dir, int grid_rows, int grid_cols) {
    const bool grid = grid_rows > 0 && grid_cols > 0 &&
                      views.size() == static_cast<std::size_t>(grid_rows) * grid_cols;
    json view_list = json::array();
    for (const ViewCoord& view : views)
        view_list.push_back({{"u", view.u}, {"v", view.v},
                             {"file", "view_" + coord_label(view.v) + "_" + coord_label(view.u) + ".png"}});
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const std::filesystem::path frame_dir = dir / ("frame_" + std::to_string(t));
        std::error_code ec;
        std::filesystem::create_directories(frame_dir, ec);
        if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + frame_dir.string());
        for (std::size_t i = 0; i < views.size(); ++i)
            io::write_png(frames[t][i], frame_dir / view_list[i]["file"].get<std::string>());
        if (grid && !frames[t].empty()) {
            const json meta = {{"angular_rows", grid_rows},
                               {"angular_cols", grid_cols},
                               {"height", frames[t].front().height()},
                               {"width", frames[t].front().width()}};
            std::ofstream(frame_dir / "meta.json") << meta.dump(2) << "\n";
        }
    }
    const json descriptor = {{"frames", frames.size()}, {"views", view_list}, {"path", json::parse(camera_path_json(path))}};
    std::ofstream out(dir / "video.json", std::ios::trunc);
    if (!(out << descriptor.dump(2) << "\n")) throw Error(ErrorCode::IoFailure, "cannot write video.json");
}

}  // namespace lftensor::video
