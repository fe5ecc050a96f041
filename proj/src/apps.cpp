#include "lftensor/apps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lftensor/parallel.hpp"

namespace lftensor::apps {

Image refocus(const LightField& lf, double focus_disparity, double aperture_radius) {
    require_odd_angular(lf, "refocus");
    if (!(aperture_radius >= 0.0)) throw Error(ErrorCode::InvalidArgument, "aperture radius must be >= 0");
    if (!std::isfinite(focus_disparity)) throw Error(ErrorCode::InvalidArgument, "focus disparity must be finite");

    struct Member {
        int v, u;
    };
    std::vector<Member> members;
    for (int v = 0; v < lf.angular_rows(); ++v)
        for (int u = 0; u < lf.angular_cols(); ++u) {
            const int du = u - lf.center_col(), dv = v - lf.center_row();
            if (std::max(std::abs(du), std::abs(dv)) <= aperture_radius) members.push_back({v, u});
        }
    if (members.empty()) throw Error(ErrorCode::EmptyAperture, "aperture excludes every view");

    Image out(lf.height(), lf.width(), LightField::kChannels);
    const double inv_count = 1.0 / static_cast<double>(members.size());
    parallel_for(static_cast<std::size_t>(lf.height()), [&](std::size_t row) {
        const int y = static_cast<int>(row);
        for (const Member& m : members) {
            const double sx = -focus_disparity * (m.u - lf.center_col());
            const double sy = -focus_disparity * (m.v - lf.center_row());
            for (int x = 0; x < lf.width(); ++x) {
                const BilinearTaps t = bilinear_taps(lf.height(), lf.width(), x + sx, y + sy);
                for (int c = 0; c < LightField::kChannels; ++c) {
                    const double top = lf.at(m.v, m.u, t.y0, t.x0, c) * (1.0 - t.wx) + lf.at(m.v, m.u, t.y0, t.x1, c) * t.wx;
                    const double bottom =
                        lf.at(m.v, m.u, t.y1, t.x0, c) * (1.0 - t.wx) + lf.at(m.v, m.u, t.y1, t.x1, c) * t.wx;
                    out.at(y, x, c) += top * (1.0 - t.wy) + bottom * t.wy;
                }
            }
        }
        for (int x = 0; x < lf.width(); ++x)
            for (int c = 0; c < LightField::kChannels; ++c)
                out.at(y, x, c) = std::clamp(out.at(y, x, c) * inv_count, 0.0, 1.0);
    });
    return out;
}

Image extract_epi(const LightField& lf, EpiMode mode, int fixed_spatial, int fixed_angular) {
    auto bounds = [](int value, int limit, const char* what) {
        if (value < 0 || value >= limit)
            throw Error(ErrorCode::IndexOutOfBounds,
                        std::string(what) + " " + std::to_string(value) + " outside [0, " + std::to_string(limit) + ")");
    };
    if (mode == EpiMode::Horizontal) {
        bounds(fixed_spatial, lf.height(), "row");
        bounds(fixed_angular, lf.angular_rows(), "angular row");
        Image epi(lf.angular_cols(), lf.width(), LightField::kChannels);
        for (int u = 0; u < lf.angular_cols(); ++u)
            for (int x = 0; x < lf.width(); ++x)
                for (int c = 0; c < LightField::kChannels; ++c)
                    epi.at(u, x, c) = lf.at(fixed_angular, u, fixed_spatial, x, c);
        return epi;
    }
    bounds(fixed_spatial, lf.width(), "column");
    bounds(fixed_angular, lf.angular_cols(), "angular column");
    Image epi(lf.angular_rows(), lf.height(), LightField::kChannels);
    for (int v = 0; v < lf.angular_rows(); ++v)
        for (int y = 0; y < lf.height(); ++y)
            for (int c = 0; c < LightField::kChannels; ++c) epi.at(v, y, c) = lf.at(v, fixed_angular, y, fixed_spatial, c);
    return epi;
}

SubApertureImage novel_view(const LightField& lf, int u, int v) {
    if (u < 0 || u >= lf.angular_cols() || v < 0 || v >= lf.angular_rows())
        throw Error(ErrorCode::IndexOutOfBounds,
                    "view (" + std::to_string(v) + ", " + std::to_string(u) + ") outside the angular grid");
    return {lf.view(v, u), u - (lf.angular_cols() - 1) / 2.0, v - (lf.angular_rows() - 1) / 2.0};
}

}  // namespace lftensor::apps
