#include "lftensor/warp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lftensor/parallel.hpp"

namespace lftensor::warp {
namespace {

void require_matching(const Image& img, const DisparityMap& d, const char* what) {
    if (img.height() != d.height() || img.width() != d.width())
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": image and disparity sizes differ");
}

FlowField disparity_flow(const DisparityMap& d, double du, double dv, double a) {
    FlowField flow(d.height(), d.width());
    for (std::size_t i = 0; i < d.size(); ++i) flow.data()[i] = {du * a * d.data()[i], dv * a * d.data()[i]};
    return flow;
}

double max_abs(const DisparityMap& d) {
    double m = 0.0;
    for (double v : d.data()) m = std::max(m, std::abs(v));
    return m;
}

double max_norm(const FlowField& f) {
    double m = 0.0;
    for (const FlowVector& v : f.data()) m = std::max(m, std::hypot(v.fx, v.fy));
    return m;
}

// Largest per-pixel displacement among all view-to-center warps.
double max_view_displacement(const LightField& lf, const DisparityMap& d, double a) {
    const double du = (lf.angular_cols() - 1) / 2.0;
    const double dv = (lf.angular_rows() - 1) / 2.0;
    return std::hypot(du, dv) * std::abs(a) * max_abs(d);
}

int mask_width(double displacement) { return static_cast<int>(std::ceil(displacement - 1e-12)); }

SubApertureImage sai_at(const LightField& lf, int v, int u) {
    return {lf.view(v, u), static_cast<double>(u - lf.center_col()), static_cast<double>(v - lf.center_row())};
}

}  // namespace

BaselineScale::BaselineScale(double a) : a_(a) {
    if (!std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "baseline scale must be finite");
}

std::optional<std::string> BaselineScale::warning() const {
    if (a_ >= 1.0 && a_ <= 3.0) return std::nullopt;
    std::ostringstream os;
    os << "baseline scale a=" << a_ << " is outside the recommended range [1, 3]";
    return os.str();
}

Image inverse_warp(const Image& src, const FlowField& flow) {
    if (src.height() != flow.height() || src.width() != flow.width())
        throw Error(ErrorCode::DimensionMismatch, "inverse_warp: image and flow sizes differ");
    Image out(src.height(), src.width(), src.channels());
    parallel_for(static_cast<std::size_t>(src.height()), [&](std::size_t row) {
        const int y = static_cast<int>(row);
        for (int x = 0; x < src.width(); ++x) {
            const FlowVector f = flow.at(y, x);
            for (int c = 0; c < src.channels(); ++c) out.at(y, x, c) = sample_bilinear(src, x + f.fx, y + f.fy, c);
        }
    });
    return out;
}

Image warp_view_to_center(const SubApertureImage& sai, const DisparityMap& d, BaselineScale scale) {
    require_matching(sai.image, d, "warp_view_to_center");
    return inverse_warp(sai.image, disparity_flow(d, -sai.du, -sai.dv, scale.value()));
}

Image warp_center_to_view(const Image& center, const DisparityMap& d, double du, double dv, BaselineScale scale) {
    require_matching(center, d, "warp_center_to_view");
    return inverse_warp(center, disparity_flow(d, du, dv, scale.value()));
}

LightField synthesize_light_field(const Image& center, const DisparityMap& d, BaselineScale scale,
                                  int angular_rows, int angular_cols) {
    if (center.channels() != LightField::kChannels)
        throw Error(ErrorCode::DimensionMismatch, "synthesize_light_field expects an RGB center view");
    LightField lf(angular_rows, angular_cols, center.height(), center.width());
    require_odd_angular(lf, "synthesize_light_field");
    for (int v = 0; v < angular_rows; ++v)
        for (int u = 0; u < angular_cols; ++u)
            lf.set_view(v, u, warp_center_to_view(center, d, u - lf.center_col(), v - lf.center_row(), scale));
    return lf;
}

double masked_mae(const Image& a, const Image& b, int border) {
    require_same_shape(a, b, "masked_mae");
    const int y_end = a.height() - border, x_end = a.width() - border;
    if (border < 0 || y_end <= border || x_end <= border)
        throw Error(ErrorCode::InvalidArgument,
                    "border mask of width " + std::to_string(border) + " leaves no pixels");
    double sum = 0.0;
    for (int y = border; y < y_end; ++y)
        for (int x = border; x < x_end; ++x)
            for (int c = 0; c < a.channels(); ++c) sum += std::abs(a.at(y, x, c) - b.at(y, x, c));
    return sum / (static_cast<double>(y_end - border) * (x_end - border) * a.channels());
}

double geometric_loss(const LightField& lf, const DisparityMap& d, const Image& center_ref, BaselineScale scale,
                      const LossOptions& opts) {
    require_odd_angular(lf, "geometric_loss");
    if (center_ref.height() != lf.height() || center_ref.width() != lf.width() ||
        center_ref.channels() != LightField::kChannels)
        throw Error(ErrorCode::DimensionMismatch, "geometric_loss: center reference differs from the views");
    if (d.height() != lf.height() || d.width() != lf.width())
        throw Error(ErrorCode::DimensionMismatch, "geometric_loss: disparity differs from the views");
    const int border = opts.masked ? mask_width(max_view_displacement(lf, d, scale.value())) : 0;

    std::vector<double> per_view(static_cast<std::size_t>(lf.view_count()));
    parallel_for(per_view.size(), [&](std::size_t i) {
        const int v = static_cast<int>(i) / lf.angular_cols(), u = static_cast<int>(i) % lf.angular_cols();
        per_view[i] = masked_mae(warp_view_to_center(sai_at(lf, v, u), d, scale), center_ref, border);
    });
    double total = 0.0;
    for (double e : per_view) total += e;
    return total;
}

double temporal_loss(const LightField& lf_t, const DisparityMap& d, const FlowField& flow, const Image& next_frame,
                     BaselineScale scale, const LossOptions& opts) {
    require_odd_angular(lf_t, "temporal_loss");
    if (next_frame.height() != lf_t.height() || next_frame.width() != lf_t.width() ||
        next_frame.channels() != LightField::kChannels)
        throw Error(ErrorCode::DimensionMismatch, "temporal_loss: next frame differs from the views");
    if (d.height() != lf_t.height() || d.width() != lf_t.width() || flow.height() != lf_t.height() ||
        flow.width() != lf_t.width())
        throw Error(ErrorCode::DimensionMismatch, "temporal_loss: disparity or flow differs from the views");
    const int border =
        opts.masked ? mask_width(max_view_displacement(lf_t, d, scale.value()) + max_norm(flow)) : 0;

    std::vector<double> per_view(static_cast<std::size_t>(lf_t.view_count()));
    parallel_for(per_view.size(), [&](std::size_t i) {
        const int v = static_cast<int>(i) / lf_t.angular_cols(), u = static_cast<int>(i) % lf_t.angular_cols();
        const Image aligned = warp_view_to_center(sai_at(lf_t, v, u), d, scale);
        per_view[i] = masked_mae(inverse_warp(aligned, flow), next_frame, border);
    });
    double total = 0.0;
    for (double e : per_view) total += e;
    return total;
}

double photometric_loss(const LightField& lf, const Image& input_view) {
    const Image center = lf.center_view();
    require_same_shape(center, input_view, "photometric_loss");
    return masked_mae(center, input_view, 0);
}

}  // namespace lftensor::warp
