#pragma once

#include <optional>
#include <string>

#include "lftensor/image.hpp"
#include "lftensor/light_field.hpp"

namespace lftensor::warp {

/// Multiplier a on the teacher disparity. The recommended range is [1, 3];
/// values outside it are accepted and reported through warning().
class BaselineScale {
public:
    explicit BaselineScale(double a = 1.0);
    double value() const noexcept { return a_; }
    std::optional<std::string> warning() const;

private:
    double a_;
};

struct LossOptions {
    /// Exclude a border of width ceil(max |flow|) from every L1 term.
    bool masked = false;
};

/// out(x, y) = src(x + fx, y + fy), bilinear with edge clamp.
Image inverse_warp(const Image& src, const FlowField& flow);

/// Aligns a view with the center: flow = (-du a d, -dv a d).
Image warp_view_to_center(const SubApertureImage& sai, const DisparityMap& d, BaselineScale scale);

/// Inverse of warp_view_to_center for a fronto-parallel scene: samples the
/// center at (x + du a d, y + dv a d).
Image warp_center_to_view(const Image& center, const DisparityMap& d, double du, double dv, BaselineScale scale);

/// Light field whose every view is warp_center_to_view of `center`.
LightField synthesize_light_field(const Image& center, const DisparityMap& d, BaselineScale scale,
                                  int angular_rows, int angular_cols);

/// Sum over views of the mean absolute error between the view warped to
/// the center and `center_ref`.
double geometric_loss(const LightField& lf, const DisparityMap& d, const Image& center_ref, BaselineScale scale,
                      const LossOptions& opts = {});

/// Like geometric_loss, but each center-aligned view is additionally warped
/// by the optical flow and compared against `next_frame`.
double temporal_loss(const LightField& lf_t, const DisparityMap& d, const FlowField& flow, const Image& next_frame,
                     BaselineScale scale, const LossOptions& opts = {});

/// Mean absolute error between the center view and the input view.
double photometric_loss(const LightField& lf, const Image& input_view);

/// Mean |a - b| over pixels at least `border` away from every edge.
double masked_mae(const Image& a, const Image& b, int border);

}  // namespace lftensor::warp
