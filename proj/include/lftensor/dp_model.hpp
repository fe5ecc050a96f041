#pragma once

#include <iosfwd>
#include <vector>

#include "lftensor/image.hpp"
#include "lftensor/light_field.hpp"

namespace lftensor::dp {

/// Thin-lens dual-pixel parameters. All positive, focus_depth > focal_length.
struct DpCalibration {
    double alpha = 1.0;
    double aperture = 1.0;
    double focal_length = 1.0;
    double focus_depth = 2.0;

    void validate() const;
};

/// d(z) = p + q / z
struct DpAffine {
    double p = 0.0;
    double q = 0.0;
};

DpAffine dp_affine_params(const DpCalibration& calib);

/// alpha * A f / (1 - f / z_f) * (1 / z_f - 1 / z), evaluated without the affine expansion.
double dp_disparity_thin_lens(const DpCalibration& calib, double z);

DisparityMap depth_to_dp_disparity(const DepthMap& depth, const DpCalibration& calib);

/// dp_L = lum((L(-1) + L(0)) / 2), dp_R = lum((L(0) + L(+1)) / 2) using the
/// horizontal neighbours of the center view; rgb = center view.
DualPixelFrame simulate_dp_from_lf(const LightField& lf);

struct ScanlineSample {
    int col;
    double dp_left;
    double dp_right;
    double abs_diff;
};

std::vector<ScanlineSample> scanline_analysis(const DualPixelFrame& frame, int row);

/// Header `col,dp_left,dp_right,abs_diff`, one line per column.
void write_scanline_csv(const std::vector<ScanlineSample>& samples, std::ostream& out);

}  // namespace lftensor::dp
