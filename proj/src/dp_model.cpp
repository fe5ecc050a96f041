#include "lftensor/dp_model.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace lftensor::dp {
namespace {

Image average(const Image& a, const Image& b) {
    Image out(a.height(), a.width(), a.channels());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = 0.5 * (a.data()[i] + b.data()[i]);
    return out;
}

}  // namespace

void DpCalibration::validate() const {
    const bool finite = std::isfinite(alpha) && std::isfinite(aperture) && std::isfinite(focal_length) &&
                        std::isfinite(focus_depth);
    if (!finite || alpha <= 0.0 || aperture <= 0.0 || focal_length <= 0.0 || focus_depth <= 0.0)
        throw Error(ErrorCode::InvalidArgument, "dual-pixel calibration values must be positive and finite");
    if (!(focus_depth > focal_length))
        throw Error(ErrorCode::InvalidArgument, "focus depth must exceed the focal length");
}

DpAffine dp_affine_params(const DpCalibration& calib) {
    calib.validate();
    const double gain = calib.alpha * calib.aperture * calib.focal_length / (1.0 - calib.focal_length / calib.focus_depth);
    return {gain / calib.focus_depth, -gain};
}

double dp_disparity_thin_lens(const DpCalibration& calib, double z) {
    return calib.alpha * (calib.aperture * calib.focal_length / (1.0 - calib.focal_length / calib.focus_depth)) *
           (1.0 / calib.focus_depth - 1.0 / z);
}

DisparityMap depth_to_dp_disparity(const DepthMap& depth, const DpCalibration& calib) {
    const DpAffine pq = dp_affine_params(calib);
    DisparityMap out(depth.height(), depth.width());
    for (std::size_t i = 0; i < depth.size(); ++i) {
        const double z = depth.data()[i];
        if (!(z > 0.0) || !std::isfinite(z))
            throw Error(ErrorCode::InvalidArgument, "depth must be positive and finite");
        out.data()[i] = pq.p + pq.q / z;
    }
    return out;
}

DualPixelFrame simulate_dp_from_lf(const LightField& lf) {
    require_odd_angular(lf, "simulate_dp_from_lf");
    if (lf.angular_cols() < 3) throw Error(ErrorCode::TooFewViews, "need at least 3 horizontal views");
    const int v = lf.center_row(), u = lf.center_col();
    Image center = lf.view(v, u);
    Image left = luminance(average(lf.view(v, u - 1), center));
    Image right = luminance(average(center, lf.view(v, u + 1)));
    return DualPixelFrame(std::move(center), std::move(left), std::move(right));
}

std::vector<ScanlineSample> scanline_analysis(const DualPixelFrame& frame, int row) {
    if (row < 0 || row >= frame.height())
        throw Error(ErrorCode::RowOutOfBounds,
                    "row " + std::to_string(row) + " outside [0, " + std::to_string(frame.height()) + ")");
    std::vector<ScanlineSample> out;
    out.reserve(static_cast<std::size_t>(frame.width()));
    for (int x = 0; x < frame.width(); ++x) {
        const double l = frame.dp_left().at(row, x, 0);
        const double r = frame.dp_right().at(row, x, 0);
        out.push_back({x, l, r, std::abs(l - r)});
    }
    return out;
}

void write_scanline_csv(const std::vector<ScanlineSample>& samples, std::ostream& out) {
    out << "col,dp_left,dp_right,abs_diff\n";
    out << std::setprecision(9);
    for (const ScanlineSample& s : samples) out << s.col << ',' << s.dp_left << ',' << s.dp_right << ',' << s.abs_diff << '\n';
}

}  // namespace lftensor::dp
