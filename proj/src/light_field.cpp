#include "lftensor/light_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lftensor {

LightField::LightField(int angular_rows, int angular_cols, int height, int width, double fill)
    : rows_(angular_rows), cols_(angular_cols), height_(height), width_(width) {
    if (angular_rows < 1 || angular_cols < 1 || height < 1 || width < 1)
        throw Error(ErrorCode::InvalidArgument, "light field dimensions must be positive");
    data_.assign(static_cast<std::size_t>(angular_rows) * angular_cols * height * width * kChannels, fill);
}

LightField LightField::from_views(int angular_rows, int angular_cols, const std::vector<Image>& views) {
    if (views.empty() || views.size() != static_cast<std::size_t>(angular_rows) * angular_cols)
        throw Error(ErrorCode::DimensionMismatch, "view count does not match the angular grid");
    LightField lf(angular_rows, angular_cols, views.front().height(), views.front().width());
    for (int v = 0; v < angular_rows; ++v)
        for (int u = 0; u < angular_cols; ++u)
            lf.set_view(v, u, views[static_cast<std::size_t>(v) * angular_cols + u]);
    return lf;
}

Image LightField::view(int v, int u) const {
    if (v < 0 || v >= rows_ || u < 0 || u >= cols_)
        throw Error(ErrorCode::IndexOutOfBounds, "view index out of range");
    const auto first = data_.begin() + static_cast<std::ptrdiff_t>(index(v, u, 0, 0, 0));
    const auto count = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(height_) * width_ * kChannels);
    return Image(height_, width_, kChannels, std::vector<double>(first, first + count));
}

void LightField::set_view(int v, int u, const Image& img) {
    if (v < 0 || v >= rows_ || u < 0 || u >= cols_)
        throw Error(ErrorCode::IndexOutOfBounds, "view index out of range");
    if (img.height() != height_ || img.width() != width_ || img.channels() != kChannels)
        throw Error(ErrorCode::DimensionMismatch, "view does not match light field spatial dimensions");
    std::copy(img.data().begin(), img.data().end(),
              data_.begin() + static_cast<std::ptrdiff_t>(index(v, u, 0, 0, 0)));
}

Image LightField::center_view() const {
    require_odd_angular(*this, "center view");
    return view(center_row(), center_col());
}

bool LightField::samples_valid() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double s) { return std::isfinite(s) && s >= 0.0 && s <= 1.0; });
}

void require_odd_angular(const LightField& lf, const char* what) {
    if (!lf.has_center())
        throw Error(ErrorCode::EvenAngularDim,
                    std::string(what) + " needs odd angular dimensions, got " +
                        std::to_string(lf.angular_rows()) + "x" + std::to_string(lf.angular_cols()));
}

DualPixelFrame::DualPixelFrame(Image rgb, Image dp_left, Image dp_right)
    : rgb_(std::move(rgb)), left_(std::move(dp_left)), right_(std::move(dp_right)) {
    if (rgb_.channels() != 3 || left_.channels() != 1 || right_.channels() != 1)
        throw Error(ErrorCode::DimensionMismatch, "dual-pixel frame expects RGB + two single-channel planes");
    if (rgb_.height() != left_.height() || rgb_.width() != left_.width() ||
        rgb_.height() != right_.height() || rgb_.width() != right_.width())
        throw Error(ErrorCode::DimensionMismatch, "dual-pixel planes differ in size");
}

}  // namespace lftensor
