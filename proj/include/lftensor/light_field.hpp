#pragma once

#include <cstddef>
#include <vector>

#include "lftensor/image.hpp"

namespace lftensor {

/// One angular view with its signed offset from the grid center, in view units.
struct SubApertureImage {
    Image image;
    double du = 0.0;
    double dv = 0.0;
};

/// 4-D light field stored as a V x U grid of H x W RGB views in
/// (v, u, y, x, c) order. v counts rows from the top, u columns from the left.
class LightField {
public:
    static constexpr int kChannels = 3;

    LightField() = default;
    LightField(int angular_rows, int angular_cols, int height, int width, double fill = 0.0);

    /// Assembles a light field from row-major views; all must be H x W x 3.
    static LightField from_views(int angular_rows, int angular_cols, const std::vector<Image>& views);

    int angular_rows() const noexcept { return rows_; }
    int angular_cols() const noexcept { return cols_; }
    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    int view_count() const noexcept { return rows_ * cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    bool has_center() const noexcept { return rows_ % 2 == 1 && cols_ % 2 == 1; }
    int center_row() const noexcept { return (rows_ - 1) / 2; }
    int center_col() const noexcept { return (cols_ - 1) / 2; }

    double& at(int v, int u, int y, int x, int c) { return data_[index(v, u, y, x, c)]; }
    double at(int v, int u, int y, int x, int c) const { return data_[index(v, u, y, x, c)]; }

    Image view(int v, int u) const;
    void set_view(int v, int u, const Image& img);
    /// Throws EvenAngularDim when either angular dimension is even.
    Image center_view() const;

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    bool same_shape(const LightField& o) const noexcept {
        return rows_ == o.rows_ && cols_ == o.cols_ && height_ == o.height_ && width_ == o.width_;
    }

    /// Every sample finite and inside [0, 1].
    bool samples_valid() const;

    friend bool operator==(const LightField&, const LightField&) = default;

private:
    std::size_t index(int v, int u, int y, int x, int c) const noexcept {
        return (((static_cast<std::size_t>(v) * cols_ + u) * height_ + y) * width_ + x) * kChannels + c;
    }

    int rows_ = 0;
    int cols_ = 0;
    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

void require_odd_angular(const LightField& lf, const char* what);

/// {I_B, dp_L, dp_R}: RGB view plus the two single-channel dual-pixel planes.
class DualPixelFrame {
public:
    DualPixelFrame(Image rgb, Image dp_left, Image dp_right);

    const Image& rgb() const noexcept { return rgb_; }
    const Image& dp_left() const noexcept { return left_; }
    const Image& dp_right() const noexcept { return right_; }
    int height() const noexcept { return rgb_.height(); }
    int width() const noexcept { return rgb_.width(); }

private:
    Image rgb_;
    Image left_;
    Image right_;
};

}  // namespace lftensor
