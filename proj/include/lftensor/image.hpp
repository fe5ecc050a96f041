#pragma once

#include <cstddef>
#include <vector>

#include "lftensor/error.hpp"

namespace lftensor {

/// Row-major H x W x C image of doubles. Color images carry 3 channels,
/// dual-pixel planes carry 1.
class Image {
public:
    Image() = default;
    Image(int height, int width, int channels, double fill = 0.0);
    Image(int height, int width, int channels, std::vector<double> data);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    int channels() const noexcept { return channels_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& at(int y, int x, int c) { return data_[index(y, x, c)]; }
    double at(int y, int x, int c) const { return data_[index(y, x, c)]; }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    bool same_shape(const Image& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t index(int y, int x, int c) const noexcept {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
    }

    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<double> data_;
};

/// Bilinear sample at continuous (x, y) with replicate-edge border clamp.
/// Integer coordinates return the stored sample exactly.
double sample_bilinear(const Image& img, double x, double y, int c);

/// Clamp-aware bilinear footprint: the four source taps and their weights.
struct BilinearTaps {
    int x0, x1, y0, y1;
    double wx, wy;  // weight of x1 / y1
};
BilinearTaps bilinear_taps(int height, int width, double x, double y);

/// Rec.601 luminance of a 3-channel image, returned as a 1-channel image.
Image luminance(const Image& rgb);

void require_same_shape(const Image& a, const Image& b, const char* what);

/// Scalar per-pixel map. The tag keeps disparity and depth distinct types.
template <class Tag>
class ScalarGrid {
public:
    ScalarGrid() = default;
    ScalarGrid(int height, int width, double fill = 0.0)
        : height_(height), width_(width),
          data_(static_cast<std::size_t>(height) * width, fill) {
        if (height < 1 || width < 1)
            throw Error(ErrorCode::InvalidArgument, "scalar map dimensions must be positive");
    }
    ScalarGrid(int height, int width, std::vector<double> data)
        : height_(height), width_(width), data_(std::move(data)) {
        if (height < 1 || width < 1 ||
            data_.size() != static_cast<std::size_t>(height) * width)
            throw Error(ErrorCode::DimensionMismatch, "scalar map data does not match its dimensions");
    }

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& at(int y, int x) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    double at(int y, int x) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    bool same_shape(const ScalarGrid& o) const noexcept {
        return height_ == o.height_ && width_ == o.width_;
    }

    friend bool operator==(const ScalarGrid&, const ScalarGrid&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

struct DisparityTag {};
struct DepthTag {};

/// Pixels of shift per unit angular offset; +d moves the sampling
/// coordinate toward +x for views at +u.
using DisparityMap = ScalarGrid<DisparityTag>;
/// Metric depth z > 0.
using DepthMap = ScalarGrid<DepthTag>;

struct FlowVector {
    double fx = 0.0;
    double fy = 0.0;
    friend bool operator==(const FlowVector&, const FlowVector&) = default;
};

/// Per-pixel optical flow in pixels per frame.
class FlowField {
public:
    FlowField() = default;
    FlowField(int height, int width, FlowVector fill = {});

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }

    FlowVector& at(int y, int x) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    const FlowVector& at(int y, int x) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    std::vector<FlowVector>& data() noexcept { return data_; }
    const std::vector<FlowVector>& data() const noexcept { return data_; }

    friend bool operator==(const FlowField&, const FlowField&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<FlowVector> data_;
};

}  // namespace lftensor
