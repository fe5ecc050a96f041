#include "lftensor/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lftensor {

Image::Image(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels),
      data_(static_cast<std::size_t>(height) * width * channels, fill) {
    if (height < 1 || width < 1 || channels < 1)
        throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
}

Image::Image(int height, int width, int channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
    if (height < 1 || width < 1 || channels < 1)
        throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
    if (data_.size() != static_cast<std::size_t>(height) * width * channels)
        throw Error(ErrorCode::DimensionMismatch, "image data does not match its dimensions");
}

BilinearTaps bilinear_taps(int height, int width, double x, double y) {
    const double cx = std::clamp(x, 0.0, static_cast<double>(width - 1));
    const double cy = std::clamp(y, 0.0, static_cast<double>(height - 1));
    BilinearTaps t{};
    t.x0 = static_cast<int>(std::floor(cx));
    t.y0 = static_cast<int>(std::floor(cy));
    t.x1 = std::min(t.x0 + 1, width - 1);
    t.y1 = std::min(t.y0 + 1, height - 1);
    t.wx = cx - t.x0;
    t.wy = cy - t.y0;
    return t;
}

double sample_bilinear(const Image& img, double x, double y, int c) {
    const BilinearTaps t = bilinear_taps(img.height(), img.width(), x, y);
    const double top = img.at(t.y0, t.x0, c) * (1.0 - t.wx) + img.at(t.y0, t.x1, c) * t.wx;
    const double bottom = img.at(t.y1, t.x0, c) * (1.0 - t.wx) + img.at(t.y1, t.x1, c) * t.wx;
    return top * (1.0 - t.wy) + bottom * t.wy;
}

Image luminance(const Image& rgb) {
    if (rgb.channels() != 3)
        throw Error(ErrorCode::DimensionMismatch, "luminance expects a 3-channel image");
    Image out(rgb.height(), rgb.width(), 1);
    for (int y = 0; y < rgb.height(); ++y)
        for (int x = 0; x < rgb.width(); ++x)
            out.at(y, x, 0) = 0.299 * rgb.at(y, x, 0) + 0.587 * rgb.at(y, x, 1) +
                              0.114 * rgb.at(y, x, 2);
    return out;
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
    if (!a.same_shape(b))
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a.height()) + "x" +
                        std::to_string(a.width()) + "x" + std::to_string(a.channels()) +
                        " vs " + std::to_string(b.height()) + "x" + std::to_string(b.width()) +
                        "x" + std::to_string(b.channels()));
}

FlowField::FlowField(int height, int width, FlowVector fill)
    : height_(height), width_(width), data_(static_cast<std::size_t>(height) * width, fill) {
    if (height < 1 || width < 1)
        throw Error(ErrorCode::InvalidArgument, "flow dimensions must be positive");
}

}  // namespace lftensor
