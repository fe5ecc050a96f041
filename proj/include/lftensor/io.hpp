#pragma once

#include <cstdint>
#include <filesystem>

#include "lftensor/image.hpp"
#include "lftensor/light_field.hpp"

namespace lftensor::io {

namespace fs = std::filesystem;

/// round(255 * clamp(s, 0, 1)), halves rounded away from zero.
std::uint8_t quantize_8bit(double s);

/// Reads an 8-bit PNG as [0,1] samples. channels = 3 expands gray input; channels = 1 converts color input to gray.
Image read_png(const fs::path& path, int channels = 3);
/// Writes a 1- or 3-channel image as an 8-bit PNG.
void write_png(const Image& img, const fs::path& path);

/// Directory of `view_{v}_{u}.png` plus `meta.json`.
LightField load_light_field(const fs::path& dir);
void save_light_field(const LightField& lf, const fs::path& dir);
fs::path view_filename(int v, int u);

/// Single-channel PFM ("Pf"), little-endian, rows stored bottom-to-top.
DisparityMap load_disparity_pfm(const fs::path& path);
void save_disparity_pfm(const DisparityMap& d, const fs::path& path);
DepthMap load_depth_pfm(const fs::path& path);
void save_depth_pfm(const DepthMap& d, const fs::path& path);

/// Middlebury .flo reader.
FlowField load_flow_flo(const fs::path& path);

/// Directory holding rgb.png, dp_left.png, dp_right.png.
void save_dual_pixel_frame(const DualPixelFrame& frame, const fs::path& dir);
DualPixelFrame load_dual_pixel_frame(const fs::path& dir);

}  // namespace lftensor::io
