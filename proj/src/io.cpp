#include "lftensor/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace lftensor::io {
namespace {

using nlohmann::json;

std::vector<char> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path.string());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
}

std::uint32_t to_little_endian(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::big) return __builtin_bswap32(v);
    return v;
}

float read_f32(const char* p, bool swap) {
    std::uint32_t bits;
    std::memcpy(&bits, p, 4);
    if (swap) bits = __builtin_bswap32(bits);
    return std::bit_cast<float>(bits);
}

std::int32_t read_i32_le(const char* p) {
    std::uint32_t bits;
    std::memcpy(&bits, p, 4);
    return static_cast<std::int32_t>(to_little_endian(bits));
}

void append_f32_le(std::string& out, float f) {
    const std::uint32_t bits = to_little_endian(std::bit_cast<std::uint32_t>(f));
    out.append(reinterpret_cast<const char*>(&bits), 4);
}

// Header token reader for PFM: tokens separated by single whitespace, header
// ends after the third line.
bool next_line(const std::vector<char>& buf, std::size_t& pos, std::string& line) {
    const auto begin = buf.begin() + static_cast<std::ptrdiff_t>(pos);
    const auto nl = std::find(begin, buf.end(), '\n');
    if (nl == buf.end()) return false;
    line.assign(begin, nl);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos = static_cast<std::size_t>(nl - buf.begin()) + 1;
    return true;
}

std::vector<double> load_pfm(const fs::path& path, int& height, int& width) {
    const std::vector<char> buf = read_file(path);
    std::size_t pos = 0;
    std::string line;
    if (!next_line(buf, pos, line)) throw Error(ErrorCode::TruncatedPayload, "missing PFM header in " + path.string());
    if (line != "Pf") throw Error(ErrorCode::BadMagic, "expected single-channel PFM \"Pf\", got \"" + line + "\"");
    if (!next_line(buf, pos, line)) throw Error(ErrorCode::TruncatedPayload, "missing PFM dimensions");
    {
        std::istringstream dims(line);
        if (!(dims >> width >> height) || width < 1 || height < 1)
            throw Error(ErrorCode::TruncatedPayload, "bad PFM dimensions \"" + line + "\"");
    }
    if (!next_line(buf, pos, line)) throw Error(ErrorCode::TruncatedPayload, "missing PFM scale");
    double scale = 0.0;
    try {
        std::size_t used = 0;
        scale = std::stod(line, &used);
        if (used != line.size()) scale = 0.0;
    } catch (...) {
        scale = 0.0;
    }
    if (!std::isfinite(scale) || scale == 0.0) throw Error(ErrorCode::BadScale, "bad PFM scale \"" + line + "\"");
    const bool file_big_endian = scale > 0.0;
    const bool swap = file_big_endian != (std::endian::native == std::endian::big);

    const std::size_t count = static_cast<std::size_t>(width) * height;
    if (buf.size() - pos < count * 4)
        throw Error(ErrorCode::TruncatedPayload, "PFM payload shorter than " + std::to_string(count) + " floats");
    std::vector<double> data(count);
    for (int row = 0; row < height; ++row) {
        const int y = height - 1 - row;  // bottom-to-top on disk
        for (int x = 0; x < width; ++x)
            data[static_cast<std::size_t>(y) * width + x] =
                read_f32(buf.data() + pos + (static_cast<std::size_t>(row) * width + x) * 4, swap);
    }
    return data;
}

void save_pfm(const std::vector<double>& data, int height, int width, const fs::path& path) {
    std::string out = "Pf\n" + std::to_string(width) + " " + std::to_string(height) + "\n-1.0\n";
    out.reserve(out.size() + data.size() * 4);
    for (int row = 0; row < height; ++row) {
        const int y = height - 1 - row;
        for (int x = 0; x < width; ++x)
            append_f32_le(out, static_cast<float>(data[static_cast<std::size_t>(y) * width + x]));
    }
    write_file(path, out);
}

}  // namespace

std::uint8_t quantize_8bit(double s) {
    const double c = std::isnan(s) ? 0.0 : std::clamp(s, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(255.0 * c));
}

Image read_png(const fs::path& path, int channels) {
    if (channels != 1 && channels != 3)
        throw Error(ErrorCode::InvalidArgument, "read_png supports 1 or 3 channels");
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw Error(ErrorCode::IoFailure, "cannot read PNG " + path.string() + ": " + image.message);
    image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<png_byte> pixels(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
        png_image_free(&image);
        throw Error(ErrorCode::IoFailure, "cannot decode PNG " + path.string() + ": " + image.message);
    }
    Image out(static_cast<int>(image.height), static_cast<int>(image.width), channels);
    std::transform(pixels.begin(), pixels.end(), out.data().begin(),
                   [](png_byte b) { return static_cast<double>(b) / 255.0; });
    return out;
}

void write_png(const Image& img, const fs::path& path) {
    if (img.channels() != 1 && img.channels() != 3)
        throw Error(ErrorCode::InvalidArgument, "write_png supports 1 or 3 channels");
    std::vector<png_byte> pixels(img.size());
    std::transform(img.data().begin(), img.data().end(), pixels.begin(), quantize_8bit);
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.c_str(), 0, pixels.data(), 0, nullptr))
        throw Error(ErrorCode::IoFailure, "cannot write PNG " + path.string() + ": " + image.message);
}

fs::path view_filename(int v, int u) {
    return "view_" + std::to_string(v) + "_" + std::to_string(u) + ".png";
}

LightField load_light_field(const fs::path& dir) {
    const fs::path meta_path = dir / "meta.json";
    if (!fs::exists(meta_path)) throw Error(ErrorCode::CorruptDescriptor, "missing " + meta_path.string());
    json meta;
    int rows = 0, cols = 0, height = 0, width = 0;
    try {
        const std::vector<char> text = read_file(meta_path);
        meta = json::parse(text.begin(), text.end());
        rows = meta.at("angular_rows").get<int>();
        cols = meta.at("angular_cols").get<int>();
        height = meta.at("height").get<int>();
        width = meta.at("width").get<int>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::CorruptDescriptor, meta_path.string() + ": " + e.what());
    }
    if (rows < 1 || cols < 1 || height < 1 || width < 1)
        throw Error(ErrorCode::CorruptDescriptor, "non-positive dimension in " + meta_path.string());

    LightField lf(rows, cols, height, width);
    for (int v = 0; v < rows; ++v) {
        for (int u = 0; u < cols; ++u) {
            const fs::path p = dir / view_filename(v, u);
            if (!fs::exists(p)) throw Error(ErrorCode::MissingView, p.string());
            const Image img = read_png(p, 3);
            if (img.height() != height || img.width() != width)
                throw Error(ErrorCode::DimensionMismatch,
                            p.string() + " is " + std::to_string(img.height()) + "x" +
                                std::to_string(img.width()) + ", descriptor says " +
                                std::to_string(height) + "x" + std::to_string(width));
            lf.set_view(v, u, img);
        }
    }
    return lf;
}

void save_light_field(const LightField& lf, const fs::path& dir) {
    ensure_dir(dir);
    const json meta = {{"angular_rows", lf.angular_rows()},
                       {"angular_cols", lf.angular_cols()},
                       {"height", lf.height()},
                       {"width", lf.width()}};
    write_file(dir / "meta.json", meta.dump(2) + "\n");
    for (int v = 0; v < lf.angular_rows(); ++v)
        for (int u = 0; u < lf.angular_cols(); ++u) write_png(lf.view(v, u), dir / view_filename(v, u));
}

DisparityMap load_disparity_pfm(const fs::path& path) {
    int h = 0, w = 0;
    std::vector<double> data = load_pfm(path, h, w);
    return DisparityMap(h, w, std::move(data));
}

void save_disparity_pfm(const DisparityMap& d, const fs::path& path) {
    save_pfm(d.data(), d.height(), d.width(), path);
}

DepthMap load_depth_pfm(const fs::path& path) {
    int h = 0, w = 0;
    std::vector<double> data = load_pfm(path, h, w);
    return DepthMap(h, w, std::move(data));
}

void save_depth_pfm(const DepthMap& d, const fs::path& path) { save_pfm(d.data(), d.height(), d.width(), path); }

FlowField load_flow_flo(const fs::path& path) {
    constexpr float kTag = 202021.25f;
    const std::vector<char> buf = read_file(path);
    if (buf.size() < 12) throw Error(ErrorCode::TruncatedPayload, ".flo header shorter than 12 bytes");
    const bool swap = std::endian::native == std::endian::big;
    if (read_f32(buf.data(), swap) != kTag) throw Error(ErrorCode::BadMagic, path.string() + " is not a .flo file");
    const std::int32_t width = read_i32_le(buf.data() + 4);
    const std::int32_t height = read_i32_le(buf.data() + 8);
    if (width < 1 || height < 1 || width > 99999 || height > 99999)
        throw Error(ErrorCode::TruncatedPayload, "illegal .flo dimensions");
    const std::size_t count = static_cast<std::size_t>(width) * height;
    if (buf.size() - 12 < count * 8) throw Error(ErrorCode::TruncatedPayload, ".flo payload too short");
    FlowField flow(height, width);
    const char* p = buf.data() + 12;
    for (std::size_t i = 0; i < count; ++i) {
        flow.data()[i] = {read_f32(p + i * 8, swap), read_f32(p + i * 8 + 4, swap)};
    }
    return flow;
}

void save_dual_pixel_frame(const DualPixelFrame& frame, const fs::path& dir) {
    ensure_dir(dir);
    write_png(frame.rgb(), dir / "rgb.png");
    write_png(frame.dp_left(), dir / "dp_left.png");
    write_png(frame.dp_right(), dir / "dp_right.png");
}

DualPixelFrame load_dual_pixel_frame(const fs::path& dir) {
    return DualPixelFrame(read_png(dir / "rgb.png", 3), read_png(dir / "dp_left.png", 1),
                          read_png(dir / "dp_right.png", 1));
}

}  // namespace lftensor::io
