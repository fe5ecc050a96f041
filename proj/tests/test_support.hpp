#pragma once

// Independent oracles and fixtures shared by the unit and acceptance suites.
// Nothing here calls the library's sampling or rendering code.

#include <unistd.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "lftensor/image.hpp"
#include "lftensor/light_field.hpp"
#include "lftensor/tensor_display.hpp"

namespace lftensor::testing {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = fs::temp_directory_path() /
                ("lftensor_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline Image random_image(int h, int w, int c, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    Image img(h, w, c);
    for (double& v : img.data()) v = dist(rng);
    return img;
}

/// Smooth band-limited texture in [0.1, 0.9]: a sum of a few random sinusoids.
inline Image smooth_texture(int h, int w, std::uint64_t seed, int channels = 3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> freq(0.15, 0.6), phase(0.0, 6.283185307179586);
    Image img(h, w, channels);
    for (int c = 0; c < channels; ++c) {
        double fx[4], fy[4], ph[4];
        for (int k = 0; k < 4; ++k) {
            fx[k] = freq(rng);
            fy[k] = freq(rng) * 0.5;
            ph[k] = phase(rng);
        }
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double s = 0.0;
                for (int k = 0; k < 4; ++k) s += std::sin(fx[k] * x + fy[k] * y + ph[k]);
                img.at(y, x, c) = 0.5 + 0.1 * s;
            }
    }
    return img;
}

inline td::LayerStack random_stack(int layers, int rank, int h, int w, std::uint64_t seed, double lo = 0.0,
                                   double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    td::LayerStack s(layers, rank, h, w);
    for (double& v : s.data()) v = dist(rng);
    return s;
}

/// Textbook bilinear interpolation with replicate-edge clamp, written from scratch.
inline double oracle_bilinear(const std::vector<double>& plane, int h, int w, double x, double y) {
    auto px = [&](int yy, int xx) {
        yy = yy < 0 ? 0 : (yy >= h ? h - 1 : yy);
        xx = xx < 0 ? 0 : (xx >= w ? w - 1 : xx);
        return plane[static_cast<std::size_t>(yy) * w + xx];
    };
    x = std::fmin(std::fmax(x, 0.0), w - 1.0);
    y = std::fmin(std::fmax(y, 0.0), h - 1.0);
    const int xi = static_cast<int>(std::floor(x)), yi = static_cast<int>(std::floor(y));
    const double ax = x - xi, ay = y - yi;
    return (1 - ax) * (1 - ay) * px(yi, xi) + ax * (1 - ay) * px(yi, xi + 1) + (1 - ax) * ay * px(yi + 1, xi) +
           ax * ay * px(yi + 1, xi + 1);
}

inline std::vector<double> channel_plane(const td::LayerStack& s, int l, int m, int c) {
    std::vector<double> p(static_cast<std::size_t>(s.height()) * s.width());
    for (int y = 0; y < s.height(); ++y)
        for (int x = 0; x < s.width(); ++x) p[static_cast<std::size_t>(y) * s.width() + x] = s.at(l, m, y, x, c);
    return p;
}

/// Per-sample evaluation of sum_m prod_l f_m^l(x + D_l du, y + D_l dv), clamped.
inline double oracle_td_sample(const td::LayerStack& s, const std::vector<double>& planes, int rows, int cols, int v,
                               int u, int y, int x, int c) {
    const double du = u - (cols - 1) / 2.0, dv = v - (rows - 1) / 2.0;
    double sum = 0.0;
    for (int m = 0; m < s.rank(); ++m) {
        double prod = 1.0;
        for (int l = 0; l < s.n_layers(); ++l)
            prod *= oracle_bilinear(channel_plane(s, l, m, c), s.height(), s.width(), x + planes[l] * du,
                                    y + planes[l] * dv);
        sum += prod;
    }
    return std::fmin(std::fmax(sum, 0.0), 1.0);
}

/// Test-only Middlebury .flo writer (little-endian host assumed).
inline void write_flo(const FlowField& flow, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    const float tag = 202021.25f;
    const std::int32_t w = flow.width(), h = flow.height();
    out.write(reinterpret_cast<const char*>(&tag), 4);
    out.write(reinterpret_cast<const char*>(&w), 4);
    out.write(reinterpret_cast<const char*>(&h), 4);
    for (const FlowVector& f : flow.data()) {
        const float fx = static_cast<float>(f.fx), fy = static_cast<float>(f.fy);
        out.write(reinterpret_cast<const char*>(&fx), 4);
        out.write(reinterpret_cast<const char*>(&fy), 4);
    }
}

inline std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Light field with view(du, dv)(x, y) = center(x + delta du, y + delta dv) for
/// integer delta, built by direct index arithmetic (edge replicate).
inline LightField integer_shift_lf(const Image& center, int rows, int cols, int delta) {
    LightField lf(rows, cols, center.height(), center.width());
    const int cv = (rows - 1) / 2, cu = (cols - 1) / 2;
    for (int v = 0; v < rows; ++v)
        for (int u = 0; u < cols; ++u)
            for (int y = 0; y < center.height(); ++y)
                for (int x = 0; x < center.width(); ++x) {
                    const int sx = std::clamp(x + delta * (u - cu), 0, center.width() - 1);
                    const int sy = std::clamp(y + delta * (v - cv), 0, center.height() - 1);
                    for (int c = 0; c < 3; ++c) lf.at(v, u, y, x, c) = center.at(sy, sx, c);
                }
    return lf;
}

inline double oracle_interp_1d(const std::vector<double>& row, double x) {
    const int n = static_cast<int>(row.size());
    x = std::fmin(std::fmax(x, 0.0), n - 1.0);
    const int i = static_cast<int>(std::floor(x));
    const int j = i + 1 < n ? i + 1 : n - 1;
    const double a = x - i;
    return (1 - a) * row[i] + a * row[j];
}

/// Brute-force 1-D registration: the shift s in [-max_shift, max_shift] (step
/// `step`) minimizing sum over interior x of (b(x) - a(x + s))^2.
inline double best_shift_1d(const std::vector<std::vector<double>>& a_rows,
                            const std::vector<std::vector<double>>& b_rows, double max_shift, double step,
                            int border) {
    double best_s = 0.0, best_cost = INFINITY;
    for (double s = -max_shift; s <= max_shift + 1e-12; s += step) {
        double cost = 0.0;
        for (std::size_t r = 0; r < a_rows.size(); ++r) {
            const auto& a = a_rows[r];
            const auto& b = b_rows[r];
            for (int x = border; x < static_cast<int>(a.size()) - border; ++x) {
                const double d = b[x] - oracle_interp_1d(a, x + s);
                cost += d * d;
            }
        }
        if (cost < best_cost) {
            best_cost = cost;
            best_s = s;
        }
    }
    return best_s;
}

inline std::vector<std::vector<double>> image_rows(const Image& img, int channel) {
    std::vector<std::vector<double>> rows(img.height(), std::vector<double>(img.width()));
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) rows[y][x] = img.at(y, x, channel);
    return rows;
}

/// Variance of the 4-neighbour Laplacian of the channel mean over interior pixels.
inline double laplacian_variance(const Image& img, int border) {
    std::vector<double> lap;
    auto g = [&](int y, int x) {
        double s = 0.0;
        for (int c = 0; c < img.channels(); ++c) s += img.at(y, x, c);
        return s / img.channels();
    };
    for (int y = border; y < img.height() - border; ++y)
        for (int x = border; x < img.width() - border; ++x)
            lap.push_back(g(y - 1, x) + g(y + 1, x) + g(y, x - 1) + g(y, x + 1) - 4 * g(y, x));
    double mean = 0.0;
    for (double v : lap) mean += v;
    mean /= lap.size();
    double var = 0.0;
    for (double v : lap) var += (v - mean) * (v - mean);
    return var / lap.size();
}

}  // namespace lftensor::testing
