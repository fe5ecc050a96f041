#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "lftensor/image.hpp"
#include "lftensor/light_field.hpp"

namespace lftensor::td {

/// L layers x M ranks of RGB images f_m^l, stored rank-major then layer
/// ((m, l, y, x, c) order). Fitted stacks keep every entry in [0, 1];
/// gradient buffers reuse the shape without that bound.
class LayerStack {
public:
    LayerStack() = default;
    LayerStack(int n_layers, int rank, int height, int width, double fill = 0.0);

    int n_layers() const noexcept { return layers_; }
    int rank() const noexcept { return rank_; }
    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& at(int l, int m, int y, int x, int c) { return data_[index(l, m, y, x, c)]; }
    double at(int l, int m, int y, int x, int c) const { return data_[index(l, m, y, x, c)]; }

    Image layer(int l, int m) const;
    void set_layer(int l, int m, const Image& img);

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    bool same_shape(const LayerStack& o) const noexcept {
        return layers_ == o.layers_ && rank_ == o.rank_ && height_ == o.height_ && width_ == o.width_;
    }

    friend bool operator==(const LayerStack&, const LayerStack&) = default;

private:
    std::size_t index(int l, int m, int y, int x, int c) const noexcept {
        return (((static_cast<std::size_t>(m) * layers_ + l) * height_ + y) * width_ + x) * 3 + c;
    }

    int layers_ = 0;
    int rank_ = 0;
    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

/// Per-layer disparity D_l, strictly increasing; layer l pairs with centers[l].
class DisparityPlanes {
public:
    DisparityPlanes() = default;
    explicit DisparityPlanes(std::vector<double> centers);

    std::size_t size() const noexcept { return centers_.size(); }
    double operator[](std::size_t l) const { return centers_[l]; }
    const std::vector<double>& centers() const noexcept { return centers_; }

    /// Every plane multiplied by `factor` (> 0), e.g. to widen the baseline.
    DisparityPlanes scaled(double factor) const;

private:
    std::vector<double> centers_;
};

struct FitConfig {
    int max_iters = 500;
    /// Applied to the gradient of a mean loss, so it scales with H * W; 0.5 * H * W works well.
    double step_size = 512.0;
    /// Stop once the relative loss decrease over the last 10 iterations drops below this.
    double tolerance = 1e-6;
    std::uint64_t seed = 0;

    void validate() const;
};

/// L(x, y, du, dv) = sum_m prod_l f_m^l(x + D_l du, y + D_l dv), bilinear with
/// edge clamp, then clamped to [0, 1]. (du, dv) are signed offsets from the
/// center view, so both angular dimensions must be odd.
LightField render_light_field(const LayerStack& stack, const DisparityPlanes& planes, int angular_rows,
                              int angular_cols);

struct LossAndGradient {
    double loss = 0.0;
    LayerStack grad;
};

/// Mean squared error of the render against `target` and its gradient with
/// respect to every stack entry. The output clamp is treated as identity in
/// the backward pass.
LossAndGradient td_loss_and_gradient(const LayerStack& stack, const DisparityPlanes& planes,
                                     const LightField& target);

/// Starting point for fit_layer_stack: rank 0 holds center^(1/L), other
/// ranks 0.5, all plus uniform [-0.01, 0.01] noise drawn from `seed`.
LayerStack initial_layer_stack(const LightField& target, int n_layers, int rank, std::uint64_t seed);

struct FitResult {
    LayerStack stack;
    std::vector<double> loss_history;
    int iterations = 0;
};

/// Projected gradient descent. The returned stack is the lowest-loss iterate,
/// so its loss never exceeds the initial one.
FitResult fit_layer_stack(const LightField& target, const DisparityPlanes& planes, int rank,
                          const FitConfig& cfg);

struct StoredStack {
    LayerStack stack;
    DisparityPlanes planes;
};

/// `layer_{l}_rank_{m}.png` per factor plus `stack.json` carrying the planes.
void save_layer_stack(const LayerStack& stack, const DisparityPlanes& planes,
                      const std::filesystem::path& dir);
StoredStack load_layer_stack(const std::filesystem::path& dir);

}  // namespace lftensor::td
