#include "lftensor/tensor_display.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "json.hpp"
#include "lftensor/io.hpp"
#include "lftensor/parallel.hpp"

namespace lftensor::td {
namespace {

// Bilinear taps for one axis under a uniform shift; identical arithmetic to
// sample_bilinear, precomputed per view and layer.
struct AxisTaps {
    std::vector<int> i0, i1;
    std::vector<double> w;

    AxisTaps(int n, double shift) : i0(n), i1(n), w(n) {
        const double hi = static_cast<double>(n - 1);
        for (int i = 0; i < n; ++i) {
            const double c = std::clamp(i + shift, 0.0, hi);
            i0[i] = static_cast<int>(std::floor(c));
            i1[i] = std::min(i0[i] + 1, n - 1);
            w[i] = c - i0[i];
        }
    }
};

struct ShiftedLayer {
    AxisTaps xs, ys;
    ShiftedLayer(int h, int w, double sx, double sy) : xs(w, sx), ys(h, sy) {}

    double sample(const LayerStack& s, int l, int m, int y, int x, int c) const {
        const int x0 = xs.i0[x], x1 = xs.i1[x], y0 = ys.i0[y], y1 = ys.i1[y];
        const double wx = xs.w[x], wy = ys.w[y];
        const double top = s.at(l, m, y0, x0, c) * (1.0 - wx) + s.at(l, m, y0, x1, c) * wx;
        const double bottom = s.at(l, m, y1, x0, c) * (1.0 - wx) + s.at(l, m, y1, x1, c) * wx;
        return top * (1.0 - wy) + bottom * wy;
    }
};

void check_render_inputs(const LayerStack& stack, const DisparityPlanes& planes, int rows, int cols) {
    if (stack.n_layers() < 1 || stack.rank() < 1)
        throw Error(ErrorCode::InvalidArgument, "layer stack is empty");
    if (planes.size() != static_cast<std::size_t>(stack.n_layers()))
        throw Error(ErrorCode::DimensionMismatch,
                    std::to_string(planes.size()) + " disparity planes for " +
                        std::to_string(stack.n_layers()) + " layers");
    if (rows < 1 || cols < 1) throw Error(ErrorCode::InvalidArgument, "angular dimensions must be positive");
    if (rows % 2 == 0 || cols % 2 == 0)
        throw Error(ErrorCode::EvenAngularDim,
                    "angular grid " + std::to_string(rows) + "x" + std::to_string(cols) + " has no center view");
}

std::vector<ShiftedLayer> shifted_layers(const LayerStack& stack, const DisparityPlanes& planes, double du,
                                         double dv) {
    std::vector<ShiftedLayer> out;
    out.reserve(planes.size());
    for (std::size_t l = 0; l < planes.size(); ++l)
        out.emplace_back(stack.height(), stack.width(), planes[l] * du, planes[l] * dv);
    return out;
}

// Fills lf with the unclamped sum of products.
void render_raw(const LayerStack& stack, const DisparityPlanes& planes, LightField& lf) {
    const int rows = lf.angular_rows(), cols = lf.angular_cols();
    const int cv = lf.center_row(), cu = lf.center_col();
    parallel_for(static_cast<std::size_t>(rows) * cols, [&](std::size_t idx) {
        const int v = static_cast<int>(idx) / cols;
        const int u = static_cast<int>(idx) % cols;
        const auto layers = shifted_layers(stack, planes, u - cu, v - cv);
        for (int y = 0; y < stack.height(); ++y)
            for (int x = 0; x < stack.width(); ++x)
                for (int c = 0; c < 3; ++c) {
                    double sum = 0.0;
                    for (int m = 0; m < stack.rank(); ++m) {
                        double prod = 1.0;
                        for (int l = 0; l < stack.n_layers(); ++l) prod *= layers[l].sample(stack, l, m, y, x, c);
                        sum += prod;
                    }
                    lf.at(v, u, y, x, c) = sum;
                }
    });
}

}  // namespace

LayerStack::LayerStack(int n_layers, int rank, int height, int width, double fill)
    : layers_(n_layers), rank_(rank), height_(height), width_(width) {
    if (n_layers < 1 || rank < 1 || height < 1 || width < 1)
        throw Error(ErrorCode::InvalidArgument, "layer stack dimensions must be positive");
    data_.assign(static_cast<std::size_t>(n_layers) * rank * height * width * 3, fill);
}

Image LayerStack::layer(int l, int m) const {
    Image img(height_, width_, 3);
    const auto first = data_.begin() + static_cast<std::ptrdiff_t>(index(l, m, 0, 0, 0));
    std::copy(first, first + static_cast<std::ptrdiff_t>(img.size()), img.data().begin());
    return img;
}

void LayerStack::set_layer(int l, int m, const Image& img) {
    if (img.height() != height_ || img.width() != width_ || img.channels() != 3)
        throw Error(ErrorCode::DimensionMismatch, "layer image does not match the stack");
    std::copy(img.data().begin(), img.data().end(), data_.begin() + static_cast<std::ptrdiff_t>(index(l, m, 0, 0, 0)));
}

DisparityPlanes::DisparityPlanes(std::vector<double> centers) : centers_(std::move(centers)) {
    if (centers_.empty()) throw Error(ErrorCode::InvalidArgument, "at least one disparity plane is required");
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        if (!std::isfinite(centers_[i])) throw Error(ErrorCode::InvalidArgument, "disparity plane is not finite");
        if (i > 0 && !(centers_[i] > centers_[i - 1]))
            throw Error(ErrorCode::InvalidArgument, "disparity planes must be strictly increasing");
    }
}

DisparityPlanes DisparityPlanes::scaled(double factor) const {
    if (!(factor > 0.0)) throw Error(ErrorCode::InvalidArgument, "plane scale must be positive");
    std::vector<double> out = centers_;
    for (double& c : out) c *= factor;
    return DisparityPlanes(std::move(out));
}

void FitConfig::validate() const {
    if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");
    if (!(step_size > 0.0) || !std::isfinite(step_size))
        throw Error(ErrorCode::InvalidArgument, "step_size must be positive");
    if (!(tolerance > 0.0) || !std::isfinite(tolerance))
        throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
}

LightField render_light_field(const LayerStack& stack, const DisparityPlanes& planes, int angular_rows,
                              int angular_cols) {
    check_render_inputs(stack, planes, angular_rows, angular_cols);
    LightField lf(angular_rows, angular_cols, stack.height(), stack.width());
    render_raw(stack, planes, lf);
    for (double& s : lf.data()) s = std::clamp(s, 0.0, 1.0);
    return lf;
}

LossAndGradient td_loss_and_gradient(const LayerStack& stack, const DisparityPlanes& planes,
                                     const LightField& target) {
    check_render_inputs(stack, planes, target.angular_rows(), target.angular_cols());
    if (target.height() != stack.height() || target.width() != stack.width())
        throw Error(ErrorCode::DimensionMismatch, "target spatial size differs from the layer stack");

    // Upstream gradient dLoss/dRender, straight through the output clamp.
    LightField upstream(target.angular_rows(), target.angular_cols(), target.height(), target.width());
    render_raw(stack, planes, upstream);
    const double n = static_cast<double>(target.size());
    double loss = 0.0;
    for (std::size_t i = 0; i < upstream.size(); ++i) {
        const double r = std::clamp(upstream.data()[i], 0.0, 1.0) - target.data()[i];
        loss += r * r;
        upstream.data()[i] = 2.0 * r / n;
    }
    loss /= n;

    LossAndGradient out{loss, LayerStack(stack.n_layers(), stack.rank(), stack.height(), stack.width())};
    const int rows = target.angular_rows(), cols = target.angular_cols();
    const int cv = target.center_row(), cu = target.center_col();
    const int n_layers = stack.n_layers();

    // One task per factor f_m^l, each scattering into its own buffer with a
    // fixed view/pixel order.
    parallel_for(static_cast<std::size_t>(n_layers) * stack.rank(), [&](std::size_t task) {
        const int m = static_cast<int>(task) / n_layers;
        const int l = static_cast<int>(task) % n_layers;
        LayerStack& g = out.grad;
        for (int v = 0; v < rows; ++v)
            for (int u = 0; u < cols; ++u) {
                const auto layers = shifted_layers(stack, planes, u - cu, v - cv);
                const ShiftedLayer& own = layers[l];
                for (int y = 0; y < stack.height(); ++y)
                    for (int x = 0; x < stack.width(); ++x)
                        for (int c = 0; c < 3; ++c) {
                            double other = upstream.at(v, u, y, x, c);
                            if (other == 0.0) continue;
                            for (int k = 0; k < n_layers; ++k)
                                if (k != l) other *= layers[k].sample(stack, k, m, y, x, c);
                            const int x0 = own.xs.i0[x], x1 = own.xs.i1[x];
                            const int y0 = own.ys.i0[y], y1 = own.ys.i1[y];
                            const double wx = own.xs.w[x], wy = own.ys.w[y];
                            g.at(l, m, y0, x0, c) += other * (1.0 - wx) * (1.0 - wy);
                            g.at(l, m, y0, x1, c) += other * wx * (1.0 - wy);
                            g.at(l, m, y1, x0, c) += other * (1.0 - wx) * wy;
                            g.at(l, m, y1, x1, c) += other * wx * wy;
                        }
            }
    });
    return out;
}

LayerStack initial_layer_stack(const LightField& target, int n_layers, int rank, std::uint64_t seed) {
    const Image center = target.center_view();
    LayerStack stack(n_layers, rank, target.height(), target.width());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    const double root = 1.0 / n_layers;
    for (int m = 0; m < rank; ++m)
        for (int l = 0; l < n_layers; ++l)
            for (int y = 0; y < target.height(); ++y)
                for (int x = 0; x < target.width(); ++x)
                    for (int c = 0; c < 3; ++c) {
                        const double base = m == 0 ? std::pow(center.at(y, x, c), root) : 0.5;
                        stack.at(l, m, y, x, c) = std::clamp(base + noise(rng), 0.0, 1.0);
                    }
    return stack;
}

FitResult fit_layer_stack(const LightField& target, const DisparityPlanes& planes, int rank,
                          const FitConfig& cfg) {
    cfg.validate();
    require_odd_angular(target, "fit_layer_stack");
    if (rank < 1) throw Error(ErrorCode::InvalidArgument, "rank must be >= 1");
    constexpr int kWindow = 10;

    FitResult result;
    LayerStack stack = initial_layer_stack(target, static_cast<int>(planes.size()), rank, cfg.seed);
    double best_loss = std::numeric_limits<double>::infinity();
    for (int it = 0; it <= cfg.max_iters; ++it) {
        LossAndGradient lg = td_loss_and_gradient(stack, planes, target);
        result.loss_history.push_back(lg.loss);
        if (lg.loss < best_loss) {
            best_loss = lg.loss;
            result.stack = stack;
        }
        if (it == cfg.max_iters || lg.loss == 0.0) break;
        if (it >= kWindow) {
            const double before = result.loss_history[it - kWindow];
            if (before > 0.0 && (before - lg.loss) / before < cfg.tolerance) break;
        }
        for (std::size_t i = 0; i < stack.size(); ++i)
            stack.data()[i] = std::clamp(stack.data()[i] - cfg.step_size * lg.grad.data()[i], 0.0, 1.0);
        result.iterations = it + 1;
    }
    return result;
}

void save_layer_stack(const LayerStack& stack, const DisparityPlanes& planes, const std::filesystem::path& dir) {
    if (planes.size() != static_cast<std::size_t>(stack.n_layers()))
        throw Error(ErrorCode::DimensionMismatch, "plane count differs from layer count");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string());
    const nlohmann::json meta = {{"n_layers", stack.n_layers()}, {"rank", stack.rank()},
                                 {"height", stack.height()},     {"width", stack.width()},
                                 {"planes", planes.centers()}};
    std::ofstream out(dir / "stack.json", std::ios::trunc);
    if (!(out << meta.dump(2) << "\n")) throw Error(ErrorCode::IoFailure, "cannot write stack.json");
    for (int m = 0; m < stack.rank(); ++m)
        for (int l = 0; l < stack.n_layers(); ++l)
            io::write_png(stack.layer(l, m),
                          dir / ("layer_" + std::to_string(l) + "_rank_" + std::to_string(m) + ".png"));
}

StoredStack load_layer_stack(const std::filesystem::path& dir) {
    std::ifstream in(dir / "stack.json");
    if (!in) throw Error(ErrorCode::CorruptDescriptor, "missing " + (dir / "stack.json").string());
    StoredStack out;
    int layers = 0, rank = 0, height = 0, width = 0;
    std::vector<double> centers;
    try {
        const nlohmann::json meta = nlohmann::json::parse(in);
        layers = meta.at("n_layers").get<int>();
        rank = meta.at("rank").get<int>();
        height = meta.at("height").get<int>();
        width = meta.at("width").get<int>();
        centers = meta.at("planes").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::CorruptDescriptor, std::string("stack.json: ") + e.what());
    }
    out.stack = LayerStack(layers, rank, height, width);
    out.planes = DisparityPlanes(std::move(centers));
    if (out.planes.size() != static_cast<std::size_t>(layers))
        throw Error(ErrorCode::CorruptDescriptor, "stack.json plane count differs from n_layers");
    for (int m = 0; m < rank; ++m)
        for (int l = 0; l < layers; ++l) {
            const auto p = dir / ("layer_" + std::to_string(l) + "_rank_" + std::to_string(m) + ".png");
            if (!std::filesystem::exists(p)) throw Error(ErrorCode::MissingView, p.string());
            const Image img = io::read_png(p, 3);
            if (img.height() != height || img.width() != width)
                throw Error(ErrorCode::DimensionMismatch, p.string() + " differs from stack.json size");
            out.stack.set_layer(l, m, img);
        }
    return out;
}

}  // namespace lftensor::td
