#include "lftensor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lftensor::metrics {
namespace {

void require_same(const DisparityMap& a, const DisparityMap& b, const char* what) {
    if (!a.same_shape(b)) throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": disparity sizes differ");
}

// 2x2 mean pooling; odd trailing rows/cols are dropped.
DisparityMap pool(const DisparityMap& d) {
    DisparityMap out(d.height() / 2, d.width() / 2);
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x)
            out.at(y, x) = 0.25 * (d.at(2 * y, 2 * x) + d.at(2 * y, 2 * x + 1) + d.at(2 * y + 1, 2 * x) +
                                   d.at(2 * y + 1, 2 * x + 1));
    return out;
}

Image pool(const Image& img) {
    Image out(img.height() / 2, img.width() / 2, img.channels());
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x)
            for (int c = 0; c < img.channels(); ++c)
                out.at(y, x, c) = 0.25 * (img.at(2 * y, 2 * x, c) + img.at(2 * y, 2 * x + 1, c) +
                                          img.at(2 * y + 1, 2 * x, c) + img.at(2 * y + 1, 2 * x + 1, c));
    return out;
}

double disl_single(const DisparityMap& d, const Image& rgb) {
    double sum = 0.0;
    for (int y = 0; y < d.height(); ++y)
        for (int x = 0; x < d.width(); ++x) {
            if (x + 1 < d.width()) {
                double edge = 0.0;
                for (int c = 0; c < rgb.channels(); ++c) edge += std::abs(rgb.at(y, x + 1, c) - rgb.at(y, x, c));
                sum += std::abs(d.at(y, x + 1) - d.at(y, x)) * std::exp(-edge);
            }
            if (y + 1 < d.height()) {
                double edge = 0.0;
                for (int c = 0; c < rgb.channels(); ++c) edge += std::abs(rgb.at(y + 1, x, c) - rgb.at(y, x, c));
                sum += std::abs(d.at(y + 1, x) - d.at(y, x)) * std::exp(-edge);
            }
        }
    return sum / static_cast<double>(d.size());
}

double nearest_sq(double v, const std::vector<double>& centers) {
    double best = std::numeric_limits<double>::infinity();
    for (double c : centers) best = std::min(best, (v - c) * (v - c));
    return best;
}

// Replaces duplicate centers by the sample farthest from every center.
void reseed_duplicates(std::vector<double>& centers, const std::vector<double>& sorted) {
    std::sort(centers.begin(), centers.end());
    for (std::size_t i = 1; i < centers.size(); ++i) {
        if (centers[i] != centers[i - 1]) continue;
        std::vector<double> others = centers;
        others.erase(others.begin() + static_cast<std::ptrdiff_t>(i));
        double far_value = sorted.front();
        double far_dist = -1.0;
        for (double v : sorted) {
            const double dist = nearest_sq(v, others);
            if (dist > far_dist) {
                far_dist = dist;
                far_value = v;
            }
        }
        centers[i] = far_value;
        std::sort(centers.begin(), centers.end());
        i = 0;
    }
}

}  // namespace

AffineFit affine_fit(const DisparityMap& pred, const DisparityMap& ref) {
    require_same(pred, ref, "affine_fit");
    const double n = static_cast<double>(pred.size());
    double mp = 0.0, mr = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        mp += pred.data()[i];
        mr += ref.data()[i];
    }
    mp /= n;
    mr /= n;
    double spp = 0.0, spr = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double dp = pred.data()[i] - mp;
        spp += dp * dp;
        spr += dp * (ref.data()[i] - mr);
    }
    if (!(spp / n > 1e-12)) throw Error(ErrorCode::DegeneratePrediction, "prediction is (nearly) constant");
    AffineFit fit;
    fit.s = spr / spp;
    fit.t = mr - fit.s * mp;
    return fit;
}

AiMetrics ai_metrics(const DisparityMap& pred, const DisparityMap& ref) {
    const AffineFit fit = affine_fit(pred, ref);
    double abs_sum = 0.0, sq_sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double r = fit.s * pred.data()[i] + fit.t - ref.data()[i];
        abs_sum += std::abs(r);
        sq_sum += r * r;
    }
    const double n = static_cast<double>(pred.size());
    return {abs_sum / n, std::sqrt(sq_sum / n)};
}

PlaneCenters::PlaneCenters(std::vector<double> centers) : centers_(std::move(centers)) {
    for (double c : centers_)
        if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "plane center is not finite");
    std::sort(centers_.begin(), centers_.end());
}

double kmeans_objective(const std::vector<double>& values, const std::vector<double>& centers) {
    double total = 0.0;
    for (double v : values) total += nearest_sq(v, centers);
    return total;
}

std::vector<double> quantile_seeds(std::vector<double> values, int k) {
    std::sort(values.begin(), values.end());
    std::vector<double> seeds;
    const double n = static_cast<double>(values.size());
    for (int i = 0; i < k; ++i) {
        const double q = (i + 0.5) / k;
        const auto idx = std::min(values.size() - 1, static_cast<std::size_t>(std::floor(q * n)));
        seeds.push_back(values[idx]);
    }
    return seeds;
}

PlaneCenters extract_disparity_planes(const DisparityMap& d, int k) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    for (double v : d.data())
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "disparity contains non-finite values");
    std::vector<double> sorted = d.data();
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> distinct = sorted;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() <= static_cast<std::size_t>(k)) return PlaneCenters(distinct);

    std::vector<double> centers = quantile_seeds(sorted, k);
    reseed_duplicates(centers, sorted);

    constexpr int kMaxIters = 100;
    constexpr double kMoveTol = 1e-9;
    for (int it = 0; it < kMaxIters; ++it) {
        // Sorted data and sorted centers: cluster boundaries are midpoints.
        std::vector<double> sum(centers.size(), 0.0);
        std::vector<std::size_t> count(centers.size(), 0);
        std::size_t j = 0;
        for (double v : sorted) {
            while (j + 1 < centers.size() && std::abs(v - centers[j + 1]) < std::abs(v - centers[j])) ++j;
            sum[j] += v;
            ++count[j];
        }
        std::vector<double> next(centers.size());
        for (std::size_t c = 0; c < centers.size(); ++c)
            next[c] = count[c] > 0 ? sum[c] / static_cast<double>(count[c]) : centers[c];
        std::sort(next.begin(), next.end());
        reseed_duplicates(next, sorted);
        double moved = 0.0;
        for (std::size_t c = 0; c < centers.size(); ++c) moved = std::max(moved, std::abs(next[c] - centers[c]));
        centers = std::move(next);
        if (moved < kMoveTol) break;
    }
    return PlaneCenters(std::move(centers));
}

double bins_chamfer(const PlaneCenters& x, const PlaneCenters& c) {
    if (x.empty() || c.empty()) throw Error(ErrorCode::EmptySet, "bins_chamfer needs two non-empty sets");
    // Each direction is summed on its own so swapping the arguments is bitwise symmetric.
    double forward = 0.0, backward = 0.0;
    for (double v : x.values()) forward += nearest_sq(v, c.values());
    for (double v : c.values()) backward += nearest_sq(v, x.values());
    return forward + backward;
}

double disl_pyramid(const DisparityMap& pred, const Image& rgb, int levels) {
    if (levels < 1) throw Error(ErrorCode::InvalidArgument, "levels must be >= 1");
    if (pred.height() != rgb.height() || pred.width() != rgb.width())
        throw Error(ErrorCode::DimensionMismatch, "disl_pyramid: disparity and image sizes differ");
    DisparityMap d = pred;
    Image img = rgb;
    double total = disl_single(d, img);
    for (int level = 1; level < levels; ++level) {
        if (d.height() < 2 || d.width() < 2) break;
        d = pool(d);
        img = pool(img);
        total += disl_single(d, img);
    }
    return total;
}

void DistillTemperatures::validate() const {
    if (t1 < 0.0 || t2 < 0.0 || t3 < 0.0) throw Error(ErrorCode::InvalidArgument, "temperatures must be >= 0");
    if (!(t1 > 0.0 || t2 > 0.0 || t3 > 0.0))
        throw Error(ErrorCode::InvalidArgument, "at least one temperature must be positive");
    if (pyramid_levels < 1) throw Error(ErrorCode::InvalidArgument, "pyramid_levels must be >= 1");
}

double distillation_loss(const DisparityMap& pred, const DisparityMap& teacher, const Image& rgb,
                         const DistillTemperatures& temps) {
    temps.validate();
    require_same(pred, teacher, "distillation_loss");
    double l1 = 0.0, l2 = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double r = pred.data()[i] - teacher.data()[i];
        l1 += std::abs(r);
        l2 += r * r;
    }
    const double n = static_cast<double>(pred.size());
    double total = temps.t1 * l1 / n + temps.t2 * l2 / n;
    if (temps.t3 > 0.0) total += temps.t3 * disl_pyramid(pred, rgb, temps.pyramid_levels);
    return total;
}

double psnr(const Image& a, const Image& b) {
    require_same_shape(a, b, "psnr");
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r = a.data()[i] - b.data()[i];
        sq += r * r;
    }
    const double mse = sq / static_cast<double>(a.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

double temporal_consistency_score(const std::vector<LightField>& lf_seq, const std::vector<DisparityMap>& d_seq,
                                  const std::vector<FlowField>& flow_seq, const std::vector<Image>& next_frames,
                                  warp::BaselineScale scale, const warp::LossOptions& opts) {
    if (lf_seq.empty()) throw Error(ErrorCode::InvalidArgument, "empty light field sequence");
    if (d_seq.size() != lf_seq.size() || flow_seq.size() != lf_seq.size() || next_frames.size() != lf_seq.size())
        throw Error(ErrorCode::DimensionMismatch, "sequence lengths differ");
    double total = 0.0;
    for (std::size_t t = 0; t < lf_seq.size(); ++t)
        total += warp::temporal_loss(lf_seq[t], d_seq[t], flow_seq[t], next_frames[t], scale, opts);
    return total / static_cast<double>(lf_seq.size());
}

}  // namespace lftensor::metrics
