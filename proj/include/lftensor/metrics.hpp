#pragma once

#include <vector>

#include "lftensor/image.hpp"
#include "lftensor/light_field.hpp"
#include "lftensor/warp.hpp"

namespace lftensor::metrics {

/// ref ~ s * pred + t
struct AffineFit {
    double s = 1.0;
    double t = 0.0;
};

/// Least-squares gain/offset aligning pred to ref. Throws
/// DegeneratePrediction when pred has variance <= 1e-12.
AffineFit affine_fit(const DisparityMap& pred, const DisparityMap& ref);

struct AiMetrics {
    double ai1 = 0.0;  ///< affine-invariant MAE
    double ai2 = 0.0;  ///< affine-invariant RMSE
};
AiMetrics ai_metrics(const DisparityMap& pred, const DisparityMap& ref);

/// Sorted, finite plane centers.
class PlaneCenters {
public:
    PlaneCenters() = default;
    explicit PlaneCenters(std::vector<double> centers);
    const std::vector<double>& values() const noexcept { return centers_; }
    std::size_t size() const noexcept { return centers_.size(); }
    bool empty() const noexcept { return centers_.empty(); }

private:
    std::vector<double> centers_;
};

/// 1-D Lloyd k-means over all disparity values, seeded at the (i + 0.5) / k
/// quantiles. When the map has at most k distinct values those values are
/// returned (fewer than k centers). Coincident centers are re-seeded at the
/// sample farthest from every remaining center.
PlaneCenters extract_disparity_planes(const DisparityMap& d, int k);

/// Sum of squared distances from every value to its nearest center.
double kmeans_objective(const std::vector<double>& values, const std::vector<double>& centers);

/// Quantile seeds used by extract_disparity_planes (exposed for tests).
std::vector<double> quantile_seeds(std::vector<double> values, int k);

/// Symmetric squared-nearest-neighbour distance between two center sets.
double bins_chamfer(const PlaneCenters& x, const PlaneCenters& c);

/// Edge-aware smoothness of pred summed over a 2x-downsampled pyramid.
/// Levels whose image can no longer be halved are skipped.
double disl_pyramid(const DisparityMap& pred, const Image& rgb, int levels);

struct DistillTemperatures {
    double t1 = 1.0;
    double t2 = 1.0;
    double t3 = 1.0;
    int pyramid_levels = 4;

    void validate() const;
};

/// T1 * L1 + T2 * mean squared error + T3 * disl_pyramid.
double distillation_loss(const DisparityMap& pred, const DisparityMap& teacher, const Image& rgb,
                         const DistillTemperatures& temps = {});

/// Peak 1.0. Identical images give +infinity.
double psnr(const Image& a, const Image& b);

/// Mean of warp::temporal_loss over frames.
double temporal_consistency_score(const std::vector<LightField>& lf_seq, const std::vector<DisparityMap>& d_seq,
                                  const std::vector<FlowField>& flow_seq, const std::vector<Image>& next_frames,
                                  warp::BaselineScale scale, const warp::LossOptions& opts = {});

}  // namespace lftensor::metrics
