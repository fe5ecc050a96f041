#include <gtest/gtest.h>

#include "lftensor/tensor_display.hpp"
#include "lftensor/warp.hpp"
#include "test_support.hpp"

namespace lftensor::warp {
namespace {

Image ramp(int h, int w) {
    Image img(h, w, 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) img.at(y, x, c) = x / static_cast<double>(w - 1);
    return img;
}

TEST(BaselineScale, WarnsOutsideRecommendedRange) {
    EXPECT_FALSE(BaselineScale(1.2).warning());
    EXPECT_FALSE(BaselineScale(3.0).warning());
    EXPECT_TRUE(BaselineScale(4.0).warning());
    EXPECT_TRUE(BaselineScale(0.5).warning());
    EXPECT_THROW(BaselineScale(std::nan("")), Error);
}

TEST(InverseWarp, ZeroFlowIsBitwiseIdentity) {
    const Image src = testing::random_image(7, 9, 3, 1);
    EXPECT_EQ(inverse_warp(src, FlowField(7, 9)), src);
}

TEST(InverseWarp, IntegerShiftWithClampedBorder) {
    const Image src = ramp(3, 6);
    const Image out = inverse_warp(src, FlowField(3, 6, {1.0, 0.0}));
    for (int y = 0; y < 3; ++y) {
        for (int x = 0; x < 5; ++x) EXPECT_EQ(out.at(y, x, 0), src.at(y, x + 1, 0));
        EXPECT_EQ(out.at(y, 5, 0), src.at(y, 5, 0));
    }
}

TEST(InverseWarp, HalfPixelFlowInterpolates) {
    // Rows [0, 1]: sampling at x + 0.5 gives the midpoint.
    Image src(2, 2, 1, std::vector<double>{0.0, 1.0, 0.0, 1.0});
    const Image out = inverse_warp(src, FlowField(2, 2, {0.5, 0.0}));
    EXPECT_DOUBLE_EQ(out.at(0, 0, 0), 0.5);
    EXPECT_DOUBLE_EQ(out.at(1, 0, 0), 0.5);
    EXPECT_DOUBLE_EQ(out.at(0, 1, 0), 1.0);
}

TEST(InverseWarp, DimensionMismatch) {
    try {
        inverse_warp(Image(2, 2, 3), FlowField(2, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(WarpToCenter, CenterViewIsIdentityForAnyDisparity) {
    const Image img = testing::random_image(5, 5, 3, 2);
    DisparityMap d(5, 5);
    std::mt19937_64 rng(1);
    for (double& v : d.data()) v = std::uniform_real_distribution<double>(-4, 4)(rng);
    EXPECT_EQ(warp_view_to_center({img, 0.0, 0.0}, d, BaselineScale(2.5)), img);
    // Zero disparity: identity for every view.
    EXPECT_EQ(warp_view_to_center({img, 3.0, -2.0}, DisparityMap(5, 5, 0.0), BaselineScale(1.0)), img);
}

TEST(WarpToCenter, UnitDisparityShiftsByOnePixel) {
    const Image src = ramp(2, 6);
    // View at du = 1 with d = 1 samples x - 1: inverse of the render convention.
    const Image out = warp_view_to_center({src, 1.0, 0.0}, DisparityMap(2, 6, 1.0), BaselineScale(1.0));
    for (int x = 1; x < 6; ++x) EXPECT_EQ(out.at(0, x, 0), src.at(0, x - 1, 0));
    EXPECT_EQ(out.at(0, 0, 0), src.at(0, 0, 0));
}

TEST(WarpToCenter, UndoesTensorDisplayParallax) {
    // A single-layer render at plane D warps back onto its center view when d = D.
    const td::LayerStack stack = testing::random_stack(1, 1, 12, 12, 3);
    const td::DisparityPlanes planes({1.0});
    const LightField lf = td::render_light_field(stack, planes, 3, 3);
    const DisparityMap d(12, 12, 1.0);
    EXPECT_LE(geometric_loss(lf, d, lf.center_view(), BaselineScale(1.0), {true}), 1e-12);
    EXPECT_GT(geometric_loss(lf, DisparityMap(12, 12, -1.0), lf.center_view(), BaselineScale(1.0), {true}), 1e-2);
}

TEST(GeometricLoss, ZeroOnConsistentInputs) {
    const Image center = testing::random_image(6, 6, 3, 4);
    const LightField lf = LightField::from_views(3, 3, std::vector<Image>(9, center));
    EXPECT_EQ(geometric_loss(lf, DisparityMap(6, 6), center, BaselineScale(1.2)), 0.0);
}

TEST(GeometricLoss, SynthesizedLightFieldIsConsistent) {
    const Image center = testing::smooth_texture(20, 24, 5);
    const LightField lf = testing::integer_shift_lf(center, 5, 5, 2);
    const double matched = geometric_loss(lf, DisparityMap(20, 24, 2.0), center, BaselineScale(1.0), {true});
    const double unmatched = geometric_loss(lf, DisparityMap(20, 24, 0.0), center, BaselineScale(1.0), {true});
    EXPECT_LE(matched, 1e-6);
    EXPECT_GT(unmatched, matched);
    EXPECT_GT(geometric_loss(lf, DisparityMap(20, 24, 0.0), center, BaselineScale(1.0)), 0.0);
}

TEST(GeometricLoss, BaselineScaleMultipliesDisparity) {
    const Image center = testing::smooth_texture(20, 24, 6);
    const LightField lf = testing::integer_shift_lf(center, 3, 3, 2);
    EXPECT_LE(geometric_loss(lf, DisparityMap(20, 24, 1.0), center, BaselineScale(2.0), {true}), 1e-6);
}

TEST(GeometricLoss, SumsPerViewMeanAbsoluteError) {
    const Image center(4, 4, 3, 0.5);
    std::vector<Image> views(9, center);
    views[0] = Image(4, 4, 3, 0.75);
    views[8] = Image(4, 4, 3, 0.0);
    const LightField lf = LightField::from_views(3, 3, views);
    EXPECT_DOUBLE_EQ(geometric_loss(lf, DisparityMap(4, 4), center, BaselineScale(1.0)), 0.25 + 0.5);
}

TEST(GeometricLoss, RequiresOddGridAndMatchingSizes) {
    const LightField even(2, 2, 4, 4);
    EXPECT_THROW(geometric_loss(even, DisparityMap(4, 4), Image(4, 4, 3), BaselineScale(1.0)), Error);
    const LightField lf(3, 3, 4, 4);
    try {
        geometric_loss(lf, DisparityMap(4, 5), Image(4, 4, 3), BaselineScale(1.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(TemporalLoss, StaticSceneScoresZero) {
    const Image frame = testing::random_image(6, 6, 3, 7);
    const LightField lf = LightField::from_views(3, 3, std::vector<Image>(9, frame));
    EXPECT_EQ(temporal_loss(lf, DisparityMap(6, 6), FlowField(6, 6), frame, BaselineScale(1.2)), 0.0);
}

TEST(TemporalLoss, ZeroFlowReducesToGeometricLoss) {
    const LightField lf = testing::integer_shift_lf(testing::smooth_texture(10, 12, 8), 3, 3, 1);
    DisparityMap d(10, 12);
    std::mt19937_64 rng(2);
    for (double& v : d.data()) v = std::uniform_real_distribution<double>(-1.5, 1.5)(rng);
    const Image next = testing::random_image(10, 12, 3, 9);
    for (bool masked : {false, true}) {
        const double t = temporal_loss(lf, d, FlowField(10, 12), next, BaselineScale(1.2), {masked});
        const double g = geometric_loss(lf, d, next, BaselineScale(1.2), {masked});
        EXPECT_NEAR(t, g, 1e-12);
    }
}

TEST(TemporalLoss, TranslatingSceneWithMatchingFlow) {
    // Frame t+1 is the center translated by 3 px; flow o_t = (3, 0).
    const Image center = testing::smooth_texture(20, 30, 10);
    const LightField lf_t = testing::integer_shift_lf(center, 3, 3, 1);
    Image next(20, 30, 3);
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 30; ++x)
            for (int c = 0; c < 3; ++c) next.at(y, x, c) = center.at(y, std::min(x + 3, 29), c);
    const double matched =
        temporal_loss(lf_t, DisparityMap(20, 30, 1.0), FlowField(20, 30, {3.0, 0.0}), next, BaselineScale(1.0), {true});
    EXPECT_LE(matched, 1e-6);
    const double wrong =
        temporal_loss(lf_t, DisparityMap(20, 30, 1.0), FlowField(20, 30), next, BaselineScale(1.0), {true});
    EXPECT_GT(wrong, matched);
}

TEST(PhotometricLoss, ConstantOffsetAndBruteForce) {
    const Image center = testing::random_image(5, 5, 3, 11, 0.0, 0.5);
    std::vector<Image> views(9, Image(5, 5, 3, 0.9));
    views[4] = center;
    const LightField lf = LightField::from_views(3, 3, views);
    EXPECT_EQ(photometric_loss(lf, center), 0.0);
    Image shifted = center;
    for (double& v : shifted.data()) v += 0.25;
    EXPECT_NEAR(photometric_loss(lf, shifted), 0.25, 1e-15);

    const Image other = testing::random_image(5, 5, 3, 12);
    double brute = 0.0;
    for (std::size_t i = 0; i < other.size(); ++i) brute += std::abs(center.data()[i] - other.data()[i]);
    EXPECT_NEAR(photometric_loss(lf, other), brute / other.size(), 1e-15);
}

TEST(SynthesizeLightField, MatchesIntegerShiftOracle) {
    const Image center = testing::smooth_texture(8, 10, 13);
    const LightField lf = synthesize_light_field(center, DisparityMap(8, 10, 1.0), BaselineScale(2.0), 3, 5);
    EXPECT_EQ(lf, testing::integer_shift_lf(center, 3, 5, 2));
}

}  // namespace
}  // namespace lftensor::warp
