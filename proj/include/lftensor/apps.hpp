#pragma once

#include "lftensor/image.hpp"
#include "lftensor/light_field.hpp"

namespace lftensor::apps {

/// Shift-and-add refocus over the square aperture max(|du|, |dv|) <= radius.
/// Each view is sampled at (x - d du, y - d dv), the same direction as
/// warp_view_to_center, so content at disparity d aligns and sharpens.
Image refocus(const LightField& lf, double focus_disparity, double aperture_radius);

enum class EpiMode { Horizontal, Vertical };

/// Horizontal: (angular_cols x width) slice at row y = fixed_spatial of angular row v = fixed_angular.
/// Vertical: (angular_rows x height) slice at column x = fixed_spatial of angular column u = fixed_angular.
Image extract_epi(const LightField& lf, EpiMode mode, int fixed_spatial, int fixed_angular);

/// Exact view (v row, u column) with its signed offset from the center.
SubApertureImage novel_view(const LightField& lf, int u, int v);

}  // namespace lftensor::apps
