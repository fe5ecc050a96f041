#include "lftensor/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lftensor/apps.hpp"
#include "lftensor/dp_model.hpp"
#include "lftensor/io.hpp"
#include "lftensor/lf_video.hpp"
#include "lftensor/metrics.hpp"
#include "lftensor/parallel.hpp"
#include "lftensor/tensor_display.hpp"
#include "lftensor/warp.hpp"

namespace lftensor::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Built-in defaults, overridable by --config, overridable by flags.
struct Defaults {
    double lambda_photo = 1.0;
    double lambda_geo = 1.0;
    double lambda_bin = 2.0;
    double lambda_temp = 0.2;
    double a = 1.2;
    int angular_rows = 7;
    int angular_cols = 7;
    double t1 = 1.0;
    double t2 = 1.0;
    double t3 = 1.0;
    int pyramid_levels = 4;
};

Defaults load_defaults(const std::string& config_path) {
    Defaults d;
    if (config_path.empty()) return d;
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open config " + config_path);
    try {
        const json j = json::parse(in);
        d.lambda_photo = j.value("lambda_photo", d.lambda_photo);
        d.lambda_geo = j.value("lambda_geo", d.lambda_geo);
        d.lambda_bin = j.value("lambda_bin", d.lambda_bin);
        d.lambda_temp = j.value("lambda_temp", d.lambda_temp);
        d.a = j.value("a", d.a);
        d.angular_rows = j.value("angular_rows", d.angular_rows);
        d.angular_cols = j.value("angular_cols", d.angular_cols);
        d.t1 = j.value("t1", d.t1);
        d.t2 = j.value("t2", d.t2);
        d.t3 = j.value("t3", d.t3);
        d.pyramid_levels = j.value("pyramid_levels", d.pyramid_levels);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::CorruptDescriptor, config_path + ": " + e.what());
    }
    return d;
}

template <class T>
T pick(const CLI::Option* opt, const T& flag_value, const T& fallback) {
    return opt->count() > 0 ? flag_value : fallback;
}

// JSON has no infinity; PSNR of identical images is reported as "INF".
json number_or_inf(double v) {
    if (std::isinf(v)) return v > 0 ? "INF" : "-INF";
    return v;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("cannot parse number \"" + item + "\" in list \"" + text + "\"");
        }
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

void ensure_parent(const fs::path& file) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

warp::BaselineScale make_scale(double a, std::ostream& err) {
    warp::BaselineScale scale(a);
    if (auto w = scale.warning()) err << "warning: " << *w << "\n";
    return scale;
}

// Evenly spaced planes in [-1, 1]; a single layer sits at 0.
td::DisparityPlanes default_planes(int layers) {
    if (layers == 1) return td::DisparityPlanes({0.0});
    std::vector<double> c;
    for (int l = 0; l < layers; ++l) c.push_back(-1.0 + 2.0 * l / (layers - 1));
    return td::DisparityPlanes(std::move(c));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Light-field tensor display, warping losses, dual-pixel modelling and LF applications", "lftensor"};
    app.require_subcommand(1);
    app.fallthrough();

    unsigned threads = 0;
    std::string config_path;
    app.add_option("--threads", threads, "Worker thread cap (overrides LFTENSOR_THREADS)");
    app.add_option("--config", config_path, "JSON file with default hyperparameters")->check(CLI::ExistingFile);

    std::function<void(const Defaults&)> action;

    // render
    std::string stack_dir, out_path;
    int rows = 0, cols = 0;
    auto* render = app.add_subcommand("render", "Render a light field from a stored layer stack");
    render->add_option("--stack", stack_dir, "Layer stack directory")->required();
    auto* render_rows = render->add_option("--rows", rows, "Angular rows (odd)");
    auto* render_cols = render->add_option("--cols", cols, "Angular columns (odd)");
    render->add_option("--out", out_path, "Output light field directory")->required();
    render->callback([&] {
        action = [&](const Defaults& d) {
            const td::StoredStack stored = td::load_layer_stack(stack_dir);
            const int r = pick(render_rows, rows, d.angular_rows), c = pick(render_cols, cols, d.angular_cols);
            const LightField lf = td::render_light_field(stored.stack, stored.planes, r, c);
            io::save_light_field(lf, out_path);
            out << json{{"angular_rows", r}, {"angular_cols", c}, {"height", lf.height()}, {"width", lf.width()}}.dump()
                << "\n";
        };
    });

    // fit
    std::string target_dir, planes_text, disparity_path;
    int layers = 3, rank = 1, iters = 500;
    double step = 0.0, tol = 1e-6;
    std::uint64_t seed = 0;
    auto* fit = app.add_subcommand("fit", "Fit a layer stack to a target light field");
    fit->add_option("--target", target_dir, "Target light field directory")->required();
    fit->add_option("--layers", layers, "Number of layers L")->check(CLI::PositiveNumber);
    fit->add_option("--rank", rank, "Rank M")->check(CLI::PositiveNumber);
    fit->add_option("--iters", iters, "Maximum iterations")->check(CLI::PositiveNumber);
    fit->add_option("--step", step, "Gradient step size (default: 0.5 * H * W)");
    fit->add_option("--tol", tol, "Relative loss-decrease tolerance over 10 iterations");
    fit->add_option("--seed", seed, "Initialization seed");
    auto* fit_planes = fit->add_option("--planes", planes_text, "Comma-separated disparity planes");
    auto* fit_disp = fit->add_option("--disparity", disparity_path, "PFM disparity to extract planes from");
    fit_planes->excludes(fit_disp);
    fit->add_option("--out", out_path, "Output layer stack directory")->required();
    fit->callback([&] {
        action = [&](const Defaults&) {
            const LightField target = io::load_light_field(target_dir);
            td::DisparityPlanes planes;
            if (fit_planes->count()) {
                planes = td::DisparityPlanes(parse_list(planes_text));
            } else if (fit_disp->count()) {
                const auto centers = metrics::extract_disparity_planes(io::load_disparity_pfm(disparity_path), layers);
                if (centers.size() != static_cast<std::size_t>(layers))
                    throw Error(ErrorCode::InvalidArgument, "disparity map yields only " +
                                                                std::to_string(centers.size()) + " distinct planes");
                planes = td::DisparityPlanes(centers.values());
            } else {
                planes = default_planes(layers);
            }
            if (planes.size() != static_cast<std::size_t>(layers))
                throw UsageError("--planes lists " + std::to_string(planes.size()) + " values for --layers " +
                                 std::to_string(layers));
            td::FitConfig cfg;
            cfg.max_iters = iters;
            cfg.step_size = step > 0.0 ? step : 0.5 * target.height() * target.width();
            cfg.tolerance = tol;
            cfg.seed = seed;
            const td::FitResult result = td::fit_layer_stack(target, planes, rank, cfg);
            td::save_layer_stack(result.stack, planes, out_path);
            double best = result.loss_history.front();
            for (double l : result.loss_history) best = std::min(best, l);
            out << json{{"initial_loss", result.loss_history.front()},
                        {"final_loss", best},
                        {"iterations", result.iterations},
                        {"planes", planes.centers()}}
                       .dump()
                << "\n";
        };
    });

    // warp-loss
    std::string lf_dir, input_path, flow_path, next_path, pred_planes_text;
    double a = 1.2;
    bool masked = false;
    auto* wl = app.add_subcommand("warp-loss", "Photometric, geometric, temporal and bins losses of a light field");
    wl->add_option("--lf", lf_dir, "Light field directory")->required();
    wl->add_option("--disparity", disparity_path, "Teacher disparity (PFM)")->required();
    wl->add_option("--input", input_path, "Input view I_B (PNG); defaults to the center view");
    auto* wl_a = wl->add_option("--scale", a, "Baseline scale a");
    auto* wl_flow = wl->add_option("--flow", flow_path, "Optical flow to the next frame (.flo)");
    auto* wl_next = wl->add_option("--next", next_path, "Next frame I_B^{t+1} (PNG)");
    wl_flow->needs(wl_next);
    wl_next->needs(wl_flow);
    auto* wl_planes = wl->add_option("--pred-planes", pred_planes_text, "Predicted plane centers for the bins loss");
    wl->add_flag("--masked", masked, "Mask a border of width ceil(max |flow|)");
    wl->callback([&] {
        action = [&](const Defaults& d) {
            const LightField lf = io::load_light_field(lf_dir);
            const DisparityMap disp = io::load_disparity_pfm(disparity_path);
            const Image input = input_path.empty() ? lf.center_view() : io::read_png(input_path, 3);
            const warp::BaselineScale scale = make_scale(pick(wl_a, a, d.a), err);
            const warp::LossOptions opts{masked};
            json report;
            const double photo = warp::photometric_loss(lf, input);
            const double geo = warp::geometric_loss(lf, disp, input, scale, opts);
            report["photometric"] = photo;
            report["geometric"] = geo;
            double total = d.lambda_photo * photo + d.lambda_geo * geo;
            if (wl_flow->count()) {
                const double temp = warp::temporal_loss(lf, disp, io::load_flow_flo(flow_path),
                                                        io::read_png(next_path, 3), scale, opts);
                report["temporal"] = temp;
                total += d.lambda_temp * temp;
            }
            if (wl_planes->count()) {
                const metrics::PlaneCenters predicted(parse_list(pred_planes_text));
                const auto reference = metrics::extract_disparity_planes(disp, static_cast<int>(predicted.size()));
                const double bins = metrics::bins_chamfer(reference, predicted);
                report["bins"] = bins;
                total += d.lambda_bin * bins;
            }
            report["total"] = total;
            out << report.dump() << "\n";
        };
    });

    // metrics
    std::string pred_path, ref_path, rgb_path, teacher_path, image_a, image_b;
    int k = 0, levels = 4;
    std::vector<std::string> seq_lf, seq_disp, seq_flow, seq_next;
    auto* met = app.add_subcommand("metrics", "Disparity and image metrics as a JSON report");
    auto* met_pred = met->add_option("--pred", pred_path, "Predicted disparity (PFM)");
    auto* met_ref = met->add_option("--ref", ref_path, "Reference disparity (PFM)");
    met_pred->needs(met_ref);
    auto* met_rgb = met->add_option("--rgb", rgb_path, "RGB guide for the smoothness term (PNG)");
    met_rgb->needs(met_pred);
    auto* met_levels = met->add_option("--levels", levels, "Pyramid levels for the smoothness term");
    auto* met_teacher = met->add_option("--teacher", teacher_path, "Teacher disparity for the distillation loss (PFM)");
    met_teacher->needs(met_rgb);
    auto* met_k = met->add_option("--k", k, "Plane count for the bins chamfer of pred vs ref")->check(CLI::PositiveNumber);
    met_k->needs(met_pred);
    auto* met_a = met->add_option("--image-a", image_a, "First image for PSNR");
    auto* met_b = met->add_option("--image-b", image_b, "Second image for PSNR");
    met_a->needs(met_b);
    met_b->needs(met_a);
    auto* met_seq = met->add_option("--seq-lf", seq_lf, "Light field directories of a sequence");
    met->add_option("--seq-disparity", seq_disp, "Per-frame disparity (PFM)");
    met->add_option("--seq-flow", seq_flow, "Per-frame optical flow (.flo)");
    met->add_option("--seq-next", seq_next, "Per-frame next image (PNG)");
    auto* met_scale = met->add_option("--scale", a, "Baseline scale a for the temporal score");
    met->add_flag("--masked", masked, "Mask borders in the temporal score");
    met->callback([&] {
        action = [&](const Defaults& d) {
            json report = json::object();
            if (met_pred->count()) {
                const DisparityMap pred = io::load_disparity_pfm(pred_path);
                const DisparityMap ref = io::load_disparity_pfm(ref_path);
                const metrics::AiMetrics ai = metrics::ai_metrics(pred, ref);
                report["ai1"] = ai.ai1;
                report["ai2"] = ai.ai2;
                if (met_k->count())
                    report["chamfer"] = metrics::bins_chamfer(metrics::extract_disparity_planes(ref, k),
                                                              metrics::extract_disparity_planes(pred, k));
                if (met_rgb->count()) {
                    const Image rgb = io::read_png(rgb_path, 3);
                    const int n_levels = pick(met_levels, levels, d.pyramid_levels);
                    report["disl"] = metrics::disl_pyramid(pred, rgb, n_levels);
                    if (met_teacher->count())
                        report["distill"] = metrics::distillation_loss(pred, io::load_disparity_pfm(teacher_path), rgb,
                                                                       {d.t1, d.t2, d.t3, n_levels});
                }
            }
            if (met_a->count()) report["psnr"] = number_or_inf(metrics::psnr(io::read_png(image_a, 3), io::read_png(image_b, 3)));
            if (met_seq->count()) {
                if (seq_disp.size() != seq_lf.size() || seq_flow.size() != seq_lf.size() ||
                    seq_next.size() != seq_lf.size())
                    throw UsageError("--seq-lf, --seq-disparity, --seq-flow and --seq-next need equal counts");
                std::vector<LightField> lfs;
                std::vector<DisparityMap> ds;
                std::vector<FlowField> flows;
                std::vector<Image> nexts;
                for (std::size_t t = 0; t < seq_lf.size(); ++t) {
                    lfs.push_back(io::load_light_field(seq_lf[t]));
                    ds.push_back(io::load_disparity_pfm(seq_disp[t]));
                    flows.push_back(io::load_flow_flo(seq_flow[t]));
                    nexts.push_back(io::read_png(seq_next[t], 3));
                }
                report["temporal"] = metrics::temporal_consistency_score(
                    lfs, ds, flows, nexts, make_scale(pick(met_scale, a, d.a), err), warp::LossOptions{masked});
            }
            if (report.empty()) throw UsageError("metrics: nothing to compute; pass --pred/--ref, --image-a/--image-b or --seq-lf");
            out << report.dump() << "\n";
        };
    });

    // simulate-dp
    auto* sdp = app.add_subcommand("simulate-dp", "Simulate dual-pixel channels from a light field");
    sdp->add_option("--lf", lf_dir, "Light field directory")->required();
    sdp->add_option("--out", out_path, "Output directory (rgb.png, dp_left.png, dp_right.png)")->required();
    sdp->callback([&] {
        action = [&](const Defaults&) {
            const DualPixelFrame frame = dp::simulate_dp_from_lf(io::load_light_field(lf_dir));
            io::save_dual_pixel_frame(frame, out_path);
            out << json{{"height", frame.height()}, {"width", frame.width()}}.dump() << "\n";
        };
    });

    // dp-disparity
    std::string depth_path;
    dp::DpCalibration calib;
    auto* dpd = app.add_subcommand("dp-disparity", "Thin-lens dual-pixel disparity from depth");
    dpd->add_option("--depth", depth_path, "Depth map (PFM)")->required();
    dpd->add_option("--alpha", calib.alpha, "Positive scale factor")->required();
    dpd->add_option("--aperture", calib.aperture, "Main lens aperture A")->required();
    dpd->add_option("--focal", calib.focal_length, "Focal length f")->required();
    dpd->add_option("--focus-depth", calib.focus_depth, "Focus plane depth z_f")->required();
    dpd->add_option("--out", out_path, "Output disparity (PFM)");
    dpd->callback([&] {
        action = [&](const Defaults&) {
            const dp::DpAffine pq = dp::dp_affine_params(calib);
            const DisparityMap d = dp::depth_to_dp_disparity(io::load_depth_pfm(depth_path), calib);
            if (!out_path.empty()) {
                ensure_parent(out_path);
                io::save_disparity_pfm(d, out_path);
            }
            out << json{{"p", pq.p}, {"q", pq.q}}.dump() << "\n";
        };
    });

    // simulate-video
    std::string path_file;
    bool stereo = false;
    auto* sv = app.add_subcommand("simulate-video",
                                  "Light-field video from one light field under a 6-DoF path. Path JSON: "
                                  "{focal_length, v_m, u_extent, frames:[{p:[px,py,pz], r:[tx,ty,tz]}]}; "
                                  "px, py in view steps, pz a unitless scale, r in radians");
    sv->add_option("--lf", lf_dir, "Light field directory")->required();
    sv->add_option("--path", path_file, "Camera path JSON")->required();
    sv->add_option("--out", out_path, "Output directory")->required();
    sv->add_flag("--stereo", stereo, "Render only the stereo views (0, v_m) and (U, v_m)");
    sv->callback([&] {
        action = [&](const Defaults&) {
            const LightField lf = io::load_light_field(lf_dir);
            const video::CameraPath path = video::load_camera_path(path_file);
            const auto views = stereo ? video::stereo_views(path.model) : video::grid_views(lf);
            const auto frames = video::simulate_lf_video(lf, path, views);
            video::save_lf_video(frames, views, path, out_path, stereo ? 0 : lf.angular_rows(),
                                 stereo ? 0 : lf.angular_cols());
            out << json{{"frames", frames.size()}, {"views", views.size()}}.dump() << "\n";
        };
    });

    // refocus
    double focus = 0.0, aperture = std::numeric_limits<double>::infinity();
    auto* rf = app.add_subcommand("refocus", "Shift-and-add refocus with a square synthetic aperture");
    rf->add_option("--lf", lf_dir, "Light field directory")->required();
    rf->add_option("--disparity", focus, "Focus disparity (pixels per view)")->required();
    rf->add_option("--aperture", aperture, "Aperture radius in views (default: all views)");
    rf->add_option("--out", out_path, "Output PNG")->required();
    rf->callback([&] {
        action = [&](const Defaults&) {
            const LightField lf = io::load_light_field(lf_dir);
            const Image img = apps::refocus(lf, focus, aperture);
            ensure_parent(out_path);
            io::write_png(img, out_path);
            out << json{{"height", img.height()}, {"width", img.width()}}.dump() << "\n";
        };
    });

    // epi
    std::string mode = "h";
    int row = -1, vrow = -1, col = -1, ucol = -1;
    auto* epi = app.add_subcommand("epi", "Extract an epipolar-plane image");
    epi->add_option("--lf", lf_dir, "Light field directory")->required();
    epi->add_option("--mode", mode, "h (horizontal) or v (vertical)")->check(CLI::IsMember({"h", "v"}));
    epi->add_option("--row", row, "Spatial row y (mode h)");
    epi->add_option("--vrow", vrow, "Angular row v (mode h)");
    epi->add_option("--col", col, "Spatial column x (mode v)");
    epi->add_option("--ucol", ucol, "Angular column u (mode v)");
    epi->add_option("--out", out_path, "Output PNG")->required();
    epi->callback([&] {
        action = [&](const Defaults&) {
            const bool horizontal = mode == "h";
            if (horizontal && (row < 0 || vrow < 0)) throw UsageError("epi --mode h needs --row and --vrow");
            if (!horizontal && (col < 0 || ucol < 0)) throw UsageError("epi --mode v needs --col and --ucol");
            const LightField lf = io::load_light_field(lf_dir);
            const Image img = horizontal ? apps::extract_epi(lf, apps::EpiMode::Horizontal, row, vrow)
                                         : apps::extract_epi(lf, apps::EpiMode::Vertical, col, ucol);
            ensure_parent(out_path);
            io::write_png(img, out_path);
            out << json{{"height", img.height()}, {"width", img.width()}}.dump() << "\n";
        };
    });

    // view
    int view_u = 0, view_v = 0;
    auto* nv = app.add_subcommand("view", "Extract one sub-aperture view");
    nv->add_option("--lf", lf_dir, "Light field directory")->required();
    nv->add_option("--u", view_u, "Angular column")->required();
    nv->add_option("--v", view_v, "Angular row")->required();
    nv->add_option("--out", out_path, "Output PNG")->required();
    nv->callback([&] {
        action = [&](const Defaults&) {
            const SubApertureImage sai = apps::novel_view(io::load_light_field(lf_dir), view_u, view_v);
            ensure_parent(out_path);
            io::write_png(sai.image, out_path);
            out << json{{"du", sai.du}, {"dv", sai.dv}}.dump() << "\n";
        };
    });

    // scanline
    std::string dp_dir;
    auto* sl = app.add_subcommand("scanline", "Per-column dual-pixel intensities of one row as CSV");
    auto* sl_dp = sl->add_option("--dp", dp_dir, "Dual-pixel frame directory (from simulate-dp)");
    auto* sl_lf = sl->add_option("--lf", lf_dir, "Light field to simulate dual pixels from");
    sl_dp->excludes(sl_lf);
    sl->add_option("--row", row, "Image row")->required();
    sl->add_option("--out", out_path, "Output CSV (default: stdout)");
    sl->callback([&] {
        action = [&](const Defaults&) {
            if (!sl_dp->count() && !sl_lf->count()) throw UsageError("scanline needs --dp or --lf");
            const DualPixelFrame frame = sl_dp->count() ? io::load_dual_pixel_frame(dp_dir)
                                                        : dp::simulate_dp_from_lf(io::load_light_field(lf_dir));
            const auto samples = dp::scanline_analysis(frame, row);
            if (out_path.empty()) {
                dp::write_scanline_csv(samples, out);
            } else {
                ensure_parent(out_path);
                std::ofstream file(out_path, std::ios::trunc);
                if (!file) throw Error(ErrorCode::IoFailure, "cannot write " + out_path);
                dp::write_scanline_csv(samples, file);
            }
        };
    });

    // planes
    auto* pl = app.add_subcommand("planes", "Disparity plane centers by quantile-seeded 1-D k-means");
    pl->add_option("--disparity", disparity_path, "Disparity (PFM)")->required();
    pl->add_option("--k", k, "Number of planes")->required()->check(CLI::PositiveNumber);
    pl->callback([&] {
        action = [&](const Defaults&) {
            const auto centers = metrics::extract_disparity_planes(io::load_disparity_pfm(disparity_path), k);
            out << json{{"centers", centers.values()}}.dump() << "\n";
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        set_max_threads(threads);
        action(load_defaults(config_path));
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitOk;
}

}  // namespace lftensor::cli
