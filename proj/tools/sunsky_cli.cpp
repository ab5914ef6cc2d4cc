// Command-line driver. Exit codes: 0 success, 1 partial failure, 2 configuration error.
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sunsky/error.hpp"
#include "sunsky/pipeline.hpp"

namespace {

using namespace sunsky;

Mat3 parse_rotation(const std::vector<double>& v) {
  if (v.size() != 9) throw ConfigError("rotation needs 9 row-major values");
  Mat3 m;
  for (int i = 0; i < 9; ++i) m.m[i] = v[i];
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sun/sky intrinsic decomposition toolkit for outdoor imagery"};
  app.require_subcommand(1);

  // decompose
  auto* dec = app.add_subcommand("decompose", "Recover albedo, shading and the sun-sky ratio per manifest image");
  std::string dec_config;
  std::map<std::string, std::string> overrides;
  std::vector<std::pair<std::string, CLI::Option*>> dec_opts;
  std::map<std::string, std::string> dec_values;
  dec->add_option("--config", dec_config, "key = value run configuration file");
  auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
    dec_opts.emplace_back(key, dec->add_option(name, dec_values[key], help));
  };
  flag("--manifest", "manifest", "Image manifest CSV");
  flag("--mesh", "mesh", "Scene mesh (OBJ)");
  flag("--output,-o", "output", "Output directory");
  flag("--sun", "sun", "Sun source: ephemeris | explicit");
  flag("--sun-azimuth", "sun_azimuth_deg", "Explicit sun azimuth, degrees clockwise from north");
  flag("--sun-elevation", "sun_elevation_deg", "Explicit sun elevation, degrees");
  flag("--sky", "sky", "Sky model: uniform | measured");
  flag("--dome", "dome", "Equirectangular sky dome EXR (sky = measured)");
  flag("--search-radius", "boundary_search_radius", "Lit-pixel search radius around shadow boundaries (px)");
  flag("--max-normal-angle", "max_normal_angle_deg", "Maximum normal angle within a pair (degrees)");
  flag("--max-depth-diff", "max_depth_diff", "Maximum depth difference within a pair (m)");
  flag("--min-shadow-brightness", "min_shadow_brightness", "Brightness floor for shadow pixels (radiance)");
  flag("--max-sky-diff", "max_sky_shading_diff", "Maximum sky-shading difference within a pair");
  flag("--min-pairs", "min_pairs", "Minimum phi samples per fit");
  flag("--gmm-max-iter", "gmm_max_iter", "EM iteration cap");
  flag("--gmm-tol", "gmm_tol", "EM log-likelihood convergence tolerance");
  flag("--pooling", "pooling", "phi pooling: per-image | per-flight");
  flag("--sky-samples", "sky_samples", "Hemisphere samples per pixel");
  flag("--seed", "seed", "Base random seed");
  flag("--workers,-j", "workers", "Worker threads (0 = all cores)");
  flag("--confidence-radius", "confidence_radius", "Dilation radius for the confidence mask (px)");
  flag("--write-pairs", "write_pairs", "Write pairs.csv per image (true | false)");

  // skymerge
  auto* sky = app.add_subcommand("skymerge", "Merge a bracketed fisheye stack into an equirectangular sky dome");
  SkyMergeConfig sm;
  std::vector<double> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};
  sky->add_option("--stack", sm.stack_manifest, "CSV with columns frame, exposure_seconds")->required();
  sky->add_option("--output,-o", sm.output, "Output dome EXR")->required();
  sky->add_option("--focal", sm.calibration.focal, "Fisheye focal length (px per radian)")->required();
  sky->add_option("--cx", sm.calibration.cx, "Fisheye center x (px)")->required();
  sky->add_option("--cy", sm.calibration.cy, "Fisheye center y (px)")->required();
  sky->add_option("--rotation", rotation, "World-to-camera rotation, 9 row-major values")->expected(9);
  sky->add_option("--width", sm.width, "Dome width (px)");
  sky->add_option("--height", sm.height, "Dome height (px)");
  sky->add_option("--saturation", sm.saturation, "Saturation level of normalised counts");
  sky->add_option("--floor", sm.floor, "Noise floor of normalised counts");

  // changedetect
  auto* chg = app.add_subcommand("changedetect", "Albedo-difference change masks against a reference frame");
  ChangeDetectConfig cd;
  chg->add_option("--reference", cd.reference, "Reference EXR")->required();
  chg->add_option("--sources", cd.sources, "Directory of source EXRs")->required();
  chg->add_option("--output,-o", cd.output, "Output directory")->required();
  chg->add_option("--threshold", cd.change.threshold, "Gray-level threshold (8-bit)");
  chg->add_option("--min-blob-area", cd.change.min_blob_area, "Smallest kept blob (px)");
  chg->add_option("--opening-radius", cd.change.opening_radius, "Disk radius of the opening (px)");

  // metrics
  auto* met = app.add_subcommand("metrics", "PSNR/SSIM of predictions against ground truth");
  MetricsConfig mc;
  bool linear = false;
  met->add_option("--pred", mc.predictions, "Prediction directory")->required();
  met->add_option("--gt", mc.ground_truth, "Ground-truth directory")->required();
  met->add_option("--output,-o", mc.output, "Output CSV")->required();
  met->add_flag("--linear", linear, "Compare linear values with peak 1 instead of display space");

  // synth
  auto* syn = app.add_subcommand("synth", "Render a synthetic ground-truth fixture");
  SynthConfig sc;
  std::string scene_path;
  syn->add_option("--scene", scene_path, "key = value scene file (defaults if omitted)");
  syn->add_option("--output,-o", sc.output, "Output directory")->required();
  syn->add_option("--sky-samples", sc.sky_samples, "Hemisphere samples per pixel");
  syn->add_option("--seed", sc.seed, "Base random seed");
  syn->add_option("--workers,-j", sc.workers, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (dec->parsed()) {
      RunConfig cfg = dec_config.empty() ? RunConfig{} : RunConfig::load(dec_config);
      for (const auto& [key, opt] : dec_opts)
        if (opt->count() > 0) cfg.set(key, dec_values[key]);
      return run_decompose(cfg);
    }
    if (sky->parsed()) {
      sm.calibration.rotation = parse_rotation(rotation);
      run_skymerge(sm);
      return 0;
    }
    if (chg->parsed()) return run_changedetect(cd);
    if (met->parsed()) {
      mc.space = linear ? MetricSpace::Linear : MetricSpace::Display;
      return run_metrics(mc);
    }
    if (syn->parsed()) {
      if (!scene_path.empty()) sc.scene = scene_path;
      run_synth(sc);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
