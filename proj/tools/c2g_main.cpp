// c2g: color-to-gray conversion, scoring and benchmark evaluation.
//
//   c2g convert --input in.png --output out.png [--method svd-adaptive] ...
//   c2g score   --color in.png --gray out.png [--maps dir]
//   c2g eval    --dataset dir --methods ntsc,svd-adaptive --report r.json ...
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 data error.

#include "c2g/bench.hpp"
#include "c2g/c2gssim.hpp"
#include "c2g/colorspace.hpp"
#include "c2g/decolor.hpp"
#include "c2g/image_io.hpp"
#include "c2g/settings.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitData = 3;

struct CommonFlags {
  std::string config;
  std::string kind;
  std::string rank;
};

c2g::RunSettings load_settings(const CommonFlags& flags) {
  c2g::RunSettings s;
  s.decolor.quantize = true;  // scores describe the 8-bit files the tool writes
  if (!flags.config.empty()) c2g::apply_key_values(c2g::read_key_values(flags.config), s);
  if (!flags.kind.empty()) s.decolor.metric.set_kind(c2g::parse_image_kind(flags.kind));
  if (!flags.rank.empty()) s.decolor.rank_policy = c2g::RankPolicy::parse(flags.rank);
  return s;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw c2g::IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw c2g::IoError("write failed: " + path.string());
}

struct ConvertArgs {
  std::string input, output, method = "svd-adaptive", trace;
  std::optional<double> c;
};

int run_convert(const ConvertArgs& a, const CommonFlags& common) {
  const auto settings = load_settings(common);
  const auto& cfg = settings.decolor;
  cfg.validate();
  if (a.c && a.method != "svd-fixed") throw std::invalid_argument("--c only applies to --method svd-fixed");
  if (!a.trace.empty() && a.method != "svd-adaptive") {
    throw std::invalid_argument("--trace only applies to --method svd-adaptive");
  }

  const c2g::RgbImage img = c2g::read_rgb(a.input);
  const auto finish = [&](const c2g::GrayImage& g) { return cfg.quantize ? c2g::quantize_8bit(g) : g; };
  std::optional<c2g::GrayImage> gray;
  if (a.method == "ntsc") {
    gray = finish(c2g::ntsc_gray(img));
  } else if (a.method == "cie-y") {
    gray = finish(c2g::cie_y_gray(img));
  } else if (a.method == "svd-fixed") {
    const double c = a.c.value_or(cfg.fixed_c);
    if (!(c > 0.0)) throw std::invalid_argument("--c must be > 0");
    gray = finish(c2g::decolor_fixed(img, c, cfg.rank_policy));
  } else if (a.method == "svd-adaptive") {
    c2g::DecolorConfig sweep = cfg;
    sweep.jobs = settings.jobs;
    const auto result = c2g::decolor_adaptive(img, sweep);
    std::cout << "chosen_c " << fixed6(result.chosen_c) << "\nscore " << fixed6(result.score) << "\n";
    if (!a.trace.empty()) {
      std::string csv = "c,score\n";
      for (const auto& [c, score] : result.per_c_scores) csv += fixed6(c) + "," + fixed6(score) + "\n";
      write_file(a.trace, csv);
    }
    gray = result.gray;
  } else {
    throw std::invalid_argument("unknown --method '" + a.method + "'");
  }
  c2g::write_gray(*gray, a.output);
  return 0;
}

struct ScoreArgs {
  std::string color, gray, maps;
};

int run_score(const ScoreArgs& a, const CommonFlags& common) {
  const auto settings = load_settings(common);
  const auto& metric = settings.decolor.metric;
  const c2g::RgbImage ref = c2g::read_rgb(a.color);
  const c2g::GrayImage gray = c2g::read_gray(a.gray);
  if (gray.height() != ref.height() || gray.width() != ref.width()) {
    throw c2g::DataError("color image and gray image differ in size");
  }
  const c2g::ReferenceContext context(c2g::srgb_to_lab(ref), metric);
  const auto maps = c2g::similarity_maps(context.stats(gray), metric);
  std::cout << "score " << fixed6(c2g::mean_of(maps.q_map)) << "\n";

  if (!a.maps.empty()) {
    const fs::path dir(a.maps);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw c2g::IoError("cannot create " + dir.string() + ": " + ec.message());
    // S and q live in [-1,1]; they are shifted to [0,1] for display.
    const auto signed_to_unit = [](const c2g::Plane& p) { return c2g::GrayImage((p.array() + 1.0) / 2.0); };
    c2g::write_gray(c2g::GrayImage(maps.l_map), dir / "L_map.png");
    c2g::write_gray(c2g::GrayImage(maps.c_map), dir / "C_map.png");
    c2g::write_gray(signed_to_unit(maps.s_map), dir / "S_map.png");
    c2g::write_gray(signed_to_unit(maps.q_map), dir / "q_map.png");
  }
  return 0;
}

struct EvalArgs {
  std::string dataset, methods = "ntsc,cie-y,svd-fixed,svd-adaptive", report, csv, plot_data, save_gray;
  std::vector<std::string> externals;
  std::optional<double> epsilon;
  std::optional<int> jobs;
};

int run_eval(const EvalArgs& a, const CommonFlags& common) {
  auto settings = load_settings(common);
  if (a.epsilon) settings.epsilon = *a.epsilon;
  if (a.jobs) settings.jobs = *a.jobs;
  if (!(settings.epsilon >= 0.0)) throw std::invalid_argument("--epsilon must be >= 0");
  if (settings.jobs < 1) throw std::invalid_argument("--jobs must be >= 1");
  settings.decolor.validate();

  c2g::ExternalSources externals;
  for (const auto& spec : a.externals) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw std::invalid_argument("--external expects <label>=<dir>, got '" + spec + "'");
    }
    if (!externals.emplace(spec.substr(0, eq), spec.substr(eq + 1)).second) {
      throw std::invalid_argument("--external label '" + spec.substr(0, eq) + "' given twice");
    }
  }
  const auto methods = c2g::parse_methods(a.methods, externals);
  for (const auto& [label, dir] : externals) {
    if (!fs::is_directory(dir)) throw c2g::IoError("external directory not found: " + dir.string());
  }

  const c2g::Dataset dataset = c2g::load_dataset(a.dataset);
  c2g::EvalOptions opts;
  opts.jobs = settings.jobs;
  if (!a.save_gray.empty()) opts.gray_output_dir = fs::path(a.save_gray);
  const auto report = c2g::evaluate(dataset, methods, settings.decolor, opts);
  const auto stats = c2g::summarize(report, settings.epsilon);

  c2g::export_report(report, stats, c2g::ReportFormat::json, a.report);
  if (!a.csv.empty()) c2g::export_report(report, stats, c2g::ReportFormat::csv, a.csv);
  if (!a.plot_data.empty()) c2g::emit_plot_data(stats, a.plot_data);

  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << stats.n_images << " images, " << report.entries.size() << " entries\n";
  for (const auto& [method, avg] : stats.average_score) {
    std::cout << method << "  success_rate " << stats.success_rate.at(method) << "  average " << fixed6(avg) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Color-to-gray conversion with SVD chrominance and C2G-SSIM weight selection"};
  app.require_subcommand(1);
  CommonFlags common;
  app.add_option("--config", common.config, "key=value defaults file (flags override)");

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert", "Convert one color image to gray");
  convert->add_option("--input", conv.input, "Color image")->required();
  convert->add_option("--output", conv.output, "Gray PNG to write")->required();
  convert->add_option("--method", conv.method, "ntsc | cie-y | svd-fixed | svd-adaptive")
      ->check(CLI::IsMember({"ntsc", "cie-y", "svd-fixed", "svd-adaptive"}));
  convert->add_option("--c", conv.c, "Chrominance weight for svd-fixed");
  convert->add_option("--kind", common.kind, "photographic | synthetic");
  convert->add_option("--rank", common.rank, "full | k=<n> | energy=<f>");
  convert->add_option("--trace", conv.trace, "Write the per-c scores of svd-adaptive as CSV");

  ScoreArgs sc;
  auto* score = app.add_subcommand("score", "Score a gray image against its color original");
  score->add_option("--color", sc.color, "Color reference")->required();
  score->add_option("--gray", sc.gray, "Gray candidate")->required();
  score->add_option("--kind", common.kind, "photographic | synthetic");
  score->add_option("--maps", sc.maps, "Directory for L/C/S/q map PNGs");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate methods over a dataset directory");
  eval->add_option("--dataset", ev.dataset, "Directory of color images")->required();
  eval->add_option("--methods", ev.methods, "Comma list: ntsc,cie-y,svd-fixed[:c],svd-adaptive,external:<label>");
  eval->add_option("--external", ev.externals, "<label>=<dir> of precomputed gray images")->take_all();
  eval->add_option("--report", ev.report, "JSON report path")->required();
  eval->add_option("--csv", ev.csv, "CSV report path");
  eval->add_option("--plot-data", ev.plot_data, "Per-method summary CSV path");
  eval->add_option("--epsilon", ev.epsilon, "Success-rate tie tolerance");
  eval->add_option("--jobs", ev.jobs, "Worker threads");
  eval->add_option("--kind", common.kind, "photographic | synthetic");
  eval->add_option("--rank", common.rank, "full | k=<n> | energy=<f>");
  eval->add_option("--save-gray", ev.save_gray, "Directory for the computed gray images");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*convert) return run_convert(conv, common);
    if (*score) return run_score(sc, common);
    return run_eval(ev, common);
  } catch (const c2g::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const c2g::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
