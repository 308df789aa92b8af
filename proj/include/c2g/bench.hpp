#pragma once

#include "c2g/c2gssim.hpp"
#include "c2g/decolor.hpp"
#include "c2g/image.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace c2g {

struct DatasetImage {
  std::string id;  // file stem
  RgbImage image;
};

struct Dataset {
  std::string name;
  std::vector<DatasetImage> images;  // sorted by file name
  std::vector<std::string> warnings;
};

/// Loads every decodable image file in `dir` (non-recursive). Undecodable
/// files and duplicate stems become warnings. Throws IoError when `dir` is not
/// a readable directory and DataError when it yields no image.
Dataset load_dataset(const std::filesystem::path& dir);

enum class MethodKind { ntsc, cie_y, svd_fixed, svd_adaptive, external };

struct MethodId {
  MethodKind kind;
  std::string name;               // label in reports
  std::optional<double> c;        // svd-fixed weight; unset means DecolorConfig::fixed_c
  std::filesystem::path source;   // external: directory of precomputed grays

  bool operator==(const MethodId&) const = default;
};

using ExternalSources = std::map<std::string, std::filesystem::path>;

/// Accepts ntsc, cie-y, svd-fixed, svd-fixed:<c>, svd-adaptive and
/// external:<label> (label must be in `externals`). Throws std::invalid_argument.
MethodId parse_method(std::string_view token, const ExternalSources& externals = {});

/// Comma-separated list of method tokens. External sources that the list does
/// not mention are appended. Throws std::invalid_argument on duplicates.
std::vector<MethodId> parse_methods(std::string_view list, const ExternalSources& externals = {});

struct ReportEntry {
  std::string image_id;
  std::string method;
  double score;
  std::optional<double> chosen_c;

  bool operator==(const ReportEntry&) const = default;
};

struct QualityReport {
  std::string dataset_name;
  MetricConfig metric;
  std::vector<ReportEntry> entries;  // sorted by (image_id, method)
  std::vector<std::string> warnings;

  bool operator==(const QualityReport&) const = default;
};

struct SummaryStats {
  std::map<std::string, int> success_rate;
  std::map<std::string, double> average_score;
  int n_images = 0;
  double epsilon = 0.0;

  bool operator==(const SummaryStats&) const = default;
};

struct EvalOptions {
  int jobs = 1;
  /// When set, every computed gray is written to <dir>/<method>/<image_id>.png.
  std::optional<std::filesystem::path> gray_output_dir;
};

/// Scores every (image, method) pair against the color original.
///
/// Missing or mis-sized external grays are reported in `warnings` and have no
/// entry. The result does not depend on `opts.jobs`.
QualityReport evaluate(const Dataset& dataset, const std::vector<MethodId>& methods,
                       const DecolorConfig& cfg, const EvalOptions& opts = {});

/// Per image, every method within `epsilon` of the best score earns one credit.
/// Every method in the report has a key, possibly with count 0.
std::map<std::string, int> success_rate(const QualityReport& report, double epsilon);

std::map<std::string, double> average_score(const QualityReport& report);

/// success_rate + average_score + image count. Throws DataError on an empty report.
SummaryStats summarize(const QualityReport& report, double epsilon);

enum class ReportFormat { json, csv };

/// JSON document: dataset, metric_config, entries, success_rate,
/// average_score, n_images, epsilon, warnings. Scores keep full precision.
std::string report_json(const QualityReport& report, const SummaryStats& stats);

/// CSV: header image_id,method,score,chosen_c then one row per entry, 6 decimals.
std::string report_csv(const QualityReport& report);

/// Inverse of report_json for the report part. Throws DataError on malformed input.
QualityReport parse_report_json(std::string_view text);

/// Writes report_json or report_csv. Throws DataError on an empty report and
/// IoError (naming the path) when the file cannot be written.
void export_report(const QualityReport& report, const SummaryStats& stats, ReportFormat format,
                   const std::filesystem::path& path);

/// CSV with header method,success_rate,average_score; one row per method.
std::string plot_data_csv(const SummaryStats& stats);
void emit_plot_data(const SummaryStats& stats, const std::filesystem::path& path);

}  // namespace c2g
