#include "c2g/bench.hpp"

#include "c2g/colorspace.hpp"
#include "c2g/image_io.hpp"
#include "c2g/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

namespace c2g {

namespace fs = std::filesystem;
using nlohmann::json;

Dataset load_dataset(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("dataset directory not found: " + dir.string());

  std::vector<fs::path> files;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && has_image_extension(it->path())) files.push_back(it->path());
  }
  if (ec) throw IoError("cannot list dataset directory " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });

  const fs::path normal = dir.lexically_normal();
  Dataset ds{normal.has_filename() ? normal.filename().string() : normal.parent_path().filename().string(), {}, {}};
  std::set<std::string> seen;
  for (const auto& file : files) {
    const std::string id = file.stem().string();
    if (seen.count(id)) {
      ds.warnings.push_back("duplicate image id '" + id + "', skipped " + file.filename().string());
      continue;
    }
    try {
      ds.images.push_back({id, read_rgb(file)});
      seen.insert(id);
    } catch (const IoError& e) {
      ds.warnings.push_back(std::string("skipped unreadable file: ") + e.what());
    }
  }
  if (ds.images.empty()) throw DataError("no readable images in " + dir.string());
  return ds;
}

MethodId parse_method(std::string_view token, const ExternalSources& externals) {
  const std::string t(token);
  if (t == "ntsc") return {MethodKind::ntsc, t, std::nullopt, {}};
  if (t == "cie-y") return {MethodKind::cie_y, t, std::nullopt, {}};
  if (t == "svd-adaptive") return {MethodKind::svd_adaptive, t, std::nullopt, {}};
  if (t == "svd-fixed") return {MethodKind::svd_fixed, t, std::nullopt, {}};
  if (t.starts_with("svd-fixed:")) {
    const std::string value = t.substr(10);
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (value.empty() || used != value.size() || !(c > 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("method '" + t + "': weight must be a positive number");
    }
    return {MethodKind::svd_fixed, t, c, {}};
  }
  if (t.starts_with("external:")) {
    const std::string label = t.substr(9);
    const auto it = externals.find(label);
    if (it == externals.end()) {
      throw std::invalid_argument("method '" + t + "': no --external source named '" + label + "'");
    }
    return {MethodKind::external, t, std::nullopt, it->second};
  }
  throw std::invalid_argument("unknown method '" + t + "'");
}

std::vector<MethodId> parse_methods(std::string_view list, const ExternalSources& externals) {
  for (const auto& [label, dir] : externals) {
    if (label.empty() || label.find_first_of(",\"\n") != std::string::npos) {
      throw std::invalid_argument("invalid external label '" + label + "'");
    }
  }
  std::vector<MethodId> methods;
  std::set<std::string> names;
  const auto add = [&](MethodId m) {
    if (!names.insert(m.name).second) throw std::invalid_argument("method '" + m.name + "' listed twice");
    methods.push_back(std::move(m));
  };
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto token = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (!token.empty()) add(parse_method(token, externals));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (const auto& [label, dir] : externals) {
    if (!names.count("external:" + label)) add(parse_method("external:" + label, externals));
  }
  if (methods.empty()) throw std::invalid_argument("no methods given");
  return methods;
}

namespace {

struct ImageOutcome {
  std::vector<ReportEntry> entries;
  std::vector<std::string> warnings;
};

std::optional<fs::path> find_external(const fs::path& dir, const std::string& id) {
  std::error_code ec;
  std::vector<fs::path> matches;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && it->path().stem() == id && has_image_extension(it->path())) {
      matches.push_back(it->path());
    }
  }
  if (matches.empty()) return std::nullopt;
  return *std::min_element(matches.begin(), matches.end());
}

ImageOutcome evaluate_image(const DatasetImage& item, const std::vector<MethodId>& methods,
                            const DecolorConfig& cfg, const EvalOptions& opts) {
  ImageOutcome out;
  const LabImage lab = srgb_to_lab(item.image);
  const ReferenceContext reference(lab, cfg.metric);
  std::optional<ChromaDecomposition> chroma;
  const auto chroma_of = [&]() -> const ChromaDecomposition& {
    if (!chroma) chroma.emplace(lab, cfg.rank_policy);
    return *chroma;
  };
  const auto finish = [&](const GrayImage& g) { return cfg.quantize ? quantize_8bit(g) : g; };

  for (const auto& m : methods) {
    std::optional<GrayImage> gray;
    std::optional<double> chosen_c;
    double score = 0.0;
    switch (m.kind) {
      case MethodKind::ntsc:
        gray = finish(ntsc_gray(item.image));
        break;
      case MethodKind::cie_y:
        gray = finish(cie_y_gray(item.image));
        break;
      case MethodKind::svd_fixed:
        gray = finish(chroma_of().render(m.c.value_or(cfg.fixed_c)));
        break;
      case MethodKind::svd_adaptive: {
        DecolorConfig sweep = cfg;
        sweep.jobs = 1;
        DecolorResult r = decolor_adaptive(chroma_of(), reference, sweep);
        chosen_c = r.chosen_c;
        score = r.score;
        gray = std::move(r.gray);
        break;
      }
      case MethodKind::external: {
        const auto file = find_external(m.source, item.id);
        if (!file) {
          out.warnings.push_back(m.name + ": no gray image for '" + item.id + "' in " + m.source.string());
          continue;
        }
        try {
          gray = read_gray(*file);
        } catch (const IoError& e) {
          out.warnings.push_back(m.name + ": " + e.what());
          continue;
        }
        if (gray->height() != item.image.height() || gray->width() != item.image.width()) {
          out.warnings.push_back(m.name + ": " + file->string() + " is " + std::to_string(gray->height()) + "x" +
                                 std::to_string(gray->width()) + ", expected " +
                                 std::to_string(item.image.height()) + "x" + std::to_string(item.image.width()));
          continue;
        }
        break;
      }
    }
    if (m.kind != MethodKind::svd_adaptive) score = reference.score(*gray);
    if (!std::isfinite(score)) throw DataError(m.name + ": non-finite score on '" + item.id + "'");
    out.entries.push_back({item.id, m.name, score, chosen_c});

    if (opts.gray_output_dir && m.kind != MethodKind::external) {
      const fs::path dir = *opts.gray_output_dir / m.name;
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
      write_gray(*gray, dir / (item.id + ".png"));
    }
  }
  return out;
}

}  // namespace

QualityReport evaluate(const Dataset& dataset, const std::vector<MethodId>& methods, const DecolorConfig& cfg,
                       const EvalOptions& opts) {
  if (methods.empty()) throw std::invalid_argument("evaluate: no methods");
  if (opts.jobs < 1) throw std::invalid_argument("evaluate: jobs must be >= 1");
  cfg.validate();
  std::set<std::string> names;
  for (const auto& m : methods) {
    if (!names.insert(m.name).second) throw std::invalid_argument("evaluate: duplicate method '" + m.name + "'");
  }

  std::vector<ImageOutcome> outcomes(dataset.images.size());
  parallel_for(dataset.images.size(), opts.jobs, [&](std::size_t i) {
    outcomes[i] = evaluate_image(dataset.images[i], methods, cfg, opts);
  });

  QualityReport report{dataset.name, cfg.metric, {}, dataset.warnings};
  for (auto& o : outcomes) {
    report.entries.insert(report.entries.end(), o.entries.begin(), o.entries.end());
    report.warnings.insert(report.warnings.end(), o.warnings.begin(), o.warnings.end());
  }
  std::sort(report.entries.begin(), report.entries.end(), [](const ReportEntry& a, const ReportEntry& b) {
    return std::tie(a.image_id, a.method) < std::tie(b.image_id, b.method);
  });
  return report;
}

std::map<std::string, int> success_rate(const QualityReport& report, double epsilon) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("success_rate: epsilon must be >= 0");
  std::map<std::string, int> counts;
  std::map<std::string, double> best;
  for (const auto& e : report.entries) {
    counts.emplace(e.method, 0);
    auto [it, fresh] = best.emplace(e.image_id, e.score);
    if (!fresh) it->second = std::max(it->second, e.score);
  }
  for (const auto& e : report.entries) {
    if (e.score >= best.at(e.image_id) - epsilon) ++counts[e.method];
  }
  return counts;
}

std::map<std::string, double> average_score(const QualityReport& report) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& e : report.entries) {
    auto& [sum, n] = acc[e.method];
    sum += e.score;
    ++n;
  }
  std::map<std::string, double> out;
  for (const auto& [method, sn] : acc) out[method] = sn.first / sn.second;
  return out;
}

SummaryStats summarize(const QualityReport& report, double epsilon) {
  if (report.entries.empty()) throw DataError("report has no entries");
  std::set<std::string> images;
  for (const auto& e : report.entries) images.insert(e.image_id);
  return {success_rate(report, epsilon), average_score(report), static_cast<int>(images.size()), epsilon};
}

namespace {

json metric_to_json(const MetricConfig& m) {
  return {{"window_size", m.window_size}, {"window_sigma", m.window_sigma}, {"c1", m.c1}, {"c2", m.c2},
          {"c3", m.c3}, {"alpha", m.alpha}, {"beta", m.beta}, {"gamma", m.gamma}, {"kind", to_string(m.kind)}};
}

MetricConfig metric_from_json(const json& j) {
  MetricConfig m;
  m.window_size = j.at("window_size").get<int>();
  m.window_sigma = j.at("window_sigma").get<double>();
  m.c1 = j.at("c1").get<double>();
  m.c2 = j.at("c2").get<double>();
  m.c3 = j.at("c3").get<double>();
  m.alpha = j.at("alpha").get<double>();
  m.beta = j.at("beta").get<double>();
  m.gamma = j.at("gamma").get<double>();
  m.kind = parse_image_kind(j.at("kind").get<std::string>());
  return m;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

std::string report_json(const QualityReport& report, const SummaryStats& stats) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"image_id", e.image_id},
                       {"method", e.method},
                       {"score", e.score},
                       {"chosen_c", e.chosen_c ? json(*e.chosen_c) : json(nullptr)}});
  }
  const json doc = {{"dataset", report.dataset_name},
                    {"metric_config", metric_to_json(report.metric)},
                    {"entries", entries},
                    {"success_rate", stats.success_rate},
                    {"average_score", stats.average_score},
                    {"n_images", stats.n_images},
                    {"epsilon", stats.epsilon},
                    {"warnings", report.warnings}};
  return doc.dump(2) + "\n";
}

std::string report_csv(const QualityReport& report) {
  std::string out = "image_id,method,score,chosen_c\n";
  for (const auto& e : report.entries) {
    out += e.image_id + "," + e.method + "," + fixed6(e.score) + "," + (e.chosen_c ? fixed6(*e.chosen_c) : "") + "\n";
  }
  return out;
}

QualityReport parse_report_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    QualityReport r;
    r.dataset_name = doc.at("dataset").get<std::string>();
    r.metric = metric_from_json(doc.at("metric_config"));
    for (const auto& e : doc.at("entries")) {
      std::optional<double> c;
      if (!e.at("chosen_c").is_null()) c = e.at("chosen_c").get<double>();
      r.entries.push_back({e.at("image_id").get<std::string>(), e.at("method").get<std::string>(),
                           e.at("score").get<double>(), c});
    }
    if (doc.contains("warnings")) r.warnings = doc.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

void export_report(const QualityReport& report, const SummaryStats& stats, ReportFormat format,
                   const fs::path& path) {
  if (report.entries.empty()) throw DataError("refusing to export an empty report");
  write_text(path, format == ReportFormat::json ? report_json(report, stats) : report_csv(report));
}

std::string plot_data_csv(const SummaryStats& stats) {
  std::string out = "method,success_rate,average_score\n";
  for (const auto& [method, avg] : stats.average_score) {
    const auto it = stats.success_rate.find(method);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", avg);
    out += method + "," + std::to_string(it == stats.success_rate.end() ? 0 : it->second) + "," + buf + "\n";
  }
  return out;
}

void emit_plot_data(const SummaryStats& stats, const fs::path& path) { write_text(path, plot_data_csv(stats)); }

}  // namespace c2g
