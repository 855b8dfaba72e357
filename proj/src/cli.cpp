#include "slapknn/cli.hpp"

#include "slapknn/classifier.hpp"
#include "slapknn/constructions.hpp"
#include "slapknn/format.hpp"
#include "slapknn/harness.hpp"
#include "slapknn/image_io.hpp"
#include "slapknn/landscape.hpp"
#include "slapknn/serialize.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace slapknn {

namespace fs = std::filesystem;

namespace {

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const char* what)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(std::string("bad number '") + item + "' in " + what);
    }
  }
  if (expected && out.size() != expected)
    throw Error(std::string(what) + " needs " + std::to_string(expected) + " comma-separated numbers");
  return out;
}

std::size_t as_count(double value, const char* what)
{
  if (!(value >= 0.0) || value != std::floor(value) || value > 1e9)
    throw Error(std::string(what) + " must be a non-negative integer");
  return static_cast<std::size_t>(value);
}

std::pair<std::size_t, std::size_t> parse_resolution(const std::string& text)
{
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) {
    const auto n = as_count(parse_numbers(text, 1, "--res")[0], "--res");
    return {n, n};
  }
  return {as_count(parse_numbers(text.substr(0, x), 1, "--res")[0], "--res width"),
          as_count(parse_numbers(text.substr(x + 1), 1, "--res")[0], "--res height")};
}

std::vector<std::size_t> parse_k_values(const std::string& text)
{
  std::vector<std::size_t> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const auto lo = as_count(parse_numbers(text.substr(0, dots), 1, "--k")[0], "--k");
    const auto hi = as_count(parse_numbers(text.substr(dots + 2), 1, "--k")[0], "--k");
    if (lo > hi) throw Error("--k range is empty");
    for (std::size_t k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  for (double v : parse_numbers(text, 0, "--k")) out.push_back(as_count(v, "--k"));
  if (out.empty()) throw Error("--k needs at least one value");
  return out;
}

Bounds parse_bounds(const std::string& text)
{
  const auto v = parse_numbers(text, 4, "--bounds");
  Bounds b{v[0], v[1], v[2], v[3]};
  if (!b.well_ordered()) throw Error("--bounds must satisfy xmin < xmax and ymin < ymax");
  return b;
}

fs::path sibling(const fs::path& base, const std::string& suffix)
{
  fs::path out = base;
  out.replace_extension();
  return fs::path(out.string() + suffix);
}

struct ConstructionFlags
{
  std::optional<double> n, m, spacing, radius, c;
  std::uint64_t seed = 0;

  void attach(CLI::App* app)
  {
    app->add_option("--n", n, "Class or circle count");
    app->add_option("--m", m, "Prototype count parameter M");
    app->add_option("--spacing", spacing, "Distance between the two prototypes");
    app->add_option("--radius", radius, "Circle / circumradius of the layout");
    app->add_option("--c", c, "Circle spacing");
    app->add_option("--seed", seed, "Fitter restart seed");
  }

  ConstructionArgs args() const
  {
    ConstructionArgs a;
    if (n) a.n = as_count(*n, "--n");
    if (m) a.m = as_count(*m, "--m");
    a.spacing = spacing;
    a.radius = radius;
    a.c = c;
    a.seed = seed;
    return a;
  }
};

void print_checks(std::ostream& out, const Report& report)
{
  for (const auto& c : report.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": observed " << format_number(c.observed)
        << ", expected " << format_number(c.expected);
    if (c.tol > 0.0) out << " (tol " << format_number(c.tol) << ")";
    out << '\n';
  }
  out << (report.pass() ? "OVERALL PASS" : "OVERALL FAIL") << " [" << report.construction << "]\n";
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Soft-label prototype kNN: constructions, landscapes and verification", "slapknn"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SLAPKNN_VERSION);

  // construct
  std::string construct_name;
  std::string construct_out;
  ConstructionFlags construct_flags;
  auto* construct = app.add_subcommand("construct", "Emit a prototype set as JSON");
  construct->add_option("name", construct_name, "Construction name")->required();
  construct_flags.attach(construct);
  construct->add_option("-o,--output", construct_out, "Output JSON path (stdout if omitted)");

  // classify
  std::string set_path;
  double k_value = 0;
  std::string query;
  auto* classify_cmd = app.add_subcommand("classify", "Classify one point");
  classify_cmd->add_option("-s,--set", set_path, "Prototype set JSON")->required();
  classify_cmd->add_option("-k", k_value, "Neighbours")->required();
  classify_cmd->add_option("-x", query, "Query point \"x,y\"")->required();

  // raster
  std::string raster_out, bounds_text, res_text = "512", risk_text;
  double percentile = 99.0, threads = 0;
  bool write_csv = false, write_regions = false;
  auto* raster = app.add_subcommand("raster", "Rasterize a decision landscape");
  raster->add_option("-s,--set", set_path, "Prototype set JSON")->required();
  raster->add_option("-k", k_value, "Neighbours")->required();
  raster->add_option("--bounds", bounds_text, "xmin,xmax,ymin,ymax (default: padded bounding box)");
  raster->add_option("--res", res_text, "N or WxH (default 512)");
  raster->add_option("--risk", risk_text, "Also write a risk map: clip or log");
  raster->add_option("--percentile", percentile, "Clip percentile (default 99)");
  raster->add_flag("--csv", write_csv, "Also write CSV class (and risk) maps");
  raster->add_flag("--regions", write_regions, "Also write the region report JSON");
  raster->add_option("--threads", threads, "Row partitions (0 = hardware concurrency)");
  raster->add_option("-o,--output", raster_out, "Output PPM path")->required();

  // verify
  std::string verify_target, report_path;
  ConstructionFlags verify_flags;
  double verify_k = 0, trials = 100, samples = static_cast<double>(kCircleSamples);
  auto* verify = app.add_subcommand("verify", "Verify a construction or prototype set");
  verify->add_option("target", verify_target, "Construction name or set.json")->required();
  verify_flags.attach(verify);
  verify->add_option("-k", verify_k, "Neighbours (prototype sets only)");
  verify->add_option("--trials", trials, "Invariance trials (default 100)");
  verify->add_option("--samples", samples, "Samples per circle (default 10000)");
  verify->add_option("--threads", threads, "Row partitions for rasters");
  verify->add_option("--report", report_path, "Write the JSON report here");

  // sweep-k
  std::string k_list, sweep_dir;
  auto* sweep = app.add_subcommand("sweep-k", "Rasterize a set for several k");
  sweep->add_option("-s,--set", set_path, "Prototype set JSON")->required();
  sweep->add_option("--k", k_list, "k values: \"1..5\" or \"1,2,4\"")->required();
  sweep->add_option("--bounds", bounds_text, "xmin,xmax,ymin,ymax");
  sweep->add_option("--res", res_text, "N or WxH (default 512)");
  sweep->add_option("--threads", threads, "Row partitions");
  sweep->add_option("-o,--output", sweep_dir, "Output directory")->required();

  // circles
  double circle_n = 6, circle_c = 1.0;
  std::string mode = "hard", circles_out;
  std::uint64_t circle_seed = 0;
  auto* circles = app.add_subcommand("circles", "Concentric-circle case study");
  circles->add_option("--n", circle_n, "Number of circles (default 6)");
  circles->add_option("--c", circle_c, "Radius step (default 1)");
  circles->add_option("--mode", mode, "hard or soft")->check(CLI::IsMember({"hard", "soft"}));
  circles->add_option("--samples", samples, "Samples per circle (default 10000)");
  circles->add_option("--seed", circle_seed, "Fitter seed");
  circles->add_option("-o,--output", circles_out, "Write the prototype set JSON here");
  circles->add_option("--report", report_path, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code != 0) err << app.help();
    return code;
  }

  {
    std::string echo = std::string("# slapknn ") + SLAPKNN_VERSION + " |";
    for (int i = 1; i < argc; ++i) echo += std::string(" ") + argv[i];
    const std::uint64_t seed = construct->parsed()  ? construct_flags.seed
                               : verify->parsed()   ? verify_flags.seed
                               : circles->parsed()  ? circle_seed
                                                    : 0;
    err << echo << " | seed=" << seed << '\n';
  }

  try {
    if (construct->parsed()) {
      const auto c = make_construction(construct_name, construct_flags.args());
      if (construct_out.empty()) out << to_json_string(c.set);
      else save_prototype_set(c.set, construct_out);
      return 0;
    }

    if (classify_cmd->parsed()) {
      const auto set = load_prototype_set(set_path);
      const auto x = parse_numbers(query, set.dim, "-x");
      const auto result = classify(set, as_count(k_value, "-k"), x);
      out << "scores:";
      for (std::size_t i = 0; i < result.scores.size(); ++i)
        out << (i ? ", " : " ") << format_number(result.scores[i]);
      out << "\nclass: " << result.predicted << "\nconfidence: " << format_number(result.confidence)
          << "\nexact_hit: " << (result.exact_hit ? "true" : "false") << '\n';
      return 0;
    }

    if (raster->parsed()) {
      const auto set = load_prototype_set(set_path);
      const auto k = as_count(k_value, "-k");
      const Bounds bounds = bounds_text.empty() ? default_bounds(set) : parse_bounds(bounds_text);
      const auto [w, h] = parse_resolution(res_text);
      const auto grid = rasterize(set, k, bounds, w, h, as_count(threads, "--threads"));
      const fs::path base(raster_out);
      write_file(base, [&](std::ostream& s) { write_class_ppm(s, grid); });
      if (write_csv) write_file(sibling(base, ".classes.csv"), [&](std::ostream& s) { write_class_csv(s, grid); });
      if (!risk_text.empty()) {
        RiskOptions opts{risk_mode_from_string(risk_text), percentile};
        const auto risk = risk_render(grid, opts);
        write_file(sibling(base, ".risk.pgm"), [&](std::ostream& s) { write_intensity_pgm(s, risk, w, h); });
        if (write_csv)
          write_file(sibling(base, ".risk.csv"), [&](std::ostream& s) { write_values_csv(s, risk, w, h); });
      }
      const auto regions = region_report(grid);
      if (write_regions)
        write_file(sibling(base, ".regions.json"), [&](std::ostream& s) { s << region_report_json(regions); });
      out << "distinct classes: " << regions.distinct_classes << '\n';
      return 0;
    }

    if (verify->parsed()) {
      VerifyOptions opts;
      opts.invariance_trials = as_count(trials, "--trials");
      opts.circle_samples = as_count(samples, "--samples");
      opts.partitions = as_count(threads, "--threads");
      opts.seed = verify_flags.seed;
      Construction c;
      const bool is_file = verify_target.ends_with(".json") || fs::is_regular_file(verify_target);
      if (is_file) {
        c.set = load_prototype_set(verify_target);
        if (verify_k <= 0) throw Error("verify on a prototype set needs -k");
        c.required_k = as_count(verify_k, "-k");
        c.claimed_classes = c.set.num_classes;
        c.kind = verify_target;
      } else {
        c = make_construction(verify_target, verify_flags.args());
      }
      const auto report = verify_construction(c, opts);
      print_checks(out, report);
      if (!report_path.empty()) write_file(report_path, [&](std::ostream& s) { s << report_json(report); });
      return report.pass() ? 0 : 1;
    }

    if (sweep->parsed()) {
      const auto set = load_prototype_set(set_path);
      const Bounds bounds = bounds_text.empty() ? default_bounds(set) : parse_bounds(bounds_text);
      const auto [w, h] = parse_resolution(res_text);
      const auto ks = parse_k_values(k_list);
      fs::create_directories(sweep_dir);
      for (const auto& entry : k_sweep(set, ks, bounds, w, h, as_count(threads, "--threads"))) {
        const fs::path stem = fs::path(sweep_dir) / ("k" + std::to_string(entry.k));
        write_file(stem.string() + ".ppm", [&](std::ostream& s) { write_class_ppm(s, entry.grid); });
        write_file(stem.string() + ".regions.json",
                   [&](std::ostream& s) { s << region_report_json(entry.report); });
        out << "k=" << entry.k << " distinct=" << entry.report.distinct_classes
            << " max_components=" << entry.report.max_components() << '\n';
      }
      return 0;
    }

    if (circles->parsed()) {
      const auto n = as_count(circle_n, "--n");
      const auto c = mode == "hard" ? circle_hard_baseline(n, circle_c) : circle_soft(n, circle_c, circle_seed);
      if (mode == "hard") {
        for (std::size_t t = 1; t <= n; ++t) {
          std::size_t placed = 0;
          for (const auto& p : c.set.prototypes)
            if (p.label.values[t - 1] == 1.0) ++placed;
          out << "circle " << t << ": bound " << circle_hard_count(t) << ", placed " << placed << '\n';
        }
      } else if (c.fit_residual) {
        out << "fit residual: " << format_number(*c.fit_residual) << '\n';
      }
      out << "prototypes: " << c.set.size() << '\n';
      Report report;
      report.construction = c.kind;
      report.params = c.params;
      report.params.emplace_back("circle_samples", samples);
      report.checks = verify_circle_separation(c, as_count(samples, "--samples"));
      print_checks(out, report);
      if (!circles_out.empty()) save_prototype_set(c.set, circles_out);
      if (!report_path.empty()) write_file(report_path, [&](std::ostream& s) { s << report_json(report); });
      return report.pass() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  std::vector<const char*> argv{"slapknn"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace slapknn
