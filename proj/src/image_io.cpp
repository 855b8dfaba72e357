#include "slapknn/image_io.hpp"

#include "slapknn/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace slapknn {

namespace {

constexpr std::array<Rgb, 20> kPalette{{
  {31, 119, 180},  {255, 127, 14},  {44, 160, 44},   {214, 39, 40},   {148, 103, 189},
  {140, 86, 75},   {227, 119, 194}, {127, 127, 127}, {188, 189, 34},  {23, 190, 207},
  {174, 199, 232}, {255, 187, 120}, {152, 223, 138}, {255, 152, 150}, {197, 176, 213},
  {196, 156, 148}, {247, 182, 210}, {199, 199, 199}, {219, 219, 141}, {158, 218, 229},
}};

Rgb hsv(double h, double s, double v)
{
  const double c = v * s;
  const double hp = h * 6.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp) % 6) {
  case 0: r = c, g = x; break;
  case 1: r = x, g = c; break;
  case 2: g = c, b = x; break;
  case 3: g = x, b = c; break;
  case 4: r = x, b = c; break;
  default: r = c, b = x; break;
  }
  const double m = v - c;
  auto byte = [&](double u) { return static_cast<std::uint8_t>(std::lround(255.0 * (u + m))); };
  return {byte(r), byte(g), byte(b)};
}

} // namespace

Rgb palette_color(std::size_t cls)
{
  if (cls < kPalette.size()) return kPalette[cls];
  const double golden = 0.6180339887498949;
  const double h = std::fmod(static_cast<double>(cls - kPalette.size()) * golden, 1.0);
  return hsv(h, 0.65, 0.9);
}

void write_class_ppm(std::ostream& out, const RasterGrid& grid)
{
  out << "P6\n" << grid.width << ' ' << grid.height << "\n255\n";
  for (std::size_t cls : grid.classes) {
    const auto rgb = palette_color(cls);
    out.write(reinterpret_cast<const char*>(rgb.data()), 3);
  }
}

void write_intensity_pgm(std::ostream& out, std::span<const double> intensity, std::size_t width,
                         std::size_t height)
{
  if (intensity.size() != width * height) throw Error("intensity size does not match raster");
  out << "P5\n" << width << ' ' << height << "\n255\n";
  for (double v : intensity) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    const auto byte = static_cast<char>(static_cast<std::uint8_t>(std::lround(255.0 * clamped)));
    out.put(byte);
  }
}

void write_class_csv(std::ostream& out, const RasterGrid& grid)
{
  for (std::size_t row = 0; row < grid.height; ++row) {
    for (std::size_t col = 0; col < grid.width; ++col) {
      if (col) out << ',';
      out << grid.at(row, col);
    }
    out << '\n';
  }
}

void write_values_csv(std::ostream& out, std::span<const double> values, std::size_t width,
                      std::size_t height)
{
  if (values.size() != width * height) throw Error("value count does not match raster");
  for (std::size_t row = 0; row < height; ++row) {
    for (std::size_t col = 0; col < width; ++col) {
      if (col) out << ',';
      out << format_number(values[row * width + col]);
    }
    out << '\n';
  }
}

std::string region_report_json(const RegionReport& report, int indent)
{
  nlohmann::ordered_json j;
  j["distinct_classes"] = report.distinct_classes;
  auto comps = nlohmann::ordered_json::object();
  for (const auto& [cls, n] : report.components_per_class) comps[std::to_string(cls)] = n;
  auto areas = nlohmann::ordered_json::object();
  for (const auto& [cls, n] : report.class_areas) areas[std::to_string(cls)] = n;
  j["components_per_class"] = std::move(comps);
  j["class_areas"] = std::move(areas);
  return j.dump(indent) + "\n";
}

} // namespace slapknn
