#pragma once

#include "slapknn/landscape.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

namespace slapknn {

using Rgb = std::array<std::uint8_t, 3>;

/// Fixed class palette. Classes 0..19 use the table in image_io.cpp; higher indices
/// get golden-ratio hue steps at fixed saturation and value.
Rgb palette_color(std::size_t cls);

/// Binary PPM (P6), one palette color per cell.
void write_class_ppm(std::ostream& out, const RasterGrid& grid);
/// Binary PGM (P5), 8-bit, value = round(255 * intensity).
void write_intensity_pgm(std::ostream& out, std::span<const double> intensity, std::size_t width,
                         std::size_t height);
/// One line per raster row, comma separated class indices.
void write_class_csv(std::ostream& out, const RasterGrid& grid);
/// One line per raster row, comma separated shortest round-trip decimals.
void write_values_csv(std::ostream& out, std::span<const double> values, std::size_t width,
                      std::size_t height);

std::string region_report_json(const RegionReport& report, int indent = 2);

/// Opens `path` for binary writing, runs `fn`, and surfaces I/O failures as Error.
template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn);

} // namespace slapknn

#include <fstream>

namespace slapknn {

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

} // namespace slapknn
