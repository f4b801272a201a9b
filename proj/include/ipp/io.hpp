#pragma once

#include <cstdint>
#include <string>

#include "ipp/gaussian_field.hpp"
#include "ipp/geometry.hpp"
#include "ipp/thinning.hpp"

namespace ipp {

// Point patterns as CSV with an "x,y" or "x,y,z" header row. The window is
// not part of the file; callers supply it when reading.
std::string pattern_to_csv(const PointPattern& p);
PointPattern pattern_from_csv(const std::string& text, const Window& window);
void write_pattern_csv(const std::string& path, const PointPattern& p);
PointPattern read_pattern_csv(const std::string& path, const Window& window);

// Grid rasters: a "nx,ny" or "nx,ny,nz" header row followed by one value per
// line in flat order (x index fastest).
std::string grid_to_csv(const GridField& g);
GridField grid_from_csv(const std::string& text, const Window& window);
void write_grid_csv(const std::string& path, const GridField& g);
GridField read_grid_csv(const std::string& path, const Window& window);

// 8-bit grayscale rendering of a 2-d raster, values scaled to [0, 255].
void write_grid_pgm(const std::string& path, const GridField& g);

// Full model description (dimension, window, base process, selection field,
// seed) as JSON.
struct ModelConfig {
  InterruptedModel model;
  Window window;
  std::uint64_t seed = 0;
};

std::string model_to_json(const ModelConfig& cfg);
ModelConfig model_from_json(const std::string& text);
ModelConfig read_model_json(const std::string& path);
void write_model_json(const std::string& path, const ModelConfig& cfg);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ipp
