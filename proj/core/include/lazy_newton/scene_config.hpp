#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "lazy_newton/errors.hpp"
#include "lazy_newton/evaluator.hpp"
#include "lazy_newton/frames.hpp"

namespace lazy_newton {

/// Config parse or validation failure; the message names the JSON location.
class ConfigError : public PreconditionError {
  public:
    using PreconditionError::PreconditionError;
};

struct SceneConfig {
    std::vector<Source> sources;
    AmbientField ambient = ZeroField{};
    KernelParams kernel;

    friend bool operator==(const SceneConfig&, const SceneConfig&) = default;
};

struct GridAxis {
    Vec3 direction;
    double extent = 1.0;
    int count = 1;
    friend bool operator==(const GridAxis&, const GridAxis&) = default;
};

/// Points origin + d̂_k·extent_k·i_k/(count_k − 1) for every index tuple,
/// evaluated at each listed time.
struct GridSpec {
    Vec3 origin;
    std::vector<GridAxis> axes;
    std::vector<double> times;
    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

SceneConfig parse_scene_config(std::string_view text);
SceneConfig scene_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SceneConfig& config);

GridSpec parse_grid_spec(std::string_view text);
GridSpec grid_spec_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const GridSpec& grid);

/// Grid points in axis-lexicographic order (first axis varies slowest).
std::vector<Vec3> grid_points(const GridSpec& grid);

}  // namespace lazy_newton
