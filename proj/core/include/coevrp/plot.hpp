#pragma once

#include <string>

#include "coevrp/instance.hpp"
#include "coevrp/solution.hpp"

namespace coevrp {

/// Route map as a standalone SVG: polylines per vehicle, squares for depots,
/// stars for meet points, customer dots filled by time-window slot. Requires
/// node coordinates and throws with a hint otherwise.
std::string solution_to_svg(const Instance& instance, const Solution& solution);

/// GeoJSON FeatureCollection with one LineString per route plus node markers.
std::string solution_to_geojson(const Instance& instance, const Solution& solution);

}  // namespace coevrp
