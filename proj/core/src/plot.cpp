#include "coevrp/plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace coevrp {

namespace {

void require_coords(const Instance& ins) {
  for (const Node& nd : ins.nodes)
    if (!nd.xy)
      throw std::invalid_argument(
          "plot: instance has no node coordinates; use the table/CSV reports "
          "instead");
}

std::string star_path(double cx, double cy, double r) {
  std::ostringstream out;
  for (int p = 0; p < 10; ++p) {
    const double ang = -M_PI / 2 + p * M_PI / 5;
    const double rad = p % 2 == 0 ? r : 0.42 * r;
    out << (p == 0 ? "M" : "L") << cx + rad * std::cos(ang) << ","
        << cy + rad * std::sin(ang);
  }
  out << "Z";
  return out.str();
}

}  // namespace

std::string solution_to_svg(const Instance& ins, const Solution& sol) {
  require_coords(ins);
  double min_x = 1e18, min_y = 1e18, max_x = -1e18, max_y = -1e18;
  for (const Node& nd : ins.nodes) {
    min_x = std::min(min_x, (*nd.xy)[0]);
    max_x = std::max(max_x, (*nd.xy)[0]);
    min_y = std::min(min_y, (*nd.xy)[1]);
    max_y = std::max(max_y, (*nd.xy)[1]);
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1.0});
  const double pad = 0.05 * span;
  const double scale = 800.0 / (span + 2 * pad);
  auto px = [&](double x) { return (x - min_x + pad) * scale; };
  auto py = [&](double y) { return 800.0 - (y - min_y + pad) * scale; };

  // first-slot threshold: midpoint of the customer horizon
  double horizon = 0.0;
  for (const Node& nd : ins.nodes)
    if (nd.kind == NodeKind::Customer && std::isfinite(nd.latest))
      horizon = std::max(horizon, nd.latest);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n";
  svg << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";

  const char* colors[2] = {"#c0392b", "#2980b9"};
  for (int k = 0; k < 2; ++k) {
    const Route& r = sol.routes[static_cast<size_t>(k)];
    if (r.visits.size() < 2) continue;
    svg << "<polyline fill=\"none\" stroke=\"" << colors[k]
        << "\" stroke-width=\"2\" points=\"";
    for (const Visit& v : r.visits) {
      const auto& xy = *ins.node(v.node).xy;
      svg << px(xy[0]) << "," << py(xy[1]) << " ";
    }
    svg << "\"/>\n";
  }
  for (const Node& nd : ins.nodes) {
    const auto& xy = *nd.xy;
    const double x = px(xy[0]);
    const double y = py(xy[1]);
    switch (nd.kind) {
      case NodeKind::Depot:
        svg << "<rect x=\"" << x - 8 << "\" y=\"" << y - 8
            << "\" width=\"16\" height=\"16\" fill=\""
            << colors[nd.company] << "\"/>\n";
        break;
      case NodeKind::MeetPoint:
        svg << "<path d=\"" << star_path(x, y, 11) << "\" fill=\"#f1c40f\" "
            << "stroke=\"#7f8c8d\"/>\n";
        break;
      case NodeKind::Customer: {
        const bool first_slot = nd.earliest < horizon / 2.0;
        svg << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"5\" stroke=\""
            << colors[nd.company] << "\" fill=\""
            << (first_slot ? colors[nd.company] : "white") << "\"/>\n";
        break;
      }
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string solution_to_geojson(const Instance& ins, const Solution& sol) {
  require_coords(ins);
  nlohmann::json features = nlohmann::json::array();
  for (int k = 0; k < 2; ++k) {
    const Route& r = sol.routes[static_cast<size_t>(k)];
    if (r.visits.size() < 2) continue;
    nlohmann::json coords = nlohmann::json::array();
    for (const Visit& v : r.visits) {
      const auto& xy = *ins.node(v.node).xy;
      coords.push_back({xy[0], xy[1]});
    }
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
                        {"properties", {{"kind", "route"}, {"company", k + 1}}}});
  }
  for (const Node& nd : ins.nodes) {
    const auto& xy = *nd.xy;
    std::string kind = nd.kind == NodeKind::Depot      ? "depot"
                       : nd.kind == NodeKind::Customer ? "customer"
                                                       : "meet_point";
    nlohmann::json props = {{"kind", kind}, {"label", nd.label}};
    if (nd.company >= 0) props["company"] = nd.company + 1;
    features.push_back(
        {{"type", "Feature"},
         {"geometry", {{"type", "Point"}, {"coordinates", {xy[0], xy[1]}}}},
         {"properties", props}});
  }
  nlohmann::json root = {{"type", "FeatureCollection"}, {"features", features}};
  return root.dump(2);
}

}  // namespace coevrp
