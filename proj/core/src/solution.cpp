#include "coevrp/solution.hpp"

namespace coevrp {

MultiVehicleSolution to_multi(const Instance& instance, const Solution& solution) {
  MultiVehicleSolution multi;
  for (int k = 0; k < 2; ++k) {
    MultiRoute r;
    r.company = k;
    r.vehicle = 0;
    r.visits = solution.routes[static_cast<size_t>(k)].visits;
    multi.routes.push_back(std::move(r));
  }
  if (solution.meet_point) {
    multi.pairings.push_back({0, 0, *solution.meet_point});
    for (int k = 0; k < 2; ++k) {
      for (const Visit& v : solution.routes[static_cast<size_t>(k)].visits) {
        if (instance.is_customer(v.node) && instance.node(v.node).company != k)
          multi.transfers.push_back({v.node, *solution.meet_point});
      }
    }
  }
  return multi;
}

}  // namespace coevrp
