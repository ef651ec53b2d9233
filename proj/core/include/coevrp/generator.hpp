#pragma once

#include <cstdint>

#include "coevrp/instance.hpp"

namespace coevrp {

enum class TwSlots { None, TwoSlot };

struct GeneratorOptions {
  int meet_points = 3;
  double price = 50.0;           // SEK per customer
  double battery_kwh = 200.0;
  double battery_min_kwh = 12.0;
  double charger_kw = 60.0;
  double service_min = 2.0;
  double meet_service_min = 10.0;
  double speed_kmh = 40.0;
};

/// Random planar instance: depots at opposite corners, meet points in the
/// central zone, customers uniform in a region_km x region_km square with
/// Euclidean distances. Half the customers belong to each company, all shared.
/// TwoSlot assigns every customer one of two disjoint delivery slots whose
/// length grows with the instance size. Deterministic for a given seed.
Instance generate_instance(int n_customers, double region_km, std::uint64_t seed,
                           TwSlots tw_slots, const GeneratorOptions& opt = {});

/// Slot length in minutes used by the two-slot profile (4 h up to 100
/// customers, 7 h up to 200, 14 h beyond).
double two_slot_length_min(int n_customers);

}  // namespace coevrp
