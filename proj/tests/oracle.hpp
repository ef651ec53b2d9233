#pragma once

#include <cstdint>
#include <optional>

#include "coevrp/instance.hpp"

namespace coevrp::oracle {

/// Exhaustive reference optimum: every bipartition of the shared customers,
/// every visit permutation per vehicle, every meet point; each leaf pair
/// completed by the charging LP with the synchronization band (and threshold
/// caps when enabled). Structured independently of the branch-and-bound
/// solver; meant for instances of at most ~9 customers.
std::optional<double> enumerate_optimum(const Instance& instance);

/// Single-company reference: all permutations of the company's customers.
std::optional<double> enumerate_noncollab_optimum(const Instance& instance,
                                                  int company);

/// Random small instance for the oracle suites: n customers (4..9) around two
/// corner depots and two central meet points, Euclidean distances, at most 5
/// shared customers, batteries tight enough that charging binds on longer
/// routes. Deterministic in the seed.
Instance small_random_instance(int n_customers, std::uint64_t seed);

}  // namespace coevrp::oracle
