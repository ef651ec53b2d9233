#pragma once

#include "coevrp/instance.hpp"

namespace coevrp {

/// The two-company Gothenburg grocery case: 17 customers (9 of company R,
/// 8 of company B), two meet points and two depots with the measured
/// asymmetric road distances. All customers are shared by default.
Instance builtin_gothenburg();

}  // namespace coevrp
