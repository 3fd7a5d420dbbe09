#include "aidroute/errors.hpp"

namespace aidroute {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NotFoundError*>(&e)) return 2;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const DimensionError*>(&e) ||
      dynamic_cast<const ConfigError*>(&e))
    return 3;
  if (dynamic_cast<const PlanningError*>(&e)) return 4;
  if (dynamic_cast<const InsufficientRoutesError*>(&e)) return 5;
  return 1;
}

}  // namespace aidroute
