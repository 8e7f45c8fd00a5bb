#include "photonfluid/error.hpp"

#include <fmt/format.h>

namespace photonfluid {

NonFiniteField::NonFiniteField(double z)
    : NumericError(fmt::format("non-finite field values after step ending at z = {}", z)), z_(z) {}

}  // namespace photonfluid
