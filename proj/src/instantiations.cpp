#define AACONTROL_DEFINE_INSTANTIATIONS
#include "aacontrol/instantiations.hpp"

namespace aac {
AACONTROL_INSTANTIATE(template, double)
}  // namespace aac
