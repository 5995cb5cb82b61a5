#ifndef AACONTROL_AACONTROL_HPP
#define AACONTROL_AACONTROL_HPP

#include "aacontrol/config.hpp"
#include "aacontrol/linalg.hpp"
#include "aacontrol/riccati.hpp"
#include "aacontrol/signals.hpp"
#include "aacontrol/simulator.hpp"
#include "aacontrol/spectral.hpp"
#include "aacontrol/synthesis.hpp"
#include "aacontrol/instantiations.hpp"

#endif  // AACONTROL_AACONTROL_HPP
