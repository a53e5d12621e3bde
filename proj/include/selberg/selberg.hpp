#pragma once

// Umbrella include for the Selberg-class AFE library.

#include "selberg/afe.hpp"
#include "selberg/calibration.hpp"
#include "selberg/chi_factor.hpp"
#include "selberg/coefficients.hpp"
#include "selberg/datum.hpp"
#include "selberg/descriptor.hpp"
#include "selberg/errors.hpp"
#include "selberg/numerics.hpp"
#include "selberg/oracle.hpp"
#include "selberg/report.hpp"
#include "selberg/smoothing.hpp"
#include "selberg/special_functions.hpp"
