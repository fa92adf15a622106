#pragma once

// Umbrella header for the NOMA toolkit: downlink SIC rates and power
// allocation, SINR-constrained cluster beamforming, uplink SIC rates,
// and NOMA-ALOHA random access.

#include "noma/beamforming.hpp"
#include "noma/channel.hpp"
#include "noma/common.hpp"
#include "noma/downlink_rates.hpp"
#include "noma/linalg.hpp"
#include "noma/power_allocation.hpp"
#include "noma/random_access.hpp"
#include "noma/uplink_sic.hpp"
