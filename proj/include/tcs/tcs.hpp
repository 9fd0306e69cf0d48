#pragma once

// Umbrella header for the T-congruence Sylvester solver library.

#include "tcs/error.hpp"
#include "tcs/generate.hpp"
#include "tcs/lu.hpp"
#include "tcs/matcore.hpp"
#include "tcs/matio.hpp"
#include "tcs/oracle.hpp"
#include "tcs/qr.hpp"
#include "tcs/random.hpp"
#include "tcs/solvers.hpp"
#include "tcs/transform.hpp"
