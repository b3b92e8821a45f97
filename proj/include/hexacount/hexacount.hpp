#pragma once

// Everything at once.

#include "hexacount/catalog_io.hpp"
#include "hexacount/core.hpp"
#include "hexacount/enumeration.hpp"
#include "hexacount/estimator.hpp"
#include "hexacount/histogram.hpp"
#include "hexacount/midcount.hpp"
#include "hexacount/oracle.hpp"
#include "hexacount/profile.hpp"
#include "hexacount/results_io.hpp"
#include "hexacount/runner.hpp"
#include "hexacount/sort_network.hpp"
#include "hexacount/transform.hpp"
#include "hexacount/verify.hpp"
