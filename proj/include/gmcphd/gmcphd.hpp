#pragma once

#include "gmcphd/acceleration.hpp"
#include "gmcphd/assignment.hpp"
#include "gmcphd/cardinality.hpp"
#include "gmcphd/commands.hpp"
#include "gmcphd/config.hpp"
#include "gmcphd/cphd.hpp"
#include "gmcphd/csv.hpp"
#include "gmcphd/error.hpp"
#include "gmcphd/evaluation.hpp"
#include "gmcphd/gaussian.hpp"
#include "gmcphd/ks_test.hpp"
#include "gmcphd/mixture_reduction.hpp"
#include "gmcphd/models.hpp"
#include "gmcphd/ospa.hpp"
#include "gmcphd/random.hpp"
#include "gmcphd/sim.hpp"
#include "gmcphd/track_linking.hpp"
