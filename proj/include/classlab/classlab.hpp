#pragma once

// Umbrella header for the classlab library.

#include "classlab/bench.hpp"
#include "classlab/cart.hpp"
#include "classlab/datagen.hpp"
#include "classlab/dataset.hpp"
#include "classlab/gp.hpp"
#include "classlab/matrix.hpp"
#include "classlab/metrics.hpp"
#include "classlab/nldt.hpp"
#include "classlab/rng.hpp"
#include "classlab/split.hpp"
#include "classlab/stats.hpp"
#include "classlab/svm.hpp"
#include "classlab/transform.hpp"
