#pragma once

#include "dimerlab/errors.hpp"
#include "dimerlab/linalg.hpp"
#include "dimerlab/bell.hpp"
#include "dimerlab/ring.hpp"
#include "dimerlab/lattice.hpp"
#include "dimerlab/matchings.hpp"
#include "dimerlab/analysis.hpp"
#include "dimerlab/report.hpp"
