// Umbrella header.
#pragma once

#include "copoly/bounds.hpp"
#include "copoly/disorder.hpp"
#include "copoly/fracmom.hpp"
#include "copoly/model.hpp"
#include "copoly/numeric.hpp"
#include "copoly/parallel.hpp"
#include "copoly/partition.hpp"
#include "copoly/quadrature.hpp"
#include "copoly/renewal.hpp"
#include "copoly/return_law.hpp"
#include "copoly/rng.hpp"
#include "copoly/scan.hpp"
#include "copoly/stats.hpp"
