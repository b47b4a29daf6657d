#pragma once

// Umbrella header for the full library: discrete graph model, simplicial
// cohomology, circle cocycles and bundles, the twisted edge correspondence,
// and the ideal/simplicity analysis.  The JSON and CLI layers live in
// json_io.hpp / cli.hpp and are pulled in here as well.

#include "tga/abelian.hpp"
#include "tga/bundle.hpp"
#include "tga/cech.hpp"
#include "tga/cli.hpp"
#include "tga/correspondence.hpp"
#include "tga/graph.hpp"
#include "tga/ideals.hpp"
#include "tga/json_io.hpp"
#include "tga/rational.hpp"
#include "tga/scalar.hpp"
#include "tga/simplicial.hpp"
#include "tga/simplicity.hpp"
#include "tga/smith.hpp"
