#pragma once

#include "expcycles/bounds.hpp"
#include "expcycles/dynamics.hpp"
#include "expcycles/ecdynamics.hpp"
#include "expcycles/errors.hpp"
#include "expcycles/graph.hpp"
#include "expcycles/lemmas.hpp"
#include "expcycles/modarith.hpp"
#include "expcycles/parallel.hpp"
#include "expcycles/report.hpp"
