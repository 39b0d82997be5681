/*!
  \file qals.hpp
  \brief Umbrella header
*/

#pragma once

#include "aig.hpp"
#include "aiger.hpp"
#include "benchmarks.hpp"
#include "blif.hpp"
#include "cuts.hpp"
#include "error_model.hpp"
#include "errors.hpp"
#include "genlib.hpp"
#include "mapped_netlist.hpp"
#include "mapper.hpp"
#include "qlearning.hpp"
#include "simulation.hpp"
#include "supergate.hpp"
#include "truth_table.hpp"
#include "cli.hpp"
#include "model_io.hpp"
