#pragma once

#include "riskrank/benchmark_tables.hpp"
#include "riskrank/capacity.hpp"
#include "riskrank/early_warning.hpp"
#include "riskrank/engine.hpp"
#include "riskrank/error.hpp"
#include "riskrank/evaluation.hpp"
#include "riskrank/io.hpp"
#include "riskrank/network.hpp"
#include "riskrank/quarter.hpp"
#include "riskrank/synth.hpp"
