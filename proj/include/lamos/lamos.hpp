#pragma once

#include "lamos/accumulator.hpp"
#include "lamos/barrett.hpp"
#include "lamos/baselines.hpp"
#include "lamos/biguint.hpp"
#include "lamos/cim_macro.hpp"
#include "lamos/datapath.hpp"
#include "lamos/random.hpp"
#include "lamos/scheduler.hpp"
