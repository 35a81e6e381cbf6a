#pragma once

#include "lsfp/beta_estimation.hpp"
#include "lsfp/channel.hpp"
#include "lsfp/common.hpp"
#include "lsfp/config.hpp"
#include "lsfp/experiments.hpp"
#include "lsfp/network.hpp"
#include "lsfp/oracle.hpp"
#include "lsfp/parallel.hpp"
#include "lsfp/precoding.hpp"
#include "lsfp/rng.hpp"
#include "lsfp/sinr.hpp"
#include "lsfp/stats.hpp"
#include "lsfp/validation.hpp"
