#pragma once

#include "sdnmc/sdn/compile.hpp"
#include "sdnmc/sdn/network_io.hpp"
#include "sdnmc/sdn/pipeline.hpp"
#include "sdnmc/sdn/routing.hpp"
#include "sdnmc/sdn/simulate.hpp"
#include "sdnmc/sdn/types.hpp"
#include "sdnmc/sdn/reference.hpp"
