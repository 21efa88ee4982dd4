#pragma once

#include "tdma/capacity_model.hpp"
#include "tdma/cnf.hpp"
#include "tdma/error.hpp"
#include "tdma/gadget.hpp"
#include "tdma/instance.hpp"
#include "tdma/instance_io.hpp"
#include "tdma/solver.hpp"
#include "tdma/verify.hpp"
