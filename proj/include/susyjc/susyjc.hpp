#pragma once

#include "susyjc/common.hpp"
#include "susyjc/fock_space.hpp"
#include "susyjc/dynamics.hpp"
#include "susyjc/susy_map.hpp"
#include "susyjc/observables.hpp"
#include "susyjc/wigner.hpp"
