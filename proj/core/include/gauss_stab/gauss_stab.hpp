#pragma once

#include "gauss_stab/channel.hpp"
#include "gauss_stab/error.hpp"
#include "gauss_stab/hermite.hpp"
#include "gauss_stab/numerics.hpp"
#include "gauss_stab/operators.hpp"
#include "gauss_stab/priors.hpp"
#include "gauss_stab/stability.hpp"
