#pragma once

#include "sps/core.hpp"
#include "sps/ncpoly.hpp"
#include "sps/subspace.hpp"
#include "sps/spscore.hpp"
#include "sps/freeprod.hpp"
#include "sps/tl.hpp"
#include "sps/fock.hpp"
#include "sps/graphmono.hpp"
#include "sps/suq2.hpp"
#include "sps/ktheory.hpp"
