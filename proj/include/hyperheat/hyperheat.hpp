#pragma once

#include "params.hpp"
#include "dual.hpp"
#include "quadrature.hpp"
#include "rational.hpp"
#include "terms.hpp"
#include "hypgeom.hpp"
#include "fourier.hpp"
#include "heatkernel.hpp"
#include "asymptotics.hpp"
#include "wkb.hpp"
#include "u1gauge.hpp"
#include "effaction.hpp"
#include "verify.hpp"
