#pragma once

#include "asymptotics.hpp"
#include "chebyshev.hpp"
#include "closed_forms.hpp"
#include "cmv.hpp"
#include "coin.hpp"
#include "kmcg.hpp"
#include "laurent.hpp"
#include "measure.hpp"
#include "olp.hpp"
#include "quadrature.hpp"
#include "recurrence.hpp"
#include "report.hpp"
#include "spectral.hpp"
#include "szego.hpp"
#include "types.hpp"
#include "verblunsky.hpp"
