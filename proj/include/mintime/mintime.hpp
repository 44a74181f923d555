#pragma once

#include "mintime/canonical.hpp"
#include "mintime/errors.hpp"
#include "mintime/jet.hpp"
#include "mintime/kernel.hpp"
#include "mintime/matrix.hpp"
#include "mintime/oracle.hpp"
#include "mintime/poly.hpp"
#include "mintime/reduction.hpp"
#include "mintime/report.hpp"
#include "mintime/scalar.hpp"
#include "mintime/spec_io.hpp"
#include "mintime/system.hpp"
#include "mintime/transport.hpp"
